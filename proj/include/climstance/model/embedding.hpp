#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "climstance/tensor/tape.hpp"

namespace climstance::model {

// Token embedding source. Trainable mode owns a (V+1) x d table whose last
// row is the shared UNK vector; lookups slice rows through the tape so
// gradients reach the table. File mode serves frozen vectors loaded from a
// whitespace-separated "token v1 ... vd" file (the published vectors are
// 768-wide); unknown tokens map to a zero UNK vector and nothing trains.
class EmbeddingProvider {
  public:
    static EmbeddingProvider trainable(std::vector<std::string> vocab, int dim, std::uint64_t seed);
    static EmbeddingProvider from_file(const std::string& path);

    int dim() const { return dim_; }
    bool is_trainable() const { return trainable_; }

    std::vector<tensor::Array> embed(tensor::Tape& tape,
                                     const std::vector<std::string>& tokens) const;

    // Trainable mode only.
    const tensor::Array& table() const;
    tensor::Array& table();
    const std::vector<std::string>& vocab() const { return vocab_; }

    const std::string& source_path() const { return source_path_; }

  private:
    int dim_ = 0;
    bool trainable_ = false;
    std::vector<std::string> vocab_;
    std::unordered_map<std::string, int> index_;
    tensor::Array table_;
    std::unordered_map<std::string, std::vector<double>> file_vectors_;
    std::string source_path_;
};

}  // namespace climstance::model
