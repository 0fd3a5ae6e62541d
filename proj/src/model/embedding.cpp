#include "climstance/model/embedding.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "climstance/common/error.hpp"

namespace climstance::model {

EmbeddingProvider EmbeddingProvider::trainable(std::vector<std::string> vocab, int dim,
                                               std::uint64_t seed) {
    if (dim < 1) throw ConfigError("embedding dimension must be positive");
    EmbeddingProvider p;
    p.dim_ = dim;
    p.trainable_ = true;
    p.vocab_ = std::move(vocab);
    for (std::size_t i = 0; i < p.vocab_.size(); ++i) {
        if (!p.index_.emplace(p.vocab_[i], static_cast<int>(i)).second)
            throw ConfigError("duplicate token in embedding vocabulary: " + p.vocab_[i]);
    }
    std::mt19937_64 rng(seed);
    const std::size_t rows = p.vocab_.size() + 1;  // + UNK row
    const double r = std::sqrt(6.0 / static_cast<double>(rows + static_cast<std::size_t>(dim)));
    p.table_ = tensor::Array::uniform(rows, static_cast<std::size_t>(dim), -r, r, rng, true);
    return p;
}

EmbeddingProvider EmbeddingProvider::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open embedding file: " + path);
    EmbeddingProvider p;
    p.trainable_ = false;
    p.source_path_ = path;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string token;
        row >> token;
        std::vector<double> vec;
        double v;
        while (row >> v) {
            if (!std::isfinite(v))
                throw DataError(path + ":" + std::to_string(line_no) + ": non-finite embedding value");
            vec.push_back(v);
        }
        if (vec.empty()) throw DataError(path + ":" + std::to_string(line_no) + ": empty vector");
        if (p.dim_ == 0)
            p.dim_ = static_cast<int>(vec.size());
        else if (static_cast<int>(vec.size()) != p.dim_)
            throw DataError(path + ":" + std::to_string(line_no) + ": inconsistent dimension");
        p.file_vectors_[token] = std::move(vec);
    }
    if (p.file_vectors_.empty()) throw DataError("embedding file is empty: " + path);
    return p;
}

std::vector<tensor::Array> EmbeddingProvider::embed(tensor::Tape& tape,
                                                    const std::vector<std::string>& tokens) const {
    std::vector<tensor::Array> out;
    out.reserve(tokens.size());
    if (trainable_) {
        const std::size_t unk = table_.rows() - 1;
        for (const auto& tok : tokens) {
            auto it = index_.find(tok);
            out.push_back(tensor::row(tape, table_,
                                      it == index_.end() ? unk : static_cast<std::size_t>(it->second)));
        }
    } else {
        const std::vector<double> unk(static_cast<std::size_t>(dim_), 0.0);
        for (const auto& tok : tokens) {
            auto it = file_vectors_.find(tok);
            out.push_back(tensor::Array::from(1, static_cast<std::size_t>(dim_),
                                              it == file_vectors_.end() ? unk : it->second));
        }
    }
    return out;
}

const tensor::Array& EmbeddingProvider::table() const {
    if (!trainable_) throw Error("frozen embedding provider has no table");
    return table_;
}

tensor::Array& EmbeddingProvider::table() {
    if (!trainable_) throw Error("frozen embedding provider has no table");
    return table_;
}

}  // namespace climstance::model
