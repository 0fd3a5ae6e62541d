#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "climstance/model/model.hpp"

namespace climstance::harness {

// Full experiment description. Defaults follow the reported setup:
// k = 5 folds, m = 5, p = 10, d_l = 100, d_a = d_s = 100, lr = 0.0001,
// lambda = 0.5. Every field can come from a JSON config file and be
// overridden by a CLI flag.
struct ExperimentConfig {
    model::Variant variant = model::Variant::SharedPrivate;
    model::Features features = model::Features::TextTopic;
    int folds = 5;
    std::uint64_t seed = 42;
    int epochs = 20;
    double lambda = 0.5;
    bool shared_loss = true;
    int m = 5;
    int p = 10;
    int embed_dim = 64;    // trainable-embedding width (file mode dictates its own)
    int lstm_units = 100;  // d_l
    int attn_dim = 100;    // d_a
    int shared_dim = 100;  // d_s
    double learning_rate = 1e-4;
    int grad_window = 16;
    double val_fraction = 0.1;
    int max_tokens = 64;
    bool include_hashtag_tokens = true;
    int topic_k = 20;  // baseline topic count when no topics file is given

    std::string corpus_path;
    std::string topics_path;      // optional; empty = fit the baseline
    std::string embeddings_path;  // optional; empty = trainable embeddings
    std::string seeds_path;       // optional; hashtags excluded from topic fitting
    std::string output_dir;
    std::string data_dir;  // lexicons; empty = bundled default

    void validate() const;
    model::ModelConfig model_config() const;

    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig from_json_file(const std::string& path);
    nlohmann::ordered_json to_json() const;
};

}  // namespace climstance::harness
