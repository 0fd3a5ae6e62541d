#include "climstance/harness/config.hpp"

#include <fstream>

#include "climstance/common/error.hpp"

namespace climstance::harness {

void ExperimentConfig::validate() const {
    if (folds < 2) throw ConfigError("folds must be >= 2");
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (m < 1 || p < 1) throw ConfigError("m and p must be >= 1");
    if (embed_dim < 1 || lstm_units < 1 || attn_dim < 1 || shared_dim < 1)
        throw ConfigError("model dimensions must be positive");
    if (learning_rate < 0.0) throw ConfigError("learning rate must be nonnegative");
    if (lambda < 0.0) throw ConfigError("lambda must be nonnegative");
    if (grad_window < 1) throw ConfigError("grad_window must be >= 1");
    if (val_fraction < 0.0 || val_fraction >= 1.0) throw ConfigError("val_fraction must be in [0, 1)");
    if (max_tokens < 1) throw ConfigError("max_tokens must be >= 1");
    if (topic_k < 1) throw ConfigError("topic_k must be >= 1");
    if (corpus_path.empty()) throw ConfigError("no corpus path configured");
}

model::ModelConfig ExperimentConfig::model_config() const {
    model::ModelConfig mc;
    mc.variant = variant;
    mc.features = features;
    mc.lstm_units = lstm_units;
    mc.attn_dim = attn_dim;
    mc.shared_dim = shared_dim;
    mc.lambda = lambda;
    mc.shared_loss = shared_loss;
    return mc;
}

namespace {

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& target) {
    if (j.contains(key)) target = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
    ExperimentConfig c;
    if (j.contains("variant")) c.variant = model::variant_from_string(j.at("variant").get<std::string>());
    if (j.contains("features"))
        c.features = model::features_from_string(j.at("features").get<std::string>());
    read_field(j, "folds", c.folds);
    read_field(j, "seed", c.seed);
    read_field(j, "epochs", c.epochs);
    read_field(j, "lambda", c.lambda);
    read_field(j, "shared_loss", c.shared_loss);
    read_field(j, "m", c.m);
    read_field(j, "p", c.p);
    read_field(j, "embed_dim", c.embed_dim);
    read_field(j, "lstm_units", c.lstm_units);
    read_field(j, "attn_dim", c.attn_dim);
    read_field(j, "shared_dim", c.shared_dim);
    read_field(j, "learning_rate", c.learning_rate);
    read_field(j, "grad_window", c.grad_window);
    read_field(j, "val_fraction", c.val_fraction);
    read_field(j, "max_tokens", c.max_tokens);
    read_field(j, "include_hashtag_tokens", c.include_hashtag_tokens);
    read_field(j, "topic_k", c.topic_k);
    read_field(j, "corpus", c.corpus_path);
    read_field(j, "topics", c.topics_path);
    read_field(j, "embeddings", c.embeddings_path);
    read_field(j, "seeds", c.seeds_path);
    read_field(j, "output_dir", c.output_dir);
    read_field(j, "data_dir", c.data_dir);
    return c;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("invalid config file " + path + ": " + e.what());
    }
    return from_json(j);
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
    return nlohmann::ordered_json{{"variant", model::to_string(variant)},
                                  {"features", model::to_string(features)},
                                  {"folds", folds},
                                  {"seed", seed},
                                  {"epochs", epochs},
                                  {"lambda", lambda},
                                  {"shared_loss", shared_loss},
                                  {"m", m},
                                  {"p", p},
                                  {"embed_dim", embed_dim},
                                  {"lstm_units", lstm_units},
                                  {"attn_dim", attn_dim},
                                  {"shared_dim", shared_dim},
                                  {"learning_rate", learning_rate},
                                  {"grad_window", grad_window},
                                  {"val_fraction", val_fraction},
                                  {"max_tokens", max_tokens},
                                  {"include_hashtag_tokens", include_hashtag_tokens},
                                  {"topic_k", topic_k},
                                  {"corpus", corpus_path},
                                  {"topics", topics_path},
                                  {"embeddings", embeddings_path},
                                  {"seeds", seeds_path},
                                  {"output_dir", output_dir},
                                  {"data_dir", data_dir}};
}

}  // namespace climstance::harness
