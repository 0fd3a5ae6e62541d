#include "climstance/model/checkpoint.hpp"

#include <fstream>

#include <json.hpp>

#include "climstance/common/error.hpp"

namespace climstance::model {

namespace {

constexpr const char* kFormat = "climstance-checkpoint";
constexpr int kVersion = 1;

}  // namespace

void save_checkpoint(const std::string& path, const Model& model) {
    nlohmann::ordered_json j;
    j["format"] = kFormat;
    j["version"] = kVersion;

    const auto& cfg = model.config();
    j["config"] = {{"variant", to_string(cfg.variant)},
                   {"features", to_string(cfg.features)},
                   {"lstm_units", cfg.lstm_units},
                   {"attn_dim", cfg.attn_dim},
                   {"shared_dim", cfg.shared_dim},
                   {"lambda", cfg.lambda},
                   {"shared_loss", cfg.shared_loss}};

    const auto& emb = model.embeddings();
    nlohmann::ordered_json ej;
    ej["mode"] = emb.is_trainable() ? "trainable" : "file";
    ej["dim"] = emb.dim();
    if (emb.is_trainable())
        ej["vocab"] = emb.vocab();
    else
        ej["path"] = emb.source_path();
    j["embedding"] = std::move(ej);

    nlohmann::ordered_json params = nlohmann::ordered_json::array();
    for (const auto& [name, array] : model.params().items()) {
        nlohmann::ordered_json pj;
        pj["name"] = name;
        pj["rows"] = array.rows();
        pj["cols"] = array.cols();
        pj["data"] = array.values();
        params.push_back(std::move(pj));
    }
    j["params"] = std::move(params);

    std::ofstream out(path);
    if (!out) throw DataError("cannot write checkpoint: " + path);
    out << j.dump() << "\n";
}

Model load_checkpoint(const std::string& path,
                      const std::optional<std::string>& embeddings_override) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open checkpoint: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError("invalid checkpoint " + path + ": " + e.what());
    }
    if (!j.contains("format") || j["format"] != kFormat)
        throw DataError(path + " is not a model checkpoint");
    if (!j.contains("version") || j["version"].get<int>() != kVersion)
        throw DataError("unsupported checkpoint version in " + path);

    const auto& cj = j.at("config");
    ModelConfig cfg;
    cfg.variant = variant_from_string(cj.at("variant").get<std::string>());
    cfg.features = features_from_string(cj.at("features").get<std::string>());
    cfg.lstm_units = cj.at("lstm_units").get<int>();
    cfg.attn_dim = cj.at("attn_dim").get<int>();
    cfg.shared_dim = cj.at("shared_dim").get<int>();
    cfg.lambda = cj.at("lambda").get<double>();
    cfg.shared_loss = cj.at("shared_loss").get<bool>();

    const auto& ej = j.at("embedding");
    EmbeddingProvider provider =
        ej.at("mode").get<std::string>() == "trainable"
            ? EmbeddingProvider::trainable(ej.at("vocab").get<std::vector<std::string>>(),
                                           ej.at("dim").get<int>(), 0)
            : EmbeddingProvider::from_file(embeddings_override
                                               ? *embeddings_override
                                               : ej.at("path").get<std::string>());
    if (!provider.is_trainable() && provider.dim() != ej.at("dim").get<int>())
        throw DataError("embedding file dimension does not match the checkpoint");

    Model model(cfg, std::move(provider), 0);

    std::size_t restored = 0;
    for (const auto& pj : j.at("params")) {
        const std::string name = pj.at("name").get<std::string>();
        if (!model.params().has(name))
            throw DataError("checkpoint parameter " + name + " does not exist in the rebuilt model");
        auto& target = model.params().get(name);
        if (target.rows() != pj.at("rows").get<std::size_t>() ||
            target.cols() != pj.at("cols").get<std::size_t>())
            throw DataError("checkpoint parameter " + name + " has mismatched shape");
        auto data = pj.at("data").get<std::vector<double>>();
        if (data.size() != target.size())
            throw DataError("checkpoint parameter " + name + " has mismatched length");
        target.values() = std::move(data);
        ++restored;
    }
    if (restored != model.params().items().size())
        throw DataError("checkpoint is missing parameters: restored " + std::to_string(restored) +
                        " of " + std::to_string(model.params().items().size()));
    return model;
}

}  // namespace climstance::model
