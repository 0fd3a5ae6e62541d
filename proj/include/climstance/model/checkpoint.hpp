#pragma once

#include <optional>
#include <string>

#include "climstance/model/model.hpp"

namespace climstance::model {

// Self-describing JSON checkpoint: variant tag, model config, embedding
// setup (vocab for trainable mode, source path for file mode) and every
// named parameter with its shape. Values round-trip bit-exactly.
// `experiment`, when given, is stored verbatim (the training-time settings
// a consumer needs to prepare matching inputs).
void save_checkpoint(const std::string& path, const Model& model,
                     const nlohmann::ordered_json& experiment = {});

// Rebuilds the model and restores parameter values; parameter names in the
// file must match the rebuilt model exactly. `embeddings_override` replaces
// the recorded embedding file path for file-mode checkpoints.
Model load_checkpoint(const std::string& path,
                      const std::optional<std::string>& embeddings_override = std::nullopt);

// The experiment section stored at save time (null when absent).
nlohmann::json load_checkpoint_experiment(const std::string& path);

}  // namespace climstance::model
