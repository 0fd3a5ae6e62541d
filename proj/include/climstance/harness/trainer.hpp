#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "climstance/model/model.hpp"

namespace climstance::harness {

struct Sample {
    std::string id;
    model::Model::Input input;
    model::Model::Targets targets;
};

struct TrainOptions {
    int epochs = 20;
    double learning_rate = 1e-4;
    int grad_window = 16;  // samples accumulated per optimizer step
    std::uint64_t seed = 42;
    double val_fraction = 0.1;  // carved from the training set for best-epoch selection
};

struct EpochStats {
    int epoch = 0;
    double mean_loss = 0.0;
    double val_accuracy = 0.0;
};

struct TrainResult {
    std::vector<EpochStats> history;
    int best_epoch = -1;
    double best_val_accuracy = 0.0;
};

// Seeded shuffled passes with Adam updates every grad_window samples
// (window-mean gradients). Validation accuracy picks the best epoch; the
// model carries the best epoch's parameters on return. An empty validation
// set falls back to fit-set accuracy. A non-finite loss aborts with a
// NumericError naming the epoch, step and sample.
TrainResult train_model(model::Model& model, const std::vector<Sample>& fit,
                        const std::vector<Sample>& val, const TrainOptions& options);

// Convenience: carves the validation slice (options.val_fraction, seeded)
// from `train` and delegates. The slice is taken before any duplication the
// caller may have added, so prefer the explicit overload after oversampling.
TrainResult train_model(model::Model& model, const std::vector<Sample>& train,
                        const TrainOptions& options);

// Argmax predictions for one task ("stance" or "sentiment") as label strings.
std::vector<std::string> predict_labels(const model::Model& model,
                                        const std::vector<Sample>& samples,
                                        const std::string& task);

// Gold labels of one task as strings (samples must carry that target).
std::vector<std::string> gold_labels(const std::vector<Sample>& samples, const std::string& task);

}  // namespace climstance::harness
