#pragma once

#include <optional>
#include <string>
#include <vector>

#include "climstance/harness/config.hpp"
#include "climstance/harness/kfold.hpp"
#include "climstance/harness/metrics.hpp"
#include "climstance/harness/trainer.hpp"

namespace climstance::harness {

struct FoldEntry {
    int fold = 0;
    int best_epoch = 0;
    std::optional<TaskMetrics> stance;
    std::optional<TaskMetrics> sentiment;
};

struct TaskAggregate {
    double accuracy_mean = 0.0, accuracy_std = 0.0;
    double macro_f1_mean = 0.0, macro_f1_std = 0.0;
};

struct FoldReport {
    ExperimentConfig config;
    int records_used = 0;
    int records_dropped = 0;  // missing labels for the active tasks
    std::vector<FoldEntry> folds;
    std::optional<TaskAggregate> stance;
    std::optional<TaskAggregate> sentiment;

    nlohmann::ordered_json to_json() const;
    std::string to_text() const;  // aligned-column summary
};

// Builds the model-facing samples for a corpus: text tokens through the
// pipeline, topic tokens from the topic model (when features = text+topic),
// targets from the record labels. Records lacking a label required by the
// active tasks are skipped.
struct PreparedData {
    std::vector<Sample> samples;
    std::vector<std::string> primary_labels;  // stratification key per sample
    std::vector<std::string> vocabulary;      // sorted tokens for trainable embeddings
    int dropped = 0;
};

PreparedData prepare_data(const ExperimentConfig& config,
                          const std::vector<text::TweetRecord>& corpus);

// kfold -> oversample -> train -> metrics, then writes report.json,
// report.txt and per-fold checkpoints under config.output_dir (when set).
// Deterministic for a fixed (config, seed): byte-identical outputs.
FoldReport run_experiment(const ExperimentConfig& config);

}  // namespace climstance::harness
