#include "climstance/harness/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "climstance/common/error.hpp"
#include "climstance/tensor/adam.hpp"

namespace climstance::harness {

namespace {

namespace t = climstance::tensor;

const char* kStance = "stance";

std::vector<std::vector<double>> snapshot(const std::vector<t::Array>& params) {
    std::vector<std::vector<double>> out;
    out.reserve(params.size());
    for (const auto& p : params) out.push_back(p.values());
    return out;
}

void restore(std::vector<t::Array>& params, const std::vector<std::vector<double>>& snap) {
    for (std::size_t i = 0; i < params.size(); ++i) params[i].values() = snap[i];
}

int predict_class(const model::Model& model, const Sample& sample, bool stance_task) {
    t::Tape tape;
    auto logits = model.forward(tape, sample.input);
    const auto& head = stance_task ? logits.stance : logits.sentiment;
    if (!head) throw ConfigError("model emits no logits for the requested task");
    return model::argmax(model::softmax_values(*head));
}

double task_accuracy(const model::Model& model, const std::vector<Sample>& samples,
                     bool stance_task) {
    if (samples.empty()) return 0.0;
    int correct = 0;
    for (const auto& s : samples) {
        const auto& target = stance_task ? s.targets.stance : s.targets.sentiment;
        if (!target) throw ConfigError("sample " + s.id + " is missing the evaluation target");
        if (predict_class(model, s, stance_task) == *target) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(samples.size());
}

}  // namespace

TrainResult train_model(model::Model& model, const std::vector<Sample>& fit,
                        const std::vector<Sample>& val, const TrainOptions& options) {
    if (fit.empty()) throw ConfigError("training set is empty");
    if (options.epochs < 1) throw ConfigError("epochs must be >= 1");
    if (options.grad_window < 1) throw ConfigError("grad_window must be >= 1");

    std::mt19937_64 rng(options.seed);
    const std::vector<Sample>& fit_set = fit;
    const std::vector<Sample>& val_set = val;
    const bool stance_task = model.config().uses_stance();

    auto params = model.parameters();
    t::AdamState adam(options.learning_rate);
    TrainResult result;
    std::vector<std::vector<double>> best_params = snapshot(params);

    std::vector<std::size_t> epoch_order(fit_set.size());
    std::iota(epoch_order.begin(), epoch_order.end(), 0);

    for (int epoch = 0; epoch < options.epochs; ++epoch) {
        std::shuffle(epoch_order.begin(), epoch_order.end(), rng);
        double loss_sum = 0.0;
        int window_fill = 0;
        long step = 0;

        auto flush = [&]() {
            if (window_fill == 0) return;
            // Window-mean gradients keep the step size independent of the
            // accumulation window.
            const double inv = 1.0 / static_cast<double>(window_fill);
            for (auto& p : params)
                for (double& g : p.grads()) g *= inv;
            adam.step(params);
            window_fill = 0;
        };

        for (std::size_t pos = 0; pos < epoch_order.size(); ++pos) {
            const Sample& sample = fit_set[epoch_order[pos]];
            t::Tape tape;
            auto logits = model.forward(tape, sample.input);
            t::Array loss = model.loss(tape, logits, sample.targets);
            const double value = loss.item();
            if (!std::isfinite(value))
                throw NumericError("non-finite loss at epoch " + std::to_string(epoch + 1) +
                                   ", step " + std::to_string(step + 1) + ", sample " + sample.id);
            tape.backward(loss);
            loss_sum += value;
            ++window_fill;
            ++step;
            if (window_fill == options.grad_window) flush();
        }
        flush();

        EpochStats stats;
        stats.epoch = epoch + 1;
        stats.mean_loss = loss_sum / static_cast<double>(fit_set.size());
        stats.val_accuracy =
            val_set.empty() ? task_accuracy(model, fit_set, stance_task)
                            : task_accuracy(model, val_set, stance_task);
        result.history.push_back(stats);
        // Earliest epoch wins ties; the first epoch always beats the
        // untrained snapshot.
        if (result.best_epoch < 0 || stats.val_accuracy > result.best_val_accuracy) {
            result.best_val_accuracy = stats.val_accuracy;
            result.best_epoch = epoch + 1;
            best_params = snapshot(params);
        }
    }

    restore(params, best_params);
    return result;
}

TrainResult train_model(model::Model& model, const std::vector<Sample>& train,
                        const TrainOptions& options) {
    if (train.empty()) throw ConfigError("training set is empty");
    if (options.val_fraction < 0.0 || options.val_fraction >= 1.0)
        throw ConfigError("val_fraction must be in [0, 1)");
    std::mt19937_64 rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::size_t val_count =
        static_cast<std::size_t>(options.val_fraction * static_cast<double>(train.size()));
    if (options.val_fraction > 0.0 && val_count == 0 && train.size() > 1) val_count = 1;
    if (val_count >= train.size()) val_count = train.size() - 1;
    std::vector<Sample> val_set, fit_set;
    for (std::size_t i = 0; i < order.size(); ++i)
        (i < val_count ? val_set : fit_set).push_back(train[order[i]]);
    return train_model(model, fit_set, val_set, options);
}

std::vector<std::string> predict_labels(const model::Model& model,
                                        const std::vector<Sample>& samples,
                                        const std::string& task) {
    const bool stance_task = task == kStance;
    std::vector<std::string> out;
    out.reserve(samples.size());
    for (const auto& s : samples) {
        const int cls = predict_class(model, s, stance_task);
        if (stance_task)
            out.push_back(text::to_string(static_cast<text::Stance>(cls)));
        else
            out.push_back(text::to_string(static_cast<text::Sentiment>(cls)));
    }
    return out;
}

std::vector<std::string> gold_labels(const std::vector<Sample>& samples, const std::string& task) {
    const bool stance_task = task == kStance;
    std::vector<std::string> out;
    out.reserve(samples.size());
    for (const auto& s : samples) {
        const auto& target = stance_task ? s.targets.stance : s.targets.sentiment;
        if (!target) throw ConfigError("sample " + s.id + " is missing the " + task + " gold label");
        if (stance_task)
            out.push_back(text::to_string(static_cast<text::Stance>(*target)));
        else
            out.push_back(text::to_string(static_cast<text::Sentiment>(*target)));
    }
    return out;
}

}  // namespace climstance::harness
