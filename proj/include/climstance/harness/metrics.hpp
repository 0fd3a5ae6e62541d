#pragma once

#include <string>
#include <utility>
#include <vector>

namespace climstance::harness {

struct ConfusionMatrix {
    std::vector<std::string> labels;          // sorted union of gold and predicted labels
    std::vector<std::vector<int>> counts;     // counts[gold][pred]
};

struct TaskMetrics {
    double accuracy = 0.0;
    std::vector<std::pair<std::string, double>> per_class_f1;  // classes present in gold or pred
    double macro_f1 = 0.0;  // unweighted mean over present classes
    ConfusionMatrix confusion;
};

// Accuracy, per-class F1 and macro-F1. A class absent from both gold and
// predictions does not exist for the macro mean; a class present but never
// predicted (or never gold) contributes F1 = 0.
TaskMetrics metrics(const std::vector<std::string>& predictions,
                    const std::vector<std::string>& gold);

struct SemevalMetrics {
    std::vector<std::pair<std::string, double>> f_avg_per_target;
    double mac_f_avg = 0.0;
};

// Three-class favor/against/none protocol: per target,
// F_avg = (F1_favor + F1_against) / 2; MacF_avg averages F_avg over targets.
// Labels outside the three classes raise DataError.
SemevalMetrics semeval_metrics(const std::vector<std::string>& targets,
                               const std::vector<std::string>& predictions,
                               const std::vector<std::string>& gold);

struct WelchTest {
    double t = 0.0;
    double df = 0.0;
    double p_two_sided = 1.0;
};

// Welch's unequal-variance t-test over two score samples.
WelchTest welch_t_test(const std::vector<double>& a, const std::vector<double>& b);

double mean(const std::vector<double>& xs);
// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 items.
double sample_std(const std::vector<double>& xs);

}  // namespace climstance::harness
