#include "climstance/harness/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "climstance/common/error.hpp"

namespace climstance::harness {

namespace {

double f1_from_counts(int tp, int fp, int fn) {
    const double precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp);
    const double recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

// Regularized incomplete beta via the continued fraction (Lentz).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 200;
    constexpr double kEps = 3e-14;
    constexpr double kFpMin = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log(1.0 - x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

}  // namespace

TaskMetrics metrics(const std::vector<std::string>& predictions,
                    const std::vector<std::string>& gold) {
    if (predictions.size() != gold.size())
        throw DataError("metrics: " + std::to_string(predictions.size()) + " predictions vs " +
                        std::to_string(gold.size()) + " gold labels");
    if (gold.empty()) throw DataError("metrics on empty label vectors");

    std::set<std::string> universe(gold.begin(), gold.end());
    universe.insert(predictions.begin(), predictions.end());
    std::vector<std::string> labels(universe.begin(), universe.end());
    std::map<std::string, int> label_index;
    for (std::size_t i = 0; i < labels.size(); ++i) label_index[labels[i]] = static_cast<int>(i);

    TaskMetrics out;
    out.confusion.labels = labels;
    out.confusion.counts.assign(labels.size(), std::vector<int>(labels.size(), 0));
    int correct = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        const int g = label_index[gold[i]];
        const int p = label_index[predictions[i]];
        ++out.confusion.counts[static_cast<std::size_t>(g)][static_cast<std::size_t>(p)];
        if (g == p) ++correct;
    }
    out.accuracy = static_cast<double>(correct) / static_cast<double>(gold.size());

    double f1_sum = 0.0;
    for (std::size_t c = 0; c < labels.size(); ++c) {
        const int tp = out.confusion.counts[c][c];
        int fp = 0, fn = 0;
        for (std::size_t o = 0; o < labels.size(); ++o) {
            if (o == c) continue;
            fp += out.confusion.counts[o][c];
            fn += out.confusion.counts[c][o];
        }
        const double f1 = f1_from_counts(tp, fp, fn);
        out.per_class_f1.emplace_back(labels[c], f1);
        f1_sum += f1;
    }
    out.macro_f1 = f1_sum / static_cast<double>(labels.size());
    return out;
}

SemevalMetrics semeval_metrics(const std::vector<std::string>& targets,
                               const std::vector<std::string>& predictions,
                               const std::vector<std::string>& gold) {
    if (targets.size() != predictions.size() || targets.size() != gold.size())
        throw DataError("semeval_metrics: targets, predictions and gold must be aligned");
    if (targets.empty()) throw DataError("semeval_metrics on empty vectors");
    static const std::set<std::string> kClasses = {"favor", "against", "none"};
    for (const auto& l : predictions)
        if (!kClasses.count(l)) throw DataError("prediction label outside favor/against/none: " + l);
    for (const auto& l : gold)
        if (!kClasses.count(l)) throw DataError("gold label outside favor/against/none: " + l);

    std::map<std::string, std::vector<std::size_t>> per_target;
    for (std::size_t i = 0; i < targets.size(); ++i) per_target[targets[i]].push_back(i);

    SemevalMetrics out;
    double sum = 0.0;
    for (const auto& [target, rows] : per_target) {
        double f_sum = 0.0;
        for (const char* cls : {"favor", "against"}) {
            int tp = 0, fp = 0, fn = 0;
            for (std::size_t i : rows) {
                const bool in_gold = gold[i] == cls;
                const bool in_pred = predictions[i] == cls;
                if (in_gold && in_pred) ++tp;
                if (!in_gold && in_pred) ++fp;
                if (in_gold && !in_pred) ++fn;
            }
            f_sum += f1_from_counts(tp, fp, fn);
        }
        const double f_avg = f_sum / 2.0;
        out.f_avg_per_target.emplace_back(target, f_avg);
        sum += f_avg;
    }
    out.mac_f_avg = sum / static_cast<double>(per_target.size());
    return out;
}

double mean(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    double acc = 0.0;
    for (double x : xs) acc += x;
    return acc / static_cast<double>(xs.size());
}

double sample_std(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean(xs);
    double acc = 0.0;
    for (double x : xs) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

WelchTest welch_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2)
        throw ConfigError("welch t-test needs at least two samples per group");
    const double ma = mean(a), mb = mean(b);
    const double sa = sample_std(a), sb = sample_std(b);
    const double va_n = sa * sa / static_cast<double>(a.size());
    const double vb_n = sb * sb / static_cast<double>(b.size());
    WelchTest out;
    if (va_n + vb_n == 0.0) {
        out.t = 0.0;
        out.df = static_cast<double>(a.size() + b.size() - 2);
        out.p_two_sided = ma == mb ? 1.0 : 0.0;
        return out;
    }
    out.t = (ma - mb) / std::sqrt(va_n + vb_n);
    const double num = (va_n + vb_n) * (va_n + vb_n);
    const double den = va_n * va_n / static_cast<double>(a.size() - 1) +
                       vb_n * vb_n / static_cast<double>(b.size() - 1);
    out.df = num / den;
    const double x = out.df / (out.df + out.t * out.t);
    out.p_two_sided = incomplete_beta(out.df / 2.0, 0.5, x);
    return out;
}

}  // namespace climstance::harness
