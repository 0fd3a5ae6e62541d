#pragma once

// Shared helpers for the test binaries.

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "climstance/tensor/array.hpp"
#include "oracles.hpp"

#ifndef CLIMSTANCE_TEST_DATA_DIR
#define CLIMSTANCE_TEST_DATA_DIR "data"
#endif

namespace testutil {

inline std::string data_dir() { return CLIMSTANCE_TEST_DATA_DIR; }

inline climstance::tensor::Array to_array(const oracle::Mat& m, bool requires_grad = false) {
    std::vector<double> flat;
    for (const auto& row : m) flat.insert(flat.end(), row.begin(), row.end());
    return climstance::tensor::Array::from(m.size(), m[0].size(), std::move(flat), requires_grad);
}

inline oracle::Mat to_mat(const climstance::tensor::Array& a) {
    oracle::Mat out(a.rows(), oracle::Vec(a.cols(), 0.0));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out[i][j] = a.at(i, j);
    return out;
}

inline oracle::Mat random_mat(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                              double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    oracle::Mat out(rows, oracle::Vec(cols, 0.0));
    for (auto& row : out)
        for (double& v : row) v = dist(rng);
    return out;
}

inline oracle::Vec flatten(const climstance::tensor::Array& a) { return a.values(); }

inline double max_abs_diff(const oracle::Mat& a, const climstance::tensor::Array& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[0].size(); ++j)
            worst = std::max(worst, std::abs(a[i][j] - b.at(i, j)));
    return worst;
}

// Central-difference gradient check: loss() must rebuild the forward pass
// from the current parameter values. Returns the worst relative error over
// every element of every parameter.
inline double gradcheck(std::vector<climstance::tensor::Array> params,
                        const std::function<double()>& loss_value,
                        const std::function<void()>& backward_fill, double h = 1e-5) {
    backward_fill();  // populates grads analytically
    std::vector<std::vector<double>> analytic;
    analytic.reserve(params.size());
    for (auto& p : params) {
        analytic.push_back(p.grads());
        p.zero_grad();
    }
    double worst = 0.0;
    for (std::size_t pi = 0; pi < params.size(); ++pi) {
        auto& values = params[pi].values();
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double keep = values[i];
            values[i] = keep + h;
            const double up = loss_value();
            values[i] = keep - h;
            const double down = loss_value();
            values[i] = keep;
            const double numeric = (up - down) / (2.0 * h);
            const double a = analytic[pi][i];
            const double denom = std::max({std::abs(a), std::abs(numeric), 1e-6});
            worst = std::max(worst, std::abs(a - numeric) / denom);
        }
    }
    return worst;
}

}  // namespace testutil
