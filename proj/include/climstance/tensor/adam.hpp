#pragma once

#include <cstdint>
#include <vector>

#include "climstance/tensor/array.hpp"

namespace climstance::tensor {

// Adam with bias correction. Moment buffers are allocated on first use and
// stay shape-congruent with their parameters; the step counter only grows.
class AdamState {
  public:
    explicit AdamState(double learning_rate = 1e-4, double beta1 = 0.9, double beta2 = 0.999,
                       double epsilon = 1e-8);

    // One update over `params` (order must be stable across calls). Expects
    // populated gradient buffers; zeroes them after applying the update.
    void step(std::vector<Array>& params);

    double learning_rate() const { return lr_; }
    void set_learning_rate(double lr) { lr_ = lr; }
    std::int64_t step_count() const { return step_; }

  private:
    double lr_;
    double beta1_;
    double beta2_;
    double eps_;
    std::int64_t step_ = 0;
    std::vector<std::vector<double>> m_;
    std::vector<std::vector<double>> v_;
};

}  // namespace climstance::tensor
