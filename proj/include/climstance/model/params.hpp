#pragma once

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "climstance/tensor/array.hpp"

namespace climstance::model {

// Ordered registry of named learnable arrays. Registration order is the
// optimizer order and the checkpoint order, so it must not depend on
// runtime state.
class ParamStore {
  public:
    // uniform(-r, r) with r = sqrt(6 / (fan_in + fan_out)).
    tensor::Array matrix(const std::string& name, std::size_t rows, std::size_t cols,
                         std::mt19937_64& rng);
    tensor::Array bias(const std::string& name, std::size_t cols, double fill = 0.0);
    // Registers an externally created parameter (the embedding table).
    void adopt(const std::string& name, tensor::Array param);

    tensor::Array& get(const std::string& name);
    const tensor::Array& get(const std::string& name) const;
    bool has(const std::string& name) const;

    const std::vector<std::pair<std::string, tensor::Array>>& items() const { return items_; }
    std::vector<tensor::Array> arrays() const;
    void zero_grads();

  private:
    std::vector<std::pair<std::string, tensor::Array>> items_;
};

}  // namespace climstance::model
