#include "climstance/model/params.hpp"

#include <cmath>

#include "climstance/common/error.hpp"

namespace climstance::model {

tensor::Array ParamStore::matrix(const std::string& name, std::size_t rows, std::size_t cols,
                                 std::mt19937_64& rng) {
    const double r = std::sqrt(6.0 / static_cast<double>(rows + cols));
    tensor::Array param = tensor::Array::uniform(rows, cols, -r, r, rng, true);
    adopt(name, param);
    return param;
}

tensor::Array ParamStore::bias(const std::string& name, std::size_t cols, double fill) {
    tensor::Array param = tensor::Array::full(1, cols, fill, true);
    adopt(name, param);
    return param;
}

void ParamStore::adopt(const std::string& name, tensor::Array param) {
    if (has(name)) throw ConfigError("duplicate parameter name: " + name);
    if (!param.requires_grad()) throw ConfigError("parameter " + name + " must require gradients");
    items_.emplace_back(name, std::move(param));
}

tensor::Array& ParamStore::get(const std::string& name) {
    for (auto& [n, a] : items_)
        if (n == name) return a;
    throw ConfigError("unknown parameter: " + name);
}

const tensor::Array& ParamStore::get(const std::string& name) const {
    for (const auto& [n, a] : items_)
        if (n == name) return a;
    throw ConfigError("unknown parameter: " + name);
}

bool ParamStore::has(const std::string& name) const {
    for (const auto& [n, a] : items_)
        if (n == name) return true;
    return false;
}

std::vector<tensor::Array> ParamStore::arrays() const {
    std::vector<tensor::Array> out;
    out.reserve(items_.size());
    for (const auto& [n, a] : items_) out.push_back(a);
    return out;
}

void ParamStore::zero_grads() {
    for (auto& [n, a] : items_) a.zero_grad();
}

}  // namespace climstance::model
