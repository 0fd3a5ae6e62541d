#include "climstance/tensor/adam.hpp"

#include <cmath>

#include "climstance/common/error.hpp"

namespace climstance::tensor {

AdamState::AdamState(double learning_rate, double beta1, double beta2, double epsilon)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon) {
    if (learning_rate < 0.0) throw ConfigError("negative learning rate");
}

void AdamState::step(std::vector<Array>& params) {
    if (m_.empty()) {
        m_.resize(params.size());
        v_.resize(params.size());
        for (std::size_t i = 0; i < params.size(); ++i) {
            m_[i].assign(params[i].size(), 0.0);
            v_[i].assign(params[i].size(), 0.0);
        }
    }
    if (m_.size() != params.size()) throw ConfigError("adam state does not match parameter list");

    ++step_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(step_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        Array& p = params[i];
        if (!p.requires_grad()) throw Error("adam step on parameter without gradients");
        if (m_[i].size() != p.size()) throw ConfigError("adam moment buffer shape mismatch");
        auto& value = p.values();
        auto& grad = p.grads();
        auto& m = m_[i];
        auto& v = v_[i];
        for (std::size_t j = 0; j < value.size(); ++j) {
            const double g = grad[j];
            m[j] = beta1_ * m[j] + (1.0 - beta1_) * g;
            v[j] = beta2_ * v[j] + (1.0 - beta2_) * g * g;
            const double mhat = m[j] / bc1;
            const double vhat = v[j] / bc2;
            value[j] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
        }
        p.zero_grad();
    }
}

}  // namespace climstance::tensor
