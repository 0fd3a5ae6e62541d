#include "climstance/tensor/array.hpp"

#include <cmath>

#include "climstance/common/error.hpp"

namespace climstance::tensor {

Array Array::zeros(std::size_t rows, std::size_t cols, bool requires_grad) {
    return full(rows, cols, 0.0, requires_grad);
}

Array Array::full(std::size_t rows, std::size_t cols, double fill, bool requires_grad) {
    if (rows == 0 || cols == 0) throw ShapeError("array dimensions must be positive");
    auto impl = std::make_shared<Impl>();
    impl->rows = rows;
    impl->cols = cols;
    impl->value.assign(rows * cols, fill);
    impl->requires_grad = requires_grad;
    if (requires_grad) impl->grad.assign(rows * cols, 0.0);
    return Array(std::move(impl));
}

Array Array::from(std::size_t rows, std::size_t cols, std::vector<double> data,
                  bool requires_grad) {
    if (rows == 0 || cols == 0) throw ShapeError("array dimensions must be positive");
    if (data.size() != rows * cols)
        throw ShapeError("data length " + std::to_string(data.size()) + " does not match shape " +
                         std::to_string(rows) + "x" + std::to_string(cols));
    for (double v : data)
        if (!std::isfinite(v)) throw NumericError("array constructed with non-finite value");
    auto impl = std::make_shared<Impl>();
    impl->rows = rows;
    impl->cols = cols;
    impl->value = std::move(data);
    impl->requires_grad = requires_grad;
    if (requires_grad) impl->grad.assign(rows * cols, 0.0);
    return Array(std::move(impl));
}

Array Array::scalar(double v, bool requires_grad) {
    return from(1, 1, {v}, requires_grad);
}

Array Array::uniform(std::size_t rows, std::size_t cols, double lo, double hi,
                     std::mt19937_64& rng, bool requires_grad) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> data(rows * cols);
    for (double& v : data) v = dist(rng);
    return from(rows, cols, std::move(data), requires_grad);
}

Array::Impl& Array::impl() {
    if (!impl_) throw Error("use of default-constructed Array");
    return *impl_;
}

const Array::Impl& Array::impl() const {
    if (!impl_) throw Error("use of default-constructed Array");
    return *impl_;
}

std::size_t Array::rows() const { return impl().rows; }
std::size_t Array::cols() const { return impl().cols; }
std::size_t Array::size() const { return impl().value.size(); }

double Array::at(std::size_t r, std::size_t c) const { return impl().value[r * impl().cols + c]; }
double& Array::at(std::size_t r, std::size_t c) { return impl().value[r * impl().cols + c]; }

double Array::item() const {
    if (size() != 1) throw ShapeError("item() requires a 1x1 array, got " + shape_str());
    return impl().value[0];
}

const std::vector<double>& Array::values() const { return impl().value; }
std::vector<double>& Array::values() { return impl().value; }

const std::vector<double>& Array::grads() const {
    if (!requires_grad()) throw Error("array has no gradient buffer");
    return impl().grad;
}

std::vector<double>& Array::grads() {
    if (!requires_grad()) throw Error("array has no gradient buffer");
    return impl().grad;
}

bool Array::requires_grad() const { return impl().requires_grad; }

void Array::set_requires_grad(bool enabled) {
    auto& im = impl();
    im.requires_grad = enabled;
    if (enabled)
        im.grad.assign(im.value.size(), 0.0);
    else
        im.grad.clear();
}

void Array::zero_grad() {
    auto& im = impl();
    if (im.requires_grad) im.grad.assign(im.value.size(), 0.0);
}

Array Array::clone() const {
    const auto& im = impl();
    auto copy = std::make_shared<Impl>(im);
    return Array(std::move(copy));
}

bool Array::shares_buffer(const Array& other) const { return impl_ == other.impl_; }

void Array::ensure_finite(const std::string& what) const {
    for (double v : impl().value)
        if (!std::isfinite(v)) throw NumericError("non-finite value in " + what);
}

std::string Array::shape_str() const {
    return std::to_string(impl().rows) + "x" + std::to_string(impl().cols);
}

}  // namespace climstance::tensor
