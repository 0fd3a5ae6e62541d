#pragma once

#include <cstddef>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace climstance::tensor {

// Dense row-major matrix of 64-bit floats. An Array participates in the
// computation graph: copies are shallow and share the same value/grad
// buffers, so an optimizer update through one handle is visible through all.
//
// Invariants: rows*cols == value.size(); grad, when allocated, has the same
// size; stored values are finite (construction from external data checks).
class Array {
  public:
    Array() = default;

    static Array zeros(std::size_t rows, std::size_t cols, bool requires_grad = false);
    static Array full(std::size_t rows, std::size_t cols, double fill, bool requires_grad = false);
    static Array from(std::size_t rows, std::size_t cols, std::vector<double> data,
                      bool requires_grad = false);
    static Array scalar(double v, bool requires_grad = false);
    // Elementwise uniform(lo, hi) draw; used for parameter initialization.
    static Array uniform(std::size_t rows, std::size_t cols, double lo, double hi,
                         std::mt19937_64& rng, bool requires_grad = false);

    bool defined() const { return impl_ != nullptr; }
    std::size_t rows() const;
    std::size_t cols() const;
    std::size_t size() const;  // rows * cols

    double at(std::size_t r, std::size_t c) const;
    double& at(std::size_t r, std::size_t c);
    // Value of a 1x1 array; throws ShapeError otherwise.
    double item() const;

    const std::vector<double>& values() const;
    std::vector<double>& values();
    // Gradient buffer; throws if requires_grad is false.
    const std::vector<double>& grads() const;
    std::vector<double>& grads();

    bool requires_grad() const;
    // Allocates (or drops) the gradient buffer.
    void set_requires_grad(bool enabled);
    void zero_grad();

    // Deep copy with its own buffers.
    Array clone() const;
    // True when both handles refer to the same underlying buffer.
    bool shares_buffer(const Array& other) const;

    // Throws NumericError naming `what` if any stored value is non-finite.
    void ensure_finite(const std::string& what) const;

    std::string shape_str() const;  // e.g. "3x4"

  private:
    struct Impl {
        std::size_t rows = 0;
        std::size_t cols = 0;
        std::vector<double> value;
        std::vector<double> grad;  // empty unless requires_grad
        bool requires_grad = false;
    };

    explicit Array(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}
    Impl& impl();
    const Impl& impl() const;

    std::shared_ptr<Impl> impl_;

    friend class Tape;
};

}  // namespace climstance::tensor
