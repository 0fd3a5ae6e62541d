#include "climstance/tensor/tape.hpp"

#include <algorithm>
#include <cmath>

#include "climstance/common/error.hpp"

namespace climstance::tensor {

namespace {

[[noreturn]] void shape_fail(const char* op, const Array& a, const Array& b) {
    throw ShapeError(std::string(op) + ": incompatible shapes " + a.shape_str() + " and " +
                     b.shape_str());
}

bool any_grad(std::initializer_list<const Array*> inputs) {
    return std::any_of(inputs.begin(), inputs.end(),
                       [](const Array* a) { return a->requires_grad(); });
}

Array make_output(std::size_t rows, std::size_t cols, bool requires_grad) {
    return Array::zeros(rows, cols, requires_grad);
}

}  // namespace

void Tape::record(std::function<void()> backward_fn) { nodes_.push_back(std::move(backward_fn)); }

void Tape::backward(const Array& loss) {
    if (loss.size() != 1) throw ShapeError("backward requires a scalar loss, got " + loss.shape_str());
    if (!loss.requires_grad())
        throw Error("backward on a loss that is not connected to the tape");
    const_cast<Array&>(loss).grads()[0] += 1.0;
    for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) (*it)();
}

Array matmul(Tape& t, const Array& a, const Array& b) {
    if (a.cols() != b.rows()) shape_fail("matmul", a, b);
    const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
    Array out = make_output(n, m, any_grad({&a, &b}));
    const double* av = a.values().data();
    const double* bv = b.values().data();
    double* ov = out.values().data();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t p = 0; p < k; ++p) {
            const double aip = av[i * k + p];
            if (aip == 0.0) continue;
            for (std::size_t j = 0; j < m; ++j) ov[i * m + j] += aip * bv[p * m + j];
        }
    if (out.requires_grad()) {
        Array ac = a, bc = b, oc = out;
        t.record([ac, bc, oc, n, k, m]() mutable {
            const auto& g = oc.grads();
            if (ac.requires_grad()) {
                auto& ga = ac.grads();
                const auto& bv2 = bc.values();
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t p = 0; p < k; ++p) {
                        double acc = 0.0;
                        for (std::size_t j = 0; j < m; ++j)
                            acc += g[i * m + j] * bv2[p * m + j];
                        ga[i * k + p] += acc;
                    }
            }
            if (bc.requires_grad()) {
                auto& gb = bc.grads();
                const auto& av2 = ac.values();
                for (std::size_t p = 0; p < k; ++p)
                    for (std::size_t i = 0; i < n; ++i) {
                        const double aip = av2[i * k + p];
                        if (aip == 0.0) continue;
                        for (std::size_t j = 0; j < m; ++j)
                            gb[p * m + j] += aip * g[i * m + j];
                    }
            }
        });
    }
    return out;
}

Array transpose(Tape& t, const Array& x) {
    const std::size_t n = x.rows(), m = x.cols();
    Array out = make_output(m, n, x.requires_grad());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) out.at(j, i) = x.at(i, j);
    if (out.requires_grad()) {
        Array xc = x, oc = out;
        t.record([xc, oc, n, m]() mutable {
            auto& gx = xc.grads();
            const auto& g = oc.grads();
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < m; ++j) gx[i * m + j] += g[j * n + i];
        });
    }
    return out;
}

Array softmax_rows(Tape& t, const Array& x) {
    const std::size_t n = x.rows(), m = x.cols();
    Array out = make_output(n, m, x.requires_grad());
    for (std::size_t i = 0; i < n; ++i) {
        double mx = x.at(i, 0);
        for (std::size_t j = 1; j < m; ++j) mx = std::max(mx, x.at(i, j));
        double sum = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double e = std::exp(x.at(i, j) - mx);
            out.at(i, j) = e;
            sum += e;
        }
        for (std::size_t j = 0; j < m; ++j) out.at(i, j) /= sum;
    }
    if (out.requires_grad()) {
        Array xc = x, oc = out;
        t.record([xc, oc, n, m]() mutable {
            auto& gx = xc.grads();
            const auto& g = oc.grads();
            const auto& y = oc.values();
            for (std::size_t i = 0; i < n; ++i) {
                double dot = 0.0;
                for (std::size_t j = 0; j < m; ++j) dot += g[i * m + j] * y[i * m + j];
                for (std::size_t j = 0; j < m; ++j)
                    gx[i * m + j] += y[i * m + j] * (g[i * m + j] - dot);
            }
        });
    }
    return out;
}

namespace {

template <typename Fwd, typename Dfn>
Array unary_elementwise(Tape& t, const Array& x, Fwd fwd, Dfn dval) {
    Array out = make_output(x.rows(), x.cols(), x.requires_grad());
    for (std::size_t i = 0; i < x.size(); ++i) out.values()[i] = fwd(x.values()[i]);
    if (out.requires_grad()) {
        Array xc = x, oc = out;
        t.record([xc, oc, dval]() mutable {
            auto& gx = xc.grads();
            const auto& g = oc.grads();
            const auto& y = oc.values();
            for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += g[i] * dval(y[i]);
        });
    }
    return out;
}

}  // namespace

Array sigmoid(Tape& t, const Array& x) {
    // derivative expressed via the output: y*(1-y)
    return unary_elementwise(
        t, x,
        [](double v) { return v >= 0.0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v)); },
        [](double y) { return y * (1.0 - y); });
}

Array tanh(Tape& t, const Array& x) {
    return unary_elementwise(t, x, [](double v) { return std::tanh(v); },
                             [](double y) { return 1.0 - y * y; });
}

namespace {

Array binary_same_shape(Tape& t, const char* op, const Array& a, const Array& b, double sign_b,
                        bool elementwise_product) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) shape_fail(op, a, b);
    Array out = make_output(a.rows(), a.cols(), any_grad({&a, &b}));
    for (std::size_t i = 0; i < a.size(); ++i)
        out.values()[i] = elementwise_product ? a.values()[i] * b.values()[i]
                                              : a.values()[i] + sign_b * b.values()[i];
    if (out.requires_grad()) {
        Array ac = a, bc = b, oc = out;
        t.record([ac, bc, oc, sign_b, elementwise_product]() mutable {
            const auto& g = oc.grads();
            if (elementwise_product) {
                if (ac.requires_grad()) {
                    auto& ga = ac.grads();
                    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * bc.values()[i];
                }
                if (bc.requires_grad()) {
                    auto& gb = bc.grads();
                    for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * ac.values()[i];
                }
            } else {
                if (ac.requires_grad()) {
                    auto& ga = ac.grads();
                    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
                }
                if (bc.requires_grad()) {
                    auto& gb = bc.grads();
                    for (std::size_t i = 0; i < g.size(); ++i) gb[i] += sign_b * g[i];
                }
            }
        });
    }
    return out;
}

}  // namespace

Array add(Tape& t, const Array& a, const Array& b) { return binary_same_shape(t, "add", a, b, 1.0, false); }
Array sub(Tape& t, const Array& a, const Array& b) { return binary_same_shape(t, "sub", a, b, -1.0, false); }
Array hadamard(Tape& t, const Array& a, const Array& b) {
    return binary_same_shape(t, "hadamard", a, b, 0.0, true);
}

Array scale(Tape& t, const Array& x, double factor) {
    Array out = make_output(x.rows(), x.cols(), x.requires_grad());
    for (std::size_t i = 0; i < x.size(); ++i) out.values()[i] = factor * x.values()[i];
    if (out.requires_grad()) {
        Array xc = x, oc = out;
        t.record([xc, oc, factor]() mutable {
            auto& gx = xc.grads();
            const auto& g = oc.grads();
            for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += factor * g[i];
        });
    }
    return out;
}

Array concat(Tape& t, const std::vector<Array>& parts, int axis) {
    if (parts.empty()) throw ShapeError("concat of an empty list");
    if (axis != 0 && axis != 1) throw ShapeError("concat axis must be 0 or 1");
    std::size_t rows = parts[0].rows(), cols = parts[0].cols();
    bool grad = parts[0].requires_grad();
    for (std::size_t i = 1; i < parts.size(); ++i) {
        const auto& p = parts[i];
        if (axis == 0) {
            if (p.cols() != cols) shape_fail("concat axis 0", parts[0], p);
            rows += p.rows();
        } else {
            if (p.rows() != rows) shape_fail("concat axis 1", parts[0], p);
            cols += p.cols();
        }
        grad = grad || p.requires_grad();
    }
    Array out = make_output(rows, cols, grad);
    std::size_t offset = 0;
    for (const auto& p : parts) {
        if (axis == 0) {
            for (std::size_t i = 0; i < p.rows(); ++i)
                for (std::size_t j = 0; j < p.cols(); ++j) out.at(offset + i, j) = p.at(i, j);
            offset += p.rows();
        } else {
            for (std::size_t i = 0; i < p.rows(); ++i)
                for (std::size_t j = 0; j < p.cols(); ++j) out.at(i, offset + j) = p.at(i, j);
            offset += p.cols();
        }
    }
    if (grad) {
        std::vector<Array> pc = parts;
        Array oc = out;
        t.record([pc, oc, axis]() mutable {
            const auto& g = oc.grads();
            const std::size_t ocols = oc.cols();
            std::size_t offset2 = 0;
            for (auto& p : pc) {
                if (p.requires_grad()) {
                    auto& gp = p.grads();
                    for (std::size_t i = 0; i < p.rows(); ++i)
                        for (std::size_t j = 0; j < p.cols(); ++j)
                            gp[i * p.cols() + j] +=
                                axis == 0 ? g[(offset2 + i) * ocols + j] : g[i * ocols + offset2 + j];
                }
                offset2 += axis == 0 ? p.rows() : p.cols();
            }
        });
    }
    return out;
}

Array mean_rows(Tape& t, const Array& x) {
    const std::size_t n = x.rows(), m = x.cols();
    Array out = make_output(1, m, x.requires_grad());
    for (std::size_t j = 0; j < m; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += x.at(i, j);
        out.at(0, j) = acc / static_cast<double>(n);
    }
    if (out.requires_grad()) {
        Array xc = x, oc = out;
        t.record([xc, oc, n, m]() mutable {
            auto& gx = xc.grads();
            const auto& g = oc.grads();
            const double inv = 1.0 / static_cast<double>(n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < m; ++j) gx[i * m + j] += g[j] * inv;
        });
    }
    return out;
}

Array sum_all(Tape& t, const Array& x) {
    Array out = make_output(1, 1, x.requires_grad());
    double acc = 0.0;
    for (double v : x.values()) acc += v;
    out.at(0, 0) = acc;
    if (out.requires_grad()) {
        Array xc = x, oc = out;
        t.record([xc, oc]() mutable {
            auto& gx = xc.grads();
            const double g = oc.grads()[0];
            for (double& v : gx) v += g;
        });
    }
    return out;
}

Array dense(Tape& t, const Array& x, const Array& W, const Array& b) {
    if (x.cols() != W.rows()) shape_fail("dense", x, W);
    if (b.rows() != 1 || b.cols() != W.cols()) shape_fail("dense bias", W, b);
    const std::size_t n = x.rows(), k = x.cols(), u = W.cols();
    Array out = make_output(n, u, any_grad({&x, &W, &b}));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < u; ++j) out.at(i, j) = b.at(0, j);
        for (std::size_t p = 0; p < k; ++p) {
            const double xv = x.at(i, p);
            if (xv == 0.0) continue;
            for (std::size_t j = 0; j < u; ++j) out.at(i, j) += xv * W.at(p, j);
        }
    }
    if (out.requires_grad()) {
        Array xc = x, wc = W, bc = b, oc = out;
        t.record([xc, wc, bc, oc, n, k, u]() mutable {
            const auto& g = oc.grads();
            if (xc.requires_grad()) {
                auto& gx = xc.grads();
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t p = 0; p < k; ++p) {
                        double acc = 0.0;
                        for (std::size_t j = 0; j < u; ++j)
                            acc += g[i * u + j] * wc.values()[p * u + j];
                        gx[i * k + p] += acc;
                    }
            }
            if (wc.requires_grad()) {
                auto& gw = wc.grads();
                for (std::size_t p = 0; p < k; ++p)
                    for (std::size_t i = 0; i < n; ++i) {
                        const double xv = xc.values()[i * k + p];
                        if (xv == 0.0) continue;
                        for (std::size_t j = 0; j < u; ++j) gw[p * u + j] += xv * g[i * u + j];
                    }
            }
            if (bc.requires_grad()) {
                auto& gb = bc.grads();
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < u; ++j) gb[j] += g[i * u + j];
            }
        });
    }
    return out;
}

Array row(Tape& t, const Array& m, std::size_t index) {
    if (index >= m.rows())
        throw ShapeError("row index " + std::to_string(index) + " out of range for " + m.shape_str());
    const std::size_t c = m.cols();
    Array out = make_output(1, c, m.requires_grad());
    for (std::size_t j = 0; j < c; ++j) out.at(0, j) = m.at(index, j);
    if (out.requires_grad()) {
        Array mc = m, oc = out;
        t.record([mc, oc, index, c]() mutable {
            auto& gm = mc.grads();
            const auto& g = oc.grads();
            for (std::size_t j = 0; j < c; ++j) gm[index * c + j] += g[j];
        });
    }
    return out;
}

Array cross_entropy(Tape& t, const Array& logits, int target) {
    if (logits.rows() != 1) throw ShapeError("cross_entropy expects 1xC logits, got " + logits.shape_str());
    const std::size_t c = logits.cols();
    if (target < 0 || static_cast<std::size_t>(target) >= c)
        throw ConfigError("target class " + std::to_string(target) + " out of range for " +
                          std::to_string(c) + " logits");
    double mx = logits.at(0, 0);
    for (std::size_t j = 1; j < c; ++j) mx = std::max(mx, logits.at(0, j));
    double sum = 0.0;
    std::vector<double> probs(c);
    for (std::size_t j = 0; j < c; ++j) {
        probs[j] = std::exp(logits.at(0, j) - mx);
        sum += probs[j];
    }
    for (double& p : probs) p /= sum;
    const double loss = std::log(sum) - (logits.at(0, static_cast<std::size_t>(target)) - mx);
    Array out = make_output(1, 1, logits.requires_grad());
    out.at(0, 0) = loss;
    if (out.requires_grad()) {
        Array lc = logits, oc = out;
        t.record([lc, oc, probs, target]() mutable {
            auto& gl = lc.grads();
            const double g = oc.grads()[0];
            for (std::size_t j = 0; j < probs.size(); ++j)
                gl[j] += g * (probs[j] - (static_cast<int>(j) == target ? 1.0 : 0.0));
        });
    }
    return out;
}

Array bce_loss(Tape& t, const Array& logits, int target) {
    if (logits.cols() != 2)
        throw ShapeError("bce_loss expects two logits, got " + logits.shape_str());
    return cross_entropy(t, logits, target);
}

Array cce_loss(Tape& t, const Array& logits, int target) {
    if (logits.cols() != 3)
        throw ShapeError("cce_loss expects three logits, got " + logits.shape_str());
    return cross_entropy(t, logits, target);
}

}  // namespace climstance::tensor
