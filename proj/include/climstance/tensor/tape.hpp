#pragma once

#include <functional>
#include <vector>

#include "climstance/tensor/array.hpp"

namespace climstance::tensor {

// Records the operations of one forward pass in execution order. A single
// backward() replay populates the grad buffer of every requires_grad Array
// reachable from the loss; gradients accumulate additively across uses.
//
// One tape per training step, never shared across threads.
class Tape {
  public:
    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    // Appends a backward closure. Closures run in reverse order on backward().
    void record(std::function<void()> backward_fn);

    // Seeds d(loss)/d(loss) = 1 and replays the tape in reverse.
    // loss must be 1x1 and connected to this tape (requires_grad set).
    void backward(const Array& loss);

    std::size_t size() const { return nodes_.size(); }
    void clear() { nodes_.clear(); }

  private:
    std::vector<std::function<void()>> nodes_;
};

// --- Differentiable operations -------------------------------------------
// Each op computes its forward value immediately and, when any input
// requires grad, marks the output requires_grad and records the gradient
// rule on the tape. Shape mismatches throw ShapeError naming both shapes.

Array matmul(Tape& t, const Array& a, const Array& b);
Array transpose(Tape& t, const Array& x);
// Row-stable softmax (per-row max subtraction).
Array softmax_rows(Tape& t, const Array& x);
Array sigmoid(Tape& t, const Array& x);
Array tanh(Tape& t, const Array& x);
Array add(Tape& t, const Array& a, const Array& b);
Array sub(Tape& t, const Array& a, const Array& b);
Array hadamard(Tape& t, const Array& a, const Array& b);
Array scale(Tape& t, const Array& x, double factor);
// Concatenate along axis 0 (stack rows) or axis 1 (append columns).
Array concat(Tape& t, const std::vector<Array>& parts, int axis);
// Column means: n x m -> 1 x m.
Array mean_rows(Tape& t, const Array& x);
Array sum_all(Tape& t, const Array& x);
// x*W + b with the 1 x u bias broadcast over rows.
Array dense(Tape& t, const Array& x, const Array& W, const Array& b);
// 1 x cols view of one matrix row (gradient scatters back into that row);
// this is the embedding-table lookup.
Array row(Tape& t, const Array& m, std::size_t index);

// Softmax + negative log-likelihood fused for stability. logits is 1 x C.
Array cross_entropy(Tape& t, const Array& logits, int target);
// cross_entropy specialized to the two stance logits.
Array bce_loss(Tape& t, const Array& logits, int target);
// cross_entropy specialized to the three sentiment logits.
Array cce_loss(Tape& t, const Array& logits, int target);

}  // namespace climstance::tensor
