#pragma once

#include <random>
#include <string>
#include <vector>

#include "climstance/model/params.hpp"
#include "climstance/tensor/tape.hpp"

namespace climstance::model {

// One LSTM gate: contribution x*W + h*U + b.
struct LstmGate {
    tensor::Array W;  // input_dim x hidden
    tensor::Array U;  // hidden x hidden
    tensor::Array b;  // 1 x hidden
};

struct LstmDirection {
    LstmGate input, forget, cell, output;
};

// Bi-LSTM parameters; encode() emits n x 2*hidden hidden matrices.
struct EncoderParams {
    LstmDirection fwd, bwd;
    int hidden = 0;
};

// Registers all gate matrices under `prefix`. Forget-gate biases start at 1.
EncoderParams make_encoder(ParamStore& store, const std::string& prefix, int input_dim, int hidden,
                           std::mt19937_64& rng);

// Runs both directions over the embedded sequence (each element 1 x d) and
// concatenates [forward; backward] per position. n must be >= 1; callers pad
// empty sequences with UNK before embedding.
tensor::Array encode(tensor::Tape& tape, const std::vector<tensor::Array>& embedded,
                     const EncoderParams& params);

}  // namespace climstance::model
