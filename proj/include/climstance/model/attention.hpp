#pragma once

#include <random>
#include <string>

#include "climstance/model/params.hpp"
#include "climstance/tensor/tape.hpp"

namespace climstance::model {

// Query/key/value projections of one feature: three dense layers of
// width d_a applied to the Bi-LSTM hidden matrix.
struct AttentionTriplet {
    tensor::Array Wq, bq, Wk, bk, Wv, bv;
};

AttentionTriplet make_triplet(ParamStore& store, const std::string& prefix, int in_dim,
                              int attn_dim, std::mt19937_64& rng);

// softmax(Q K^T) V with Q, K, V projections of the same sequence.
// `weights_out`, when given, receives the attention weight matrix.
tensor::Array self_attention(tensor::Tape& tape, const tensor::Array& H,
                             const AttentionTriplet& triplet, tensor::Array* weights_out = nullptr);

// Query from feature a, key/value from feature b; output has a's rows.
tensor::Array inter_attention(tensor::Tape& tape, const tensor::Array& Ha, const tensor::Array& Hb,
                              const AttentionTriplet& ta, const AttentionTriplet& tb,
                              tensor::Array* weights_out = nullptr);

// Sequence-axis concat of [SA_t; SA_u; IA_tu; IA_ut]; with no topic feature
// (Hu == nullptr) it reduces to SA_t.
tensor::Array feature_specific_attention(tensor::Tape& tape, const tensor::Array& Ht,
                                         const tensor::Array* Hu, const AttentionTriplet& tt,
                                         const AttentionTriplet* tu);

// Elementwise mean of the two task attention matrices.
tensor::Array shared_average(tensor::Tape& tape, const tensor::Array& Ad, const tensor::Array& As);

// Dense weights of width d_s shared between the task-side pass and the gate
// argument: S = A_shared*W + b, g = sigmoid(S), G = g (.) S.
struct GateParams {
    tensor::Array W, b;
};

tensor::Array gate_cell(tensor::Tape& tape, const tensor::Array& A_task,
                        const tensor::Array& A_shared, const GateParams& params,
                        tensor::Array* gate_out = nullptr);

// Task-specific query projection for shared-private inter attention.
struct TaskQuery {
    tensor::Array Wq, bq;
};

// Key/value projections of the shared space, used by both tasks.
struct SharedKV {
    tensor::Array Wk, bk, Wv, bv;
};

// softmax(Q_task K_shared^T) V_shared.
tensor::Array spia(tensor::Tape& tape, const tensor::Array& A_task, const tensor::Array& A_shared,
                   const TaskQuery& query, const SharedKV& shared,
                   tensor::Array* weights_out = nullptr);

struct FusionParams {
    tensor::Array W, b;  // 4*d_s x d_s
};

// tanh(dense([G; SPIA; G - SPIA; G (.) SPIA])).
tensor::Array fuse(tensor::Tape& tape, const tensor::Array& G, const tensor::Array& S,
                   const FusionParams& params);

}  // namespace climstance::model
