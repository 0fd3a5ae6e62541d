#include "climstance/model/attention.hpp"

#include "climstance/common/error.hpp"

namespace climstance::model {

namespace t = climstance::tensor;

AttentionTriplet make_triplet(ParamStore& store, const std::string& prefix, int in_dim,
                              int attn_dim, std::mt19937_64& rng) {
    AttentionTriplet tr;
    const auto rows = static_cast<std::size_t>(in_dim);
    const auto cols = static_cast<std::size_t>(attn_dim);
    tr.Wq = store.matrix(prefix + ".Wq", rows, cols, rng);
    tr.bq = store.bias(prefix + ".bq", cols);
    tr.Wk = store.matrix(prefix + ".Wk", rows, cols, rng);
    tr.bk = store.bias(prefix + ".bk", cols);
    tr.Wv = store.matrix(prefix + ".Wv", rows, cols, rng);
    tr.bv = store.bias(prefix + ".bv", cols);
    return tr;
}

namespace {

t::Array attend(t::Tape& tape, const t::Array& Q, const t::Array& K, const t::Array& V,
                t::Array* weights_out) {
    t::Array weights = t::softmax_rows(tape, t::matmul(tape, Q, t::transpose(tape, K)));
    if (weights_out) *weights_out = weights;
    return t::matmul(tape, weights, V);
}

}  // namespace

t::Array self_attention(t::Tape& tape, const t::Array& H, const AttentionTriplet& tr,
                        t::Array* weights_out) {
    t::Array Q = t::dense(tape, H, tr.Wq, tr.bq);
    t::Array K = t::dense(tape, H, tr.Wk, tr.bk);
    t::Array V = t::dense(tape, H, tr.Wv, tr.bv);
    return attend(tape, Q, K, V, weights_out);
}

t::Array inter_attention(t::Tape& tape, const t::Array& Ha, const t::Array& Hb,
                         const AttentionTriplet& ta, const AttentionTriplet& tb,
                         t::Array* weights_out) {
    t::Array Q = t::dense(tape, Ha, ta.Wq, ta.bq);
    t::Array K = t::dense(tape, Hb, tb.Wk, tb.bk);
    t::Array V = t::dense(tape, Hb, tb.Wv, tb.bv);
    return attend(tape, Q, K, V, weights_out);
}

t::Array feature_specific_attention(t::Tape& tape, const t::Array& Ht, const t::Array* Hu,
                                    const AttentionTriplet& tt, const AttentionTriplet* tu) {
    t::Array sa_t = self_attention(tape, Ht, tt);
    if (!Hu) return sa_t;
    if (!tu) throw ConfigError("topic encoding given without a topic attention triplet");
    t::Array sa_u = self_attention(tape, *Hu, *tu);
    t::Array ia_tu = inter_attention(tape, Ht, *Hu, tt, *tu);
    t::Array ia_ut = inter_attention(tape, *Hu, Ht, *tu, tt);
    return t::concat(tape, {sa_t, sa_u, ia_tu, ia_ut}, 0);
}

t::Array shared_average(t::Tape& tape, const t::Array& Ad, const t::Array& As) {
    return t::scale(tape, t::add(tape, Ad, As), 0.5);
}

t::Array gate_cell(t::Tape& tape, const t::Array& A_task, const t::Array& A_shared,
                   const GateParams& params, t::Array* gate_out) {
    if (A_task.rows() != A_shared.rows())
        throw ShapeError("gate_cell: task rows " + A_task.shape_str() + " vs shared rows " +
                         A_shared.shape_str());
    t::Array projected = t::dense(tape, A_shared, params.W, params.b);
    t::Array gate = t::sigmoid(tape, projected);
    if (gate_out) *gate_out = gate;
    return t::hadamard(tape, gate, projected);
}

t::Array spia(t::Tape& tape, const t::Array& A_task, const t::Array& A_shared,
              const TaskQuery& query, const SharedKV& shared, t::Array* weights_out) {
    t::Array Q = t::dense(tape, A_task, query.Wq, query.bq);
    t::Array K = t::dense(tape, A_shared, shared.Wk, shared.bk);
    t::Array V = t::dense(tape, A_shared, shared.Wv, shared.bv);
    return attend(tape, Q, K, V, weights_out);
}

t::Array fuse(t::Tape& tape, const t::Array& G, const t::Array& S, const FusionParams& params) {
    if (G.rows() != S.rows() || G.cols() != S.cols())
        throw ShapeError("fuse: shapes " + G.shape_str() + " and " + S.shape_str() + " differ");
    t::Array diff = t::sub(tape, G, S);
    t::Array prod = t::hadamard(tape, G, S);
    t::Array c = t::concat(tape, {G, S, diff, prod}, 1);
    return t::tanh(tape, t::dense(tape, c, params.W, params.b));
}

}  // namespace climstance::model
