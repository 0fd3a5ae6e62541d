#include "climstance/model/encoder.hpp"

#include <cmath>

#include "climstance/common/error.hpp"

namespace climstance::model {

namespace t = climstance::tensor;

namespace {

LstmGate make_gate(ParamStore& store, const std::string& prefix, int input_dim, int hidden,
                   double bias_fill, std::mt19937_64& rng) {
    LstmGate gate;
    gate.W = store.matrix(prefix + ".W", static_cast<std::size_t>(input_dim),
                          static_cast<std::size_t>(hidden), rng);
    gate.U = store.matrix(prefix + ".U", static_cast<std::size_t>(hidden),
                          static_cast<std::size_t>(hidden), rng);
    gate.b = store.bias(prefix + ".b", static_cast<std::size_t>(hidden), bias_fill);
    return gate;
}

LstmDirection make_direction(ParamStore& store, const std::string& prefix, int input_dim,
                             int hidden, std::mt19937_64& rng) {
    LstmDirection dir;
    dir.input = make_gate(store, prefix + ".i", input_dim, hidden, 0.0, rng);
    dir.forget = make_gate(store, prefix + ".f", input_dim, hidden, 1.0, rng);
    dir.cell = make_gate(store, prefix + ".g", input_dim, hidden, 0.0, rng);
    dir.output = make_gate(store, prefix + ".o", input_dim, hidden, 0.0, rng);
    return dir;
}

t::Array gate_preact(t::Tape& tape, const t::Array& x, const t::Array& h, const LstmGate& g) {
    return t::add(tape, t::add(tape, t::matmul(tape, x, g.W), t::matmul(tape, h, g.U)), g.b);
}

// Hidden states of one direction, aligned with input positions.
std::vector<t::Array> run_direction(t::Tape& tape, const std::vector<t::Array>& xs,
                                    const LstmDirection& dir, int hidden, bool reverse) {
    const std::size_t n = xs.size();
    std::vector<t::Array> states(n);
    t::Array h = t::Array::zeros(1, static_cast<std::size_t>(hidden));
    t::Array c = t::Array::zeros(1, static_cast<std::size_t>(hidden));
    for (std::size_t step = 0; step < n; ++step) {
        const std::size_t pos = reverse ? n - 1 - step : step;
        const t::Array& x = xs[pos];
        t::Array i = t::sigmoid(tape, gate_preact(tape, x, h, dir.input));
        t::Array f = t::sigmoid(tape, gate_preact(tape, x, h, dir.forget));
        t::Array g = t::tanh(tape, gate_preact(tape, x, h, dir.cell));
        t::Array o = t::sigmoid(tape, gate_preact(tape, x, h, dir.output));
        c = t::add(tape, t::hadamard(tape, f, c), t::hadamard(tape, i, g));
        h = t::hadamard(tape, o, t::tanh(tape, c));
        states[pos] = h;
    }
    return states;
}

}  // namespace

EncoderParams make_encoder(ParamStore& store, const std::string& prefix, int input_dim, int hidden,
                           std::mt19937_64& rng) {
    if (hidden < 1) throw ConfigError("lstm hidden size must be positive");
    EncoderParams params;
    params.hidden = hidden;
    params.fwd = make_direction(store, prefix + ".fwd", input_dim, hidden, rng);
    params.bwd = make_direction(store, prefix + ".bwd", input_dim, hidden, rng);
    return params;
}

t::Array encode(t::Tape& tape, const std::vector<t::Array>& embedded, const EncoderParams& params) {
    if (embedded.empty()) throw ShapeError("encode requires at least one embedded token");
    auto fwd = run_direction(tape, embedded, params.fwd, params.hidden, false);
    auto bwd = run_direction(tape, embedded, params.bwd, params.hidden, true);
    std::vector<t::Array> rows;
    rows.reserve(embedded.size());
    for (std::size_t i = 0; i < embedded.size(); ++i)
        rows.push_back(t::concat(tape, {fwd[i], bwd[i]}, 1));
    return t::concat(tape, rows, 0);
}

}  // namespace climstance::model
