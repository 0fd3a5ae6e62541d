#include "climstance/model/model.hpp"

#include <algorithm>
#include <cmath>

#include "climstance/common/error.hpp"

namespace climstance::model {

namespace t = climstance::tensor;

std::string to_string(Variant v) {
    switch (v) {
        case Variant::SingleStance: return "single-stance";
        case Variant::SingleSentiment: return "single-sentiment";
        case Variant::SharedOnly: return "so-mt";
        case Variant::SharedPrivate: return "sp-mt";
    }
    return "sp-mt";
}

std::string to_string(Features f) { return f == Features::Text ? "text" : "text+topic"; }

Variant variant_from_string(const std::string& s) {
    if (s == "single-stance") return Variant::SingleStance;
    if (s == "single-sentiment") return Variant::SingleSentiment;
    if (s == "so-mt") return Variant::SharedOnly;
    if (s == "sp-mt") return Variant::SharedPrivate;
    throw ConfigError("unknown model variant: " + s +
                      " (expected single-stance, single-sentiment, so-mt or sp-mt)");
}

Features features_from_string(const std::string& s) {
    if (s == "text") return Features::Text;
    if (s == "text+topic") return Features::TextTopic;
    throw ConfigError("unknown feature set: " + s + " (expected text or text+topic)");
}

namespace {

void validate_config(const ModelConfig& c) {
    if (c.lstm_units < 1 || c.attn_dim < 1 || c.shared_dim < 1)
        throw ConfigError("model dimensions must be positive");
    if (c.lambda < 0.0) throw ConfigError("lambda must be nonnegative");
}

}  // namespace

Model::Model(ModelConfig config, EmbeddingProvider embeddings, std::uint64_t init_seed)
    : config_(config), embeddings_(std::move(embeddings)) {
    validate_config(config_);
    std::mt19937_64 rng(init_seed);
    if (embeddings_.is_trainable()) store_.adopt("embed.table", embeddings_.table());

    const int d = embeddings_.dim();
    const int d_l = config_.lstm_units;
    const int d_a = config_.attn_dim;
    const int d_s = config_.shared_dim;
    const int enc_out = 2 * d_l;
    const bool topic = config_.features == Features::TextTopic;

    enc_text_ = make_encoder(store_, "enc.text", d, d_l, rng);
    if (topic) enc_topic_ = make_encoder(store_, "enc.topic", d, d_l, rng);

    if (config_.variant == Variant::SharedPrivate) {
        attn_text_stance_ = make_triplet(store_, "attn.td", enc_out, d_a, rng);
        if (topic) attn_topic_stance_ = make_triplet(store_, "attn.ud", enc_out, d_a, rng);
        attn_text_sent_ = make_triplet(store_, "attn.ts", enc_out, d_a, rng);
        if (topic) attn_topic_sent_ = make_triplet(store_, "attn.us", enc_out, d_a, rng);
        gate_stance_ = {store_.matrix("gate.d.W", static_cast<std::size_t>(d_a),
                                      static_cast<std::size_t>(d_s), rng),
                        store_.bias("gate.d.b", static_cast<std::size_t>(d_s))};
        gate_sent_ = {store_.matrix("gate.s.W", static_cast<std::size_t>(d_a),
                                    static_cast<std::size_t>(d_s), rng),
                      store_.bias("gate.s.b", static_cast<std::size_t>(d_s))};
        spia_query_stance_ = {store_.matrix("spia.d.Wq", static_cast<std::size_t>(d_a),
                                            static_cast<std::size_t>(d_s), rng),
                              store_.bias("spia.d.bq", static_cast<std::size_t>(d_s))};
        spia_query_sent_ = {store_.matrix("spia.s.Wq", static_cast<std::size_t>(d_a),
                                          static_cast<std::size_t>(d_s), rng),
                            store_.bias("spia.s.bq", static_cast<std::size_t>(d_s))};
        spia_shared_ = {store_.matrix("spia.shared.Wk", static_cast<std::size_t>(d_a),
                                      static_cast<std::size_t>(d_s), rng),
                        store_.bias("spia.shared.bk", static_cast<std::size_t>(d_s)),
                        store_.matrix("spia.shared.Wv", static_cast<std::size_t>(d_a),
                                      static_cast<std::size_t>(d_s), rng),
                        store_.bias("spia.shared.bv", static_cast<std::size_t>(d_s))};
        fuse_stance_ = {store_.matrix("fuse.d.W", static_cast<std::size_t>(4 * d_s),
                                      static_cast<std::size_t>(d_s), rng),
                        store_.bias("fuse.d.b", static_cast<std::size_t>(d_s))};
        fuse_sent_ = {store_.matrix("fuse.s.W", static_cast<std::size_t>(4 * d_s),
                                    static_cast<std::size_t>(d_s), rng),
                      store_.bias("fuse.s.b", static_cast<std::size_t>(d_s))};
    } else {
        attn_text_ = make_triplet(store_, "attn.t", enc_out, d_a, rng);
        if (topic) attn_topic_ = make_triplet(store_, "attn.u", enc_out, d_a, rng);
    }

    const int head_in = config_.variant == Variant::SharedPrivate ? d_a + d_s : d_a;
    if (config_.uses_stance()) {
        head_stance_W_ = store_.matrix("head.stance.W", static_cast<std::size_t>(head_in), 2, rng);
        head_stance_b_ = store_.bias("head.stance.b", 2);
    }
    if (config_.uses_sentiment()) {
        head_sent_W_ = store_.matrix("head.sentiment.W", static_cast<std::size_t>(head_in), 3, rng);
        head_sent_b_ = store_.bias("head.sentiment.b", 3);
    }
    if (config_.is_multi_task()) {
        const int aux_in = config_.variant == Variant::SharedPrivate ? d_s : d_a;
        aux_stance_W_ = store_.matrix("aux.stance.W", static_cast<std::size_t>(aux_in), 2, rng);
        aux_stance_b_ = store_.bias("aux.stance.b", 2);
        aux_sent_W_ = store_.matrix("aux.sentiment.W", static_cast<std::size_t>(aux_in), 3, rng);
        aux_sent_b_ = store_.bias("aux.sentiment.b", 3);
    }
}

std::vector<t::Array> Model::embed_padded(t::Tape& tape, const std::vector<std::string>& tokens,
                                          bool* padded) const {
    if (tokens.empty()) {
        if (padded) *padded = true;
        // UNK token: any string absent from the vocabulary maps to the UNK row.
        return embeddings_.embed(tape, {""});
    }
    if (padded) *padded = false;
    return embeddings_.embed(tape, tokens);
}

Model::Logits Model::forward(t::Tape& tape, const Input& input) const {
    Logits out;
    const bool topic = config_.features == Features::TextTopic;

    auto text_emb = embed_padded(tape, input.text_tokens, &out.text_padded);
    t::Array Ht = encode(tape, text_emb, enc_text_);
    t::Array Hu;
    if (topic) {
        auto topic_emb = embed_padded(tape, input.topic_tokens, &out.topic_padded);
        Hu = encode(tape, topic_emb, enc_topic_);
    }
    const t::Array* Hu_ptr = topic ? &Hu : nullptr;

    if (config_.variant == Variant::SharedPrivate) {
        t::Array Ad = feature_specific_attention(tape, Ht, Hu_ptr, attn_text_stance_,
                                                 topic ? &attn_topic_stance_ : nullptr);
        t::Array As = feature_specific_attention(tape, Ht, Hu_ptr, attn_text_sent_,
                                                 topic ? &attn_topic_sent_ : nullptr);
        t::Array Ashared = shared_average(tape, Ad, As);
        t::Array Gd = gate_cell(tape, Ad, Ashared, gate_stance_);
        t::Array Gs = gate_cell(tape, As, Ashared, gate_sent_);
        t::Array Sd = spia(tape, Ad, Ashared, spia_query_stance_, spia_shared_);
        t::Array Ss = spia(tape, As, Ashared, spia_query_sent_, spia_shared_);
        t::Array Fd = fuse(tape, Gd, Sd, fuse_stance_);
        t::Array Fs = fuse(tape, Gs, Ss, fuse_sent_);

        t::Array pooled_Fd = t::mean_rows(tape, Fd);
        t::Array pooled_Fs = t::mean_rows(tape, Fs);
        t::Array stance_in = t::concat(tape, {t::mean_rows(tape, Ad), pooled_Fd}, 1);
        t::Array sent_in = t::concat(tape, {t::mean_rows(tape, As), pooled_Fs}, 1);
        out.stance = t::dense(tape, stance_in, head_stance_W_, head_stance_b_);
        out.sentiment = t::dense(tape, sent_in, head_sent_W_, head_sent_b_);
        out.stance_aux = t::dense(tape, pooled_Fd, aux_stance_W_, aux_stance_b_);
        out.sentiment_aux = t::dense(tape, pooled_Fs, aux_sent_W_, aux_sent_b_);
        return out;
    }

    t::Array A = feature_specific_attention(tape, Ht, Hu_ptr, attn_text_,
                                            topic ? &attn_topic_ : nullptr);
    t::Array pooled = t::mean_rows(tape, A);
    if (config_.uses_stance()) out.stance = t::dense(tape, pooled, head_stance_W_, head_stance_b_);
    if (config_.uses_sentiment())
        out.sentiment = t::dense(tape, pooled, head_sent_W_, head_sent_b_);
    if (config_.is_multi_task()) {
        out.stance_aux = t::dense(tape, pooled, aux_stance_W_, aux_stance_b_);
        out.sentiment_aux = t::dense(tape, pooled, aux_sent_W_, aux_sent_b_);
    }
    return out;
}

t::Array total_loss(t::Tape& tape, const Model::Logits& logits, const Model::Targets& targets,
                    const ModelConfig& config) {
    std::optional<t::Array> task_loss;
    auto accumulate = [&](std::optional<t::Array>& acc, t::Array term) {
        acc = acc ? t::add(tape, *acc, term) : std::move(term);
    };

    if (config.uses_stance()) {
        if (!logits.stance) throw ConfigError("stance logits missing for an active stance task");
        if (!targets.stance) throw ConfigError("missing stance target for an active stance task");
        accumulate(task_loss, t::bce_loss(tape, *logits.stance, *targets.stance));
    }
    if (config.uses_sentiment()) {
        if (!logits.sentiment)
            throw ConfigError("sentiment logits missing for an active sentiment task");
        if (!targets.sentiment)
            throw ConfigError("missing sentiment target for an active sentiment task");
        accumulate(task_loss, t::cce_loss(tape, *logits.sentiment, *targets.sentiment));
    }
    if (!task_loss) throw ConfigError("no active task");

    if (!config.is_multi_task() || !config.shared_loss || config.lambda == 0.0) return *task_loss;

    if (!logits.stance_aux || !logits.sentiment_aux)
        throw ConfigError("shared loss requested but aux logits are missing");
    std::optional<t::Array> shared_loss;
    accumulate(shared_loss, t::bce_loss(tape, *logits.stance_aux, *targets.stance));
    accumulate(shared_loss, t::cce_loss(tape, *logits.sentiment_aux, *targets.sentiment));
    return t::add(tape, *task_loss, t::scale(tape, *shared_loss, config.lambda));
}

t::Array Model::loss(t::Tape& tape, const Logits& logits, const Targets& targets) const {
    return total_loss(tape, logits, targets, config_);
}

std::vector<t::Array> Model::parameters() const { return store_.arrays(); }

std::vector<double> softmax_values(const t::Array& logits) {
    const auto& v = logits.values();
    double mx = *std::max_element(v.begin(), v.end());
    std::vector<double> out(v.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = std::exp(v[i] - mx);
        sum += out[i];
    }
    for (double& p : out) p /= sum;
    return out;
}

int argmax(const std::vector<double>& values) {
    return static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
}

}  // namespace climstance::model
