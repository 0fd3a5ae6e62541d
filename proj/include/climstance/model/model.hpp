#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "climstance/model/attention.hpp"
#include "climstance/model/embedding.hpp"
#include "climstance/model/encoder.hpp"
#include "climstance/model/params.hpp"
#include "climstance/tensor/tape.hpp"
#include "climstance/text/records.hpp"

namespace climstance::model {

enum class Variant { SingleStance, SingleSentiment, SharedOnly, SharedPrivate };
enum class Features { Text, TextTopic };

std::string to_string(Variant v);
std::string to_string(Features f);
Variant variant_from_string(const std::string& s);
Features features_from_string(const std::string& s);

struct ModelConfig {
    Variant variant = Variant::SharedPrivate;
    Features features = Features::TextTopic;
    int lstm_units = 100;  // d_l
    int attn_dim = 100;    // d_a
    int shared_dim = 100;  // d_s
    double lambda = 0.5;
    bool shared_loss = true;

    bool uses_stance() const { return variant != Variant::SingleSentiment; }
    bool uses_sentiment() const { return variant != Variant::SingleStance; }
    bool is_multi_task() const {
        return variant == Variant::SharedOnly || variant == Variant::SharedPrivate;
    }
};

// The classifier: embedding + Bi-LSTM feature extraction for text and topic,
// feature-specific attention, and for the shared-private variant the gated
// shared space with task-specific inter attention and fusion.
class Model {
  public:
    Model(ModelConfig config, EmbeddingProvider embeddings, std::uint64_t init_seed);

    struct Input {
        std::vector<std::string> text_tokens;
        std::vector<std::string> topic_tokens;  // ignored unless features = TextTopic
    };

    struct Logits {
        std::optional<tensor::Array> stance;         // 1 x 2
        std::optional<tensor::Array> sentiment;      // 1 x 3
        std::optional<tensor::Array> stance_aux;     // shared-feature head, 1 x 2
        std::optional<tensor::Array> sentiment_aux;  // shared-feature head, 1 x 3
        bool text_padded = false;                    // empty input padded with UNK
        bool topic_padded = false;
    };

    struct Targets {
        std::optional<int> stance;     // 0 = denier, 1 = believer
        std::optional<int> sentiment;  // 0 = negative, 1 = neutral, 2 = positive
    };

    Logits forward(tensor::Tape& tape, const Input& input) const;

    // L_task + lambda * L_shared over the active tasks. Missing targets for
    // an active task raise ConfigError.
    tensor::Array loss(tensor::Tape& tape, const Logits& logits, const Targets& targets) const;

    const ModelConfig& config() const { return config_; }
    EmbeddingProvider& embeddings() { return embeddings_; }
    const EmbeddingProvider& embeddings() const { return embeddings_; }
    ParamStore& params() { return store_; }
    const ParamStore& params() const { return store_; }
    // All learnable arrays (embedding table first when trainable).
    std::vector<tensor::Array> parameters() const;

  private:
    std::vector<tensor::Array> embed_padded(tensor::Tape& tape,
                                            const std::vector<std::string>& tokens,
                                            bool* padded) const;

    ModelConfig config_;
    EmbeddingProvider embeddings_;
    ParamStore store_;

    EncoderParams enc_text_;
    EncoderParams enc_topic_;  // TextTopic only

    // Single-task / shared-only use the plain pair; shared-private uses the
    // per-task pairs.
    AttentionTriplet attn_text_, attn_topic_;
    AttentionTriplet attn_text_stance_, attn_topic_stance_;
    AttentionTriplet attn_text_sent_, attn_topic_sent_;

    GateParams gate_stance_, gate_sent_;
    TaskQuery spia_query_stance_, spia_query_sent_;
    SharedKV spia_shared_;
    FusionParams fuse_stance_, fuse_sent_;

    tensor::Array head_stance_W_, head_stance_b_;
    tensor::Array head_sent_W_, head_sent_b_;
    tensor::Array aux_stance_W_, aux_stance_b_;
    tensor::Array aux_sent_W_, aux_sent_b_;
};

// Softmax of a 1 x C logits row, computed outside the tape (prediction).
std::vector<double> softmax_values(const tensor::Array& logits);
int argmax(const std::vector<double>& values);

// Free-standing composite loss, exposed for the equation oracles.
// Multi-task + shared_loss requires the aux logits.
tensor::Array total_loss(tensor::Tape& tape, const Model::Logits& logits,
                         const Model::Targets& targets, const ModelConfig& config);

}  // namespace climstance::model
