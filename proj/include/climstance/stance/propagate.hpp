#pragma once

#include <string>
#include <vector>

#include "climstance/stance/graph.hpp"
#include "climstance/text/records.hpp"

namespace climstance::stance {

// Seed hashtags with fixed polarity: believer = +1, denier = -1.
// The two sets must be disjoint and nonempty.
struct SeedSet {
    std::vector<std::string> denier;
    std::vector<std::string> believer;

    static SeedSet load(const std::string& path);  // JSON {"denier": [...], "believer": [...]}
    void validate() const;
};

enum class NodeOrder { Insertion, Lexicographic };

struct PropagationConfig {
    int gamma = 50;       // rounds per unit of relaxation
    int max_rounds = 100;
    NodeOrder node_order = NodeOrder::Insertion;
};

struct PropagationResult {
    int rounds_run = 0;
    std::vector<std::string> missing_seeds;  // seeds absent from the graph (warned, not fatal)
};

// Spreads seed polarities over the co-occurrence graph. Rounds run until no
// node changes labeled-status or max_rounds is reached. Within a round a
// node with t neighbors, t_l of them labeled, and relaxation
// l = floor(round / gamma) becomes labeled when t_l + l >= t; its score is
// the edge-weighted mean of its labeled neighbors' scores. Newly computed
// labels take effect at the end of the round. Unreached nodes stay
// unlabeled with score 0.
PropagationResult propagate(HashtagGraph& graph, const SeedSet& seeds, const PropagationConfig& cfg);

// Mean propagated score over the tweet's labeled hashtags; 0 when none.
double score_tweet(const text::TweetRecord& record, const HashtagGraph& graph);

enum class StanceAssignment { Denier, Believer, Unlabeled };

// score < 0 -> denier, score > 0 -> believer, 0 -> unlabeled.
StanceAssignment assign_stance(double score);

// Adds stance_score to every record and stance_label where assignable.
void annotate_corpus(std::vector<text::TweetRecord>& corpus, const HashtagGraph& graph);

}  // namespace climstance::stance
