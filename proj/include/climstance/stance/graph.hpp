#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "climstance/text/records.hpp"

namespace climstance::stance {

// Weighted hashtag co-occurrence graph with per-node polarity scores.
// Edges are symmetric, weights are co-occurrence counts, no self-edges.
// Nodes keep corpus insertion order.
class HashtagGraph {
  public:
    int add_node(const std::string& name);
    int find(const std::string& name) const;  // -1 when absent
    void add_edge(int a, int b, int weight = 1);

    std::size_t node_count() const { return names_.size(); }
    const std::string& name(int node) const { return names_[static_cast<std::size_t>(node)]; }
    const std::vector<std::string>& names() const { return names_; }

    // Neighbors of a node as (neighbor index, weight), sorted by index.
    const std::vector<std::pair<int, int>>& neighbors(int node) const;
    int edge_weight(int a, int b) const;  // 0 when absent

    double score(int node) const { return score_[static_cast<std::size_t>(node)]; }
    bool labeled(int node) const { return labeled_[static_cast<std::size_t>(node)] != 0; }
    void set_score(int node, double score, bool labeled);

    // Score of a hashtag by name; (0, false) when the node is absent.
    std::pair<double, bool> lookup(const std::string& hashtag) const;

  private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, int> index_;
    std::vector<std::unordered_map<int, int>> edges_;
    mutable std::vector<std::vector<std::pair<int, int>>> sorted_adj_;
    mutable std::vector<char> adj_dirty_;
    std::vector<double> score_;
    std::vector<char> labeled_;
};

// One node per distinct hashtag; an edge weight counts the tweets in which
// the pair co-occurs (hashtags deduplicated within each tweet).
HashtagGraph build_graph(const std::vector<text::TweetRecord>& corpus);

}  // namespace climstance::stance
