#include "climstance/stance/graph.hpp"

#include <algorithm>
#include <set>

#include "climstance/common/error.hpp"

namespace climstance::stance {

int HashtagGraph::add_node(const std::string& name) {
    if (auto it = index_.find(name); it != index_.end()) return it->second;
    const int id = static_cast<int>(names_.size());
    names_.push_back(name);
    index_.emplace(name, id);
    edges_.emplace_back();
    sorted_adj_.emplace_back();
    adj_dirty_.push_back(1);
    score_.push_back(0.0);
    labeled_.push_back(0);
    return id;
}

int HashtagGraph::find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
}

void HashtagGraph::add_edge(int a, int b, int weight) {
    if (a == b) throw DataError("self-edge on hashtag " + name(a));
    if (weight <= 0) throw DataError("non-positive edge weight");
    edges_[static_cast<std::size_t>(a)][b] += weight;
    edges_[static_cast<std::size_t>(b)][a] += weight;
    adj_dirty_[static_cast<std::size_t>(a)] = 1;
    adj_dirty_[static_cast<std::size_t>(b)] = 1;
}

const std::vector<std::pair<int, int>>& HashtagGraph::neighbors(int node) const {
    const auto n = static_cast<std::size_t>(node);
    if (adj_dirty_[n]) {
        sorted_adj_[n].assign(edges_[n].begin(), edges_[n].end());
        std::sort(sorted_adj_[n].begin(), sorted_adj_[n].end());
        adj_dirty_[n] = 0;
    }
    return sorted_adj_[n];
}

int HashtagGraph::edge_weight(int a, int b) const {
    const auto& adj = edges_[static_cast<std::size_t>(a)];
    auto it = adj.find(b);
    return it == adj.end() ? 0 : it->second;
}

void HashtagGraph::set_score(int node, double score, bool labeled) {
    score_[static_cast<std::size_t>(node)] = score;
    labeled_[static_cast<std::size_t>(node)] = labeled ? 1 : 0;
}

std::pair<double, bool> HashtagGraph::lookup(const std::string& hashtag) const {
    const int id = find(hashtag);
    if (id < 0) return {0.0, false};
    return {score(id), labeled(id)};
}

HashtagGraph build_graph(const std::vector<text::TweetRecord>& corpus) {
    HashtagGraph g;
    for (const auto& record : corpus) {
        // Per-tweet dedup: [a, a, b] contributes a single a-b co-occurrence.
        std::set<std::string> distinct(record.hashtags.begin(), record.hashtags.end());
        std::vector<int> ids;
        ids.reserve(distinct.size());
        for (const auto& tag : record.hashtags) {  // preserve first-appearance order
            if (!distinct.count(tag)) continue;
            distinct.erase(tag);
            ids.push_back(g.add_node(tag));
        }
        for (std::size_t i = 0; i < ids.size(); ++i)
            for (std::size_t j = i + 1; j < ids.size(); ++j) g.add_edge(ids[i], ids[j]);
    }
    return g;
}

}  // namespace climstance::stance
