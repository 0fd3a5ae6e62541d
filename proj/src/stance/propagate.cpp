#include "climstance/stance/propagate.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include <json.hpp>

#include "climstance/common/error.hpp"

namespace climstance::stance {

SeedSet SeedSet::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open seed file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError("invalid seed file " + path + ": " + e.what());
    }
    SeedSet seeds;
    for (const char* key : {"denier", "believer"}) {
        if (!j.contains(key) || !j[key].is_array())
            throw DataError("seed file " + path + " is missing the \"" + key + "\" array");
        auto& target = std::string(key) == "denier" ? seeds.denier : seeds.believer;
        for (const auto& tag : j[key]) {
            std::string s = tag.get<std::string>();
            std::transform(s.begin(), s.end(), s.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            target.push_back(std::move(s));
        }
    }
    seeds.validate();
    return seeds;
}

void SeedSet::validate() const {
    if (denier.empty() || believer.empty())
        throw ConfigError("seed sets must both be nonempty");
    std::unordered_set<std::string> d(denier.begin(), denier.end());
    for (const auto& tag : believer)
        if (d.count(tag)) throw ConfigError("hashtag seeded as both denier and believer: " + tag);
}

PropagationResult propagate(HashtagGraph& graph, const SeedSet& seeds, const PropagationConfig& cfg) {
    if (cfg.gamma < 1) throw ConfigError("gamma must be >= 1");
    if (cfg.max_rounds < 1) throw ConfigError("max_rounds must be >= 1");
    seeds.validate();

    PropagationResult result;
    auto plant = [&](const std::vector<std::string>& tags, double polarity) {
        for (const auto& tag : tags) {
            const int id = graph.find(tag);
            if (id < 0) {
                result.missing_seeds.push_back(tag);
                continue;
            }
            graph.set_score(id, polarity, true);
        }
    };
    plant(seeds.denier, -1.0);
    plant(seeds.believer, +1.0);

    const int n = static_cast<int>(graph.node_count());
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    if (cfg.node_order == NodeOrder::Lexicographic)
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return graph.name(a) < graph.name(b); });

    for (int round = 0; round < cfg.max_rounds; ++round) {
        const int relaxation = round / cfg.gamma;
        // Synchronous commit: labels computed this round use last round's
        // labeled set and take effect together at round end.
        std::vector<std::pair<int, double>> pending;
        for (int node : order) {
            if (graph.labeled(node)) continue;
            const auto& nbrs = graph.neighbors(node);
            const int t = static_cast<int>(nbrs.size());
            if (t == 0) continue;
            int t_labeled = 0;
            double weighted_sum = 0.0;
            double weight_total = 0.0;
            for (const auto& [nbr, w] : nbrs) {
                if (!graph.labeled(nbr)) continue;
                ++t_labeled;
                weighted_sum += graph.score(nbr) * static_cast<double>(w);
                weight_total += static_cast<double>(w);
            }
            if (t_labeled == 0 || t_labeled + relaxation < t) continue;
            pending.emplace_back(node, weighted_sum / weight_total);
        }
        result.rounds_run = round + 1;
        if (pending.empty()) break;
        for (const auto& [node, score] : pending) graph.set_score(node, score, true);
    }
    return result;
}

double score_tweet(const text::TweetRecord& record, const HashtagGraph& graph) {
    double sum = 0.0;
    int labeled = 0;
    for (const auto& tag : record.hashtags) {
        const auto [score, is_labeled] = graph.lookup(tag);
        if (!is_labeled) continue;
        sum += score;
        ++labeled;
    }
    return labeled == 0 ? 0.0 : sum / static_cast<double>(labeled);
}

StanceAssignment assign_stance(double score) {
    if (score < 0.0) return StanceAssignment::Denier;
    if (score > 0.0) return StanceAssignment::Believer;
    return StanceAssignment::Unlabeled;
}

void annotate_corpus(std::vector<text::TweetRecord>& corpus, const HashtagGraph& graph) {
    for (auto& record : corpus) {
        const double score = score_tweet(record, graph);
        record.stance_score = score;
        switch (assign_stance(score)) {
            case StanceAssignment::Denier: record.stance_label = text::Stance::Denier; break;
            case StanceAssignment::Believer: record.stance_label = text::Stance::Believer; break;
            case StanceAssignment::Unlabeled: record.stance_label.reset(); break;
        }
    }
}

}  // namespace climstance::stance
