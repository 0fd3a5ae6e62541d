#include "climstance/harness/kfold.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "climstance/common/error.hpp"

namespace climstance::harness {

std::vector<FoldSplit> stratified_kfold(const std::vector<std::string>& labels, int k,
                                        std::uint64_t seed) {
    if (k < 2) throw ConfigError("stratified k-fold requires k >= 2");
    if (labels.empty()) throw ConfigError("stratified k-fold on an empty corpus");

    std::map<std::string, std::vector<int>> by_class;  // ordered for determinism
    for (std::size_t i = 0; i < labels.size(); ++i)
        by_class[labels[i]].push_back(static_cast<int>(i));

    std::mt19937_64 rng(seed);
    std::vector<std::vector<int>> fold_members(static_cast<std::size_t>(k));
    // Rotating the dealing start across classes spreads the remainders, so
    // fold totals stay balanced as well as the per-class counts.
    std::size_t start = 0;
    for (auto& [label, indices] : by_class) {
        if (static_cast<int>(indices.size()) < k)
            throw ConfigError("class \"" + label + "\" has " + std::to_string(indices.size()) +
                              " members, fewer than k=" + std::to_string(k));
        std::shuffle(indices.begin(), indices.end(), rng);
        for (std::size_t i = 0; i < indices.size(); ++i)
            fold_members[(start + i) % static_cast<std::size_t>(k)].push_back(indices[i]);
        start = (start + indices.size()) % static_cast<std::size_t>(k);
    }

    std::vector<FoldSplit> splits(static_cast<std::size_t>(k));
    for (int f = 0; f < k; ++f) {
        auto& split = splits[static_cast<std::size_t>(f)];
        split.test = fold_members[static_cast<std::size_t>(f)];
        std::sort(split.test.begin(), split.test.end());
        for (int other = 0; other < k; ++other) {
            if (other == f) continue;
            split.train.insert(split.train.end(), fold_members[static_cast<std::size_t>(other)].begin(),
                               fold_members[static_cast<std::size_t>(other)].end());
        }
        std::sort(split.train.begin(), split.train.end());
    }
    return splits;
}

std::vector<int> oversample_minority(const std::vector<int>& train_indices,
                                     const std::vector<std::string>& labels, std::uint64_t seed) {
    std::map<std::string, std::vector<int>> by_class;
    for (int idx : train_indices) by_class[labels[static_cast<std::size_t>(idx)]].push_back(idx);
    if (by_class.size() < 2) throw ConfigError("oversampling requires two classes in the training set");
    if (by_class.size() > 2)
        throw ConfigError("oversampling expects exactly two classes, got " +
                          std::to_string(by_class.size()));

    std::size_t majority = 0;
    for (const auto& [label, members] : by_class) majority = std::max(majority, members.size());

    std::vector<int> out = train_indices;
    std::mt19937_64 rng(seed);
    for (const auto& [label, members] : by_class) {
        std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
        for (std::size_t need = majority - members.size(); need > 0; --need)
            out.push_back(members[pick(rng)]);
    }
    return out;
}

}  // namespace climstance::harness
