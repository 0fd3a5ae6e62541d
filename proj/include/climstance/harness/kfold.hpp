#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace climstance::harness {

struct FoldSplit {
    std::vector<int> train;
    std::vector<int> test;

    bool operator==(const FoldSplit&) const = default;
};

// Stratified k-fold over label strings: per class, a seeded shuffle dealt
// round-robin across folds, so each class's per-fold count stays within 1
// of its proportional share. Splits are disjoint and cover every index.
// Throws ConfigError when any class has fewer than k members.
std::vector<FoldSplit> stratified_kfold(const std::vector<std::string>& labels, int k,
                                        std::uint64_t seed);

// Duplicates minority-class training indices (sampling with replacement)
// until both classes are equally frequent. Originals are all retained and
// order-preserved; duplicates append at the end. Requires exactly two
// classes among the given indices.
std::vector<int> oversample_minority(const std::vector<int>& train_indices,
                                     const std::vector<std::string>& labels, std::uint64_t seed);

}  // namespace climstance::harness
