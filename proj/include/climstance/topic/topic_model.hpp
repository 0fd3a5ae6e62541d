#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace climstance::topic {

// Ranked topic words plus a per-tweet probability vector over topics.
// Every doc_topic row is nonnegative and sums to 1 (validated on load).
struct TopicModel {
    std::vector<std::vector<std::pair<std::string, double>>> topics;
    std::unordered_map<std::string, std::vector<double>> doc_topic;

    std::size_t topic_count() const { return topics.size(); }
};

// Topic-word feature of one tweet: the top-p words of its m most probable
// topics, concatenated in topic order, deduplicated (first occurrence wins).
struct TopicFeature {
    std::vector<std::string> words;
};

struct BaselineOptions {
    int k_topics = 20;
    std::uint64_t seed = 0;
    int max_iters = 100;
    // doc_topic = softmax(-sharpness * distance-to-centroid). Plain negated
    // distances top out near 0.8 for orthogonal unit vectors, too flat to
    // separate clusters; the factor makes the assignment decisive.
    double sharpness = 5.0;
    int words_per_topic = 50;
};

// TF-IDF + spherical k-means with a fixed seed; deterministic bit-for-bit.
// `docs` carries (tweet id, pre-stemming content tokens). Throws ConfigError
// when k_topics exceeds the vocabulary size.
TopicModel fit_baseline(const std::vector<std::pair<std::string, std::vector<std::string>>>& docs,
                        const BaselineOptions& options);

// Reads the documented exchange format:
//   {"topics": [[[word, weight], ...], ...], "doc_topic": {id: [p, ...]}}
// Validates probability rows (sum 1 +- 1e-6, nonnegative) and, when
// min_topic_words > 0, that every topic carries at least that many words.
TopicModel load_external(const std::string& path, std::size_t min_topic_words = 0);

// Writes the same exchange format.
void save_topics(const std::string& path, const TopicModel& model);

// m highest-probability topics (ties to the lower topic index), top-p words
// each. Unknown tweet id raises DataError.
TopicFeature top_words(const TopicModel& model, const std::string& tweet_id, int m, int p);

}  // namespace climstance::topic
