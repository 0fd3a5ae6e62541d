#include "climstance/topic/topic_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "climstance/common/error.hpp"

namespace climstance::topic {

namespace {

using SparseVec = std::vector<std::pair<int, double>>;  // (term index, weight), sorted

double sparse_dot(const SparseVec& a, const std::vector<double>& dense) {
    double acc = 0.0;
    for (const auto& [idx, w] : a) acc += w * dense[static_cast<std::size_t>(idx)];
    return acc;
}

void l2_normalize(std::vector<double>& v) {
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0.0)
        for (double& x : v) x /= norm;
}

}  // namespace

TopicModel fit_baseline(const std::vector<std::pair<std::string, std::vector<std::string>>>& docs,
                        const BaselineOptions& options) {
    if (options.k_topics < 1) throw ConfigError("k_topics must be >= 1");
    const std::size_t n_docs = docs.size();
    if (n_docs == 0) throw ConfigError("cannot fit a topic model on an empty corpus");

    // Vocabulary in sorted order for a stable term indexing.
    std::set<std::string> vocab_set;
    for (const auto& [id, tokens] : docs) vocab_set.insert(tokens.begin(), tokens.end());
    std::vector<std::string> vocab(vocab_set.begin(), vocab_set.end());
    if (static_cast<std::size_t>(options.k_topics) > vocab.size())
        throw ConfigError("k_topics (" + std::to_string(options.k_topics) +
                          ") exceeds vocabulary size (" + std::to_string(vocab.size()) + ")");
    std::unordered_map<std::string, int> term_index;
    for (std::size_t i = 0; i < vocab.size(); ++i) term_index[vocab[i]] = static_cast<int>(i);

    // Document frequencies, then L2-normalized TF-IDF vectors.
    std::vector<int> df(vocab.size(), 0);
    std::vector<SparseVec> tfidf(n_docs);
    for (std::size_t d = 0; d < n_docs; ++d) {
        std::map<int, int> counts;
        for (const auto& tok : docs[d].second) ++counts[term_index[tok]];
        for (const auto& [idx, cnt] : counts) {
            ++df[static_cast<std::size_t>(idx)];
            tfidf[d].emplace_back(idx, static_cast<double>(cnt));
        }
    }
    const double n = static_cast<double>(n_docs);
    for (auto& vec : tfidf) {
        double norm = 0.0;
        for (auto& [idx, w] : vec) {
            const double idf = std::log((1.0 + n) / (1.0 + df[static_cast<std::size_t>(idx)])) + 1.0;
            w *= idf;
            norm += w * w;
        }
        norm = std::sqrt(norm);
        if (norm > 0.0)
            for (auto& [idx, w] : vec) w /= norm;
    }

    // Spherical k-means, seeded centroid choice, tie-break by lowest index.
    const int k = options.k_topics;
    std::mt19937_64 rng(options.seed);
    std::vector<std::size_t> perm(n_docs);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::vector<double>> centroids(static_cast<std::size_t>(k),
                                               std::vector<double>(vocab.size(), 0.0));
    for (int c = 0; c < k; ++c) {
        const auto& seed_doc = tfidf[perm[static_cast<std::size_t>(c) % n_docs]];
        for (const auto& [idx, w] : seed_doc)
            centroids[static_cast<std::size_t>(c)][static_cast<std::size_t>(idx)] = w;
    }

    std::vector<int> assignment(n_docs, -1);
    for (int iter = 0; iter < options.max_iters; ++iter) {
        bool changed = false;
        for (std::size_t d = 0; d < n_docs; ++d) {
            int best = 0;
            double best_sim = sparse_dot(tfidf[d], centroids[0]);
            for (int c = 1; c < k; ++c) {
                const double sim = sparse_dot(tfidf[d], centroids[static_cast<std::size_t>(c)]);
                if (sim > best_sim) {
                    best_sim = sim;
                    best = c;
                }
            }
            if (assignment[d] != best) {
                assignment[d] = best;
                changed = true;
            }
        }
        if (!changed) break;
        std::vector<std::vector<double>> sums(static_cast<std::size_t>(k),
                                              std::vector<double>(vocab.size(), 0.0));
        std::vector<int> members(static_cast<std::size_t>(k), 0);
        for (std::size_t d = 0; d < n_docs; ++d) {
            ++members[static_cast<std::size_t>(assignment[d])];
            for (const auto& [idx, w] : tfidf[d])
                sums[static_cast<std::size_t>(assignment[d])][static_cast<std::size_t>(idx)] += w;
        }
        for (int c = 0; c < k; ++c) {
            if (members[static_cast<std::size_t>(c)] == 0) continue;  // empty cluster keeps its centroid
            l2_normalize(sums[static_cast<std::size_t>(c)]);
            centroids[static_cast<std::size_t>(c)] = std::move(sums[static_cast<std::size_t>(c)]);
        }
    }

    TopicModel model;
    model.topics.resize(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) {
        std::vector<int> order(vocab.size());
        std::iota(order.begin(), order.end(), 0);
        const auto& cen = centroids[static_cast<std::size_t>(c)];
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            const double wa = cen[static_cast<std::size_t>(a)], wb = cen[static_cast<std::size_t>(b)];
            if (wa != wb) return wa > wb;
            return vocab[static_cast<std::size_t>(a)] < vocab[static_cast<std::size_t>(b)];
        });
        const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(options.words_per_topic),
                                                       vocab.size());
        for (std::size_t i = 0; i < take; ++i)
            model.topics[static_cast<std::size_t>(c)].emplace_back(
                vocab[static_cast<std::size_t>(order[i])], cen[static_cast<std::size_t>(order[i])]);
    }

    for (std::size_t d = 0; d < n_docs; ++d) {
        std::vector<double> dist(static_cast<std::size_t>(k), 0.0);
        for (int c = 0; c < k; ++c) {
            // ||x - c||^2 = ||x||^2 + ||c||^2 - 2 x.c with unit (or zero) x.
            double x_sq = 0.0;
            for (const auto& [idx, w] : tfidf[d]) x_sq += w * w;
            double c_sq = 0.0;
            for (double w : centroids[static_cast<std::size_t>(c)]) c_sq += w * w;
            const double d_sq =
                std::max(0.0, x_sq + c_sq - 2.0 * sparse_dot(tfidf[d], centroids[static_cast<std::size_t>(c)]));
            dist[static_cast<std::size_t>(c)] = std::sqrt(d_sq);
        }
        double mx = -dist[0] * options.sharpness;
        std::vector<double> logits(static_cast<std::size_t>(k));
        for (int c = 0; c < k; ++c) {
            logits[static_cast<std::size_t>(c)] = -options.sharpness * dist[static_cast<std::size_t>(c)];
            mx = std::max(mx, logits[static_cast<std::size_t>(c)]);
        }
        double sum = 0.0;
        for (double& l : logits) {
            l = std::exp(l - mx);
            sum += l;
        }
        for (double& l : logits) l /= sum;
        model.doc_topic[docs[d].first] = std::move(logits);
    }
    return model;
}

TopicModel load_external(const std::string& path, std::size_t min_topic_words) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open topic file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError("invalid topic file " + path + ": " + e.what());
    }
    if (!j.contains("topics") || !j["topics"].is_array())
        throw DataError("topic file " + path + " is missing the \"topics\" array");
    if (!j.contains("doc_topic") || !j["doc_topic"].is_object())
        throw DataError("topic file " + path + " is missing the \"doc_topic\" object");

    TopicModel model;
    std::size_t topic_no = 0;
    for (const auto& topic : j["topics"]) {
        if (!topic.is_array() || topic.empty())
            throw DataError("topic " + std::to_string(topic_no) + " has no word list");
        std::vector<std::pair<std::string, double>> words;
        for (const auto& entry : topic) {
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
                !entry[1].is_number())
                throw DataError("topic " + std::to_string(topic_no) +
                                " has a malformed (word, weight) entry");
            words.emplace_back(entry[0].get<std::string>(), entry[1].get<double>());
        }
        if (min_topic_words > 0 && words.size() < min_topic_words)
            throw DataError("topic " + std::to_string(topic_no) + " has " +
                            std::to_string(words.size()) + " words, need at least " +
                            std::to_string(min_topic_words));
        model.topics.push_back(std::move(words));
        ++topic_no;
    }
    if (model.topics.empty()) throw DataError("topic file " + path + " contains no topics");

    for (auto it = j["doc_topic"].begin(); it != j["doc_topic"].end(); ++it) {
        if (!it.value().is_array() || it.value().size() != model.topics.size())
            throw DataError("doc_topic row of tweet " + it.key() + " does not match the topic count");
        std::vector<double> probs;
        double sum = 0.0;
        for (const auto& p : it.value()) {
            const double v = p.get<double>();
            if (!std::isfinite(v) || v < 0.0)
                throw DataError("doc_topic row of tweet " + it.key() + " has a negative entry");
            probs.push_back(v);
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-6)
            throw DataError("doc_topic row of tweet " + it.key() + " sums to " +
                            std::to_string(sum) + ", expected 1");
        model.doc_topic[it.key()] = std::move(probs);
    }
    return model;
}

void save_topics(const std::string& path, const TopicModel& model) {
    nlohmann::json j;
    j["topics"] = nlohmann::json::array();
    for (const auto& topic : model.topics) {
        nlohmann::json words = nlohmann::json::array();
        for (const auto& [word, weight] : topic) words.push_back({word, weight});
        j["topics"].push_back(std::move(words));
    }
    j["doc_topic"] = nlohmann::json::object();
    for (const auto& [id, probs] : model.doc_topic) j["doc_topic"][id] = probs;
    std::ofstream out(path);
    if (!out) throw DataError("cannot write topic file: " + path);
    out << j.dump(2) << "\n";
}

TopicFeature top_words(const TopicModel& model, const std::string& tweet_id, int m, int p) {
    if (m < 1 || p < 1) throw ConfigError("m and p must be >= 1");
    auto it = model.doc_topic.find(tweet_id);
    if (it == model.doc_topic.end()) throw DataError("tweet id not in topic model: " + tweet_id);
    const auto& probs = it->second;

    std::vector<int> order(probs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (probs[static_cast<std::size_t>(a)] != probs[static_cast<std::size_t>(b)])
            return probs[static_cast<std::size_t>(a)] > probs[static_cast<std::size_t>(b)];
        return a < b;
    });

    TopicFeature feature;
    std::unordered_set<std::string> seen;
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(m), order.size());
    for (std::size_t i = 0; i < take; ++i) {
        const auto& topic = model.topics[static_cast<std::size_t>(order[i])];
        const std::size_t words = std::min<std::size_t>(static_cast<std::size_t>(p), topic.size());
        for (std::size_t w = 0; w < words; ++w) {
            const auto& word = topic[w].first;
            if (seen.insert(word).second) feature.words.push_back(word);
        }
    }
    return feature;
}

}  // namespace climstance::topic
