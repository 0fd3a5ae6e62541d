#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "climstance/text/records.hpp"

namespace climstance::text {

// Tweet text normalization: strips mentions, URLs, punctuation and the
// RT/CC markers, collapses whitespace and lowercases. The result contains
// only [a-z0-9] words separated by single spaces; empty output is allowed.
std::string clean(std::string_view raw);

// Whitespace split of an already-cleaned string.
std::vector<std::string> split_ws(std::string_view cleaned);

class Stopwords {
  public:
    static Stopwords load(const std::string& path);
    static Stopwords from_words(std::vector<std::string> words);
    bool contains(const std::string& token) const { return words_.count(token) > 0; }
    std::size_t size() const { return words_.size(); }

  private:
    std::unordered_set<std::string> words_;
};

// Wordlist-driven hashtag segmentation: camel-case boundaries first, then
// greedy longest-match over each lowercase run. Unsegmentable residue is
// kept as a single token.
class SegmentLexicon {
  public:
    static SegmentLexicon load(const std::string& path);
    static SegmentLexicon from_words(const std::vector<std::string>& words);
    std::vector<std::string> segment(const std::string& tag) const;

  private:
    std::unordered_set<std::string> words_;
    std::size_t max_len_ = 0;
};

struct TokenSequence {
    std::vector<std::string> tokens;
    bool truncated = false;

    std::size_t length() const { return tokens.size(); }
};

struct PipelineOptions {
    std::size_t max_tokens = 64;
    // Optional surface-form overrides applied before stemming (lemma hook).
    std::unordered_map<std::string, std::string> lemma_overrides;
};

// Deterministic preprocessing front-end shared by annotation and modeling.
class TextPipeline {
  public:
    TextPipeline(Stopwords stopwords, SegmentLexicon segmenter, PipelineOptions options = {});

    // Loads stopwords + segmentation wordlist from the bundled data dir.
    static TextPipeline from_data_dir(const std::string& data_dir, PipelineOptions options = {});

    // clean -> split -> stopword filter -> stem -> post filter -> truncate.
    // Output tokens are stable: tokenizing the joined output reproduces it.
    TokenSequence tokenize(std::string_view raw_text) const;

    // Model-facing token sequence: tokenize(text) followed by the stemmed,
    // stopword-filtered segmentation of every hashtag.
    TokenSequence tokenize_record(const TweetRecord& record, bool include_hashtags = true) const;

    // Surface tokens for the sentiment scorers: cleaned and split but with
    // stopwords kept (negators live there) and no stemming.
    std::vector<std::string> sentiment_tokens(const TweetRecord& record) const;

    // Pre-stemming content tokens for topic fitting: cleaned, stopword
    // filtered, unstemmed; hashtags contribute their segmented words except
    // those listed in `excluded_hashtags`.
    std::vector<std::string> topic_tokens(const TweetRecord& record,
                                          const std::unordered_set<std::string>& excluded_hashtags) const;

    const Stopwords& stopwords() const { return stopwords_; }
    const SegmentLexicon& segmenter() const { return segmenter_; }

  private:
    std::vector<std::string> stem_filter(const std::vector<std::string>& surface_tokens) const;

    Stopwords stopwords_;
    SegmentLexicon segmenter_;
    PipelineOptions options_;
};

}  // namespace climstance::text
