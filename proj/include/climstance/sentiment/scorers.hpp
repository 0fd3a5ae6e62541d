#pragma once

#include <array>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "climstance/text/records.hpp"

namespace climstance::sentiment {

using text::Sentiment;

// Valence lexicon for the rule-based scorer: per-token valence in [-4, +4],
// a negation set and booster multipliers. Negations and boosters must be
// disjoint.
struct ValenceLexicon {
    std::unordered_map<std::string, double> valence;
    std::unordered_set<std::string> negations;
    std::unordered_map<std::string, double> boosters;

    static ValenceLexicon load(const std::string& data_dir);
};

// Token polarity lexicon for the pattern scorer (mean polarity, no rules).
struct PatternLexicon {
    std::unordered_map<std::string, double> polarity;

    static PatternLexicon load(const std::string& data_dir);
};

// Positive/negative wordlists for the count scorer.
struct WordlistLexicon {
    std::unordered_set<std::string> positive;
    std::unordered_set<std::string> negative;

    static WordlistLexicon load(const std::string& data_dir);
};

// Summed valences with negation flip (lookback window of 3) and booster
// scaling, normalized to [-1, +1] by s / sqrt(s^2 + 15).
double score_lexicon(const std::vector<std::string>& tokens, const ValenceLexicon& lex);

// Mean polarity over tokens found in the lexicon; 0 when none match.
double score_pattern(const std::vector<std::string>& tokens, const PatternLexicon& lex);

// (positives - negatives) / (positives + negatives); 0 when neither occurs.
double score_wordcount(const std::vector<std::string>& tokens, const WordlistLexicon& lex);

Sentiment to_label(double score, double pos_threshold = 0.05, double neg_threshold = -0.05);

// Modal label of the three scorers; a three-way tie resolves to neutral.
Sentiment majority_vote(const std::array<Sentiment, 3>& labels);

struct SentimentVote {
    std::array<Sentiment, 3> scorer_labels;  // lexicon, pattern, wordcount
    Sentiment final;
};

// The three scorers plus the vote. Input is the cleaned, unstemmed token
// stream (stopwords kept: the negators live there).
class Ensemble {
  public:
    Ensemble(ValenceLexicon valence, PatternLexicon pattern, WordlistLexicon wordlist);
    static Ensemble from_data_dir(const std::string& data_dir);

    SentimentVote annotate(const std::vector<std::string>& surface_tokens) const;

  private:
    ValenceLexicon valence_;
    PatternLexicon pattern_;
    WordlistLexicon wordlist_;
};

}  // namespace climstance::sentiment
