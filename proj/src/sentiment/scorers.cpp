#include "climstance/sentiment/scorers.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "climstance/common/error.hpp"

namespace climstance::sentiment {

namespace {

constexpr double kNormalizationAlpha = 15.0;
constexpr int kNegationWindow = 3;

void parse_scored_lines(const std::string& path, const char* what,
                        std::unordered_map<std::string, double>& out, double lo, double hi) {
    std::ifstream in(path);
    if (!in) throw DataError(std::string("cannot open ") + what + " file: " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::string token;
        double value = 0.0;
        if (!(row >> token >> value) || !std::isfinite(value) || value < lo || value > hi)
            throw DataError(path + ":" + std::to_string(line_no) + ": bad " + what + " entry");
        out[token] = value;
    }
}

std::unordered_set<std::string> parse_word_lines(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw DataError(std::string("cannot open ") + what + " file: " + path);
    std::unordered_set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        out.insert(line);
    }
    return out;
}

}  // namespace

ValenceLexicon ValenceLexicon::load(const std::string& data_dir) {
    ValenceLexicon lex;
    parse_scored_lines(data_dir + "/vader_lexicon.txt", "valence", lex.valence, -4.0, 4.0);
    lex.negations = parse_word_lines(data_dir + "/negations.txt", "negation");
    std::unordered_map<std::string, double> boosters;
    parse_scored_lines(data_dir + "/boosters.txt", "booster", boosters, 0.0, 4.0);
    lex.boosters = std::move(boosters);
    for (const auto& [token, mult] : lex.boosters)
        if (lex.negations.count(token))
            throw DataError("token listed as both negation and booster: " + token);
    return lex;
}

PatternLexicon PatternLexicon::load(const std::string& data_dir) {
    PatternLexicon lex;
    parse_scored_lines(data_dir + "/pattern_polarity.txt", "polarity", lex.polarity, -1.0, 1.0);
    return lex;
}

WordlistLexicon WordlistLexicon::load(const std::string& data_dir) {
    WordlistLexicon lex;
    lex.positive = parse_word_lines(data_dir + "/positive_words.txt", "positive wordlist");
    lex.negative = parse_word_lines(data_dir + "/negative_words.txt", "negative wordlist");
    return lex;
}

double score_lexicon(const std::vector<std::string>& tokens, const ValenceLexicon& lex) {
    double sum = 0.0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        auto it = lex.valence.find(tokens[i]);
        if (it == lex.valence.end()) continue;
        double v = it->second;
        const std::size_t window_start = i >= kNegationWindow ? i - kNegationWindow : 0;
        bool negated = false;
        for (std::size_t j = window_start; j < i; ++j) {
            if (lex.negations.count(tokens[j])) negated = true;
            if (auto b = lex.boosters.find(tokens[j]); b != lex.boosters.end()) v *= b->second;
        }
        if (negated) v = -v;
        sum += v;
    }
    if (sum == 0.0) return 0.0;
    return sum / std::sqrt(sum * sum + kNormalizationAlpha);
}

double score_pattern(const std::vector<std::string>& tokens, const PatternLexicon& lex) {
    double sum = 0.0;
    std::size_t hits = 0;
    for (const auto& tok : tokens) {
        if (auto it = lex.polarity.find(tok); it != lex.polarity.end()) {
            sum += it->second;
            ++hits;
        }
    }
    return hits == 0 ? 0.0 : sum / static_cast<double>(hits);
}

double score_wordcount(const std::vector<std::string>& tokens, const WordlistLexicon& lex) {
    int pos = 0, neg = 0;
    for (const auto& tok : tokens) {
        if (lex.positive.count(tok)) ++pos;
        if (lex.negative.count(tok)) ++neg;
    }
    if (pos + neg == 0) return 0.0;
    return static_cast<double>(pos - neg) / static_cast<double>(pos + neg);
}

Sentiment to_label(double score, double pos_threshold, double neg_threshold) {
    if (score >= pos_threshold) return Sentiment::Positive;
    if (score <= neg_threshold) return Sentiment::Negative;
    return Sentiment::Neutral;
}

Sentiment majority_vote(const std::array<Sentiment, 3>& labels) {
    int counts[3] = {0, 0, 0};
    for (Sentiment s : labels) ++counts[static_cast<int>(s)];
    for (int c = 0; c < 3; ++c)
        if (counts[c] >= 2) return static_cast<Sentiment>(c);
    return Sentiment::Neutral;
}

Ensemble::Ensemble(ValenceLexicon valence, PatternLexicon pattern, WordlistLexicon wordlist)
    : valence_(std::move(valence)), pattern_(std::move(pattern)), wordlist_(std::move(wordlist)) {}

Ensemble Ensemble::from_data_dir(const std::string& data_dir) {
    return Ensemble(ValenceLexicon::load(data_dir), PatternLexicon::load(data_dir),
                    WordlistLexicon::load(data_dir));
}

SentimentVote Ensemble::annotate(const std::vector<std::string>& surface_tokens) const {
    SentimentVote vote{};
    vote.scorer_labels[0] = to_label(score_lexicon(surface_tokens, valence_));
    vote.scorer_labels[1] = to_label(score_pattern(surface_tokens, pattern_));
    vote.scorer_labels[2] = to_label(score_wordcount(surface_tokens, wordlist_));
    vote.final = majority_vote(vote.scorer_labels);
    return vote;
}

}  // namespace climstance::sentiment
