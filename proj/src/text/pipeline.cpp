#include "climstance/text/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "climstance/common/error.hpp"
#include "climstance/text/porter.hpp"

namespace climstance::text {

namespace {

bool is_url_start(std::string_view s, std::size_t i) {
    return s.compare(i, 7, "http://") == 0 || s.compare(i, 8, "https://") == 0 ||
           s.compare(i, 4, "www.") == 0;
}

bool keep_char(char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); }

std::vector<std::string> load_word_file(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw DataError(std::string("cannot open ") + what + " file: " + path);
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        words.push_back(line);
    }
    return words;
}

}  // namespace

std::string clean(std::string_view raw) {
    // Pass 1: blank out mentions and URLs, lowercase, punctuation to space.
    std::string buf;
    buf.reserve(raw.size());
    std::size_t i = 0;
    while (i < raw.size()) {
        const char c = raw[i];
        if (c == '@') {
            ++i;
            while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
            buf.push_back(' ');
            continue;
        }
        if (is_url_start(raw, i)) {
            while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
            buf.push_back(' ');
            continue;
        }
        const char lc = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        buf.push_back(keep_char(lc) ? lc : ' ');
        ++i;
    }
    // Pass 2: drop retweet / carbon-copy markers, collapse whitespace.
    std::string out;
    out.reserve(buf.size());
    std::size_t pos = 0;
    while (pos < buf.size()) {
        while (pos < buf.size() && buf[pos] == ' ') ++pos;
        std::size_t end = pos;
        while (end < buf.size() && buf[end] != ' ') ++end;
        if (end > pos) {
            std::string_view tok(buf.data() + pos, end - pos);
            if (tok != "rt" && tok != "cc") {
                if (!out.empty()) out.push_back(' ');
                out.append(tok);
            }
        }
        pos = end;
    }
    return out;
}

std::vector<std::string> split_ws(std::string_view cleaned) {
    std::vector<std::string> tokens;
    std::size_t pos = 0;
    while (pos < cleaned.size()) {
        while (pos < cleaned.size() && cleaned[pos] == ' ') ++pos;
        std::size_t end = pos;
        while (end < cleaned.size() && cleaned[end] != ' ') ++end;
        if (end > pos) tokens.emplace_back(cleaned.substr(pos, end - pos));
        pos = end;
    }
    return tokens;
}

Stopwords Stopwords::load(const std::string& path) {
    return from_words(load_word_file(path, "stopword"));
}

Stopwords Stopwords::from_words(std::vector<std::string> words) {
    Stopwords sw;
    sw.words_.insert(words.begin(), words.end());
    return sw;
}

SegmentLexicon SegmentLexicon::load(const std::string& path) {
    return from_words(load_word_file(path, "segmentation wordlist"));
}

SegmentLexicon SegmentLexicon::from_words(const std::vector<std::string>& words) {
    SegmentLexicon lex;
    for (const auto& w : words) {
        lex.words_.insert(w);
        lex.max_len_ = std::max(lex.max_len_, w.size());
    }
    return lex;
}

std::vector<std::string> SegmentLexicon::segment(const std::string& tag) const {
    // Camel-case boundaries split first (lower-to-upper transitions).
    std::vector<std::string> runs;
    std::string current;
    for (std::size_t i = 0; i < tag.size(); ++i) {
        const unsigned char c = static_cast<unsigned char>(tag[i]);
        if (std::isupper(c) && i > 0 && std::islower(static_cast<unsigned char>(tag[i - 1])) &&
            !current.empty())
        {
            runs.push_back(current);
            current.clear();
        }
        current.push_back(static_cast<char>(std::tolower(c)));
    }
    if (!current.empty()) runs.push_back(current);

    std::vector<std::string> out;
    for (const auto& run : runs) {
        if (run.size() <= 2 || words_.count(run)) {
            out.push_back(run);
            continue;
        }
        // Greedy longest-match; contiguous unmatched characters collect
        // into one residue token.
        std::string residue;
        std::size_t pos = 0;
        while (pos < run.size()) {
            std::size_t best = 0;
            const std::size_t limit = std::min(max_len_, run.size() - pos);
            for (std::size_t len = limit; len >= 2; --len) {
                if (words_.count(run.substr(pos, len))) {
                    best = len;
                    break;
                }
            }
            if (best > 0) {
                if (!residue.empty()) {
                    out.push_back(residue);
                    residue.clear();
                }
                out.push_back(run.substr(pos, best));
                pos += best;
            } else {
                residue.push_back(run[pos]);
                ++pos;
            }
        }
        if (!residue.empty()) out.push_back(residue);
    }
    return out;
}

TextPipeline::TextPipeline(Stopwords stopwords, SegmentLexicon segmenter, PipelineOptions options)
    : stopwords_(std::move(stopwords)), segmenter_(std::move(segmenter)), options_(std::move(options)) {}

TextPipeline TextPipeline::from_data_dir(const std::string& data_dir, PipelineOptions options) {
    return TextPipeline(Stopwords::load(data_dir + "/stopwords_en.txt"),
                        SegmentLexicon::load(data_dir + "/segment_words.txt"), std::move(options));
}

std::vector<std::string> TextPipeline::stem_filter(const std::vector<std::string>& surface) const {
    std::vector<std::string> out;
    out.reserve(surface.size());
    for (const auto& tok : surface) {
        if (tok.empty() || stopwords_.contains(tok)) continue;
        std::string base = tok;
        if (auto it = options_.lemma_overrides.find(base); it != options_.lemma_overrides.end())
            base = it->second;
        std::string stemmed = porter_stem_fixed(base);
        // A stem can land on a stopword or a marker ("doing" -> "do"); drop
        // it so the output is stable under re-tokenization.
        if (stemmed.empty() || stopwords_.contains(stemmed) || stemmed == "rt" || stemmed == "cc")
            continue;
        out.push_back(std::move(stemmed));
    }
    return out;
}

TokenSequence TextPipeline::tokenize(std::string_view raw_text) const {
    TokenSequence seq;
    seq.tokens = stem_filter(split_ws(clean(raw_text)));
    if (seq.tokens.size() > options_.max_tokens) {
        seq.tokens.resize(options_.max_tokens);
        seq.truncated = true;
    }
    return seq;
}

TokenSequence TextPipeline::tokenize_record(const TweetRecord& record, bool include_hashtags) const {
    TokenSequence seq = tokenize(record.text);
    if (include_hashtags && !seq.truncated) {
        for (const auto& tag : record.hashtags) {
            auto parts = stem_filter(segmenter_.segment(tag));
            for (auto& p : parts) seq.tokens.push_back(std::move(p));
        }
        if (seq.tokens.size() > options_.max_tokens) {
            seq.tokens.resize(options_.max_tokens);
            seq.truncated = true;
        }
    }
    return seq;
}

std::vector<std::string> TextPipeline::sentiment_tokens(const TweetRecord& record) const {
    return split_ws(clean(record.text));
}

std::vector<std::string> TextPipeline::topic_tokens(
    const TweetRecord& record, const std::unordered_set<std::string>& excluded_hashtags) const {
    std::vector<std::string> out;
    for (const auto& tok : split_ws(clean(record.text)))
        if (!stopwords_.contains(tok)) out.push_back(tok);
    for (const auto& tag : record.hashtags) {
        if (excluded_hashtags.count(tag)) continue;
        for (const auto& part : segmenter_.segment(tag))
            if (!stopwords_.contains(part)) out.push_back(part);
    }
    return out;
}

}  // namespace climstance::text
