#include "climstance/text/records.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <unordered_set>

#include "climstance/common/error.hpp"

namespace climstance::text {

namespace {

std::string lower_ascii(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

const std::unordered_set<std::string>& known_fields() {
    static const std::unordered_set<std::string> fields = {
        "id",           "text",         "hashtags",        "stance_label",
        "sentiment_label", "sarcasm_label", "stance_score", "sentiment_votes"};
    return fields;
}

}  // namespace

std::string to_string(Stance s) { return s == Stance::Denier ? "denier" : "believer"; }

std::string to_string(Sentiment s) {
    switch (s) {
        case Sentiment::Negative: return "negative";
        case Sentiment::Neutral: return "neutral";
        case Sentiment::Positive: return "positive";
    }
    return "neutral";
}

Stance stance_from_string(const std::string& s) {
    if (s == "denier") return Stance::Denier;
    if (s == "believer") return Stance::Believer;
    throw DataError("unknown stance label: " + s);
}

Sentiment sentiment_from_string(const std::string& s) {
    if (s == "negative") return Sentiment::Negative;
    if (s == "neutral") return Sentiment::Neutral;
    if (s == "positive") return Sentiment::Positive;
    throw DataError("unknown sentiment label: " + s);
}

TweetRecord record_from_json(const nlohmann::ordered_json& j) {
    if (!j.is_object()) throw DataError("corpus row is not a JSON object");
    TweetRecord r;
    if (!j.contains("id") || !j["id"].is_string()) throw DataError("corpus row is missing string id");
    r.id = j["id"].get<std::string>();
    if (j.contains("text")) {
        if (!j["text"].is_string()) throw DataError("text of record " + r.id + " is not a string");
        r.text = j["text"].get<std::string>();
    }
    if (j.contains("hashtags")) {
        if (!j["hashtags"].is_array()) throw DataError("hashtags of record " + r.id + " is not an array");
        for (const auto& h : j["hashtags"]) {
            if (!h.is_string()) throw DataError("hashtag of record " + r.id + " is not a string");
            r.hashtags.push_back(lower_ascii(h.get<std::string>()));
        }
    }
    if (j.contains("stance_label") && !j["stance_label"].is_null())
        r.stance_label = stance_from_string(j["stance_label"].get<std::string>());
    if (j.contains("sentiment_label") && !j["sentiment_label"].is_null())
        r.sentiment_label = sentiment_from_string(j["sentiment_label"].get<std::string>());
    if (j.contains("sarcasm_label") && !j["sarcasm_label"].is_null())
        r.sarcasm_label = j["sarcasm_label"].get<bool>();
    if (j.contains("stance_score") && !j["stance_score"].is_null())
        r.stance_score = j["stance_score"].get<double>();
    if (j.contains("sentiment_votes") && !j["sentiment_votes"].is_null()) {
        const auto& votes = j["sentiment_votes"];
        if (!votes.is_array() || votes.size() != 3)
            throw DataError("sentiment_votes of record " + r.id + " must hold three labels");
        std::array<Sentiment, 3> arr{};
        for (std::size_t i = 0; i < 3; ++i) arr[i] = sentiment_from_string(votes[i].get<std::string>());
        r.sentiment_votes = arr;
    }
    for (auto it = j.begin(); it != j.end(); ++it)
        if (known_fields().count(it.key()) == 0) r.extra[it.key()] = it.value();
    return r;
}

nlohmann::ordered_json record_to_json(const TweetRecord& r) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["text"] = r.text;
    j["hashtags"] = r.hashtags;
    if (r.stance_label) j["stance_label"] = to_string(*r.stance_label);
    if (r.sentiment_label) j["sentiment_label"] = to_string(*r.sentiment_label);
    if (r.sarcasm_label) j["sarcasm_label"] = *r.sarcasm_label;
    if (r.stance_score) j["stance_score"] = *r.stance_score;
    if (r.sentiment_votes) {
        nlohmann::ordered_json votes = nlohmann::ordered_json::array();
        for (const auto& v : *r.sentiment_votes) votes.push_back(to_string(v));
        j["sentiment_votes"] = votes;
    }
    for (auto it = r.extra.begin(); it != r.extra.end(); ++it) j[it.key()] = it.value();
    return j;
}

std::vector<TweetRecord> read_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open corpus file: " + path);
    std::vector<TweetRecord> records;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::ordered_json j;
        try {
            j = nlohmann::ordered_json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw DataError(path + ":" + std::to_string(line_no) + ": invalid JSON: " + e.what());
        }
        try {
            records.push_back(record_from_json(j));
        } catch (const DataError& e) {
            throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (!seen.insert(records.back().id).second)
            throw DataError(path + ":" + std::to_string(line_no) + ": duplicate id " + records.back().id);
    }
    return records;
}

void write_jsonl(const std::string& path, const std::vector<TweetRecord>& records) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write corpus file: " + path);
    for (const auto& r : records) out << record_to_json(r).dump() << "\n";
}

}  // namespace climstance::text
