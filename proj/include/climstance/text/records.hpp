#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace climstance::text {

enum class Stance { Denier, Believer };
enum class Sentiment { Negative, Neutral, Positive };

std::string to_string(Stance s);
std::string to_string(Sentiment s);
Stance stance_from_string(const std::string& s);
Sentiment sentiment_from_string(const std::string& s);

// One corpus row. Unknown JSON fields are kept in `extra` and written back
// verbatim so external annotations survive a round-trip.
struct TweetRecord {
    std::string id;
    std::string text;
    std::vector<std::string> hashtags;  // lowercase, no leading '#'
    std::optional<Stance> stance_label;
    std::optional<Sentiment> sentiment_label;
    std::optional<bool> sarcasm_label;  // stored, never trained on

    // Annotation by-products.
    std::optional<double> stance_score;
    std::optional<std::array<Sentiment, 3>> sentiment_votes;

    nlohmann::ordered_json extra = nlohmann::ordered_json::object();
};

TweetRecord record_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json record_to_json(const TweetRecord& r);

// JSON-lines corpus I/O, one record per line, UTF-8. Duplicate ids and
// malformed lines raise DataError with the offending line number.
std::vector<TweetRecord> read_jsonl(const std::string& path);
void write_jsonl(const std::string& path, const std::vector<TweetRecord>& records);

}  // namespace climstance::text
