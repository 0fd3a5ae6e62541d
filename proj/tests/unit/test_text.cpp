#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "climstance/common/error.hpp"
#include "climstance/text/pipeline.hpp"
#include "climstance/text/porter.hpp"
#include "climstance/text/records.hpp"
#include "test_util.hpp"

using namespace climstance;
using namespace climstance::text;

namespace {

TextPipeline make_pipeline(std::size_t max_tokens = 64) {
    PipelineOptions opts;
    opts.max_tokens = max_tokens;
    return TextPipeline::from_data_dir(testutil::data_dir(), opts);
}

std::string join(const std::vector<std::string>& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out.push_back(' ');
        out += t;
    }
    return out;
}

}  // namespace

TEST_CASE("clean removes mentions, urls, punctuation and markers") {
    CHECK(clean("RT @bob Check https://t.co/x CLIMATE!!") == "check climate");
    CHECK(clean("") == "");
    CHECK(clean("CC: global WARMING\xE2\x80\xA6") == "global warming");
    CHECK(clean("   lots    of   space   ") == "lots of space");
    CHECK(clean("@only_mention") == "");
    CHECK(clean("see www.example.org/page?a=1 now") == "see now");
}

TEST_CASE("clean is idempotent") {
    std::mt19937_64 rng(5);
    const std::vector<std::string> samples = {
        "RT @x Hello!! https://a.b/c #Tag",  "plain text",   "CC cc RT rt",
        "MiXeD CaSe @@@ ///",                "123 numbers!", "unicode \xC3\xA9\xC3\xA0 txt",
    };
    for (const auto& s : samples) CHECK(clean(clean(s)) == clean(s));
}

TEST_CASE("porter stemmer canonical vectors") {
    // Worked examples from the algorithm's published definition.
    const std::vector<std::pair<std::string, std::string>> vectors = {
        {"caresses", "caress"}, {"ponies", "poni"},     {"ties", "ti"},
        {"caress", "caress"},   {"cats", "cat"},        {"feed", "feed"},
        {"agreed", "agre"},     {"plastered", "plaster"}, {"bled", "bled"},
        {"motoring", "motor"},  {"sing", "sing"},       {"conflated", "conflat"},
        {"troubled", "troubl"}, {"sized", "size"},      {"hopping", "hop"},
        {"tanned", "tan"},      {"falling", "fall"},    {"hissing", "hiss"},
        {"fizzed", "fizz"},     {"failing", "fail"},    {"filing", "file"},
        {"happy", "happi"},     {"sky", "sky"},         {"relational", "relat"},
        {"conditional", "condit"}, {"rational", "ration"}, {"valenci", "valenc"},
        {"hesitanci", "hesit"}, {"digitizer", "digit"}, {"operator", "oper"},
        {"feudalism", "feudal"}, {"decisiveness", "decis"}, {"hopefulness", "hope"},
        {"callousness", "callous"}, {"formaliti", "formal"}, {"sensitiviti", "sensit"},
        {"sensibiliti", "sensibl"}, {"triplicate", "triplic"}, {"formative", "form"},
        {"formalize", "formal"}, {"electriciti", "electr"}, {"electrical", "electr"},
        {"hopeful", "hope"},    {"goodness", "good"},   {"revival", "reviv"},
        {"allowance", "allow"}, {"inference", "infer"}, {"airliner", "airlin"},
        {"gyroscopic", "gyroscop"}, {"adjustable", "adjust"}, {"defensible", "defens"},
        {"irritant", "irrit"},  {"replacement", "replac"}, {"adjustment", "adjust"},
        {"dependent", "depend"}, {"adoption", "adopt"},  {"communism", "commun"},
        {"activate", "activ"},  {"angulariti", "angular"}, {"effective", "effect"},
        {"bowdlerize", "bowdler"}, {"probate", "probat"}, {"rate", "rate"},
        {"cease", "ceas"},      {"controll", "control"}, {"roll", "roll"},
    };
    for (const auto& [word, stem] : vectors) CHECK(porter_stem(word) == stem);
}

TEST_CASE("fixed-point stemming is stable under re-application") {
    // One pass is not: "agreed" -> "agre" -> "agr".
    CHECK(porter_stem("agreed") == "agre");
    CHECK(porter_stem("agre") == "agr");
    CHECK(porter_stem_fixed("agreed") == "agr");
    CHECK(porter_stem_fixed(porter_stem_fixed("agreed")) == porter_stem_fixed("agreed"));
}

TEST_CASE("tokenize applies stopword removal and stemming") {
    auto pipeline = make_pipeline();
    CHECK(pipeline.tokenize("the planet is greening").tokens ==
          std::vector<std::string>{"planet", "green"});
    CHECK(pipeline.tokenize("warming warmed warms").tokens ==
          std::vector<std::string>{"warm", "warm", "warm"});
    CHECK(pipeline.tokenize("").tokens.empty());
}

TEST_CASE("tokenize output never contains stopwords or markers") {
    auto pipeline = make_pipeline();
    const auto seq = pipeline.tokenize("RT the doing rts is not a was https://x.y cc @m climate");
    for (const auto& tok : seq.tokens) {
        CHECK_FALSE(pipeline.stopwords().contains(tok));
        CHECK(tok != "rt");
        CHECK(tok != "cc");
        CHECK(tok.find('@') == std::string::npos);
        CHECK(tok.find('/') == std::string::npos);
    }
}

TEST_CASE("tokenize is idempotent and deterministic") {
    auto pipeline = make_pipeline();
    std::mt19937_64 rng(17);
    const std::vector<std::string> words = {
        "agreed",  "doing",    "climate", "warming", "hoax",     "greening", "ponies",
        "running", "clouds",   "ties",    "rts",     "is",       "the",      "believers",
        "very",    "failing",  "sized",   "relational", "electrical", "activate", "xyzzy",
    };
    std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
    std::uniform_int_distribution<int> len(0, 12);
    for (int rep = 0; rep < 200; ++rep) {
        std::string text;
        const int n = len(rng);
        for (int i = 0; i < n; ++i) {
            if (!text.empty()) text.push_back(' ');
            text += words[pick(rng)];
        }
        const auto once = pipeline.tokenize(text);
        const auto twice = pipeline.tokenize(join(once.tokens));
        CHECK(twice.tokens == once.tokens);
        CHECK(pipeline.tokenize(text).tokens == once.tokens);  // determinism
    }
}

TEST_CASE("tokenize truncates at the configured maximum") {
    auto pipeline = make_pipeline(3);
    std::string text;
    for (int i = 0; i < 10; ++i) text += "planet" + std::to_string(i) + " ";
    const auto seq = pipeline.tokenize(text);
    CHECK(seq.tokens.size() == 3);
    CHECK(seq.truncated);
    CHECK_FALSE(pipeline.tokenize("planet").truncated);
}

TEST_CASE("hashtag segmentation") {
    auto pipeline = make_pipeline();
    const auto& seg = pipeline.segmenter();
    CHECK(seg.segment("ClimateChangeIsReal") ==
          std::vector<std::string>{"climate", "change", "is", "real"});
    CHECK(seg.segment("GlobalWarmingHoax") == std::vector<std::string>{"global", "warming", "hoax"});
    CHECK(seg.segment("xyzqq") == std::vector<std::string>{"xyzqq"});
    CHECK(seg.segment("climatechangeisreal") ==
          std::vector<std::string>{"climate", "change", "is", "real"});
    CHECK(seg.segment("actonclimate") == std::vector<std::string>{"act", "on", "climate"});
    // Unsegmentable residue stays a single token next to matches.
    CHECK(seg.segment("zzclimate") == std::vector<std::string>{"zz", "climate"});
}

TEST_CASE("tokenize_record appends stemmed hashtag segments") {
    auto pipeline = make_pipeline();
    TweetRecord r;
    r.id = "1";
    r.text = "the planet is greening";
    r.hashtags = {"climatechangeisreal"};
    const auto with = pipeline.tokenize_record(r, true);
    CHECK(with.tokens == std::vector<std::string>{"planet", "green", "climat", "chang", "real"});
    const auto without = pipeline.tokenize_record(r, false);
    CHECK(without.tokens == std::vector<std::string>{"planet", "green"});
}

TEST_CASE("sentiment tokens keep stopwords and skip stemming") {
    auto pipeline = make_pipeline();
    TweetRecord r;
    r.id = "1";
    r.text = "This is NOT great!!";
    CHECK(pipeline.sentiment_tokens(r) == std::vector<std::string>{"this", "is", "not", "great"});
}

TEST_CASE("jsonl round-trip preserves unknown fields") {
    const std::string path = "test_roundtrip.jsonl";
    {
        std::ofstream out(path);
        out << R"({"id":"a1","text":"Hello","hashtags":["ClimateHoax"],"custom_field":{"x":1},"weird":[1,2,3]})"
            << "\n";
        out << R"({"id":"a2","text":"Hi","hashtags":[],"stance_label":"denier","sentiment_label":"negative","sarcasm_label":true})"
            << "\n";
    }
    auto records = read_jsonl(path);
    REQUIRE(records.size() == 2);
    CHECK(records[0].hashtags == std::vector<std::string>{"climatehoax"});  // lowercased
    CHECK(records[0].extra.contains("custom_field"));
    CHECK(records[1].stance_label == Stance::Denier);
    CHECK(records[1].sentiment_label == Sentiment::Negative);
    CHECK(records[1].sarcasm_label == true);

    const std::string path2 = "test_roundtrip2.jsonl";
    write_jsonl(path2, records);
    auto again = read_jsonl(path2);
    CHECK(record_to_json(again[0]) == record_to_json(records[0]));
    CHECK(record_to_json(again[1]) == record_to_json(records[1]));
    // Stable serialization: a second round-trip is byte-identical.
    const std::string path3 = "test_roundtrip3.jsonl";
    write_jsonl(path3, again);
    std::ifstream f2(path2), f3(path3);
    std::stringstream s2, s3;
    s2 << f2.rdbuf();
    s3 << f3.rdbuf();
    CHECK(s2.str() == s3.str());
    std::remove(path.c_str());
    std::remove(path2.c_str());
    std::remove(path3.c_str());
}

TEST_CASE("jsonl errors carry line numbers") {
    const std::string path = "test_bad.jsonl";
    {
        std::ofstream out(path);
        out << R"({"id":"a1","text":"x"})" << "\n";
        out << "{not json}\n";
    }
    CHECK_THROWS_WITH_AS(read_jsonl(path), doctest::Contains(":2"), DataError);
    {
        std::ofstream out(path);
        out << R"({"id":"dup","text":"x"})" << "\n" << R"({"id":"dup","text":"y"})" << "\n";
    }
    CHECK_THROWS_WITH_AS(read_jsonl(path), doctest::Contains("duplicate"), DataError);
    {
        std::ofstream out(path);
        out << R"({"text":"no id"})" << "\n";
    }
    CHECK_THROWS_AS(read_jsonl(path), DataError);
    std::remove(path.c_str());
}
