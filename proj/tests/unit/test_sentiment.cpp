#include <doctest.h>

#include <array>
#include <cmath>

#include "climstance/sentiment/scorers.hpp"
#include "test_util.hpp"

using namespace climstance;
using namespace climstance::sentiment;

namespace {

const ValenceLexicon& valence() {
    static const ValenceLexicon lex = ValenceLexicon::load(testutil::data_dir());
    return lex;
}

const Ensemble& ensemble() {
    static const Ensemble e = Ensemble::from_data_dir(testutil::data_dir());
    return e;
}

}  // namespace

TEST_CASE("valence scorer normalization") {
    CHECK(score_lexicon({}, valence()) == 0.0);
    // valence(great) = +3 -> 3 / sqrt(9 + 15)
    CHECK(score_lexicon({"great"}, valence()) ==
          doctest::Approx(3.0 / std::sqrt(24.0)).epsilon(1e-12));
    CHECK(score_lexicon({"not", "great"}, valence()) ==
          doctest::Approx(-3.0 / std::sqrt(24.0)).epsilon(1e-12));
}

TEST_CASE("negation window reaches three tokens back") {
    const double base = score_lexicon({"great"}, valence());
    CHECK(score_lexicon({"not", "at", "all", "great"}, valence()) == doctest::Approx(-base));
    // Four tokens back is outside the window.
    CHECK(score_lexicon({"not", "x", "y", "z", "great"}, valence()) == doctest::Approx(base));
}

TEST_CASE("booster scaling") {
    const double plain = score_lexicon({"great"}, valence());
    const double boosted = score_lexicon({"very", "great"}, valence());
    CHECK(boosted > plain);
    // very = 1.3 -> s = 3.9
    CHECK(boosted == doctest::Approx(3.9 / std::sqrt(3.9 * 3.9 + 15.0)).epsilon(1e-12));
}

TEST_CASE("valence scorer stays in [-1, 1]") {
    std::vector<std::string> many(200, "great");
    CHECK(score_lexicon(many, valence()) < 1.0);
    CHECK(score_lexicon(many, valence()) > 0.99);
    std::vector<std::string> awful(200, "terrible");
    CHECK(score_lexicon(awful, valence()) > -1.0);
    CHECK(score_lexicon(awful, valence()) < -0.99);
}

TEST_CASE("thresholding") {
    CHECK(to_label(0.612) == Sentiment::Positive);
    CHECK(to_label(0.0) == Sentiment::Neutral);
    CHECK(to_label(-0.06) == Sentiment::Negative);
    CHECK(to_label(0.05) == Sentiment::Positive);   // boundary inclusive
    CHECK(to_label(-0.05) == Sentiment::Negative);  // boundary inclusive
    CHECK(to_label(0.049) == Sentiment::Neutral);
}

TEST_CASE("majority vote: full truth table") {
    const std::array<Sentiment, 3> all = {Sentiment::Negative, Sentiment::Neutral,
                                          Sentiment::Positive};
    for (Sentiment a : all)
        for (Sentiment b : all)
            for (Sentiment c : all) {
                const Sentiment got = majority_vote({a, b, c});
                int counts[3] = {0, 0, 0};
                ++counts[static_cast<int>(a)];
                ++counts[static_cast<int>(b)];
                ++counts[static_cast<int>(c)];
                if (counts[0] >= 2)
                    CHECK(got == Sentiment::Negative);
                else if (counts[1] >= 2)
                    CHECK(got == Sentiment::Neutral);
                else if (counts[2] >= 2)
                    CHECK(got == Sentiment::Positive);
                else
                    CHECK(got == Sentiment::Neutral);  // three-way tie
            }
    CHECK(majority_vote({Sentiment::Positive, Sentiment::Positive, Sentiment::Negative}) ==
          Sentiment::Positive);
    CHECK(majority_vote({Sentiment::Negative, Sentiment::Negative, Sentiment::Negative}) ==
          Sentiment::Negative);
    CHECK(majority_vote({Sentiment::Positive, Sentiment::Negative, Sentiment::Neutral}) ==
          Sentiment::Neutral);
}

TEST_CASE("majority vote is permutation invariant") {
    const std::array<Sentiment, 3> all = {Sentiment::Negative, Sentiment::Neutral,
                                          Sentiment::Positive};
    for (Sentiment a : all)
        for (Sentiment b : all)
            for (Sentiment c : all) {
                const Sentiment ref = majority_vote({a, b, c});
                CHECK(majority_vote({a, c, b}) == ref);
                CHECK(majority_vote({b, a, c}) == ref);
                CHECK(majority_vote({b, c, a}) == ref);
                CHECK(majority_vote({c, a, b}) == ref);
                CHECK(majority_vote({c, b, a}) == ref);
            }
}

TEST_CASE("tokens without lexicon entries score neutral") {
    const auto vote = ensemble().annotate({"qqq", "zzz", "the", "of"});
    CHECK(vote.final == Sentiment::Neutral);
    for (Sentiment s : vote.scorer_labels) CHECK(s == Sentiment::Neutral);
}

TEST_CASE("ensemble agrees on clear polarity") {
    const auto pos = ensemble().annotate({"this", "is", "great", "love", "it"});
    CHECK(pos.final == Sentiment::Positive);
    const auto neg = ensemble().annotate({"what", "a", "terrible", "scam"});
    CHECK(neg.final == Sentiment::Negative);
}
