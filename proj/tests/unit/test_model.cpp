#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "climstance/common/error.hpp"
#include "climstance/model/attention.hpp"
#include "climstance/model/checkpoint.hpp"
#include "climstance/model/embedding.hpp"
#include "climstance/model/encoder.hpp"
#include "climstance/model/model.hpp"
#include "test_util.hpp"

using namespace climstance;
namespace t = climstance::tensor;
namespace m = climstance::model;

namespace {

m::AttentionTriplet random_triplet(std::size_t in_dim, std::size_t attn_dim, std::mt19937_64& rng,
                                   oracle::Mat* wq = nullptr, oracle::Vec* bq = nullptr,
                                   oracle::Mat* wk = nullptr, oracle::Vec* bk = nullptr,
                                   oracle::Mat* wv = nullptr, oracle::Vec* bv = nullptr) {
    auto mq = testutil::random_mat(in_dim, attn_dim, rng);
    auto mk = testutil::random_mat(in_dim, attn_dim, rng);
    auto mv = testutil::random_mat(in_dim, attn_dim, rng);
    auto vq = testutil::random_mat(1, attn_dim, rng);
    auto vk = testutil::random_mat(1, attn_dim, rng);
    auto vv = testutil::random_mat(1, attn_dim, rng);
    if (wq) *wq = mq;
    if (bq) *bq = vq[0];
    if (wk) *wk = mk;
    if (bk) *bk = vk[0];
    if (wv) *wv = mv;
    if (bv) *bv = vv[0];
    m::AttentionTriplet tr;
    tr.Wq = testutil::to_array(mq);
    tr.bq = testutil::to_array(vq);
    tr.Wk = testutil::to_array(mk);
    tr.bk = testutil::to_array(vk);
    tr.Wv = testutil::to_array(mv);
    tr.bv = testutil::to_array(vv);
    return tr;
}

std::vector<t::Array> const_rows(const oracle::Mat& rows) {
    std::vector<t::Array> out;
    for (const auto& r : rows) out.push_back(testutil::to_array({r}));
    return out;
}

m::Model tiny_model(m::Variant variant, m::Features features, std::uint64_t seed,
                    bool shared_loss = true) {
    m::ModelConfig cfg;
    cfg.variant = variant;
    cfg.features = features;
    cfg.lstm_units = 3;
    cfg.attn_dim = 4;
    cfg.shared_dim = 4;
    cfg.shared_loss = shared_loss;
    auto provider = m::EmbeddingProvider::trainable(
        {"climate", "hoax", "real", "science", "warm", "act"}, 5, seed);
    return m::Model(cfg, std::move(provider), seed + 1);
}

}  // namespace

TEST_CASE("trainable embeddings slice table rows and train") {
    auto provider = m::EmbeddingProvider::trainable({"alpha", "beta"}, 4, 9);
    t::Tape tape;
    auto rows = provider.embed(tape, {"alpha", "unknown", "beta"});
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].cols() == 4);
    // Unknown token hits the shared UNK (last) row.
    for (std::size_t j = 0; j < 4; ++j)
        CHECK(rows[1].at(0, j) == provider.table().at(2, j));
    // Gradients reach the table.
    t::Array loss = t::sum_all(tape, rows[0]);
    tape.backward(loss);
    for (std::size_t j = 0; j < 4; ++j) CHECK(provider.table().grads()[j] == 1.0);
}

TEST_CASE("file embeddings are frozen and validated") {
    const std::string path = "emb_test.txt";
    {
        std::ofstream out(path);
        out << "climate 0.5 -1.0 2.0\n";
        out << "hoax 1.0 1.0 1.0\n";
    }
    auto provider = m::EmbeddingProvider::from_file(path);
    CHECK(provider.dim() == 3);
    CHECK_FALSE(provider.is_trainable());
    t::Tape tape;
    auto rows = provider.embed(tape, {"climate", "nope"});
    CHECK(rows[0].at(0, 1) == -1.0);
    CHECK(rows[1].at(0, 0) == 0.0);  // UNK = zero vector
    CHECK_FALSE(rows[0].requires_grad());
    {
        std::ofstream out(path);
        out << "climate 0.5\nhoax 1.0 2.0\n";  // inconsistent width
    }
    CHECK_THROWS_AS(m::EmbeddingProvider::from_file(path), DataError);
    std::remove(path.c_str());
}

TEST_CASE("bi-lstm encode shapes") {
    std::mt19937_64 rng(3);
    m::ParamStore store;
    auto enc = m::make_encoder(store, "enc", 8, 100, rng);
    t::Tape tape;
    auto h7 = m::encode(tape, const_rows(testutil::random_mat(7, 8, rng)), enc);
    CHECK(h7.rows() == 7);
    CHECK(h7.cols() == 200);
    auto h1 = m::encode(tape, const_rows(testutil::random_mat(1, 8, rng)), enc);
    CHECK(h1.rows() == 1);
    CHECK(h1.cols() == 200);
}

TEST_CASE("zero parameters and zero embeddings encode to zero") {
    std::mt19937_64 rng(4);
    m::ParamStore store;
    auto enc = m::make_encoder(store, "enc", 3, 2, rng);
    for (auto& p : store.arrays())
        for (double& v : p.values()) v = 0.0;
    t::Tape tape;
    auto h = m::encode(tape, const_rows(oracle::Mat(4, oracle::Vec(3, 0.0))), enc);
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = 0; j < h.cols(); ++j) CHECK(h.at(i, j) == 0.0);
}

TEST_CASE("self attention: single key, identical rows, oracle") {
    std::mt19937_64 rng(5);
    {
        oracle::Mat wq, wk, wv;
        oracle::Vec bq, bk, bv;
        auto tr = random_triplet(4, 3, rng, &wq, &bq, &wk, &bk, &wv, &bv);
        auto hm = testutil::random_mat(1, 4, rng);
        t::Tape tape;
        t::Array out = m::self_attention(tape, testutil::to_array(hm), tr);
        const auto v = oracle::dense(hm, wv, bv);  // single key: softmax == 1
        CHECK(testutil::max_abs_diff(v, out) < 1e-12);
    }
    {
        auto tr = random_triplet(4, 3, rng);
        oracle::Mat hm(5, oracle::Vec(4, 0.0));
        auto row0 = testutil::random_mat(1, 4, rng)[0];
        for (auto& r : hm) r = row0;  // identical rows in, identical rows out
        t::Tape tape;
        t::Array out = m::self_attention(tape, testutil::to_array(hm), tr);
        for (std::size_t i = 1; i < out.rows(); ++i)
            for (std::size_t j = 0; j < out.cols(); ++j)
                CHECK(out.at(i, j) == doctest::Approx(out.at(0, j)).epsilon(1e-12));
    }
    for (int rep = 0; rep < 5; ++rep) {
        oracle::Mat wq, wk, wv;
        oracle::Vec bq, bk, bv;
        auto tr = random_triplet(4, 2, rng, &wq, &bq, &wk, &bk, &wv, &bv);
        auto hm = testutil::random_mat(3, 4, rng);
        t::Tape tape;
        t::Array weights;
        t::Array out = m::self_attention(tape, testutil::to_array(hm), tr, &weights);
        const auto ref = oracle::self_attention(hm, wq, bq, wk, bk, wv, bv);
        CHECK(testutil::max_abs_diff(ref, out) < 1e-10);
        for (std::size_t i = 0; i < weights.rows(); ++i) {
            double sum = 0.0;
            for (std::size_t j = 0; j < weights.cols(); ++j) sum += weights.at(i, j);
            CHECK(std::abs(sum - 1.0) <= 1e-9);
        }
    }
}

TEST_CASE("inter attention: shapes, single-row value side, oracle") {
    std::mt19937_64 rng(6);
    {
        auto ta = random_triplet(4, 5, rng);
        auto tb = random_triplet(4, 5, rng);
        auto ha = testutil::random_mat(7, 4, rng);
        auto hb = testutil::random_mat(12, 4, rng);
        t::Tape tape;
        auto ia_tu = m::inter_attention(tape, testutil::to_array(ha), testutil::to_array(hb), ta, tb);
        auto ia_ut = m::inter_attention(tape, testutil::to_array(hb), testutil::to_array(ha), tb, ta);
        CHECK(ia_tu.rows() == 7);
        CHECK(ia_tu.cols() == 5);
        CHECK(ia_ut.rows() == 12);
        CHECK(ia_ut.cols() == 5);
    }
    {
        oracle::Mat wq_a, wk_b, wv_b;
        oracle::Vec bq_a, bk_b, bv_b;
        auto ta = random_triplet(4, 3, rng, &wq_a, &bq_a);
        auto tb = random_triplet(4, 3, rng, nullptr, nullptr, &wk_b, &bk_b, &wv_b, &bv_b);
        auto ha = testutil::random_mat(5, 4, rng);
        auto hb = testutil::random_mat(1, 4, rng);  // single key/value row
        t::Tape tape;
        auto out = m::inter_attention(tape, testutil::to_array(ha), testutil::to_array(hb), ta, tb);
        const auto vb = oracle::dense(hb, wv_b, bv_b);
        for (std::size_t i = 0; i < out.rows(); ++i)
            for (std::size_t j = 0; j < out.cols(); ++j)
                CHECK(out.at(i, j) == doctest::Approx(vb[0][j]).epsilon(1e-12));
    }
    for (int rep = 0; rep < 5; ++rep) {
        oracle::Mat wq_a, wk_b, wv_b, wk_a, wv_a, wq_b;
        oracle::Vec bq_a, bk_b, bv_b, bk_a, bv_a, bq_b;
        auto ta = random_triplet(4, 2, rng, &wq_a, &bq_a, &wk_a, &bk_a, &wv_a, &bv_a);
        auto tb = random_triplet(4, 2, rng, &wq_b, &bq_b, &wk_b, &bk_b, &wv_b, &bv_b);
        auto ha = testutil::random_mat(3, 4, rng);
        auto hb = testutil::random_mat(4, 4, rng);
        t::Tape tape;
        auto out = m::inter_attention(tape, testutil::to_array(ha), testutil::to_array(hb), ta, tb);
        const auto ref = oracle::inter_attention(ha, hb, wq_a, bq_a, wk_b, bk_b, wv_b, bv_b);
        CHECK(testutil::max_abs_diff(ref, out) < 1e-10);
    }
}

TEST_CASE("feature specific attention concatenates along the sequence axis") {
    std::mt19937_64 rng(8);
    auto tt = random_triplet(4, 5, rng);
    auto tu = random_triplet(4, 5, rng);
    auto ht = testutil::to_array(testutil::random_mat(7, 4, rng));
    auto hu = testutil::to_array(testutil::random_mat(12, 4, rng));
    t::Tape tape;
    auto a = m::feature_specific_attention(tape, ht, &hu, tt, &tu);
    CHECK(a.rows() == 2 * 7 + 2 * 12);
    CHECK(a.cols() == 5);
    // Text-only mode degrades to self attention.
    auto a_text = m::feature_specific_attention(tape, ht, nullptr, tt, nullptr);
    CHECK(a_text.rows() == 7);

    // Zero value projections push the whole concatenation to zero.
    for (auto* w : {&tt.Wv, &tt.bv, &tu.Wv, &tu.bv})
        for (double& v : w->values()) v = 0.0;
    auto zero_a = m::feature_specific_attention(tape, ht, &hu, tt, &tu);
    for (std::size_t i = 0; i < zero_a.rows(); ++i)
        for (std::size_t j = 0; j < zero_a.cols(); ++j) CHECK(zero_a.at(i, j) == 0.0);
}

TEST_CASE("shared average") {
    std::mt19937_64 rng(9);
    auto ad = testutil::random_mat(6, 4, rng);
    auto as = testutil::random_mat(6, 4, rng);
    t::Tape tape;
    {
        auto avg = m::shared_average(tape, testutil::to_array(ad), testutil::to_array(ad));
        CHECK(testutil::max_abs_diff(ad, avg) < 1e-15);
    }
    {
        auto neg = oracle::scale(ad, -1.0);
        auto avg = m::shared_average(tape, testutil::to_array(ad), testutil::to_array(neg));
        for (std::size_t i = 0; i < avg.rows(); ++i)
            for (std::size_t j = 0; j < avg.cols(); ++j) CHECK(avg.at(i, j) == 0.0);
    }
    {
        auto avg = m::shared_average(tape, testutil::to_array(ad), testutil::to_array(as));
        CHECK(testutil::max_abs_diff(oracle::average(ad, as), avg) < 1e-12);
    }
}

TEST_CASE("gate cell: neutral weights, saturation, oracle") {
    std::mt19937_64 rng(10);
    auto a_task = testutil::random_mat(5, 3, rng);
    auto a_shared = testutil::random_mat(5, 3, rng);
    {
        m::GateParams gp{t::Array::zeros(3, 4), t::Array::zeros(1, 4)};
        t::Tape tape;
        t::Array gate;
        auto g = m::gate_cell(tape, testutil::to_array(a_task), testutil::to_array(a_shared), gp,
                              &gate);
        // W=0, b=0: gate is exactly 0.5 and the projected shared features are
        // zero, so G = 0.5 * 0.
        for (std::size_t i = 0; i < gate.rows(); ++i)
            for (std::size_t j = 0; j < gate.cols(); ++j) {
                CHECK(gate.at(i, j) == doctest::Approx(0.5));
                CHECK(g.at(i, j) == 0.0);
            }
    }
    {
        m::GateParams gp{t::Array::zeros(3, 2), t::Array::full(1, 2, -40.0)};
        t::Tape tape;
        auto g = m::gate_cell(tape, testutil::to_array(a_task), testutil::to_array(a_shared), gp);
        for (std::size_t i = 0; i < g.rows(); ++i)
            for (std::size_t j = 0; j < g.cols(); ++j) CHECK(std::abs(g.at(i, j)) < 1e-12);
    }
    for (int rep = 0; rep < 5; ++rep) {
        auto wm = testutil::random_mat(3, 4, rng);
        auto bm = testutil::random_mat(1, 4, rng);
        m::GateParams gp{testutil::to_array(wm), testutil::to_array(bm)};
        t::Tape tape;
        t::Array gate;
        auto g = m::gate_cell(tape, testutil::to_array(a_task), testutil::to_array(a_shared), gp,
                              &gate);
        CHECK(testutil::max_abs_diff(oracle::gate(a_shared, wm, bm[0]), g) < 1e-10);
        for (std::size_t i = 0; i < gate.rows(); ++i)
            for (std::size_t j = 0; j < gate.cols(); ++j) {
                CHECK(gate.at(i, j) > 0.0);
                CHECK(gate.at(i, j) < 1.0);
            }
    }
}

TEST_CASE("spia: single shared row, uniform attention, oracle") {
    std::mt19937_64 rng(11);
    {
        auto a_task = testutil::random_mat(4, 3, rng);
        auto a_shared = testutil::random_mat(1, 3, rng);
        auto wq = testutil::random_mat(3, 2, rng);
        auto bq = testutil::random_mat(1, 2, rng);
        auto wk = testutil::random_mat(3, 2, rng);
        auto bk = testutil::random_mat(1, 2, rng);
        auto wv = testutil::random_mat(3, 2, rng);
        auto bv = testutil::random_mat(1, 2, rng);
        m::TaskQuery q{testutil::to_array(wq), testutil::to_array(bq)};
        m::SharedKV kv{testutil::to_array(wk), testutil::to_array(bk), testutil::to_array(wv),
                       testutil::to_array(bv)};
        t::Tape tape;
        auto out = m::spia(tape, testutil::to_array(a_task), testutil::to_array(a_shared), q, kv);
        const auto v = oracle::dense(a_shared, wv, bv[0]);
        for (std::size_t i = 0; i < out.rows(); ++i)
            for (std::size_t j = 0; j < out.cols(); ++j)
                CHECK(out.at(i, j) == doctest::Approx(v[0][j]).epsilon(1e-12));
    }
    {
        // Zero query projection: uniform softmax, rows = mean of value rows.
        auto a_task = testutil::random_mat(3, 3, rng);
        auto a_shared = testutil::random_mat(6, 3, rng);
        auto wv = testutil::random_mat(3, 2, rng);
        auto bv = testutil::random_mat(1, 2, rng);
        m::TaskQuery q{t::Array::zeros(3, 2), t::Array::zeros(1, 2)};
        m::SharedKV kv{testutil::to_array(testutil::random_mat(3, 2, rng)),
                       testutil::to_array(testutil::random_mat(1, 2, rng)),
                       testutil::to_array(wv), testutil::to_array(bv)};
        t::Tape tape;
        auto out = m::spia(tape, testutil::to_array(a_task), testutil::to_array(a_shared), q, kv);
        const auto v_mean = oracle::mean_rows(oracle::dense(a_shared, wv, bv[0]));
        for (std::size_t i = 0; i < out.rows(); ++i)
            for (std::size_t j = 0; j < out.cols(); ++j)
                CHECK(out.at(i, j) == doctest::Approx(v_mean[j]).epsilon(1e-10));
    }
    for (int rep = 0; rep < 5; ++rep) {
        auto a_task = testutil::random_mat(4, 3, rng);
        auto a_shared = testutil::random_mat(4, 3, rng);
        auto wq = testutil::random_mat(3, 2, rng);
        auto bq = testutil::random_mat(1, 2, rng);
        auto wk = testutil::random_mat(3, 2, rng);
        auto bk = testutil::random_mat(1, 2, rng);
        auto wv = testutil::random_mat(3, 2, rng);
        auto bv = testutil::random_mat(1, 2, rng);
        m::TaskQuery q{testutil::to_array(wq), testutil::to_array(bq)};
        m::SharedKV kv{testutil::to_array(wk), testutil::to_array(bk), testutil::to_array(wv),
                       testutil::to_array(bv)};
        t::Tape tape;
        auto out = m::spia(tape, testutil::to_array(a_task), testutil::to_array(a_shared), q, kv);
        const auto ref =
            oracle::spia(a_task, a_shared, wq, bq[0], wk, bk[0], wv, bv[0]);
        CHECK(testutil::max_abs_diff(ref, out) < 1e-10);
    }
}

TEST_CASE("fusion: difference block, bias rows, oracle, range") {
    std::mt19937_64 rng(12);
    const std::size_t ds = 3;
    {
        // W reads only the G - SPIA block; G == SPIA makes F = tanh(b) = 0.
        oracle::Mat w(4 * ds, oracle::Vec(ds, 0.0));
        for (std::size_t i = 0; i < ds; ++i) w[2 * ds + i][i] = 1.0;
        auto g = testutil::random_mat(5, ds, rng);
        m::FusionParams fp{testutil::to_array(w), t::Array::zeros(1, ds)};
        t::Tape tape;
        auto f = m::fuse(tape, testutil::to_array(g), testutil::to_array(g), fp);
        for (std::size_t i = 0; i < f.rows(); ++i)
            for (std::size_t j = 0; j < f.cols(); ++j) CHECK(f.at(i, j) == 0.0);
    }
    {
        auto bm = testutil::random_mat(1, ds, rng);
        m::FusionParams fp{t::Array::zeros(4 * ds, ds), testutil::to_array(bm)};
        auto g = testutil::random_mat(2, ds, rng);
        auto s = testutil::random_mat(2, ds, rng);
        t::Tape tape;
        auto f = m::fuse(tape, testutil::to_array(g), testutil::to_array(s), fp);
        for (std::size_t i = 0; i < f.rows(); ++i)
            for (std::size_t j = 0; j < f.cols(); ++j)
                CHECK(f.at(i, j) == doctest::Approx(std::tanh(bm[0][j])).epsilon(1e-12));
    }
    for (int rep = 0; rep < 5; ++rep) {
        auto wm = testutil::random_mat(4 * ds, ds, rng);
        auto bm = testutil::random_mat(1, ds, rng);
        auto g = testutil::random_mat(4, ds, rng);
        auto s = testutil::random_mat(4, ds, rng);
        m::FusionParams fp{testutil::to_array(wm), testutil::to_array(bm)};
        t::Tape tape;
        auto f = m::fuse(tape, testutil::to_array(g), testutil::to_array(s), fp);
        CHECK(testutil::max_abs_diff(oracle::fuse(g, s, wm, bm[0]), f) < 1e-10);
        for (std::size_t i = 0; i < f.rows(); ++i)
            for (std::size_t j = 0; j < f.cols(); ++j) {
                CHECK(f.at(i, j) > -1.0);
                CHECK(f.at(i, j) < 1.0);
            }
    }
}

TEST_CASE("variant head shapes") {
    m::Model::Input input;
    input.text_tokens = {"climate", "hoax"};
    input.topic_tokens = {"science", "real"};
    {
        auto model = tiny_model(m::Variant::SingleStance, m::Features::TextTopic, 1);
        t::Tape tape;
        auto out = model.forward(tape, input);
        REQUIRE(out.stance.has_value());
        CHECK(out.stance->cols() == 2);
        CHECK_FALSE(out.sentiment.has_value());
        CHECK_FALSE(out.stance_aux.has_value());
    }
    {
        auto model = tiny_model(m::Variant::SingleSentiment, m::Features::TextTopic, 2);
        t::Tape tape;
        auto out = model.forward(tape, input);
        CHECK_FALSE(out.stance.has_value());
        REQUIRE(out.sentiment.has_value());
        CHECK(out.sentiment->cols() == 3);
    }
    {
        auto model = tiny_model(m::Variant::SharedOnly, m::Features::TextTopic, 3);
        t::Tape tape;
        auto out = model.forward(tape, input);
        REQUIRE(out.stance.has_value());
        REQUIRE(out.sentiment.has_value());
        REQUIRE(out.stance_aux.has_value());
        REQUIRE(out.sentiment_aux.has_value());
        CHECK(out.stance->cols() == 2);
        CHECK(out.sentiment->cols() == 3);
    }
    {
        auto model = tiny_model(m::Variant::SharedPrivate, m::Features::Text, 4);
        t::Tape tape;
        auto out = model.forward(tape, input);
        REQUIRE(out.stance.has_value());
        REQUIRE(out.sentiment.has_value());
        CHECK(out.stance->cols() == 2);
        // The stance head consumes pooled A_d (d_a) and pooled F (d_s).
        CHECK(model.params().get("head.stance.W").rows() == 4 + 4);
    }
}

TEST_CASE("empty inputs pad with UNK and are recorded") {
    auto model = tiny_model(m::Variant::SharedPrivate, m::Features::TextTopic, 5);
    t::Tape tape;
    m::Model::Input input;  // both sequences empty
    auto out = model.forward(tape, input);
    CHECK(out.text_padded);
    CHECK(out.topic_padded);
    REQUIRE(out.stance.has_value());
    out.stance->ensure_finite("padded forward");
}

TEST_CASE("total loss composition") {
    const double ln2 = std::log(2.0), ln3 = std::log(3.0);
    m::Model::Logits logits;
    logits.stance = t::Array::zeros(1, 2);
    logits.sentiment = t::Array::zeros(1, 3);
    logits.stance_aux = t::Array::zeros(1, 2);
    logits.sentiment_aux = t::Array::zeros(1, 3);
    m::Model::Targets targets;
    targets.stance = 0;
    targets.sentiment = 2;

    m::ModelConfig cfg;
    cfg.variant = m::Variant::SharedPrivate;
    {
        t::Tape tape;
        CHECK(m::total_loss(tape, logits, targets, cfg).item() ==
              doctest::Approx(1.5 * (ln2 + ln3)).epsilon(1e-12));
    }
    {
        m::ModelConfig no_lambda = cfg;
        no_lambda.lambda = 0.0;
        t::Tape tape;
        CHECK(m::total_loss(tape, logits, targets, no_lambda).item() ==
              doctest::Approx(ln2 + ln3).epsilon(1e-12));
    }
    {
        m::ModelConfig off = cfg;
        off.shared_loss = false;
        t::Tape tape;
        CHECK(m::total_loss(tape, logits, targets, off).item() ==
              doctest::Approx(ln2 + ln3).epsilon(1e-12));
    }
    {
        m::ModelConfig single = cfg;
        single.variant = m::Variant::SingleStance;
        t::Tape tape;
        CHECK(m::total_loss(tape, logits, targets, single).item() ==
              doctest::Approx(ln2).epsilon(1e-12));
    }
    {
        m::Model::Targets missing;
        missing.sentiment = 1;
        t::Tape tape;
        CHECK_THROWS_AS(m::total_loss(tape, logits, missing, cfg), ConfigError);
    }
}

TEST_CASE("sp-mt forward is reproducible and gradients pass finite differences") {
    auto model = tiny_model(m::Variant::SharedPrivate, m::Features::TextTopic, 77);
    m::Model::Input input;
    input.text_tokens = {"climate", "hoax", "warm"};
    input.topic_tokens = {"science", "real"};
    m::Model::Targets targets;
    targets.stance = 0;
    targets.sentiment = 1;

    {
        auto model2 = tiny_model(m::Variant::SharedPrivate, m::Features::TextTopic, 77);
        t::Tape tape1, tape2;
        auto l1 = model.forward(tape1, input);
        auto l2 = model2.forward(tape2, input);
        CHECK(l1.stance->values() == l2.stance->values());  // bit-identical
    }

    auto params = model.parameters();
    auto loss_value = [&]() {
        t::Tape tape;
        return model.loss(tape, model.forward(tape, input), targets).item();
    };
    auto backward = [&]() {
        t::Tape tape;
        t::Array loss = model.loss(tape, model.forward(tape, input), targets);
        tape.backward(loss);
    };
    CHECK(testutil::gradcheck(params, loss_value, backward) < 1e-3);
}

TEST_CASE("checkpoint round-trip restores bit-identical logits") {
    auto model = tiny_model(m::Variant::SharedPrivate, m::Features::TextTopic, 31);
    m::Model::Input input;
    input.text_tokens = {"climate", "act"};
    input.topic_tokens = {"real"};
    t::Tape tape;
    auto before = model.forward(tape, input);

    const std::string path = "ckpt_test.json";
    m::save_checkpoint(path, model);
    auto restored = m::load_checkpoint(path);
    t::Tape tape2;
    auto after = restored.forward(tape2, input);
    CHECK(before.stance->values() == after.stance->values());
    CHECK(before.sentiment->values() == after.sentiment->values());
    CHECK(restored.config().variant == m::Variant::SharedPrivate);

    // Tampered parameter shape fails loudly.
    {
        std::ifstream in(path);
        nlohmann::json j;
        in >> j;
        j["params"][0]["rows"] = 999;
        std::ofstream out(path);
        out << j.dump();
    }
    CHECK_THROWS_AS(m::load_checkpoint(path), DataError);
    std::remove(path.c_str());
}
