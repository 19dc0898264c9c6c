#include "cws/error.hpp"
#include "cws/similarity.hpp"
#include "cws/synthgen.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace cws;

namespace {

// Sum of mins over sum of maxes via a dense scan of both supports.
double jaccard_oracle(const SparseWeightedSet& s, const SparseWeightedSet& t) {
    std::set<ElementId> keys;
    for (const auto& e : s.entries()) keys.insert(e.element);
    for (const auto& e : t.entries()) keys.insert(e.element);
    double lo = 0.0;
    double hi = 0.0;
    for (ElementId k : keys) {
        lo += std::min(s.weight(k), t.weight(k));
        hi += std::max(s.weight(k), t.weight(k));
    }
    return lo / hi;
}

Dataset small_corpus(std::uint64_t seed) {
    SynthConfig c;
    c.doc_count = 60;
    c.feature_count = 400;
    c.density = 0.1;
    c.gen_seed = seed;
    return gen_uniform_corpus(c);
}

} // namespace

TEST_SUITE("similarity") {

TEST_CASE("generalized Jaccard examples") {
    const SparseWeightedSet s({{1, 2.0}, {2, 1.0}});
    const SparseWeightedSet t({{1, 1.0}, {2, 3.0}});
    CHECK(generalized_jaccard(s, t) == doctest::Approx(0.4));
    CHECK(generalized_jaccard(s, s) == 1.0);
    CHECK(generalized_jaccard(s, SparseWeightedSet({{9, 1.0}})) == 0.0);
    CHECK(generalized_jaccard(s, SparseWeightedSet()) == 0.0);
    try {
        (void)generalized_jaccard(SparseWeightedSet(), SparseWeightedSet());
        FAIL("expected UndefinedSimilarity");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::UndefinedSimilarity);
    }
}

TEST_CASE("generalized Jaccard agrees with a dense oracle and is symmetric") {
    const Dataset ds = small_corpus(3);
    for (std::size_t i = 0; i + 1 < ds.size(); ++i) {
        const double j = generalized_jaccard(ds.docs[i], ds.docs[i + 1]);
        CHECK(j == doctest::Approx(jaccard_oracle(ds.docs[i], ds.docs[i + 1])).epsilon(1e-12));
        CHECK(j == generalized_jaccard(ds.docs[i + 1], ds.docs[i]));
        CHECK(j >= 0.0);
        CHECK(j <= 1.0);
    }
}

TEST_CASE("generalized Jaccard reduces to set Jaccard on binary sets") {
    const SparseWeightedSet s({{1, 1.0}, {2, 1.0}, {4, 1.0}});
    const SparseWeightedSet t({{2, 1.0}, {3, 1.0}, {4, 1.0}, {5, 1.0}});
    CHECK(generalized_jaccard(s, t) == 2.0 / 5.0);
}

TEST_CASE("estimate_similarity counts colliding positions") {
    Fingerprint a;
    a.codes = {index_code(1), index_code(2), index_code(3), index_code(4)};
    Fingerprint b = a;
    CHECK(estimate_similarity(a, b) == 1.0);
    b.codes[0] = index_code(9);
    b.codes[3] = index_code(8);
    CHECK(estimate_similarity(a, b) == 0.5);
    CHECK(estimate_similarity(b, a) == 0.5);
    b.codes = {index_code(5), index_code(6), index_code(7), index_code(8)};
    CHECK(estimate_similarity(a, b) == 0.0);
}

TEST_CASE("incomparable fingerprints are refused") {
    const SparseWeightedSet s({{1, 1.0}, {2, 0.5}});
    const VariateScheme v1(1, 8);
    const VariateScheme v2(2, 8);
    const auto base = sketch(s, v1, Algorithm::I2cws, 8);
    auto expect_refusal = [&](const Fingerprint& other) {
        try {
            (void)estimate_similarity(base, other);
            FAIL("expected IncomparableFingerprints");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::IncomparableFingerprints);
        }
    };
    expect_refusal(sketch(s, v2, Algorithm::I2cws, 8));
    expect_refusal(sketch(s, v1, Algorithm::Icws, 8));
    expect_refusal(sketch(s, v1, Algorithm::I2cws, 4));

    SketchParams coarse;
    coarse.quantization_scale = 20.0;
    const auto w10 = sketch(s, v1, Algorithm::Wmh, 8);
    const auto w20 = sketch(s, v1, Algorithm::Wmh, 8, coarse);
    try {
        (void)estimate_similarity(w10, w20);
        FAIL("expected IncomparableFingerprints");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::IncomparableFingerprints);
    }
}

TEST_CASE("select_pairs is seeded and distinct") {
    const auto a = select_pairs(30, 100, 7);
    CHECK(a == select_pairs(30, 100, 7));
    CHECK(a != select_pairs(30, 100, 8));
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (auto [i, j] : a) {
        CHECK(i < j);
        CHECK(j < 30);
        seen.insert({i, j});
    }
    CHECK(seen.size() == 100);
    CHECK_THROWS_AS(select_pairs(5, 11, 1), Error);
    CHECK(select_pairs(5, 10, 1).size() == 10);
}

TEST_CASE("perfect estimator has zero MSE") {
    const Dataset ds = small_corpus(4);
    MseConfig cfg;
    cfg.length = 64;
    const auto r = mse_experiment(ds, cfg, [](const SparseWeightedSet& s, const SparseWeightedSet& t,
                                              const VariateScheme&, std::uint32_t) { return generalized_jaccard(s, t); });
    CHECK(r.row.mse == 0.0);
    CHECK(r.row.bias == 0.0);
    CHECK(r.pairs.size() == 50);
}

TEST_CASE("Bernoulli collision model gives MSE near J(1-J)/D") {
    const Dataset ds = small_corpus(5);
    MseConfig cfg;
    cfg.length = 64;
    cfg.pair_count = 100;
    cfg.trial_count = 40;
    // An ideal CWS: each position collides independently with probability J.
    const auto bernoulli = [](const SparseWeightedSet& s, const SparseWeightedSet& t, const VariateScheme& v,
                              std::uint32_t d) {
        const double j = generalized_jaccard(s, t);
        StreamRng rng(derive_seed(v.master_seed(), s.doc_id() * 1000 + t.doc_id()));
        std::size_t hits = 0;
        for (std::uint32_t i = 0; i < d; ++i) hits += rng.uniform01() < j;
        return static_cast<double>(hits) / d;
    };
    const auto r = mse_experiment(ds, cfg, bernoulli);
    double ideal = 0.0;
    for (const auto& p : r.pairs) ideal += p.exact_j * (1.0 - p.exact_j) / 64.0;
    ideal /= static_cast<double>(r.pairs.size());
    CHECK(r.row.ideal_mse == doctest::Approx(ideal).epsilon(1e-12));
    CHECK(r.row.mse == doctest::Approx(ideal).epsilon(0.1));
}

TEST_CASE("MSE experiment is reproducible and shrinks with D") {
    const Dataset ds = small_corpus(6);
    MseConfig cfg;
    cfg.pair_count = 30;
    cfg.trial_count = 3;
    cfg.length = 32;
    const auto small = mse_experiment(ds, cfg);
    CHECK(small.row.mse == mse_experiment(ds, cfg).row.mse);
    cfg.length = 512;
    const auto large = mse_experiment(ds, cfg);
    CHECK(large.row.mse < small.row.mse);
    cfg.length = 0;
    CHECK_THROWS_AS(mse_experiment(ds, cfg), Error);
    cfg.length = kMaxFingerprintLength + 1;
    CHECK_THROWS_AS(mse_experiment(ds, cfg), Error);
}

TEST_CASE("estimate_pair on identical documents") {
    const Dataset ds = small_corpus(7);
    const VariateScheme v(1, 128);
    for (Algorithm a : kAllAlgorithms) {
        SketchParams p;
        p.threshold_max = ds.max_weight();
        const auto e = estimate_pair(ds.docs[0], ds.docs[0], v, a, 128, p);
        CHECK(e.exact_j == 1.0);
        CHECK(e.estimated_j == 1.0);
    }
}

}
