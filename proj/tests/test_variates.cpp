#include "cws/error.hpp"
#include "cws/stats.hpp"
#include "cws/variates.hpp"

#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

using namespace cws;

TEST_SUITE("variates") {

TEST_CASE("uniform01 is a pure function of seed and key") {
    const VariateScheme a(42, 8);
    const VariateScheme b(42, 8);
    const VariateScheme other(43, 8);
    const VariateKey key{17, 3, Role::Beta1};
    CHECK(a.uniform01(key) == b.uniform01(key));
    CHECK(a.uniform01(key) != other.uniform01(key));
    CHECK(a.uniform01(key) != a.uniform01({17, 4, Role::Beta1}));
    CHECK(a.uniform01(key) != a.uniform01({18, 3, Role::Beta1}));
    CHECK(a.uniform01(key) != a.uniform01({17, 3, Role::Beta2}));
    CHECK(a.uniform01(key) != a.uniform01({17, 3, Role::Beta1, 1}));
}

TEST_CASE("uniform01 stays in the open unit interval") {
    const VariateScheme s(7, 1);
    for (std::uint64_t k = 0; k < 20000; ++k) {
        const double u = s.uniform01({k, 0, Role::U});
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
    }
    CHECK(bits_to_open_unit(0) > 0.0);
    CHECK(bits_to_open_unit(~0ULL) < 1.0);
}

TEST_CASE("sample index out of range is rejected") {
    const VariateScheme s(1, 4);
    CHECK_NOTHROW(s.uniform01({0, 3, Role::U}));
    try {
        (void)s.uniform01({0, 4, Role::U});
        FAIL("expected OutOfRange");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::OutOfRange);
    }
    CHECK_THROWS_AS(VariateScheme(1, 0), Error);
}

TEST_CASE("pinned gamma components give -ln(u_a u_b)") {
    const VariateKey key{5, 0, Role::R1};
    VariatePins pins;
    pins.gamma_components(key, std::exp(-1.0), std::exp(-1.0));
    const VariateScheme s(1, 1, pins);
    CHECK(s.gamma21(key) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("pinned uniform_power evaluates exp(-r)^b") {
    const VariateKey kr{5, 0, Role::R2};
    const VariateKey kb{5, 0, Role::Beta2};
    VariatePins pins;
    pins.gamma(kr, 2.0).uniform(kb, 1.0);
    const VariateScheme s(1, 1, pins);
    CHECK(s.uniform_power(kr, kb) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(s.uniform_power(kr, {5, 0, Role::R2}), Error);
}

TEST_CASE("uniform01 passes KS against Uniform(0,1)") {
    const VariateScheme s(2024, 1);
    std::vector<double> u(100000);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = s.uniform01({i, 0, Role::U});
    CHECK(stats::ks_statistic(u, [](double x) { return x; }) < stats::ks_critical(u.size(), 0.01));
}

TEST_CASE("distinct roles at the same key are uncorrelated") {
    const VariateScheme s(99, 1);
    const Role roles[] = {Role::R1, Role::R2, Role::Beta1, Role::Beta2, Role::C, Role::U, Role::Rank, Role::Include};
    std::vector<std::vector<double>> draws(kRoleCount, std::vector<double>(100000));
    for (int r = 0; r < kRoleCount; ++r) {
        for (std::size_t i = 0; i < 100000; ++i) draws[r][i] = s.uniform01({i, 0, roles[r]});
    }
    for (int a = 0; a < kRoleCount; ++a) {
        for (int b = a + 1; b < kRoleCount; ++b) {
            CAPTURE(role_name(roles[a]));
            CAPTURE(role_name(roles[b]));
            CHECK(std::abs(stats::pearson(draws[a], draws[b])) <= 0.01);
        }
    }
}

TEST_CASE("gamma21 has Gamma(2,1) moments") {
    const VariateScheme s(3, 1);
    const std::size_t n = 100000;
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = s.gamma21({i, 0, Role::C});
        REQUIRE(g[i] > 0.0);
    }
    const double nd = static_cast<double>(n);
    CHECK(std::abs(stats::mean(g) - 2.0) <= 5.0 * std::sqrt(2.0 / nd));
    // Var of the sample variance of Gamma(2,1) is (mu4 - sigma^4)/n = 20/n.
    CHECK(std::abs(stats::variance(g) - 2.0) <= 5.0 * std::sqrt(20.0 / nd));
    // CDF of Gamma(2,1): 1 - (1 + x) e^-x.
    CHECK(stats::ks_statistic(g, [](double x) { return 1.0 - (1.0 + x) * std::exp(-x); }) <
          stats::ks_critical(n, 0.01));
}

TEST_CASE("uniform_power is marginally uniform") {
    const VariateScheme s(4, 1);
    std::vector<double> m(100000);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = s.uniform_power({i, 0, Role::R1}, {i, 0, Role::Beta1});
    CHECK(stats::ks_statistic(m, [](double x) { return x; }) < stats::ks_critical(m.size(), 0.01));
}

TEST_CASE("StreamRng::below is unbiased and bounded") {
    StreamRng rng(11);
    std::vector<std::size_t> counts(7, 0);
    for (int i = 0; i < 70000; ++i) {
        const auto v = rng.below(7);
        REQUIRE(v < 7);
        ++counts[v];
    }
    const std::vector<double> p(7, 1.0 / 7.0);
    CHECK(stats::chi_square_statistic(counts, p) < stats::chi_square_critical(6, 0.01));
}

TEST_CASE("derive_seed separates labels and parents") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t parent = 0; parent < 50; ++parent) {
        for (std::uint64_t label = 0; label < 50; ++label) seen.insert(derive_seed(parent, label));
    }
    CHECK(seen.size() == 2500);
}

}
