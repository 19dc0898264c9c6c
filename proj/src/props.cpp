#include "cws/props.hpp"

#include "cws/stats.hpp"
#include "cws/variates.hpp"

#include <cmath>
#include <fmt/format.h>

namespace cws {

namespace {

// Random S over a 40-element universe and a pointwise-shrunken T.
std::pair<SparseWeightedSet, SparseWeightedSet> shrink_pair(StreamRng& rng) {
    std::vector<WeightedEntry> s;
    std::vector<WeightedEntry> t;
    while (t.empty()) {
        s.clear();
        t.clear();
        for (ElementId k = 0; k < 40; ++k) {
            if (rng.uniform01() > 0.3) continue;
            // Log-uniform weights over [e^-3, e^3].
            const double w = std::exp(6.0 * rng.uniform01() - 3.0);
            s.push_back({k, w});
            const double mode = rng.uniform01();
            if (mode < 0.2) {
                t.push_back({k, w});
            } else if (mode < 0.9) {
                t.push_back({k, w * rng.uniform01()});
            }
        }
    }
    return {SparseWeightedSet(std::move(s)), SparseWeightedSet(std::move(t))};
}

PropertyCheck ks_check(std::string name, std::vector<double> samples, const std::function<double(double)>& cdf,
                       double alpha) {
    const std::size_t n = samples.size();
    const double d = stats::ks_statistic(std::move(samples), cdf);
    const double crit = stats::ks_critical(n, alpha);
    return {std::move(name), d < crit, fmt::format("D={:.6f} critical={:.6f} n={}", d, crit, n)};
}

PropertyCheck selection_check(Algorithm algorithm, const PropsConfig& cfg) {
    const SparseWeightedSet set({{1, 0.5}, {2, 1.0}, {3, 1.5}, {4, 2.0}, {5, 5.0}});
    const auto n = static_cast<std::uint32_t>(cfg.samples);
    const VariateScheme scheme(derive_seed(cfg.seed, 11), n);
    std::vector<std::size_t> counts(5, 0);
    for (std::uint32_t d = 0; d < n; ++d) ++counts[sample(set, scheme, algorithm, d).k_star - 1];
    const double total = set.total_weight();
    std::vector<double> p;
    for (const auto& e : set.entries()) p.push_back(e.weight / total);
    const double chi2 = stats::chi_square_statistic(counts, p);
    const double crit = stats::chi_square_critical(4, cfg.alpha);
    return {fmt::format("selection proportional to weight ({})", algorithm_name(algorithm)), chi2 < crit,
            fmt::format("chi2={:.3f} critical={:.3f}", chi2, crit)};
}

} // namespace

ConsistencyReport consistency_check(Algorithm algorithm, std::size_t pairs, std::uint64_t seed,
                                    std::uint32_t samples_per_pair) {
    StreamRng rng(derive_seed(seed, 0x636f6e73ULL));
    const VariateScheme scheme(seed, samples_per_pair);
    ConsistencyReport report;
    report.pairs = pairs;
    for (std::size_t p = 0; p < pairs; ++p) {
        const auto [s, t] = shrink_pair(rng);
        for (std::uint32_t d = 0; d < samples_per_pair; ++d) {
            const HashCode from_s = sample(s, scheme, algorithm, d);
            if (from_s.y() > t.weight(from_s.k_star)) continue;
            ++report.applicable;
            if (sample(t, scheme, algorithm, d) != from_s) ++report.violations;
        }
    }
    return report;
}

std::vector<PropertyCheck> run_property_suite(const PropsConfig& cfg) {
    std::vector<PropertyCheck> out;
    const std::size_t n = cfg.samples;
    const auto n32 = static_cast<std::uint32_t>(n);

    {
        const VariateScheme scheme(cfg.seed, 1);
        std::vector<double> u(n);
        std::vector<double> g(n);
        std::vector<double> beta(n);
        std::vector<double> powered(n);
        for (std::size_t i = 0; i < n; ++i) {
            u[i] = scheme.uniform01({i, 0, Role::U});
            beta[i] = scheme.uniform01({i, 0, Role::Beta1});
            g[i] = scheme.gamma21({i, 0, Role::R1});
            powered[i] = scheme.uniform_power({i, 0, Role::R2}, {i, 0, Role::Beta2});
        }
        out.push_back(ks_check("uniform01 ~ Uniform(0,1)", u, [](double x) { return x; }, cfg.alpha));
        const double rho = stats::pearson(u, beta);
        out.push_back({"cross-role independence", std::abs(rho) <= 0.01, fmt::format("pearson={:.5f}", rho)});
        const double m = stats::mean(g);
        const double v = stats::variance(g);
        const double tol_m = 5.0 * std::sqrt(2.0 / static_cast<double>(n));
        const double tol_v = 5.0 * std::sqrt(20.0 / static_cast<double>(n));
        out.push_back({"gamma21 moments", std::abs(m - 2.0) <= tol_m && std::abs(v - 2.0) <= tol_v,
                       fmt::format("mean={:.5f} var={:.5f}", m, v)});
        out.push_back(ks_check("exp(-r)^b ~ Uniform(0,1)", powered, [](double x) { return x; }, cfg.alpha));
    }

    out.push_back(selection_check(Algorithm::I2cws, cfg));
    out.push_back(selection_check(Algorithm::Icws, cfg));

    {
        const double w = 3.7;
        const SparseWeightedSet single({{9, w}});
        const VariateScheme scheme(derive_seed(cfg.seed, 12), n32);
        std::vector<double> ys(n);
        for (std::uint32_t d = 0; d < n32; ++d) ys[d] = i2cws_draw(single, scheme, d).y;
        out.push_back(ks_check("i2cws y ~ Uniform(0, S]", ys, [w](double x) { return x / w; }, cfg.alpha));
    }

    for (double w : {0.1, 1.0, 10.0}) {
        const SparseWeightedSet single({{3, w}});
        const VariateScheme scheme(derive_seed(cfg.seed, 13), n32);
        std::vector<double> as(n);
        for (std::uint32_t d = 0; d < n32; ++d) as[d] = i2cws_draw(single, scheme, d).a;
        out.push_back(ks_check(fmt::format("i2cws a ~ Exp({})", w), as, [w](double x) { return 1.0 - std::exp(-w * x); },
                               cfg.alpha));
    }

    for (Algorithm a : {Algorithm::I2cws, Algorithm::Icws, Algorithm::Ccws}) {
        const auto report = consistency_check(a, cfg.consistency_pairs, derive_seed(cfg.seed, 14));
        out.push_back({fmt::format("consistency ({})", algorithm_name(a)), report.violations == 0,
                       fmt::format("violations={} applicable={} pairs={}", report.violations, report.applicable,
                                   report.pairs)});
    }

    {
        const double w = 2.0;
        const SparseWeightedSet single({{5, w}});
        const VariateScheme scheme(derive_seed(cfg.seed, 15), n32);
        std::size_t joint_i2 = 0;
        std::size_t joint_icws = 0;
        for (std::uint32_t d = 0; d < n32; ++d) {
            const auto a = i2cws_draw(single, scheme, d);
            const auto b = icws_draw(single, scheme, d);
            if (a.y / w < 0.1 && w / a.z < 0.1) ++joint_i2;
            if (b.y / w < 0.1 && w / b.z < 0.1) ++joint_icws;
        }
        const double f_i2 = static_cast<double>(joint_i2) / static_cast<double>(n);
        const double f_icws = static_cast<double>(joint_icws) / static_cast<double>(n);
        out.push_back({"i2cws y, z independent", std::abs(f_i2 - 0.01) <= 0.002, fmt::format("joint tail={:.5f}", f_i2)});
        out.push_back({"icws y, z dependent", std::abs(f_icws - 0.01) > 0.002, fmt::format("joint tail={:.5f}", f_icws)});
    }

    {
        const VariateScheme scheme(derive_seed(cfg.seed, 16), 64);
        StreamRng rng(derive_seed(cfg.seed, 17));
        bool equal = true;
        for (int rep = 0; rep < 200 && equal; ++rep) {
            std::vector<WeightedEntry> e;
            for (ElementId k = 0; k < 30; ++k) {
                if (rng.uniform01() < 0.4) e.push_back({k, std::exp(4.0 * rng.uniform01() - 2.0)});
            }
            if (e.empty()) continue;
            const SparseWeightedSet s(std::move(e));
            for (std::uint32_t d = 0; d < 64; ++d) {
                equal = equal && li2015_sample(s, scheme, d).k_star == icws_sample(s, scheme, d).k_star;
            }
        }
        out.push_back({"li2015 index stream equals icws", equal, ""});
    }
    return out;
}

} // namespace cws
