#include "cws/similarity.hpp"

#include "cws/error.hpp"
#include "cws/parallel.hpp"
#include "cws/stats.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <string>

namespace cws {

double generalized_jaccard(const SparseWeightedSet& s, const SparseWeightedSet& t) {
    if (s.empty() && t.empty()) {
        throw Error(Errc::UndefinedSimilarity, "generalized Jaccard of two empty sets");
    }
    const auto a = s.entries();
    const auto b = t.entries();
    double num = 0.0;
    double den = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].element < b[j].element)) {
            den += a[i++].weight;
        } else if (i == a.size() || b[j].element < a[i].element) {
            den += b[j++].weight;
        } else {
            num += std::min(a[i].weight, b[j].weight);
            den += std::max(a[i].weight, b[j].weight);
            ++i;
            ++j;
        }
    }
    return num / den;
}

void require_comparable(const Fingerprint& a, const Fingerprint& b) {
    if (a.algorithm != b.algorithm) {
        throw Error(Errc::IncomparableFingerprints, std::string("algorithms differ: ") +
                                                        std::string(algorithm_name(a.algorithm)) + " vs " +
                                                        std::string(algorithm_name(b.algorithm)));
    }
    if (a.codes.size() != b.codes.size()) {
        throw Error(Errc::IncomparableFingerprints, "lengths differ: " + std::to_string(a.codes.size()) + " vs " +
                                                        std::to_string(b.codes.size()));
    }
    if (a.seed != b.seed) {
        throw Error(Errc::IncomparableFingerprints, "master seeds differ: " + std::to_string(a.seed) + " vs " +
                                                        std::to_string(b.seed));
    }
    if (a.param != b.param) {
        throw Error(Errc::IncomparableFingerprints, "sampler parameters differ");
    }
}

double estimate_similarity(const Fingerprint& a, const Fingerprint& b) {
    require_comparable(a, b);
    if (a.codes.empty()) throw Error(Errc::EmptyInput, "empty fingerprints");
    std::size_t hits = 0;
    for (std::size_t d = 0; d < a.codes.size(); ++d) {
        if (collides(a.codes[d], b.codes[d])) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(a.codes.size());
}

PairEstimate estimate_pair(const SparseWeightedSet& s, const SparseWeightedSet& t, const VariateScheme& scheme,
                           Algorithm algorithm, std::uint32_t length, const SketchParams& params) {
    PairEstimate out;
    out.exact_j = generalized_jaccard(s, t);
    out.estimated_j = estimate_similarity(sketch(s, scheme, algorithm, length, params),
                                          sketch(t, scheme, algorithm, length, params));
    out.length = length;
    out.algorithm = algorithm;
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> select_pairs(std::size_t doc_count, std::size_t pair_count,
                                                              std::uint64_t seed) {
    if (doc_count < 2) throw Error(Errc::InvalidParameter, "pair selection needs at least two documents");
    const std::size_t available = doc_count * (doc_count - 1) / 2;
    if (pair_count > available) {
        throw Error(Errc::InvalidParameter, "requested " + std::to_string(pair_count) + " pairs but only " +
                                                std::to_string(available) + " exist");
    }
    StreamRng rng(seed);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(pair_count);
    while (out.size() < pair_count) {
        std::size_t a = rng.below(doc_count);
        std::size_t b = rng.below(doc_count);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        if (seen.emplace(a, b).second) out.emplace_back(a, b);
    }
    return out;
}

std::uint64_t trial_seed(std::uint64_t scheme_seed, std::size_t trial) noexcept {
    return derive_seed(scheme_seed, 0x7472000000000000ULL + trial);
}

namespace {

constexpr std::uint64_t kPairLabel = 0x7061697273ULL;

void validate(const Dataset& dataset, const MseConfig& config) {
    if (config.length < 1 || config.length > kMaxFingerprintLength) {
        throw Error(Errc::InvalidParameter, "fingerprint length " + std::to_string(config.length) +
                                                " outside [1, " + std::to_string(kMaxFingerprintLength) + "]");
    }
    if (dataset.size() < 2) throw Error(Errc::InvalidParameter, "MSE experiment needs at least two documents");
    if (config.pair_count == 0 || config.trial_count == 0) {
        throw Error(Errc::InvalidParameter, "pair and trial counts must be positive");
    }
}

} // namespace

MseResult mse_experiment(const Dataset& dataset, const MseConfig& config, const PairEstimator& estimator) {
    validate(dataset, config);
    const auto pairs = select_pairs(dataset.size(), config.pair_count, derive_seed(config.scheme_seed, kPairLabel));
    const std::size_t trials = config.trial_count;

    std::vector<double> exact(pairs.size());
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        exact[p] = generalized_jaccard(dataset.docs[pairs[p].first], dataset.docs[pairs[p].second]);
    }

    const auto start = std::chrono::steady_clock::now();
    std::vector<double> estimates(pairs.size() * trials);
    parallel_for(estimates.size(), [&](std::size_t cell) {
        const std::size_t trial = cell / pairs.size();
        const std::size_t p = cell % pairs.size();
        const VariateScheme scheme(trial_seed(config.scheme_seed, trial), config.length);
        estimates[cell] =
            estimator(dataset.docs[pairs[p].first], dataset.docs[pairs[p].second], scheme, config.length);
    });
    const auto stop = std::chrono::steady_clock::now();

    stats::CompensatedSum sq;
    stats::CompensatedSum err;
    stats::CompensatedSum ideal;
    MseResult result;
    result.pairs.resize(pairs.size());
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        stats::CompensatedSum per_pair;
        for (std::size_t t = 0; t < trials; ++t) {
            const double e = estimates[t * pairs.size() + p];
            sq.add((e - exact[p]) * (e - exact[p]));
            err.add(e - exact[p]);
            per_pair.add(e);
        }
        ideal.add(exact[p] * (1.0 - exact[p]) / config.length);
        result.pairs[p] = {pairs[p].first, pairs[p].second, exact[p],
                           per_pair.value() / static_cast<double>(trials)};
    }
    const double cells = static_cast<double>(estimates.size());
    result.row.algorithm = config.algorithm;
    result.row.length = config.length;
    result.row.pairs = pairs.size();
    result.row.trials = trials;
    result.row.mse = sq.value() / cells;
    result.row.bias = err.value() / cells;
    result.row.ideal_mse = ideal.value() / static_cast<double>(pairs.size());
    result.row.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    return result;
}

MseResult mse_experiment(const Dataset& dataset, const MseConfig& config) {
    const Algorithm algorithm = config.algorithm;
    SketchParams params = config.params;
    if (algorithm == Algorithm::Gollapudi && params.threshold_max <= 0.0) {
        params.threshold_max = dataset.max_weight();
    }
    return mse_experiment(dataset, config,
                          [algorithm, params](const SparseWeightedSet& s, const SparseWeightedSet& t,
                                              const VariateScheme& scheme, std::uint32_t length) {
                              return estimate_similarity(sketch(s, scheme, algorithm, length, params),
                                                         sketch(t, scheme, algorithm, length, params));
                          });
}

} // namespace cws
