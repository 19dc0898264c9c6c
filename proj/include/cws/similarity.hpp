#pragma once

#include "cws/sketchers.hpp"
#include "cws/variates.hpp"
#include "cws/weighted_set.hpp"

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace cws {

/// sum_k min(S_k, T_k) / sum_k max(S_k, T_k) over the union of supports.
/// Throws UndefinedSimilarity when both sets are empty.
double generalized_jaccard(const SparseWeightedSet& s, const SparseWeightedSet& t);

/// Throws IncomparableFingerprints unless algorithm, length, seed and sampler
/// parameter all match.
void require_comparable(const Fingerprint& a, const Fingerprint& b);

/// Fraction of positions whose codes collide.
double estimate_similarity(const Fingerprint& a, const Fingerprint& b);

struct PairEstimate {
    double exact_j = 0.0;
    double estimated_j = 0.0;
    std::uint32_t length = 0;
    Algorithm algorithm = Algorithm::I2cws;
};

PairEstimate estimate_pair(const SparseWeightedSet& s, const SparseWeightedSet& t, const VariateScheme& scheme,
                           Algorithm algorithm, std::uint32_t length, const SketchParams& params = {});

inline constexpr std::uint32_t kMaxFingerprintLength = 1u << 16;

struct MseConfig {
    Algorithm algorithm = Algorithm::I2cws;
    std::uint32_t length = 128;
    std::size_t pair_count = 50;
    std::size_t trial_count = 5;
    std::uint64_t scheme_seed = 1;
    SketchParams params;
};

/// One row of the estimator-quality report.
struct MseRow {
    Algorithm algorithm = Algorithm::I2cws;
    std::uint32_t length = 0;
    std::size_t pairs = 0;
    std::size_t trials = 0;
    double mse = 0.0;
    double bias = 0.0;
    /// Mean of J(1-J)/D over the selected pairs: the Bernoulli-variance floor.
    double ideal_mse = 0.0;
    double wall_ms = 0.0;
};

struct PairSummary {
    std::size_t first = 0;
    std::size_t second = 0;
    double exact_j = 0.0;
    double mean_estimate = 0.0;
};

struct MseResult {
    MseRow row;
    std::vector<PairSummary> pairs;
};

/// Similarity estimate for one (pair, trial) cell. The scheme is the trial's.
using PairEstimator = std::function<double(const SparseWeightedSet&, const SparseWeightedSet&,
                                           const VariateScheme&, std::uint32_t length)>;

/// Distinct unordered document pairs chosen by a seeded draw.
std::vector<std::pair<std::size_t, std::size_t>> select_pairs(std::size_t doc_count, std::size_t pair_count,
                                                              std::uint64_t seed);

/// Seed of the scheme used for `trial`; every trial gets fresh variates.
std::uint64_t trial_seed(std::uint64_t scheme_seed, std::size_t trial) noexcept;

/// MSE and bias of the fingerprint estimator over pair_count pairs and
/// trial_count reseeded schemes. Cells run in parallel; the reduction is
/// compensated and in a fixed order.
MseResult mse_experiment(const Dataset& dataset, const MseConfig& config);

/// Same harness with a caller-supplied estimator in place of fingerprinting.
MseResult mse_experiment(const Dataset& dataset, const MseConfig& config, const PairEstimator& estimator);

} // namespace cws
