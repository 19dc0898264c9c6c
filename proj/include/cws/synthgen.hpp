#pragma once

#include "cws/weighted_set.hpp"

#include <cstddef>
#include <cstdint>
#include <variant>

namespace cws {

/// Weights drawn from the open interval (lo, hi); lo == hi gives constant weights.
struct UniformLaw {
    double lo = 0.0;
    double hi = 1.0;
};

/// Pareto law with x_min = scale and shape = exponent.
struct PowerLaw {
    double exponent = 3.0;
    double scale = 1.0;
};

struct SynthConfig {
    std::size_t doc_count = 200;
    std::size_t feature_count = 5000;
    double density = 0.05;
    std::variant<UniformLaw, PowerLaw> law = UniformLaw{};
    std::uint64_t gen_seed = 1;
};

/// 200 docs x 5000 features at density 0.05 with Uniform(0,1) weights.
SynthConfig desk_scale_uniform(std::uint64_t gen_seed);

/// ceil(density * feature_count); throws DegenerateInput when below one.
std::size_t support_size(const SynthConfig& config);

Dataset gen_uniform_corpus(const SynthConfig& config);
Dataset gen_powerlaw_corpus(const SynthConfig& config);
/// Dispatches on the configured law.
Dataset generate_corpus(const SynthConfig& config);

/// Corpus with topic and cluster structure for retrieval checks.
///
/// Every document of a topic shares the topic's support exactly, so binary
/// Min-Hash sees all of them as identical. Clusters inside a topic differ
/// only in their weights: each cluster has its own center weights in (0,1],
/// and each member multiplies the center by a factor in (1 - jitter, 1 + jitter).
/// Documents are emitted in a seeded random order; the label is "topic-cluster".
struct ClusteredConfig {
    std::size_t topic_count = 10;
    std::size_t clusters_per_topic = 5;
    std::size_t docs_per_cluster = 10;
    std::size_t feature_count = 5000;
    std::size_t support_per_topic = 100;
    double jitter = 0.1;
    std::uint64_t gen_seed = 1;
};

Dataset gen_clustered_corpus(const ClusteredConfig& config);

/// Mean over features of the population std of that feature's nonzero
/// weights; features with fewer than two nonzeros are skipped.
double average_feature_std(const Dataset& dataset);

} // namespace cws
