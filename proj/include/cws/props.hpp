#pragma once

#include "cws/sketchers.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace cws {

struct PropertyCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct PropsConfig {
    std::uint64_t seed = 1;
    /// Draws per distributional check.
    std::size_t samples = 100000;
    std::size_t consistency_pairs = 1000;
    double alpha = 0.01;
};

struct ConsistencyReport {
    std::size_t pairs = 0;
    /// Samples whose y_{k*} fit under the shrunken weight.
    std::size_t applicable = 0;
    std::size_t violations = 0;
};

/// Draws `pairs` random (S, T) with 0 <= T_k <= S_k, shares one scheme
/// across both sets, and counts samples from S with y_{k*} <= T_{k*} whose
/// T-sample is not bit-identical. Each pair is checked at `samples_per_pair`
/// sample indices.
ConsistencyReport consistency_check(Algorithm algorithm, std::size_t pairs, std::uint64_t seed,
                                    std::uint32_t samples_per_pair = 16);

/// The statistical property suite behind `cws props`.
std::vector<PropertyCheck> run_property_suite(const PropsConfig& config);

} // namespace cws
