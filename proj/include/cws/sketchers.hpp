#pragma once

#include "cws/variates.hpp"
#include "cws/weighted_set.hpp"

#include <bit>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace cws {

enum class Algorithm : std::uint8_t { MinHash, Wmh, Haeupler, Gollapudi, Icws, Li2015, Ccws, I2cws };

inline constexpr Algorithm kAllAlgorithms[] = {
    Algorithm::MinHash, Algorithm::Wmh, Algorithm::Haeupler, Algorithm::Gollapudi,
    Algorithm::Icws,    Algorithm::Li2015, Algorithm::Ccws,  Algorithm::I2cws,
};

/// Stable CLI identifier: minhash, wmh, haeupler, gollapudi, icws, li2015, ccws, i2cws.
std::string_view algorithm_name(Algorithm algorithm) noexcept;
/// Throws Errc::UsageError for unknown names.
Algorithm parse_algorithm(std::string_view name);

/// True when codes carry a second word: y_{k*} for the CWS family, the
/// subelement index for the quantizing samplers.
bool has_second_word(Algorithm algorithm) noexcept;

/// One sample of a fingerprint.
///
/// Pair-valued codes store y_{k*} as its IEEE-754 bit pattern; the
/// quantizing samplers store the 1-based subelement index in the same slot.
struct HashCode {
    ElementId k_star = 0;
    std::uint64_t y_bits = 0;
    bool has_y = false;

    double y() const noexcept { return std::bit_cast<double>(y_bits); }
    bool is_empty() const noexcept { return k_star == kEmptyElement; }

    /// Structural equality (used for round trips), not collision.
    friend bool operator==(const HashCode&, const HashCode&) = default;
};

inline HashCode pair_code(ElementId k, double y) noexcept { return {k, std::bit_cast<std::uint64_t>(y), true}; }
inline HashCode index_code(ElementId k) noexcept { return {k, 0, false}; }
inline HashCode empty_code() noexcept { return {kEmptyElement, 0, false}; }

/// Collision test used by the estimator. The empty sentinel collides with nothing.
inline bool collides(const HashCode& a, const HashCode& b) noexcept {
    return !a.is_empty() && !b.is_empty() && a.k_star == b.k_star && a.has_y == b.has_y &&
           a.y_bits == b.y_bits;
}

struct SketchParams {
    /// Weight multiplier before quantization (wmh, haeupler).
    double quantization_scale = 10.0;
    /// Threshold normalizer for gollapudi; the corpus-wide maximum weight.
    double threshold_max = 0.0;
};

/// The one sampler parameter that affects comparability, 0 when unused.
double algorithm_param(Algorithm algorithm, const SketchParams& params) noexcept;

struct Fingerprint {
    Algorithm algorithm = Algorithm::I2cws;
    std::uint64_t seed = 0;
    double param = 0.0;
    DocId doc_id = 0;
    std::vector<HashCode> codes;

    std::size_t length() const noexcept { return codes.size(); }
    friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

/// Full state of one CWS draw, exposed for the statistical property checks.
struct CwsDraw {
    ElementId k_star = 0;
    double y = 0.0;
    double z = 0.0;
    /// c_{k*} / z_{k*}, the winning hash value.
    double a = 0.0;
};

CwsDraw i2cws_draw(const SparseWeightedSet& set, const VariateScheme& scheme, std::uint32_t d);
CwsDraw icws_draw(const SparseWeightedSet& set, const VariateScheme& scheme, std::uint32_t d);
CwsDraw ccws_draw(const SparseWeightedSet& set, const VariateScheme& scheme, std::uint32_t d);

/// ln a_k = ln c_k - ln z_k for I²CWS; exposed for the monotonicity property.
double i2cws_log_hash(ElementId element, double weight, const VariateScheme& scheme, std::uint32_t d);

HashCode i2cws_sample(const SparseWeightedSet& set, const VariateScheme& scheme, std::uint32_t d);
HashCode icws_sample(const SparseWeightedSet& set, const VariateScheme& scheme, std::uint32_t d);
HashCode li2015_sample(const SparseWeightedSet& set, const VariateScheme& scheme, std::uint32_t d);
HashCode ccws_sample(const SparseWeightedSet& set, const VariateScheme& scheme, std::uint32_t d);
HashCode minhash_binary_sample(const SparseWeightedSet& set, const VariateScheme& scheme, std::uint32_t d);
HashCode wmh_quantize_sample(const SparseWeightedSet& set, const VariateScheme& scheme, std::uint32_t d,
                             double scale);
HashCode haeupler_sample(const SparseWeightedSet& set, const VariateScheme& scheme, std::uint32_t d,
                         double scale);
HashCode gollapudi_threshold_sample(const SparseWeightedSet& set, const VariateScheme& scheme,
                                    std::uint32_t d, double w_max);

/// floor(scale * weight): subelements kept by plain quantization.
std::uint64_t quantized_count(double weight, double scale);
/// Quantized count plus one extra subelement with probability frac(scale * weight).
std::uint64_t rounded_count(ElementId element, double weight, const VariateScheme& scheme, std::uint32_t d,
                            double scale);
bool threshold_active(ElementId element, double weight, const VariateScheme& scheme, std::uint32_t d,
                      double w_max);

HashCode sample(const SparseWeightedSet& set, const VariateScheme& scheme, Algorithm algorithm,
                std::uint32_t d, const SketchParams& params = {});

/// Length-D fingerprint of one set. D must not exceed the scheme's sample count.
Fingerprint sketch(const SparseWeightedSet& set, const VariateScheme& scheme, Algorithm algorithm,
                   std::uint32_t length, const SketchParams& params = {});

/// Fingerprints for every document, computed in parallel; order matches `docs`.
std::vector<Fingerprint> sketch_all(std::span<const SparseWeightedSet> docs, const VariateScheme& scheme,
                                    Algorithm algorithm, std::uint32_t length, const SketchParams& params = {});

} // namespace cws
