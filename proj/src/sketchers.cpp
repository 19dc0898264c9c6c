#include "cws/sketchers.hpp"

#include "cws/error.hpp"
#include "cws/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cws {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Per-element cap on quantized subelements; beyond this the expansion is
// not a sensible input for the quantizing samplers.
constexpr std::uint64_t kMaxSubelements = std::uint64_t{1} << 26;

void require_nonempty(const SparseWeightedSet& set) {
    if (set.empty()) throw Error(Errc::EmptyInput, "cannot sample an empty weighted set");
}

void require_positive_scale(double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw Error(Errc::InvalidParameter, "quantization scale must be positive");
    }
}

VariateKey key(ElementId k, std::uint32_t d, Role role, std::uint64_t sub = 0) { return {k, d, role, sub}; }

// floor(ln S / r + beta) and the corresponding grid point r * (t - beta).
struct LogGrid {
    double t;
    double point;
};

LogGrid log_grid(double log_weight, double r, double beta) {
    const double t = std::floor(log_weight / r + beta);
    return {t, r * (t - beta)};
}

// exp(ln y) may land one ulp above S_k.
double clamp_below(double y, double weight) { return y > weight ? weight : y; }

// ICWS and [Li, 2015] share this; the index-only variant simply ignores y.
CwsDraw icws_impl(const SparseWeightedSet& set, const VariateScheme& scheme, std::uint32_t d) {
    require_nonempty(set);
    CwsDraw best;
    double best_log_a = kInf;
    double best_log_y = 0.0;
    double best_log_z = 0.0;
    double best_w = 0.0;
    for (const auto& [k, w] : set.entries()) {
        const double r = scheme.gamma21(key(k, d, Role::R1));
        const double beta = scheme.uniform01(key(k, d, Role::Beta1));
        const double c = scheme.gamma21(key(k, d, Role::C));
        const double log_y = log_grid(std::log(w), r, beta).point;
        const double log_z = log_y + r;
        const double log_a = std::log(c) - log_z;
        if (log_a < best_log_a) {
            best_log_a = log_a;
            best.k_star = k;
            best_log_y = log_y;
            best_log_z = log_z;
            best_w = w;
        }
    }
    best.y = clamp_below(std::exp(best_log_y), best_w);
    best.z = std::max(std::exp(best_log_z), best_w);
    best.a = std::exp(best_log_a);
    return best;
}

struct SubelementWinner {
    ElementId k = kEmptyElement;
    std::uint64_t j = 0;
    double u = kInf;
};

void offer_subelements(SubelementWinner& best, ElementId k, std::uint64_t count, const VariateScheme& scheme,
                       std::uint32_t d) {
    if (count > kMaxSubelements) {
        throw Error(Errc::InvalidParameter, "element " + std::to_string(k) + " expands to " +
                                                std::to_string(count) + " subelements; lower the scale");
    }
    for (std::uint64_t j = 1; j <= count; ++j) {
        const double u = scheme.uniform01(key(k, d, Role::U, j));
        if (u < best.u) best = {k, j, u};
    }
}

} // namespace

std::string_view algorithm_name(Algorithm algorithm) noexcept {
    switch (algorithm) {
    case Algorithm::MinHash: return "minhash";
    case Algorithm::Wmh: return "wmh";
    case Algorithm::Haeupler: return "haeupler";
    case Algorithm::Gollapudi: return "gollapudi";
    case Algorithm::Icws: return "icws";
    case Algorithm::Li2015: return "li2015";
    case Algorithm::Ccws: return "ccws";
    case Algorithm::I2cws: return "i2cws";
    }
    return "?";
}

Algorithm parse_algorithm(std::string_view name) {
    for (Algorithm a : kAllAlgorithms) {
        if (algorithm_name(a) == name) return a;
    }
    throw Error(Errc::UsageError, "unknown algorithm '" + std::string(name) + "'");
}

bool has_second_word(Algorithm algorithm) noexcept {
    switch (algorithm) {
    case Algorithm::Wmh:
    case Algorithm::Haeupler:
    case Algorithm::Icws:
    case Algorithm::Ccws:
    case Algorithm::I2cws: return true;
    default: return false;
    }
}

double algorithm_param(Algorithm algorithm, const SketchParams& params) noexcept {
    switch (algorithm) {
    case Algorithm::Wmh:
    case Algorithm::Haeupler: return params.quantization_scale;
    case Algorithm::Gollapudi: return params.threshold_max;
    default: return 0.0;
    }
}

namespace {

struct I2cwsHash {
    double log_a;
    double log_z;
};

I2cwsHash i2cws_hash(ElementId element, double weight, const VariateScheme& scheme, std::uint32_t d) {
    const double r2 = scheme.gamma21(key(element, d, Role::R2));
    const double beta2 = scheme.uniform01(key(element, d, Role::Beta2));
    const double c = scheme.gamma21(key(element, d, Role::C));
    // ln z_k = r2 (t2 - beta2 + 1): the first grid point above ln S_k.
    const double log_z = log_grid(std::log(weight), r2, beta2).point + r2;
    return {std::log(c) - log_z, log_z};
}

} // namespace

double i2cws_log_hash(ElementId element, double weight, const VariateScheme& scheme, std::uint32_t d) {
    return i2cws_hash(element, weight, scheme, d).log_a;
}

CwsDraw i2cws_draw(const SparseWeightedSet& set, const VariateScheme& scheme, std::uint32_t d) {
    require_nonempty(set);
    I2cwsHash best{kInf, 0.0};
    ElementId best_k = 0;
    double best_w = 0.0;
    for (const auto& [k, w] : set.entries()) {
        const I2cwsHash h = i2cws_hash(k, w, scheme, d);
        if (h.log_a < best.log_a) {
            best = h;
            best_k = k;
            best_w = w;
        }
    }
    // y is drawn for the winner only, from its own (r1, beta1) grid.
    const double r1 = scheme.gamma21(key(best_k, d, Role::R1));
    const double beta1 = scheme.uniform01(key(best_k, d, Role::Beta1));
    const double log_y = log_grid(std::log(best_w), r1, beta1).point;
    return {best_k, clamp_below(std::exp(log_y), best_w), std::max(std::exp(best.log_z), best_w),
            std::exp(best.log_a)};
}

CwsDraw icws_draw(const SparseWeightedSet& set, const VariateScheme& scheme, std::uint32_t d) {
    return icws_impl(set, scheme, d);
}

CwsDraw ccws_draw(const SparseWeightedSet& set, const VariateScheme& scheme, std::uint32_t d) {
    require_nonempty(set);
    CwsDraw best;
    double best_log_a = kInf;
    for (const auto& [k, w] : set.entries()) {
        const double r = scheme.gamma21(key(k, d, Role::R1));
        const double beta = scheme.uniform01(key(k, d, Role::Beta1));
        const double c = scheme.gamma21(key(k, d, Role::C));
        // Uniform grid on the weight itself rather than its logarithm.
        const double t = std::floor(w / r + beta);
        const double z = r * (t - beta + 1.0);
        const double log_a = std::log(c) - std::log(z);
        if (log_a < best_log_a) {
            best_log_a = log_a;
            double y = r * (t - beta);
            // t == 0 puts the grid point at or below zero; clamp into (0, S_k].
            if (y <= 0.0) y = std::numeric_limits<double>::denorm_min();
            if (y > w) y = w;
            best = {k, y, z, std::exp(log_a)};
        }
    }
    return best;
}

HashCode i2cws_sample(const SparseWeightedSet& set, const VariateScheme& scheme, std::uint32_t d) {
    const CwsDraw draw = i2cws_draw(set, scheme, d);
    return pair_code(draw.k_star, draw.y);
}

HashCode icws_sample(const SparseWeightedSet& set, const VariateScheme& scheme, std::uint32_t d) {
    const CwsDraw draw = icws_impl(set, scheme, d);
    return pair_code(draw.k_star, draw.y);
}

HashCode li2015_sample(const SparseWeightedSet& set, const VariateScheme& scheme, std::uint32_t d) {
    return index_code(icws_impl(set, scheme, d).k_star);
}

HashCode ccws_sample(const SparseWeightedSet& set, const VariateScheme& scheme, std::uint32_t d) {
    const CwsDraw draw = ccws_draw(set, scheme, d);
    return pair_code(draw.k_star, draw.y);
}

HashCode minhash_binary_sample(const SparseWeightedSet& set, const VariateScheme& scheme, std::uint32_t d) {
    require_nonempty(set);
    ElementId best_k = 0;
    double best_u = kInf;
    for (const auto& e : set.entries()) {
        const double u = scheme.uniform01(key(e.element, d, Role::U));
        if (u < best_u) {
            best_u = u;
            best_k = e.element;
        }
    }
    return index_code(best_k);
}

std::uint64_t quantized_count(double weight, double scale) {
    require_positive_scale(scale);
    const double x = std::floor(scale * weight);
    if (x >= 0x1.0p63) return std::numeric_limits<std::uint64_t>::max();
    return x > 0.0 ? static_cast<std::uint64_t>(x) : 0;
}

std::uint64_t rounded_count(ElementId element, double weight, const VariateScheme& scheme, std::uint32_t d,
                            double scale) {
    const std::uint64_t base = quantized_count(weight, scale);
    const double scaled = scale * weight;
    const double frac = scaled - std::floor(scaled);
    if (frac > 0.0 && scheme.uniform01(key(element, d, Role::Include)) < frac) return base + 1;
    return base;
}

HashCode wmh_quantize_sample(const SparseWeightedSet& set, const VariateScheme& scheme, std::uint32_t d,
                             double scale) {
    require_nonempty(set);
    require_positive_scale(scale);
    SubelementWinner best;
    for (const auto& [k, w] : set.entries()) {
        offer_subelements(best, k, quantized_count(w, scale), scheme, d);
    }
    if (best.k == kEmptyElement) {
        throw Error(Errc::DegenerateInput, "every weight quantizes to zero subelements");
    }
    return {best.k, best.j, true};
}

HashCode haeupler_sample(const SparseWeightedSet& set, const VariateScheme& scheme, std::uint32_t d,
                         double scale) {
    require_nonempty(set);
    require_positive_scale(scale);
    SubelementWinner best;
    for (const auto& [k, w] : set.entries()) {
        offer_subelements(best, k, rounded_count(k, w, scheme, d, scale), scheme, d);
    }
    if (best.k == kEmptyElement) {
        throw Error(Errc::DegenerateInput, "every weight rounds to zero subelements");
    }
    return {best.k, best.j, true};
}

bool threshold_active(ElementId element, double weight, const VariateScheme& scheme, std::uint32_t d,
                      double w_max) {
    if (!(w_max > 0.0) || !std::isfinite(w_max)) {
        throw Error(Errc::InvalidParameter, "threshold normalizer w_max must be positive");
    }
    return scheme.uniform01(key(element, d, Role::U)) <= weight / w_max;
}

HashCode gollapudi_threshold_sample(const SparseWeightedSet& set, const VariateScheme& scheme,
                                    std::uint32_t d, double w_max) {
    if (!(w_max > 0.0) || !std::isfinite(w_max)) {
        throw Error(Errc::InvalidParameter, "threshold normalizer w_max must be positive");
    }
    require_nonempty(set);
    ElementId best_k = kEmptyElement;
    double best_u = kInf;
    for (const auto& [k, w] : set.entries()) {
        if (!threshold_active(k, w, scheme, d, w_max)) continue;
        const double u = scheme.uniform01(key(k, d, Role::Rank));
        if (u < best_u) {
            best_u = u;
            best_k = k;
        }
    }
    return best_k == kEmptyElement ? empty_code() : index_code(best_k);
}

HashCode sample(const SparseWeightedSet& set, const VariateScheme& scheme, Algorithm algorithm,
                std::uint32_t d, const SketchParams& params) {
    switch (algorithm) {
    case Algorithm::MinHash: return minhash_binary_sample(set, scheme, d);
    case Algorithm::Wmh: return wmh_quantize_sample(set, scheme, d, params.quantization_scale);
    case Algorithm::Haeupler: return haeupler_sample(set, scheme, d, params.quantization_scale);
    case Algorithm::Gollapudi: return gollapudi_threshold_sample(set, scheme, d, params.threshold_max);
    case Algorithm::Icws: return icws_sample(set, scheme, d);
    case Algorithm::Li2015: return li2015_sample(set, scheme, d);
    case Algorithm::Ccws: return ccws_sample(set, scheme, d);
    case Algorithm::I2cws: return i2cws_sample(set, scheme, d);
    }
    throw Error(Errc::InvalidParameter, "unknown algorithm");
}

Fingerprint sketch(const SparseWeightedSet& set, const VariateScheme& scheme, Algorithm algorithm,
                   std::uint32_t length, const SketchParams& params) {
    if (length == 0) throw Error(Errc::InvalidParameter, "fingerprint length must be at least 1");
    if (length > scheme.sample_count()) {
        throw Error(Errc::OutOfRange, "fingerprint length " + std::to_string(length) +
                                          " exceeds the scheme's sample count " +
                                          std::to_string(scheme.sample_count()));
    }
    Fingerprint fp;
    fp.algorithm = algorithm;
    fp.seed = scheme.master_seed();
    fp.param = algorithm_param(algorithm, params);
    fp.doc_id = set.doc_id();
    fp.codes.reserve(length);
    for (std::uint32_t d = 0; d < length; ++d) {
        fp.codes.push_back(sample(set, scheme, algorithm, d, params));
    }
    return fp;
}

std::vector<Fingerprint> sketch_all(std::span<const SparseWeightedSet> docs, const VariateScheme& scheme,
                                    Algorithm algorithm, std::uint32_t length, const SketchParams& params) {
    std::vector<Fingerprint> out(docs.size());
    parallel_for(docs.size(), [&](std::size_t i) { out[i] = sketch(docs[i], scheme, algorithm, length, params); });
    return out;
}

} // namespace cws
