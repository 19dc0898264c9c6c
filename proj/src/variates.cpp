#include "cws/variates.hpp"

#include "cws/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace cws {

namespace {

constexpr std::uint64_t kSeedSalt = 0xa0761d6478bd642fULL;
constexpr std::uint64_t kSampleMul = 0xe7037ed1a0b428dbULL;
constexpr std::uint64_t kSubMul = 0x8ebc6af09c88c6e3ULL;
constexpr std::uint64_t kCounterMul = 0x9e3779b97f4a7c15ULL;

// uniform01 reads counter 0; the two gamma components read counters 1 and 2.
constexpr std::uint32_t kUniformCounter = 0;
constexpr std::uint32_t kGammaCounterA = 1;
constexpr std::uint32_t kGammaCounterB = 2;

} // namespace

const char* role_name(Role role) noexcept {
    switch (role) {
    case Role::R1: return "R1";
    case Role::R2: return "R2";
    case Role::Beta1: return "Beta1";
    case Role::Beta2: return "Beta2";
    case Role::C: return "C";
    case Role::U: return "U";
    case Role::Rank: return "Rank";
    case Role::Include: return "Include";
    }
    return "?";
}

double bits_to_open_unit(std::uint64_t bits) noexcept {
    const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
    return u == 0.0 ? std::numeric_limits<double>::denorm_min() : u;
}

VariatePins& VariatePins::uniform(const VariateKey& key, double value) {
    uniforms_[key] = value;
    return *this;
}

VariatePins& VariatePins::gamma_components(const VariateKey& key, double u_a, double u_b) {
    components_[key] = {u_a, u_b};
    return *this;
}

VariatePins& VariatePins::gamma(const VariateKey& key, double value) {
    gammas_[key] = value;
    return *this;
}

const double* VariatePins::find_uniform(const VariateKey& key) const {
    auto it = uniforms_.find(key);
    return it == uniforms_.end() ? nullptr : &it->second;
}

const std::pair<double, double>* VariatePins::find_gamma_components(const VariateKey& key) const {
    auto it = components_.find(key);
    return it == components_.end() ? nullptr : &it->second;
}

const double* VariatePins::find_gamma(const VariateKey& key) const {
    auto it = gammas_.find(key);
    return it == gammas_.end() ? nullptr : &it->second;
}

VariateScheme::VariateScheme(std::uint64_t master_seed, std::uint32_t sample_count)
    : seed_(master_seed), seed_state_(mix64(master_seed ^ kSeedSalt)), sample_count_(sample_count) {
    if (sample_count == 0) {
        throw Error(Errc::InvalidParameter, "variate scheme needs at least one sample index");
    }
}

VariateScheme::VariateScheme(std::uint64_t master_seed, std::uint32_t sample_count, VariatePins pins)
    : VariateScheme(master_seed, sample_count) {
    if (!pins.empty()) {
        pins_ = std::make_shared<const VariatePins>(std::move(pins));
    }
}

void VariateScheme::check(const VariateKey& key) const {
    if (key.sample >= sample_count_) {
        throw Error(Errc::OutOfRange, "sample index " + std::to_string(key.sample) +
                                          " >= sample count " + std::to_string(sample_count_));
    }
    if (static_cast<int>(key.role) >= kRoleCount) {
        throw Error(Errc::OutOfRange, "unknown variate role");
    }
}

std::uint64_t VariateScheme::stream_state(const VariateKey& key) const noexcept {
    std::uint64_t s = mix64(seed_state_ ^ key.element);
    s = mix64(s + ((static_cast<std::uint64_t>(key.sample) << 8) | static_cast<std::uint8_t>(key.role)) * kSampleMul);
    if (key.sub != 0) {
        s = mix64(s ^ (key.sub * kSubMul));
    }
    return s;
}

std::uint64_t VariateScheme::raw_bits(const VariateKey& key, std::uint32_t counter) const {
    check(key);
    return mix64(stream_state(key) + (static_cast<std::uint64_t>(counter) + 1) * kCounterMul);
}

double VariateScheme::uniform01(const VariateKey& key) const {
    check(key);
    if (pins_) {
        if (const double* v = pins_->find_uniform(key)) return *v;
    }
    return bits_to_open_unit(mix64(stream_state(key) + (kUniformCounter + 1) * kCounterMul));
}

double VariateScheme::gamma21(const VariateKey& key) const {
    check(key);
    if (pins_) {
        if (const double* v = pins_->find_gamma(key)) return *v;
        if (const auto* c = pins_->find_gamma_components(key)) {
            return -std::log(c->first * c->second);
        }
    }
    const std::uint64_t s = stream_state(key);
    const double u_a = bits_to_open_unit(mix64(s + (kGammaCounterA + 1) * kCounterMul));
    const double u_b = bits_to_open_unit(mix64(s + (kGammaCounterB + 1) * kCounterMul));
    // One log of the product is enough unless a uniform sits at the
    // subnormal floor, where the product would underflow.
    const double product = u_a * u_b;
    if (product >= std::numeric_limits<double>::min()) return -std::log(product);
    return -(std::log(u_a) + std::log(u_b));
}

double VariateScheme::uniform_power(const VariateKey& key_r, const VariateKey& key_b) const {
    if (key_r.role == key_b.role) {
        throw Error(Errc::InvalidParameter, "uniform_power needs keys with distinct roles");
    }
    const double r = gamma21(key_r);
    const double b = uniform01(key_b);
    const double v = std::exp(-r * b);
    if (v >= 1.0) return std::nextafter(1.0, 0.0);
    if (v <= 0.0) return std::numeric_limits<double>::denorm_min();
    return v;
}

std::uint64_t StreamRng::below(std::uint64_t bound) noexcept {
    // Lemire's nearly-divisionless method.
    std::uint64_t x = next();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            x = next();
            m = static_cast<__uint128_t>(x) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

} // namespace cws
