#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <tuple>

namespace cws {

/// Which random symbol of a sampler a variate stands for.
///
/// R1/R2/C are Gamma(2,1) draws, Beta1/Beta2 are the grid offsets, U is the
/// plain per-element uniform used by the Min-Hash family. Rank and Include
/// are the extra uniforms of the threshold and probabilistic-rounding
/// samplers.
enum class Role : std::uint8_t { R1, R2, Beta1, Beta2, C, U, Rank, Include };

inline constexpr int kRoleCount = 8;

const char* role_name(Role role) noexcept;

struct VariateKey {
    std::uint64_t element = 0;
    std::uint32_t sample = 0;
    Role role = Role::U;
    /// Subelement index; only the quantizing samplers use a nonzero value.
    std::uint64_t sub = 0;

    friend bool operator==(const VariateKey&, const VariateKey&) = default;
    friend auto operator<=>(const VariateKey& a, const VariateKey& b) {
        return std::tie(a.element, a.sample, a.role, a.sub) <=>
               std::tie(b.element, b.sample, b.role, b.sub);
    }
};

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Maps 64 random bits to a double in (0,1). An exact zero becomes the
/// smallest positive subnormal; the top of the range is 1 - 2^-53.
double bits_to_open_unit(std::uint64_t bits) noexcept;

/// Test-only overrides for individual variates. Pinned values bypass the
/// generator entirely, so they may sit outside the natural support.
class VariatePins {
  public:
    VariatePins& uniform(const VariateKey& key, double value);
    /// Pins the two uniforms whose product feeds -ln(u_a u_b).
    VariatePins& gamma_components(const VariateKey& key, double u_a, double u_b);
    VariatePins& gamma(const VariateKey& key, double value);

    const double* find_uniform(const VariateKey& key) const;
    const std::pair<double, double>* find_gamma_components(const VariateKey& key) const;
    const double* find_gamma(const VariateKey& key) const;

    bool empty() const noexcept {
        return uniforms_.empty() && components_.empty() && gammas_.empty();
    }

  private:
    std::map<VariateKey, double> uniforms_;
    std::map<VariateKey, std::pair<double, double>> components_;
    std::map<VariateKey, double> gammas_;
};

/// Deterministic source of every random variable the samplers consume.
///
/// Each variate is a pure function of (master_seed, key): the key is hashed
/// into a per-key stream state and the stream is read at a fixed counter, so
/// the same element sees the same variates in every document and every run.
/// Instances are immutable and may be shared across threads.
class VariateScheme {
  public:
    VariateScheme(std::uint64_t master_seed, std::uint32_t sample_count);
    VariateScheme(std::uint64_t master_seed, std::uint32_t sample_count, VariatePins pins);

    std::uint64_t master_seed() const noexcept { return seed_; }
    std::uint32_t sample_count() const noexcept { return sample_count_; }

    /// Uniform(0,1), open at both ends.
    double uniform01(const VariateKey& key) const;

    /// Gamma(2,1) as -ln(u_a u_b) for two independent uniforms of the key.
    double gamma21(const VariateKey& key) const;

    /// exp(-r)^b with r = gamma21(key_r) and b = uniform01(key_b); marginally
    /// Uniform(0,1). Clamped into the open unit interval.
    double uniform_power(const VariateKey& key_r, const VariateKey& key_b) const;

    /// Raw 64-bit output of the key's stream at `counter`.
    std::uint64_t raw_bits(const VariateKey& key, std::uint32_t counter) const;

  private:
    void check(const VariateKey& key) const;
    std::uint64_t stream_state(const VariateKey& key) const noexcept;

    std::uint64_t seed_;
    std::uint64_t seed_state_;
    std::uint32_t sample_count_;
    std::shared_ptr<const VariatePins> pins_;
};

/// Sequential splitmix64 stream for data generation and seeded shuffles.
/// Not used by the samplers.
class StreamRng {
  public:
    explicit StreamRng(std::uint64_t seed) noexcept : state_(mix64(seed ^ 0x6a09e667f3bcc909ULL)) {}

    std::uint64_t next() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    /// Uniform(0,1), open at both ends.
    double uniform01() noexcept { return bits_to_open_unit(next()); }

    /// Unbiased integer in [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound) noexcept;

  private:
    std::uint64_t state_;
};

/// Derives an independent seed from a parent seed and a label.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t label) noexcept {
    return mix64(mix64(parent ^ 0x3c6ef372fe94f82bULL) + label * 0x9e3779b97f4a7c15ULL);
}

} // namespace cws
