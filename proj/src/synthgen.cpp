#include "cws/synthgen.hpp"

#include "cws/error.hpp"
#include "cws/parallel.hpp"
#include "cws/variates.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace cws {

namespace {

// Floyd's algorithm: `count` distinct values from [0, universe), sorted.
std::vector<ElementId> sample_support(StreamRng& rng, std::size_t universe, std::size_t count) {
    std::unordered_set<ElementId> chosen;
    chosen.reserve(count * 2);
    for (std::size_t j = universe - count; j < universe; ++j) {
        const ElementId t = rng.below(j + 1);
        if (!chosen.insert(t).second) chosen.insert(j);
    }
    std::vector<ElementId> out(chosen.begin(), chosen.end());
    std::sort(out.begin(), out.end());
    return out;
}

void validate_shape(const SynthConfig& config) {
    if (config.doc_count == 0) throw Error(Errc::InvalidParameter, "doc_count must be positive");
    if (!(config.density > 0.0 && config.density <= 1.0)) {
        throw Error(Errc::InvalidParameter, "density must lie in (0, 1]");
    }
}

template <class WeightFn>
Dataset generate(const SynthConfig& config, WeightFn&& draw_weight) {
    const std::size_t m = support_size(config);
    Dataset out;
    out.docs.resize(config.doc_count);
    out.labels.assign(config.doc_count, "0");
    parallel_for(config.doc_count, [&](std::size_t doc) {
        StreamRng rng(derive_seed(config.gen_seed, doc));
        const auto support = sample_support(rng, config.feature_count, m);
        std::vector<WeightedEntry> entries;
        entries.reserve(m);
        for (ElementId k : support) entries.push_back({k, draw_weight(rng)});
        out.docs[doc] = SparseWeightedSet::from_sorted_unchecked(std::move(entries), doc);
    });
    return out;
}

} // namespace

SynthConfig desk_scale_uniform(std::uint64_t gen_seed) {
    SynthConfig c;
    c.doc_count = 200;
    c.feature_count = 5000;
    c.density = 0.05;
    c.law = UniformLaw{0.0, 1.0};
    c.gen_seed = gen_seed;
    return c;
}

std::size_t support_size(const SynthConfig& config) {
    const double expected = config.density * static_cast<double>(config.feature_count);
    if (expected < 1.0) {
        throw Error(Errc::DegenerateInput, "density * feature_count = " + std::to_string(expected) + " < 1");
    }
    return std::min(config.feature_count, static_cast<std::size_t>(std::ceil(expected)));
}

Dataset gen_uniform_corpus(const SynthConfig& config) {
    validate_shape(config);
    const auto* law = std::get_if<UniformLaw>(&config.law);
    if (!law) throw Error(Errc::InvalidParameter, "config does not carry a uniform law");
    const double lo = law->lo;
    const double hi = law->hi;
    if (!(lo >= 0.0) || !(hi >= lo) || !(hi > 0.0) || !std::isfinite(hi)) {
        throw Error(Errc::InvalidParameter, "uniform law needs 0 <= lo <= hi with hi > 0");
    }
    return generate(config, [lo, hi](StreamRng& rng) {
        const double u = rng.uniform01();
        return lo == hi ? lo : lo + (hi - lo) * u;
    });
}

Dataset gen_powerlaw_corpus(const SynthConfig& config) {
    validate_shape(config);
    const auto* law = std::get_if<PowerLaw>(&config.law);
    if (!law) throw Error(Errc::InvalidParameter, "config does not carry a power law");
    if (!(law->exponent > 1.0)) {
        throw Error(Errc::DomainError, "power-law exponent must exceed 1 for a finite mean");
    }
    if (!(law->scale > 0.0) || !std::isfinite(law->scale)) {
        throw Error(Errc::InvalidParameter, "power-law scale must be positive");
    }
    const double inv_shape = 1.0 / law->exponent;
    const double scale = law->scale;
    // Inverse CDF of Pareto(x_min = scale, alpha = exponent).
    return generate(config, [inv_shape, scale](StreamRng& rng) { return scale * std::pow(rng.uniform01(), -inv_shape); });
}

Dataset generate_corpus(const SynthConfig& config) {
    if (std::holds_alternative<UniformLaw>(config.law)) return gen_uniform_corpus(config);
    return gen_powerlaw_corpus(config);
}

Dataset gen_clustered_corpus(const ClusteredConfig& config) {
    if (config.topic_count == 0 || config.clusters_per_topic == 0 || config.docs_per_cluster == 0) {
        throw Error(Errc::InvalidParameter, "clustered corpus needs at least one topic, cluster and document");
    }
    if (config.support_per_topic == 0 || config.support_per_topic > config.feature_count) {
        throw Error(Errc::InvalidParameter, "topic support must lie in [1, feature_count]");
    }
    if (!(config.jitter >= 0.0 && config.jitter < 1.0)) {
        throw Error(Errc::InvalidParameter, "jitter must lie in [0, 1)");
    }
    const std::size_t total = config.topic_count * config.clusters_per_topic * config.docs_per_cluster;

    // Generated document g lands in output slot slot_of[g].
    std::vector<std::size_t> slot_of(total);
    std::iota(slot_of.begin(), slot_of.end(), std::size_t{0});
    StreamRng shuffle_rng(derive_seed(config.gen_seed, 0x5348554646ULL));
    for (std::size_t i = total; i > 1; --i) std::swap(slot_of[i - 1], slot_of[shuffle_rng.below(i)]);

    Dataset out;
    out.docs.resize(total);
    out.labels.resize(total);
    std::size_t generated = 0;
    for (std::size_t topic = 0; topic < config.topic_count; ++topic) {
        StreamRng topic_rng(derive_seed(config.gen_seed, 0x544f504943000000ULL + topic));
        const auto support = sample_support(topic_rng, config.feature_count, config.support_per_topic);
        for (std::size_t cluster = 0; cluster < config.clusters_per_topic; ++cluster) {
            std::vector<double> center(support.size());
            for (double& c : center) c = topic_rng.uniform01();
            for (std::size_t member = 0; member < config.docs_per_cluster; ++member) {
                StreamRng doc_rng(derive_seed(config.gen_seed, generated));
                std::vector<WeightedEntry> entries(support.size());
                for (std::size_t i = 0; i < support.size(); ++i) {
                    const double factor = 1.0 + config.jitter * (2.0 * doc_rng.uniform01() - 1.0);
                    entries[i] = {support[i], center[i] * factor};
                }
                const std::size_t slot = slot_of[generated];
                out.docs[slot] = SparseWeightedSet::from_sorted_unchecked(std::move(entries), slot);
                out.labels[slot] = std::to_string(topic) + "-" + std::to_string(cluster);
                ++generated;
            }
        }
    }
    return out;
}

double average_feature_std(const Dataset& dataset) {
    struct Moments {
        std::size_t n = 0;
        double mean = 0.0;
        double m2 = 0.0;
    };
    std::unordered_map<ElementId, Moments> per_feature;
    for (const auto& doc : dataset.docs) {
        for (const auto& [k, w] : doc.entries()) {
            Moments& m = per_feature[k];
            ++m.n;
            const double delta = w - m.mean;
            m.mean += delta / static_cast<double>(m.n);
            m.m2 += delta * (w - m.mean);
        }
    }
    // Sum in feature order so the result does not depend on hash-map iteration.
    std::vector<std::pair<ElementId, double>> stds;
    for (const auto& [k, m] : per_feature) {
        if (m.n >= 2) stds.emplace_back(k, std::sqrt(m.m2 / static_cast<double>(m.n)));
    }
    if (stds.empty()) return 0.0;
    std::sort(stds.begin(), stds.end());
    double total = 0.0;
    for (const auto& [k, s] : stds) total += s;
    return total / static_cast<double>(stds.size());
}

} // namespace cws
