#include "cws/retrieval.hpp"

#include "cws/error.hpp"
#include "cws/parallel.hpp"
#include "cws/similarity.hpp"
#include "cws/stats.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <unordered_set>

namespace cws {

namespace {

struct Scored {
    DocId id;
    double score;
};

std::vector<DocId> take_top(std::vector<Scored>& scored, std::size_t k) {
    const std::size_t n = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n), scored.end(),
                      [](const Scored& a, const Scored& b) { return a.score > b.score || (a.score == b.score && a.id < b.id); });
    std::vector<DocId> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = scored[i].id;
    return ids;
}

} // namespace

RetrievalResult topk(const Fingerprint& query, std::span<const Fingerprint> db, std::size_t k) {
    std::vector<Scored> scored;
    scored.reserve(db.size());
    for (const auto& fp : db) {
        if (fp.doc_id == query.doc_id) continue;
        scored.push_back({fp.doc_id, estimate_similarity(query, fp)});
    }
    RetrievalResult out;
    out.query_id = query.doc_id;
    out.k = k;
    out.truncated = scored.size() < k;
    out.ranked_ids = take_top(scored, k);
    out.scores.resize(out.ranked_ids.size());
    for (std::size_t i = 0; i < out.ranked_ids.size(); ++i) out.scores[i] = scored[i].score;
    return out;
}

std::vector<DocId> exact_topk(const SparseWeightedSet& query, std::span<const SparseWeightedSet> db, std::size_t k) {
    std::vector<Scored> scored;
    scored.reserve(db.size());
    for (const auto& doc : db) {
        if (doc.doc_id() == query.doc_id()) continue;
        scored.push_back({doc.doc_id(), generalized_jaccard(query, doc)});
    }
    return take_top(scored, k);
}

double precision_at_k(std::span<const DocId> retrieved, std::span<const DocId> relevant, std::size_t k) {
    if (k == 0) throw Error(Errc::InvalidParameter, "precision@0 is undefined");
    const std::unordered_set<DocId> rel(relevant.begin(), relevant.end());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < std::min(k, retrieved.size()); ++i) {
        if (rel.contains(retrieved[i])) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(k);
}

double precision_at_k(const RetrievalResult& result, std::span<const DocId> relevant) {
    return precision_at_k(result.ranked_ids, relevant, result.k);
}

double average_precision_at_k(std::span<const DocId> retrieved, std::span<const DocId> relevant, std::size_t k) {
    if (k == 0) throw Error(Errc::InvalidParameter, "AP@0 is undefined");
    if (relevant.empty()) return 0.0;
    const std::unordered_set<DocId> rel(relevant.begin(), relevant.end());
    std::size_t hits = 0;
    double sum = 0.0;
    for (std::size_t i = 0; i < std::min(k, retrieved.size()); ++i) {
        if (rel.contains(retrieved[i])) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(i + 1);
        }
    }
    return sum / static_cast<double>(std::min(k, relevant.size()));
}

double map_at_k(std::span<const std::vector<DocId>> retrieved, std::span<const std::vector<DocId>> relevant,
                std::size_t k) {
    if (retrieved.size() != relevant.size()) {
        throw Error(Errc::InvalidParameter, "one relevance list per query required");
    }
    if (retrieved.empty()) return 0.0;
    stats::CompensatedSum s;
    for (std::size_t q = 0; q < retrieved.size(); ++q) s.add(average_precision_at_k(retrieved[q], relevant[q], k));
    return s.value() / static_cast<double>(retrieved.size());
}

double map_at_k(std::span<const RetrievalResult> results, std::span<const std::vector<DocId>> relevant) {
    if (results.size() != relevant.size()) {
        throw Error(Errc::InvalidParameter, "one relevance list per query required");
    }
    if (results.empty()) return 0.0;
    stats::CompensatedSum s;
    for (std::size_t q = 0; q < results.size(); ++q) {
        s.add(average_precision_at_k(results[q].ranked_ids, relevant[q], results[q].k));
    }
    return s.value() / static_cast<double>(results.size());
}

namespace {

void validate_queries(const Dataset& dataset, std::size_t query_count, std::span<const std::size_t> k_values) {
    if (dataset.size() < 2) throw Error(Errc::InvalidParameter, "retrieval needs at least two documents");
    if (query_count == 0 || query_count > dataset.size()) {
        throw Error(Errc::InvalidParameter, "query count must lie in [1, corpus size]");
    }
    if (k_values.empty()) throw Error(Errc::InvalidParameter, "no K values requested");
    for (std::size_t k : k_values) {
        if (k == 0) throw Error(Errc::InvalidParameter, "K must be positive");
    }
}

std::size_t effective_k(std::size_t k, const Dataset& dataset) { return std::min(k, dataset.size() - 1); }

} // namespace

GroundTruth exact_ground_truth(const Dataset& dataset, std::size_t query_count, std::span<const std::size_t> k_values) {
    validate_queries(dataset, query_count, k_values);
    const std::size_t max_k = effective_k(*std::max_element(k_values.begin(), k_values.end()), dataset);
    std::vector<std::vector<DocId>> full(query_count);
    parallel_for(query_count, [&](std::size_t q) { full[q] = exact_topk(dataset.docs[q], dataset.docs, max_k); });

    GroundTruth gt;
    gt.k_values.assign(k_values.begin(), k_values.end());
    gt.truth.resize(k_values.size());
    for (std::size_t ki = 0; ki < k_values.size(); ++ki) {
        const std::size_t k = effective_k(k_values[ki], dataset);
        gt.truth[ki].resize(query_count);
        for (std::size_t q = 0; q < query_count; ++q) {
            gt.truth[ki][q].assign(full[q].begin(), full[q].begin() + static_cast<std::ptrdiff_t>(k));
        }
    }
    return gt;
}

std::vector<RetrievalRow> retrieval_experiment(const Dataset& dataset, const RetrievalConfig& config,
                                               const GroundTruth& truth) {
    validate_queries(dataset, config.query_count, config.k_values);
    if (truth.k_values != config.k_values || truth.truth.empty() || truth.truth.front().size() != config.query_count) {
        throw Error(Errc::InvalidParameter, "ground truth does not match the retrieval configuration");
    }
    SketchParams params = config.params;
    if (config.algorithm == Algorithm::Gollapudi && params.threshold_max <= 0.0) {
        params.threshold_max = dataset.max_weight();
    }
    const auto start = std::chrono::steady_clock::now();
    const VariateScheme scheme(config.scheme_seed, config.length);
    const auto fps = sketch_all(dataset.docs, scheme, config.algorithm, config.length, params);

    const std::size_t max_k =
        effective_k(*std::max_element(config.k_values.begin(), config.k_values.end()), dataset);
    std::vector<RetrievalResult> ranked(config.query_count);
    parallel_for(config.query_count, [&](std::size_t q) { ranked[q] = topk(fps[q], fps, max_k); });
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    std::vector<RetrievalRow> rows;
    for (std::size_t ki = 0; ki < config.k_values.size(); ++ki) {
        const std::size_t k = effective_k(config.k_values[ki], dataset);
        stats::CompensatedSum precision;
        stats::CompensatedSum ap;
        for (std::size_t q = 0; q < config.query_count; ++q) {
            precision.add(precision_at_k(ranked[q].ranked_ids, truth.truth[ki][q], k));
            ap.add(average_precision_at_k(ranked[q].ranked_ids, truth.truth[ki][q], k));
        }
        const double queries = static_cast<double>(config.query_count);
        rows.push_back({config.algorithm, config.length, config.k_values[ki], precision.value() / queries,
                        ap.value() / queries, wall_ms});
    }
    return rows;
}

} // namespace cws
