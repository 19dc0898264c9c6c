#pragma once

#include "cws/sketchers.hpp"
#include "cws/weighted_set.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace cws {

struct RetrievalResult {
    DocId query_id = 0;
    /// Database ids by estimated similarity, descending; ties by ascending id.
    std::vector<DocId> ranked_ids;
    std::vector<double> scores;
    std::size_t k = 0;
    /// Set when fewer than k candidates were available.
    bool truncated = false;
};

/// Brute-force top-k over fingerprints. A database entry with the query's
/// own doc id is skipped.
RetrievalResult topk(const Fingerprint& query, std::span<const Fingerprint> db, std::size_t k);

/// Ground truth: the k database sets with the highest generalized Jaccard
/// similarity to `query`, ties by ascending id, the query itself excluded.
std::vector<DocId> exact_topk(const SparseWeightedSet& query, std::span<const SparseWeightedSet> db, std::size_t k);

/// |retrieved[:k] ∩ relevant| / k.
double precision_at_k(std::span<const DocId> retrieved, std::span<const DocId> relevant, std::size_t k);
double precision_at_k(const RetrievalResult& result, std::span<const DocId> relevant);

/// Average precision truncated at k, normalized by min(k, |relevant|).
double average_precision_at_k(std::span<const DocId> retrieved, std::span<const DocId> relevant, std::size_t k);

/// Mean of average_precision_at_k over queries.
double map_at_k(std::span<const std::vector<DocId>> retrieved, std::span<const std::vector<DocId>> relevant,
                std::size_t k);
double map_at_k(std::span<const RetrievalResult> results, std::span<const std::vector<DocId>> relevant);

struct RetrievalConfig {
    Algorithm algorithm = Algorithm::I2cws;
    std::uint32_t length = 512;
    std::vector<std::size_t> k_values{1, 20, 50, 100, 500, 1000};
    /// The first query_count documents act as queries against the whole corpus.
    std::size_t query_count = 20;
    std::uint64_t scheme_seed = 1;
    SketchParams params;
};

struct RetrievalRow {
    Algorithm algorithm = Algorithm::I2cws;
    std::uint32_t length = 0;
    /// Requested K; scores use min(K, corpus size - 1).
    std::size_t k = 0;
    double precision = 0.0;
    double map = 0.0;
    double wall_ms = 0.0;
};

/// Exact top-K lists for the first `query_count` documents, one per K in `k_values`.
struct GroundTruth {
    std::vector<std::size_t> k_values;
    /// truth[ki][q] is the exact top-k_values[ki] list of query q.
    std::vector<std::vector<std::vector<DocId>>> truth;
};

GroundTruth exact_ground_truth(const Dataset& dataset, std::size_t query_count, std::span<const std::size_t> k_values);

/// One row per K. `truth` must come from exact_ground_truth with the same
/// queries and K list.
std::vector<RetrievalRow> retrieval_experiment(const Dataset& dataset, const RetrievalConfig& config,
                                               const GroundTruth& truth);

} // namespace cws
