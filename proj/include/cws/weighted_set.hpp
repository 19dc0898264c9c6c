#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cws {

using ElementId = std::uint64_t;
using DocId = std::uint64_t;

/// Reserved; never a valid element id. Marks the empty threshold-sampling outcome.
inline constexpr ElementId kEmptyElement = std::numeric_limits<ElementId>::max();

struct WeightedEntry {
    ElementId element;
    double weight;

    friend bool operator==(const WeightedEntry&, const WeightedEntry&) = default;
};

/// A document as a sparse map element -> positive weight, sorted by element id.
///
/// Zero weights are dropped on construction, so every stored weight is
/// strictly positive. Construction rejects duplicate ids, negative or
/// non-finite weights, and the reserved id.
class SparseWeightedSet {
  public:
    SparseWeightedSet() = default;
    explicit SparseWeightedSet(std::vector<WeightedEntry> entries, DocId doc_id = 0);

    /// Builds from entries already known to be sorted, unique and positive.
    static SparseWeightedSet from_sorted_unchecked(std::vector<WeightedEntry> entries, DocId doc_id);

    std::span<const WeightedEntry> entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    DocId doc_id() const noexcept { return doc_id_; }
    void set_doc_id(DocId id) noexcept { doc_id_ = id; }

    /// Weight of `element`, 0 when absent.
    double weight(ElementId element) const noexcept;
    double max_weight() const noexcept;
    double total_weight() const noexcept;

    /// Copy with every weight multiplied by `factor` (> 0).
    SparseWeightedSet scaled(double factor) const;

    friend bool operator==(const SparseWeightedSet&, const SparseWeightedSet&) = default;

  private:
    std::vector<WeightedEntry> entries_;
    DocId doc_id_ = 0;
};

struct Dataset {
    std::vector<SparseWeightedSet> docs;
    /// One label per document; empty strings for unlabeled corpora.
    std::vector<std::string> labels;
    /// Lines skipped while parsing (empty lines), as human-readable notes.
    std::vector<std::string> warnings;

    std::size_t size() const noexcept { return docs.size(); }
    double max_weight() const noexcept;
};

} // namespace cws
