#include "cws/weighted_set.hpp"

#include "cws/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cws {

const char* errc_name(Errc code) noexcept {
    switch (code) {
    case Errc::OutOfRange: return "out of range";
    case Errc::EmptyInput: return "empty input";
    case Errc::DegenerateInput: return "degenerate input";
    case Errc::InvalidParameter: return "invalid parameter";
    case Errc::UndefinedSimilarity: return "undefined similarity";
    case Errc::IncomparableFingerprints: return "incomparable fingerprints";
    case Errc::ParseError: return "parse error";
    case Errc::DomainError: return "domain error";
    case Errc::FormatError: return "format error";
    case Errc::IncompatibleFormat: return "incompatible format";
    case Errc::IntegrityError: return "integrity error";
    case Errc::IoError: return "io error";
    case Errc::UsageError: return "usage error";
    }
    return "error";
}

SparseWeightedSet::SparseWeightedSet(std::vector<WeightedEntry> entries, DocId doc_id) : doc_id_(doc_id) {
    std::sort(entries.begin(), entries.end(),
              [](const WeightedEntry& a, const WeightedEntry& b) { return a.element < b.element; });
    entries_.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        if (e.element == kEmptyElement) {
            throw Error(Errc::DomainError, "element id 2^64-1 is reserved");
        }
        if (i > 0 && entries[i - 1].element == e.element) {
            throw Error(Errc::DomainError, "duplicate element id " + std::to_string(e.element));
        }
        if (!std::isfinite(e.weight) || e.weight < 0.0) {
            throw Error(Errc::DomainError, "weight of element " + std::to_string(e.element) +
                                               " must be finite and nonnegative");
        }
        if (e.weight > 0.0) entries_.push_back(e);
    }
}

SparseWeightedSet SparseWeightedSet::from_sorted_unchecked(std::vector<WeightedEntry> entries, DocId doc_id) {
    SparseWeightedSet s;
    s.entries_ = std::move(entries);
    s.doc_id_ = doc_id;
    return s;
}

double SparseWeightedSet::weight(ElementId element) const noexcept {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), element,
                               [](const WeightedEntry& e, ElementId k) { return e.element < k; });
    return (it != entries_.end() && it->element == element) ? it->weight : 0.0;
}

double SparseWeightedSet::max_weight() const noexcept {
    double m = 0.0;
    for (const auto& e : entries_) m = std::max(m, e.weight);
    return m;
}

double SparseWeightedSet::total_weight() const noexcept {
    double s = 0.0;
    for (const auto& e : entries_) s += e.weight;
    return s;
}

SparseWeightedSet SparseWeightedSet::scaled(double factor) const {
    if (!(factor > 0.0) || !std::isfinite(factor)) {
        throw Error(Errc::InvalidParameter, "scale factor must be positive and finite");
    }
    auto out = entries_;
    for (auto& e : out) e.weight *= factor;
    return from_sorted_unchecked(std::move(out), doc_id_);
}

double Dataset::max_weight() const noexcept {
    double m = 0.0;
    for (const auto& d : docs) m = std::max(m, d.max_weight());
    return m;
}

} // namespace cws
