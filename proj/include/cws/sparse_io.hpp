#pragma once

#include "cws/weighted_set.hpp"

#include <filesystem>
#include <iosfwd>

namespace cws {

/// Reads the whitespace-separated "label idx:val idx:val ..." format with
/// 1-based indices; elements are stored 0-based. Text after '#' is ignored.
/// Blank or label-only lines are skipped and noted in Dataset::warnings.
/// Zero weights are dropped. Documents get sequential ids from 0.
Dataset parse_sparse(std::istream& in);
Dataset parse_sparse_file(const std::filesystem::path& path);

/// Writes the same format; empty labels are written as "0". Weights use the
/// shortest representation that round-trips.
void write_sparse(std::ostream& out, const Dataset& dataset);
void write_sparse_file(const std::filesystem::path& path, const Dataset& dataset);

} // namespace cws
