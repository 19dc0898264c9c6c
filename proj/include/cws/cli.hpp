#pragma once

#include "cws/retrieval.hpp"
#include "cws/similarity.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace cws {

/// Runs one `cws` invocation. `args` excludes the program name. Returns the
/// process exit code: 0 on success, 1 on a failed property suite or runtime
/// error, 2 on a usage error.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// CSV header line plus one line per row; wall_ms is written as 0 when
/// `timing` is false so reruns are byte-identical.
void write_mse_csv(std::ostream& out, const std::vector<MseRow>& rows, bool timing);
void write_retrieval_csv(std::ostream& out, const std::vector<RetrievalRow>& rows, bool timing);

} // namespace cws
