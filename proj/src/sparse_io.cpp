#include "cws/sparse_io.hpp"

#include "cws/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

namespace cws {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::vector<std::string_view> split_tokens(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_space(line[i])) ++i;
        const std::size_t start = i;
        while (i < line.size() && !is_space(line[i])) ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

WeightedEntry parse_feature(std::string_view token, std::size_t line_no) {
    const auto colon = token.find(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 == token.size()) {
        throw ParseError(line_no, "malformed feature '" + std::string(token) + "', expected idx:val");
    }
    const std::string_view idx_text = token.substr(0, colon);
    const std::string_view val_text = token.substr(colon + 1);

    std::uint64_t index = 0;
    auto [idx_end, idx_ec] = std::from_chars(idx_text.data(), idx_text.data() + idx_text.size(), index);
    if (idx_ec != std::errc{} || idx_end != idx_text.data() + idx_text.size()) {
        throw ParseError(line_no, "bad feature index '" + std::string(idx_text) + "'");
    }
    if (index == 0) throw ParseError(line_no, "feature indices are 1-based; got 0");

    double value = 0.0;
    auto [val_end, val_ec] = std::from_chars(val_text.data(), val_text.data() + val_text.size(), value);
    if (val_ec != std::errc{} || val_end != val_text.data() + val_text.size() || !std::isfinite(value)) {
        throw ParseError(line_no, "bad feature value '" + std::string(val_text) + "'");
    }
    if (value < 0.0) {
        throw Error(Errc::DomainError,
                    "line " + std::to_string(line_no) + ": negative weight " + std::string(val_text));
    }
    return {index - 1, value};
}

} // namespace

Dataset parse_sparse(std::istream& in) {
    Dataset out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        bool commented = false;
        if (const auto hash = view.find('#'); hash != std::string_view::npos) {
            view = view.substr(0, hash);
            commented = true;
        }
        const auto tokens = split_tokens(view);
        // Pure comment lines are not documents; no warning.
        if (tokens.empty() && commented) continue;

        std::size_t first_feature = 0;
        std::string label;
        if (!tokens.empty() && tokens[0].find(':') == std::string_view::npos) {
            label = std::string(tokens[0]);
            first_feature = 1;
        }
        std::vector<WeightedEntry> entries;
        entries.reserve(tokens.size());
        for (std::size_t t = first_feature; t < tokens.size(); ++t) entries.push_back(parse_feature(tokens[t], line_no));

        std::sort(entries.begin(), entries.end(),
                  [](const WeightedEntry& a, const WeightedEntry& b) { return a.element < b.element; });
        for (std::size_t i = 1; i < entries.size(); ++i) {
            if (entries[i].element == entries[i - 1].element) {
                throw ParseError(line_no, "duplicate feature index " + std::to_string(entries[i].element + 1));
            }
        }
        SparseWeightedSet set(std::move(entries), out.docs.size());
        if (set.empty()) {
            out.warnings.push_back("line " + std::to_string(line_no) + ": no positive weights, skipped");
            continue;
        }
        out.docs.push_back(std::move(set));
        out.labels.push_back(std::move(label));
    }
    return out;
}

Dataset parse_sparse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
    return parse_sparse(in);
}

void write_sparse(std::ostream& out, const Dataset& dataset) {
    fmt::memory_buffer buf;
    for (std::size_t i = 0; i < dataset.docs.size(); ++i) {
        buf.clear();
        const std::string& label = i < dataset.labels.size() && !dataset.labels[i].empty() ? dataset.labels[i] : "0";
        fmt::format_to(std::back_inserter(buf), "{}", label);
        for (const auto& [k, w] : dataset.docs[i].entries()) {
            fmt::format_to(std::back_inserter(buf), " {}:{}", k + 1, w);
        }
        buf.push_back('\n');
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
}

void write_sparse_file(const std::filesystem::path& path, const Dataset& dataset) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
    write_sparse(out, dataset);
    if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
}

} // namespace cws
