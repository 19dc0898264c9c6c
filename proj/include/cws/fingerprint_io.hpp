#pragma once

#include "cws/sketchers.hpp"
#include "cws/weighted_set.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace cws {

inline constexpr std::uint32_t kFingerprintFormatVersion = 1;

/// Binary fingerprint file, little-endian throughout:
///
///   "WJS1" | u32 version | u8 algorithm | u8 has_second_word | u16 0
///   | u32 length | u64 master_seed | f64 param | u64 corpus_digest
///   | u64 record_count | u64 header_checksum
///   then record_count records of u64 doc_id followed by `length` codes,
///   each u64 element id plus u64 second word when has_second_word,
///   then u64 payload_checksum.
struct FingerprintHeader {
    std::uint32_t version = kFingerprintFormatVersion;
    Algorithm algorithm = Algorithm::I2cws;
    std::uint32_t length = 0;
    std::uint64_t master_seed = 0;
    double param = 0.0;
    std::uint64_t corpus_digest = 0;
    std::uint64_t record_count = 0;

    friend bool operator==(const FingerprintHeader&, const FingerprintHeader&) = default;
};

struct FingerprintFile {
    FingerprintHeader header;
    std::vector<Fingerprint> records;

    friend bool operator==(const FingerprintFile&, const FingerprintFile&) = default;
};

/// 64-bit hash of the (doc_id, support) stream in doc_id order.
std::uint64_t corpus_digest(const Dataset& dataset);

/// Wraps fingerprints that all share algorithm, length, seed and parameter.
FingerprintFile make_fingerprint_file(std::vector<Fingerprint> records, std::uint64_t corpus_digest);

/// Throws IncomparableFingerprints if the headers disagree on anything that
/// affects collisions or on the corpus.
void require_comparable(const FingerprintHeader& a, const FingerprintHeader& b);

void write_fingerprints(std::ostream& out, const FingerprintFile& file);
void write_fingerprints(const std::filesystem::path& path, const FingerprintFile& file);

/// FormatError on bad magic or truncation, IncompatibleFormat on a version
/// mismatch, IntegrityError on a checksum mismatch.
FingerprintFile read_fingerprints(std::istream& in);
FingerprintFile read_fingerprints(const std::filesystem::path& path);

} // namespace cws
