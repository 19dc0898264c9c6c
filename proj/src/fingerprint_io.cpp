#include "cws/fingerprint_io.hpp"

#include "cws/error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace cws {

namespace {

constexpr std::array<char, 4> kMagic{'W', 'J', 'S', '1'};

// FNV-1a over bytes, finalized with mix64.
class Checksum {
  public:
    void add(const std::uint8_t* data, std::size_t n) noexcept {
        for (std::size_t i = 0; i < n; ++i) {
            state_ ^= data[i];
            state_ *= 0x100000001b3ULL;
        }
    }
    std::uint64_t value() const noexcept { return mix64(state_); }

  private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

class ByteWriter {
  public:
    void u8(std::uint8_t v) { bytes_.push_back(v); }
    void u16(std::uint16_t v) { put(v, 2); }
    void u32(std::uint32_t v) { put(v, 4); }
    void u64(std::uint64_t v) { put(v, 8); }
    void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
    void raw(const char* p, std::size_t n) { bytes_.insert(bytes_.end(), p, p + n); }

    const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }
    void clear() noexcept { bytes_.clear(); }

  private:
    void put(std::uint64_t v, int n) {
        for (int i = 0; i < n; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    std::vector<std::uint8_t> bytes_;
};

class ByteReader {
  public:
    explicit ByteReader(std::istream& in) : in_(in) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
    std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
    std::uint64_t u64() { return get(8); }
    double f64() { return std::bit_cast<double>(get(8)); }
    void raw(char* p, std::size_t n) {
        if (!in_.read(p, static_cast<std::streamsize>(n))) throw Error(Errc::FormatError, "truncated fingerprint file");
        checksum_.add(reinterpret_cast<const std::uint8_t*>(p), n);
    }

    /// Checksum of everything read since the last reset.
    std::uint64_t checksum() const noexcept { return checksum_.value(); }
    void reset_checksum() noexcept { checksum_ = Checksum{}; }

  private:
    std::uint64_t get(int n) {
        std::array<std::uint8_t, 8> buf{};
        if (!in_.read(reinterpret_cast<char*>(buf.data()), n)) {
            throw Error(Errc::FormatError, "truncated fingerprint file");
        }
        checksum_.add(buf.data(), static_cast<std::size_t>(n));
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
        return v;
    }

    std::istream& in_;
    Checksum checksum_;
};

std::uint64_t checksum_of(const std::vector<std::uint8_t>& bytes) {
    Checksum c;
    c.add(bytes.data(), bytes.size());
    return c.value();
}

void flush(std::ostream& out, const ByteWriter& w) {
    out.write(reinterpret_cast<const char*>(w.bytes().data()), static_cast<std::streamsize>(w.bytes().size()));
}

} // namespace

std::uint64_t corpus_digest(const Dataset& dataset) {
    std::vector<const SparseWeightedSet*> docs;
    docs.reserve(dataset.docs.size());
    for (const auto& d : dataset.docs) docs.push_back(&d);
    std::stable_sort(docs.begin(), docs.end(),
                     [](const SparseWeightedSet* a, const SparseWeightedSet* b) { return a->doc_id() < b->doc_id(); });
    ByteWriter w;
    Checksum c;
    for (const auto* d : docs) {
        w.clear();
        w.u64(d->doc_id());
        w.u64(d->size());
        for (const auto& e : d->entries()) w.u64(e.element);
        c.add(w.bytes().data(), w.bytes().size());
    }
    return c.value();
}

FingerprintFile make_fingerprint_file(std::vector<Fingerprint> records, std::uint64_t digest) {
    FingerprintFile file;
    if (!records.empty()) {
        const Fingerprint& first = records.front();
        for (const auto& r : records) {
            if (r.algorithm != first.algorithm || r.seed != first.seed || r.param != first.param ||
                r.codes.size() != first.codes.size()) {
                throw Error(Errc::IncomparableFingerprints, "fingerprint file records must share one configuration");
            }
        }
        file.header.algorithm = first.algorithm;
        file.header.length = static_cast<std::uint32_t>(first.codes.size());
        file.header.master_seed = first.seed;
        file.header.param = first.param;
    }
    file.header.corpus_digest = digest;
    file.header.record_count = records.size();
    file.records = std::move(records);
    return file;
}

void require_comparable(const FingerprintHeader& a, const FingerprintHeader& b) {
    if (a.algorithm != b.algorithm) throw Error(Errc::IncomparableFingerprints, "files use different algorithms");
    if (a.length != b.length) throw Error(Errc::IncomparableFingerprints, "files use different fingerprint lengths");
    if (a.master_seed != b.master_seed) throw Error(Errc::IncomparableFingerprints, "files use different master seeds");
    if (a.param != b.param) throw Error(Errc::IncomparableFingerprints, "files use different sampler parameters");
    if (a.corpus_digest != b.corpus_digest) throw Error(Errc::IncomparableFingerprints, "files come from different corpora");
}

void write_fingerprints(std::ostream& out, const FingerprintFile& file) {
    const FingerprintHeader& h = file.header;
    if (h.record_count != file.records.size()) {
        throw Error(Errc::FormatError, "header declares " + std::to_string(h.record_count) + " records, have " +
                                           std::to_string(file.records.size()));
    }
    const bool second = has_second_word(h.algorithm);

    ByteWriter w;
    w.raw(kMagic.data(), kMagic.size());
    w.u32(h.version);
    w.u8(static_cast<std::uint8_t>(h.algorithm));
    w.u8(second ? 1 : 0);
    w.u16(0);
    w.u32(h.length);
    w.u64(h.master_seed);
    w.f64(h.param);
    w.u64(h.corpus_digest);
    w.u64(h.record_count);
    w.u64(checksum_of(w.bytes()));
    flush(out, w);

    Checksum payload;
    for (const auto& r : file.records) {
        if (r.codes.size() != h.length || r.algorithm != h.algorithm || r.seed != h.master_seed) {
            throw Error(Errc::FormatError, "record " + std::to_string(r.doc_id) + " does not match the header");
        }
        w.clear();
        w.u64(r.doc_id);
        for (const auto& code : r.codes) {
            w.u64(code.k_star);
            if (second) w.u64(code.y_bits);
        }
        payload.add(w.bytes().data(), w.bytes().size());
        flush(out, w);
    }
    w.clear();
    w.u64(payload.value());
    flush(out, w);
    if (!out) throw Error(Errc::IoError, "failed writing fingerprint file");
}

void write_fingerprints(const std::filesystem::path& path, const FingerprintFile& file) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
    write_fingerprints(out, file);
}

FingerprintFile read_fingerprints(std::istream& in) {
    ByteReader r(in);
    std::array<char, 4> magic{};
    r.raw(magic.data(), magic.size());
    if (magic != kMagic) throw Error(Errc::FormatError, "not a fingerprint file (bad magic)");

    FingerprintFile file;
    FingerprintHeader& h = file.header;
    h.version = r.u32();
    if (h.version != kFingerprintFormatVersion) {
        throw Error(Errc::IncompatibleFormat, "fingerprint format version " + std::to_string(h.version) +
                                                  ", expected " + std::to_string(kFingerprintFormatVersion));
    }
    const std::uint8_t algo = r.u8();
    const std::uint8_t second_flag = r.u8();
    r.u16();
    h.length = r.u32();
    h.master_seed = r.u64();
    h.param = r.f64();
    h.corpus_digest = r.u64();
    h.record_count = r.u64();
    const std::uint64_t computed = r.checksum();
    const std::uint64_t stored = r.u64();
    if (computed != stored) throw Error(Errc::IntegrityError, "header checksum mismatch");

    if (algo >= std::size(kAllAlgorithms)) throw Error(Errc::FormatError, "unknown algorithm tag");
    h.algorithm = static_cast<Algorithm>(algo);
    const bool second = has_second_word(h.algorithm);
    if ((second_flag != 0) != second) throw Error(Errc::FormatError, "code width does not match the algorithm");

    r.reset_checksum();
    file.records.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(h.record_count, 1u << 20)));
    for (std::uint64_t i = 0; i < h.record_count; ++i) {
        Fingerprint fp;
        fp.algorithm = h.algorithm;
        fp.seed = h.master_seed;
        fp.param = h.param;
        fp.doc_id = r.u64();
        fp.codes.resize(h.length);
        for (auto& code : fp.codes) {
            code.k_star = r.u64();
            if (second) {
                code.y_bits = r.u64();
                code.has_y = true;
            }
        }
        file.records.push_back(std::move(fp));
    }
    const std::uint64_t payload = r.checksum();
    if (r.u64() != payload) throw Error(Errc::IntegrityError, "record checksum mismatch");
    return file;
}

FingerprintFile read_fingerprints(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
    return read_fingerprints(in);
}

} // namespace cws
