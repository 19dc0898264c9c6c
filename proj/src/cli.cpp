#include "cws/cli.hpp"

#include "cws/error.hpp"
#include "cws/fingerprint_io.hpp"
#include "cws/props.hpp"
#include "cws/sparse_io.hpp"
#include "cws/synthgen.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace cws {

namespace {

std::vector<Algorithm> parse_algorithms(const std::vector<std::string>& names) {
    std::vector<Algorithm> out;
    if (names.empty() || (names.size() == 1 && names[0] == "all")) {
        out.assign(std::begin(kAllAlgorithms), std::end(kAllAlgorithms));
        return out;
    }
    for (const auto& n : names) out.push_back(parse_algorithm(n));
    return out;
}

/// Output stream for `path`, or `fallback` when the path is empty or "-".
class Output {
  public:
    Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty() && path != "-") {
            file_.open(path, std::ios::binary);
            if (!file_) throw Error(Errc::IoError, "cannot write " + path);
            stream_ = &file_;
        }
    }
    std::ostream& get() { return *stream_; }

  private:
    std::ofstream file_;
    std::ostream* stream_;
};

struct GenOptions {
    std::string law = "uniform";
    std::size_t docs = 200;
    std::size_t features = 5000;
    double density = 0.05;
    double lo = 0.0;
    double hi = 1.0;
    double exponent = 3.0;
    double scale = 1.0;
    std::size_t topics = 10;
    std::size_t clusters = 5;
    std::size_t per_cluster = 10;
    std::size_t topic_support = 100;
    double jitter = 0.1;
    std::uint64_t seed = 1;
    std::string output;
};

Dataset generate_from(const GenOptions& o) {
    if (o.law == "clustered") {
        ClusteredConfig c;
        c.topic_count = o.topics;
        c.clusters_per_topic = o.clusters;
        c.docs_per_cluster = o.per_cluster;
        c.feature_count = o.features;
        c.support_per_topic = o.topic_support;
        c.jitter = o.jitter;
        c.gen_seed = o.seed;
        return gen_clustered_corpus(c);
    }
    SynthConfig c;
    c.doc_count = o.docs;
    c.feature_count = o.features;
    c.density = o.density;
    c.gen_seed = o.seed;
    if (o.law == "uniform") {
        c.law = UniformLaw{o.lo, o.hi};
    } else if (o.law == "powerlaw") {
        c.law = PowerLaw{o.exponent, o.scale};
    } else {
        throw Error(Errc::UsageError, "unknown law '" + o.law + "' (uniform, powerlaw, clustered)");
    }
    return generate_corpus(c);
}

struct SketchOptions {
    std::string input;
    std::string algo = "i2cws";
    std::uint32_t length = 128;
    std::uint64_t seed = 1;
    double scale = 10.0;
    std::string output;
};

SketchParams params_for(const Dataset& dataset, double scale) {
    SketchParams p;
    p.quantization_scale = scale;
    p.threshold_max = dataset.max_weight();
    return p;
}

FingerprintFile sketch_corpus(const Dataset& dataset, Algorithm algorithm, std::uint32_t length,
                              std::uint64_t seed, double scale) {
    const VariateScheme scheme(seed, length);
    auto fps = sketch_all(dataset.docs, scheme, algorithm, length, params_for(dataset, scale));
    return make_fingerprint_file(std::move(fps), corpus_digest(dataset));
}

struct EstimateOptions {
    std::string input;
    std::vector<std::string> fp_files;
    std::string algo = "i2cws";
    std::uint32_t length = 128;
    std::uint64_t seed = 1;
    double scale = 10.0;
    std::vector<std::string> pairs;
    std::size_t max_docs = 10;
    std::string output;
};

std::vector<std::pair<std::size_t, std::size_t>> parse_pairs(const std::vector<std::string>& specs,
                                                             std::size_t doc_count, std::size_t max_docs) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    if (specs.empty()) {
        const std::size_t n = std::min(doc_count, max_docs);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) out.emplace_back(i, j);
        }
        return out;
    }
    for (const auto& s : specs) {
        const auto colon = s.find(':');
        if (colon == std::string::npos) throw Error(Errc::UsageError, "pair '" + s + "' is not of the form a:b");
        std::size_t a = 0;
        std::size_t b = 0;
        try {
            a = std::stoull(s.substr(0, colon));
            b = std::stoull(s.substr(colon + 1));
        } catch (const std::exception&) {
            throw Error(Errc::UsageError, "pair '" + s + "' is not of the form a:b");
        }
        if (a >= doc_count || b >= doc_count) throw Error(Errc::UsageError, "pair '" + s + "' out of range");
        out.emplace_back(a, b);
    }
    return out;
}

struct BenchOptions {
    std::string input;
    std::uint64_t gen_seed = 1;
    std::vector<std::string> algos;
    std::vector<std::uint32_t> lengths{32, 64, 128, 256, 512};
    std::size_t pairs = 50;
    std::size_t trials = 5;
    std::uint64_t seed = 1;
    double scale = 10.0;
    bool no_timing = false;
    std::string output;
};

struct RetrieveOptions {
    std::string input;
    std::uint64_t gen_seed = 1;
    std::vector<std::string> algos;
    std::vector<std::uint32_t> lengths{32, 64, 128, 256, 512};
    std::vector<std::size_t> ks{1, 20, 50, 100, 500, 1000};
    std::size_t queries = 20;
    std::uint64_t seed = 1;
    double scale = 10.0;
    bool no_timing = false;
    std::string output;
};

std::string fmt_ms(double ms, bool timing) { return timing ? fmt::format("{:.3f}", ms) : "0"; }

int run_gen(const GenOptions& o, std::ostream& out) {
    const Dataset ds = generate_from(o);
    Output sink(o.output, out);
    write_sparse(sink.get(), ds);
    return 0;
}

int run_sketch(const SketchOptions& o, std::ostream& err) {
    const Dataset ds = parse_sparse_file(o.input);
    for (const auto& w : ds.warnings) err << "warning: " << w << '\n';
    const auto file = sketch_corpus(ds, parse_algorithm(o.algo), o.length, o.seed, o.scale);
    write_fingerprints(std::filesystem::path(o.output), file);
    return 0;
}

int run_estimate(const EstimateOptions& o, std::ostream& out, std::ostream& err) {
    const Dataset ds = parse_sparse_file(o.input);
    for (const auto& w : ds.warnings) err << "warning: " << w << '\n';
    const std::uint64_t digest = corpus_digest(ds);

    FingerprintFile a;
    FingerprintFile b;
    if (o.fp_files.empty()) {
        a = sketch_corpus(ds, parse_algorithm(o.algo), o.length, o.seed, o.scale);
        b = a;
    } else {
        if (o.fp_files.size() > 2) throw Error(Errc::UsageError, "at most two --fp files");
        a = read_fingerprints(std::filesystem::path(o.fp_files[0]));
        b = o.fp_files.size() == 2 ? read_fingerprints(std::filesystem::path(o.fp_files[1])) : a;
        require_comparable(a.header, b.header);
        for (const auto* f : {&a, &b}) {
            if (f->header.corpus_digest != digest) {
                throw Error(Errc::IncomparableFingerprints, "fingerprint file was built from a different corpus");
            }
        }
    }
    if (a.records.size() != ds.size() || b.records.size() != ds.size()) {
        throw Error(Errc::IncomparableFingerprints, "fingerprint record count does not match the corpus");
    }
    Output sink(o.output, out);
    std::ostream& os = sink.get();
    os << fmt::format("# cws estimate algorithm={} D={} seed={}\n", algorithm_name(a.header.algorithm),
                      a.header.length, a.header.master_seed);
    os << "doc_a,doc_b,exact,estimate\n";
    for (const auto& [i, j] : parse_pairs(o.pairs, ds.size(), o.max_docs)) {
        const double exact = generalized_jaccard(ds.docs[i], ds.docs[j]);
        const double est = estimate_similarity(a.records[i], b.records[j]);
        os << fmt::format("{},{},{:.6f},{:.6f}\n", i, j, exact, est);
    }
    return 0;
}

Dataset load_or_generate(const std::string& input, std::ostream& err, const std::function<Dataset()>& generate) {
    if (input.empty()) return generate();
    Dataset ds = parse_sparse_file(input);
    for (const auto& w : ds.warnings) err << "warning: " << w << '\n';
    return ds;
}

int run_bench(const BenchOptions& o, std::ostream& out, std::ostream& err) {
    const Dataset ds = load_or_generate(o.input, err, [&] { return gen_uniform_corpus(desk_scale_uniform(o.gen_seed)); });
    std::vector<MseRow> rows;
    for (Algorithm a : parse_algorithms(o.algos)) {
        for (std::uint32_t d : o.lengths) {
            MseConfig cfg;
            cfg.algorithm = a;
            cfg.length = d;
            cfg.pair_count = o.pairs;
            cfg.trial_count = o.trials;
            cfg.scheme_seed = o.seed;
            cfg.params = params_for(ds, o.scale);
            rows.push_back(mse_experiment(ds, cfg).row);
        }
    }
    Output sink(o.output, out);
    sink.get() << fmt::format("# cws bench-mse seed={} corpus_digest={:016x}\n", o.seed, corpus_digest(ds));
    write_mse_csv(sink.get(), rows, !o.no_timing);
    return 0;
}

int run_retrieve(const RetrieveOptions& o, std::ostream& out, std::ostream& err) {
    const Dataset ds = load_or_generate(o.input, err, [&] {
        ClusteredConfig c;
        c.gen_seed = o.gen_seed;
        return gen_clustered_corpus(c);
    });
    const auto truth = exact_ground_truth(ds, o.queries, o.ks);
    std::vector<RetrievalRow> rows;
    for (Algorithm a : parse_algorithms(o.algos)) {
        for (std::uint32_t d : o.lengths) {
            RetrievalConfig cfg;
            cfg.algorithm = a;
            cfg.length = d;
            cfg.k_values = o.ks;
            cfg.query_count = o.queries;
            cfg.scheme_seed = o.seed;
            cfg.params = params_for(ds, o.scale);
            const auto r = retrieval_experiment(ds, cfg, truth);
            rows.insert(rows.end(), r.begin(), r.end());
        }
    }
    Output sink(o.output, out);
    sink.get() << fmt::format("# cws retrieve seed={} corpus_digest={:016x}\n", o.seed, corpus_digest(ds));
    write_retrieval_csv(sink.get(), rows, !o.no_timing);
    return 0;
}

int run_props(const PropsConfig& cfg, std::ostream& out) {
    out << fmt::format("# cws props seed={} samples={}\n", cfg.seed, cfg.samples);
    bool all = true;
    for (const auto& c : run_property_suite(cfg)) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name;
        if (!c.detail.empty()) out << "  [" << c.detail << "]";
        out << '\n';
        all = all && c.passed;
    }
    return all ? 0 : 1;
}

} // namespace

void write_mse_csv(std::ostream& out, const std::vector<MseRow>& rows, bool timing) {
    out << "algorithm,D,pairs,trials,mse,bias,wall_ms\n";
    for (const auto& r : rows) {
        out << fmt::format("{},{},{},{},{:.9e},{:.9e},{}\n", algorithm_name(r.algorithm), r.length, r.pairs, r.trials,
                           r.mse, r.bias, fmt_ms(r.wall_ms, timing));
    }
}

void write_retrieval_csv(std::ostream& out, const std::vector<RetrievalRow>& rows, bool timing) {
    out << "algorithm,D,K,precision,map,wall_ms\n";
    for (const auto& r : rows) {
        out << fmt::format("{},{},{},{:.6f},{:.6f},{}\n", algorithm_name(r.algorithm), r.length, r.k, r.precision,
                           r.map, fmt_ms(r.wall_ms, timing));
    }
}

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Weighted Min-Hash and consistent weighted sampling toolkit", "cws"};
    app.require_subcommand(1);

    GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen", "Write a synthetic corpus in sparse text format");
    gen_cmd->add_option("--law", gen.law, "uniform | powerlaw | clustered")->capture_default_str();
    gen_cmd->add_option("--docs", gen.docs)->capture_default_str();
    gen_cmd->add_option("--features", gen.features)->capture_default_str();
    gen_cmd->add_option("--density", gen.density)->capture_default_str();
    gen_cmd->add_option("--lo", gen.lo)->capture_default_str();
    gen_cmd->add_option("--hi", gen.hi)->capture_default_str();
    gen_cmd->add_option("--exponent", gen.exponent)->capture_default_str();
    gen_cmd->add_option("--scale", gen.scale)->capture_default_str();
    gen_cmd->add_option("--topics", gen.topics)->capture_default_str();
    gen_cmd->add_option("--clusters", gen.clusters, "clusters per topic")->capture_default_str();
    gen_cmd->add_option("--per-cluster", gen.per_cluster)->capture_default_str();
    gen_cmd->add_option("--topic-support", gen.topic_support)->capture_default_str();
    gen_cmd->add_option("--jitter", gen.jitter)->capture_default_str();
    gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
    gen_cmd->add_option("-o,--output", gen.output, "output path (default stdout)");

    SketchOptions sk;
    auto* sketch_cmd = app.add_subcommand("sketch", "Fingerprint every document of a corpus");
    sketch_cmd->add_option("-i,--input", sk.input)->required();
    sketch_cmd->add_option("--algo", sk.algo)->capture_default_str();
    sketch_cmd->add_option("--d", sk.length, "fingerprint length")->capture_default_str()->check(CLI::Range(1u, kMaxFingerprintLength));
    sketch_cmd->add_option("--seed", sk.seed)->capture_default_str();
    sketch_cmd->add_option("--scale", sk.scale, "quantization scale for wmh/haeupler")->capture_default_str();
    sketch_cmd->add_option("-o,--output", sk.output)->required();

    EstimateOptions est;
    auto* est_cmd = app.add_subcommand("estimate", "Print exact vs estimated similarity for document pairs");
    est_cmd->add_option("-i,--input", est.input)->required();
    est_cmd->add_option("--fp", est.fp_files, "fingerprint file(s); sketches on the fly when absent");
    est_cmd->add_option("--algo", est.algo)->capture_default_str();
    est_cmd->add_option("--d", est.length)->capture_default_str()->check(CLI::Range(1u, kMaxFingerprintLength));
    est_cmd->add_option("--seed", est.seed)->capture_default_str();
    est_cmd->add_option("--scale", est.scale)->capture_default_str();
    est_cmd->add_option("--pairs", est.pairs, "a:b document index pairs")->delimiter(',');
    est_cmd->add_option("--max-docs", est.max_docs, "all pairs among the first N docs when --pairs is absent")
        ->capture_default_str();
    est_cmd->add_option("-o,--output", est.output);

    BenchOptions bench;
    auto* bench_cmd = app.add_subcommand("bench-mse", "Estimator MSE sweep over algorithms and D");
    bench_cmd->add_option("-i,--input", bench.input, "corpus (default: desk-scale uniform synthetic)");
    bench_cmd->add_option("--gen-seed", bench.gen_seed)->capture_default_str();
    bench_cmd->add_option("--algos", bench.algos, "comma list or 'all'")->delimiter(',');
    bench_cmd->add_option("--d-list", bench.lengths)->delimiter(',')->capture_default_str()->check(CLI::Range(1u, kMaxFingerprintLength));
    bench_cmd->add_option("--pairs", bench.pairs)->capture_default_str();
    bench_cmd->add_option("--trials", bench.trials)->capture_default_str();
    bench_cmd->add_option("--seed", bench.seed)->capture_default_str();
    bench_cmd->add_option("--scale", bench.scale)->capture_default_str();
    bench_cmd->add_flag("--no-timing", bench.no_timing, "write wall_ms as 0");
    bench_cmd->add_option("-o,--output", bench.output);

    RetrieveOptions ret;
    auto* ret_cmd = app.add_subcommand("retrieve", "Top-K retrieval quality against exact ground truth");
    ret_cmd->add_option("-i,--input", ret.input, "corpus (default: clustered synthetic)");
    ret_cmd->add_option("--gen-seed", ret.gen_seed)->capture_default_str();
    ret_cmd->add_option("--algos", ret.algos, "comma list or 'all'")->delimiter(',');
    ret_cmd->add_option("--d-list", ret.lengths)->delimiter(',')->capture_default_str()->check(CLI::Range(1u, kMaxFingerprintLength));
    ret_cmd->add_option("--k-list", ret.ks)->delimiter(',')->capture_default_str();
    ret_cmd->add_option("--queries", ret.queries)->capture_default_str();
    ret_cmd->add_option("--seed", ret.seed)->capture_default_str();
    ret_cmd->add_option("--scale", ret.scale)->capture_default_str();
    ret_cmd->add_flag("--no-timing", ret.no_timing, "write wall_ms as 0");
    ret_cmd->add_option("-o,--output", ret.output);

    PropsConfig props;
    auto* props_cmd = app.add_subcommand("props", "Run the statistical property suite");
    props_cmd->add_option("--seed", props.seed)->capture_default_str();
    props_cmd->add_option("--samples", props.samples)->capture_default_str()->check(CLI::Range(100ul, 100000000ul));
    props_cmd->add_option("--pairs", props.consistency_pairs, "consistency pairs per algorithm")->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*gen_cmd) return run_gen(gen, out);
        if (*sketch_cmd) return run_sketch(sk, err);
        if (*est_cmd) return run_estimate(est, out, err);
        if (*bench_cmd) return run_bench(bench, out, err);
        if (*ret_cmd) return run_retrieve(ret, out, err);
        if (*props_cmd) return run_props(props, out);
    } catch (const Error& e) {
        err << "cws: " << e.what() << '\n';
        return e.code() == Errc::UsageError ? 2 : 1;
    } catch (const std::exception& e) {
        err << "cws: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

} // namespace cws
