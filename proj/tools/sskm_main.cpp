#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sskm/corpus.hpp"
#include "sskm/engine.hpp"
#include "sskm/report.hpp"
#include "sskm/synthetic.hpp"

namespace {

/// Bad flag combinations or values discovered after CLI11 parsing; mapped to
/// exit code 2 like CLI11's own parse errors.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) parts.push_back(item);
    return parts;
}

std::vector<double> parse_doubles(const std::string& text, const char* flag) {
    std::vector<double> values;
    for (const std::string& part : split(text, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(part, &used));
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw UsageError(std::string(flag) + ": cannot parse '" + part + "' as a number");
        }
    }
    if (values.empty()) throw UsageError(std::string(flag) + ": empty list");
    return values;
}

std::vector<std::uint32_t> parse_u32s(const std::string& text, const char* flag) {
    std::vector<std::uint32_t> values;
    for (const std::string& part : split(text, ',')) {
        try {
            std::size_t used = 0;
            unsigned long v = std::stoul(part, &used);
            if (used != part.size() || v > UINT32_MAX) throw std::invalid_argument(part);
            values.push_back(static_cast<std::uint32_t>(v));
        } catch (const std::exception&) {
            throw UsageError(std::string(flag) + ": cannot parse '" + part + "' as an integer");
        }
    }
    if (values.empty()) throw UsageError(std::string(flag) + ": empty list");
    return values;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct VectorizeArgs {
    std::string input;
    std::string output;
    std::string stopwords;
    double max_df = 0.5;
};

int cmd_vectorize(const VectorizeArgs& args) {
    if (!(args.max_df > 0.0 && args.max_df <= 1.0)) {
        throw UsageError("--max-df must be in (0, 1]");
    }
    auto docs = sskm::load_jsonl(args.input);
    if (docs.empty()) throw std::runtime_error("empty corpus");
    sskm::StopWords stop;
    if (!args.stopwords.empty()) stop = sskm::load_stopwords(args.stopwords);

    sskm::VectorizeResult result = sskm::vectorize_corpus(docs, stop, args.max_df);
    sskm::write_matrix(args.output, result.matrix);
    sskm::write_vocabulary(args.output + ".vocab", result.vocab);

    std::size_t nnz = 0;
    for (const auto& v : result.matrix.vectors) nnz += v.nnz();
    std::cout << "wrote " << args.output << ": " << result.matrix.size() << " documents, "
              << result.matrix.dims << " dims, avg nnz "
              << static_cast<double>(nnz) / static_cast<double>(result.matrix.size()) << "\n";
    std::cout << "dropped " << result.dropped_doc_ids.size() << " documents";
    if (!result.dropped_doc_ids.empty()) {
        std::cout << ":";
        for (const auto& id : result.dropped_doc_ids) std::cout << ' ' << id;
    }
    std::cout << "\n";
    return 0;
}

struct ClusterArgs {
    std::string input;
    std::uint32_t k = 0;
    std::string mode = "baseline";
    std::uint64_t seed = 0;
    std::string lambdas = "0.1,0.25,0.4,0.6";
    double conv = 0.0001;
    double ncc_eps = 0.0;
    std::uint32_t index_activation = 100;
    std::uint32_t max_iters = 100;
    std::uint32_t threads = 0;
    std::string out_assignments;
    std::string out_report;
};

sskm::RunConfig make_config(const ClusterArgs& args, std::size_t n_docs) {
    sskm::RunConfig cfg;
    cfg.k = args.k;
    try {
        cfg.mode = sskm::parse_mode(args.mode);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    cfg.lambdas = parse_doubles(args.lambdas, "--lambdas");
    cfg.conv_sq_dist = args.conv;
    cfg.ncc_epsilon = args.ncc_eps;
    cfg.index_activation_threshold = args.index_activation;
    cfg.max_iters = args.max_iters;
    cfg.seed = args.seed;
    cfg.threads = args.threads;
    try {
        cfg.validate(n_docs);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

int cmd_cluster(const ClusterArgs& args) {
    sskm::CorpusMatrix data = sskm::load_matrix(args.input);
    sskm::RunConfig cfg = make_config(args, data.size());

    sskm::ClusteringResult result = sskm::run(data, cfg);

    std::ofstream out(args.out_assignments);
    if (!out) throw std::runtime_error("cannot open " + args.out_assignments + " for writing");
    for (std::size_t i = 0; i < data.size(); ++i) {
        out << data.doc_ids[i] << '\t' << result.assignments[i] << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + args.out_assignments);

    sskm::write_report(args.out_report, sskm::make_report(cfg, data, result));

    std::cout << "mode " << sskm::mode_name(cfg.mode) << ", k " << cfg.k << ": "
              << result.iterations.size() << " iterations ("
              << sskm::stop_reason_name(result.stop_reason) << "), objective "
              << result.objective << ", " << result.total_dot_products() << " dot products\n";
    return 0;
}

struct BenchArgs {
    std::string input;
    std::string synthetic;
    std::string k_list;
    std::string modes = "baseline,ncc,ncc+index";
    std::uint32_t repeats = 5;
    std::uint64_t seed = 7;
    std::string lambdas = "0.1,0.25,0.4,0.6";
    double conv = 0.0001;
    double ncc_eps = 0.0;
    std::uint32_t index_activation = 100;
    std::uint32_t max_iters = 100;
    std::uint32_t threads = 0;
    std::string out;
};

int cmd_bench(const BenchArgs& args) {
    if (args.input.empty() == args.synthetic.empty()) {
        throw UsageError("bench requires exactly one of --input or --synthetic");
    }
    if (args.repeats < 1) throw UsageError("--repeats must be at least 1");

    std::vector<std::uint32_t> ks = parse_u32s(args.k_list, "--k-list");
    std::vector<sskm::Mode> modes;
    for (const std::string& name : split(args.modes, ',')) {
        try {
            modes.push_back(sskm::parse_mode(name));
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    if (modes.empty()) throw UsageError("--modes: empty list");

    sskm::CorpusMatrix data;
    if (!args.input.empty()) {
        data = sskm::load_matrix(args.input);
    } else {
        sskm::ZipfSpec spec;
        try {
            spec = sskm::parse_zipf_spec(args.synthetic);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        data = sskm::synthetic_zipf_corpus(spec);
    }

    std::ofstream csv(args.out);
    if (!csv) throw std::runtime_error("cannot open " + args.out + " for writing");
    csv << "mode,k,median_seconds,iqr_seconds,dot_products,iterations,index_build_seconds\n";

    for (sskm::Mode mode : modes) {
        for (std::uint32_t k : ks) {
            sskm::RunConfig cfg;
            cfg.k = k;
            cfg.mode = mode;
            cfg.lambdas = parse_doubles(args.lambdas, "--lambdas");
            cfg.conv_sq_dist = args.conv;
            cfg.ncc_epsilon = args.ncc_eps;
            cfg.index_activation_threshold = args.index_activation;
            cfg.max_iters = args.max_iters;
            cfg.seed = args.seed;
            cfg.threads = args.threads;
            try {
                cfg.validate(data.size());
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }

            std::vector<double> times, builds;
            std::uint64_t dots = 0;
            std::size_t iterations = 0;
            for (std::uint32_t r = 0; r < args.repeats; ++r) {
                auto t0 = std::chrono::steady_clock::now();
                sskm::ClusteringResult result = sskm::run(data, cfg);
                times.push_back(seconds_since(t0));
                builds.push_back(result.total_index_build_seconds());
                dots = result.total_dot_products();
                iterations = result.iterations.size();
            }
            std::sort(times.begin(), times.end());
            std::sort(builds.begin(), builds.end());
            std::size_t n = times.size();
            double median = n % 2 == 1 ? times[n / 2] : 0.5 * (times[n / 2 - 1] + times[n / 2]);
            double iqr = times[(3 * n) / 4] - times[n / 4];
            double median_build =
                n % 2 == 1 ? builds[n / 2] : 0.5 * (builds[n / 2 - 1] + builds[n / 2]);

            csv << sskm::mode_name(mode) << ',' << k << ',' << std::fixed
                << std::setprecision(6) << median << ',' << iqr << ',' << std::defaultfloat
                << dots << ',' << iterations << ',' << std::fixed << std::setprecision(6)
                << median_build << std::defaultfloat << '\n';
            std::cout << "bench " << sskm::mode_name(mode) << " k=" << k << ": median "
                      << median << " s, " << dots << " dot products, " << iterations
                      << " iterations\n";
        }
    }
    if (!csv) throw std::runtime_error("write failed: " + args.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse spherical k-means toolkit"};
    app.require_subcommand(1);

    VectorizeArgs vec_args;
    CLI::App* vec = app.add_subcommand("vectorize", "turn a JSONL corpus into a unit TF-IDF matrix");
    vec->add_option("--input", vec_args.input, "JSONL file with id/text fields")->required();
    vec->add_option("--output", vec_args.output, "matrix output path")->required();
    vec->add_option("--stopwords", vec_args.stopwords, "stop-word list, one term per line");
    vec->add_option("--max-df", vec_args.max_df, "drop terms above this document-frequency ratio")
        ->capture_default_str();

    ClusterArgs cl_args;
    CLI::App* cl = app.add_subcommand("cluster", "cluster a matrix with spherical k-means");
    cl->add_option("--input", cl_args.input, "matrix path")->required();
    cl->add_option("--k", cl_args.k, "cluster count")->required();
    cl->add_option("--mode", cl_args.mode, "baseline | ncc | ncc+index")->required();
    cl->add_option("--seed", cl_args.seed, "RNG seed")->required();
    cl->add_option("--lambdas", cl_args.lambdas, "ascending dot-product thresholds")
        ->capture_default_str();
    cl->add_option("--conv", cl_args.conv, "stop when max squared centroid drift is below this")
        ->capture_default_str();
    cl->add_option("--ncc-eps", cl_args.ncc_eps, "squared-distance tolerance for unchanged centroids")
        ->capture_default_str();
    cl->add_option("--index-activation", cl_args.index_activation,
                   "use the index only above this many changed centroids")
        ->capture_default_str();
    cl->add_option("--max-iters", cl_args.max_iters, "iteration cap")->capture_default_str();
    cl->add_option("--threads", cl_args.threads, "worker cap, 0 = all cores")
        ->envname("SSKM_THREADS")
        ->capture_default_str();
    cl->add_option("--out-assignments", cl_args.out_assignments, "doc_id<TAB>cluster_id output")
        ->required();
    cl->add_option("--out-report", cl_args.out_report, "JSON run report output")->required();

    BenchArgs b_args;
    CLI::App* bench = app.add_subcommand("bench", "time modes across a k grid");
    bench->add_option("--input", b_args.input, "matrix path");
    bench->add_option("--synthetic", b_args.synthetic, "generate a corpus: N,V,avg_nnz,zipf_s,seed");
    bench->add_option("--k-list", b_args.k_list, "comma-separated cluster counts")->required();
    bench->add_option("--modes", b_args.modes, "comma-separated mode names")->capture_default_str();
    bench->add_option("--repeats", b_args.repeats, "runs per cell")->capture_default_str();
    bench->add_option("--seed", b_args.seed, "RNG seed for every run")->capture_default_str();
    bench->add_option("--lambdas", b_args.lambdas, "ascending dot-product thresholds")
        ->capture_default_str();
    bench->add_option("--conv", b_args.conv, "convergence threshold")->capture_default_str();
    bench->add_option("--ncc-eps", b_args.ncc_eps, "unchanged-centroid tolerance")
        ->capture_default_str();
    bench->add_option("--index-activation", b_args.index_activation,
                      "use the index only above this many changed centroids")
        ->capture_default_str();
    bench->add_option("--max-iters", b_args.max_iters, "iteration cap")->capture_default_str();
    bench->add_option("--threads", b_args.threads, "worker cap, 0 = all cores")
        ->envname("SSKM_THREADS")
        ->capture_default_str();
    bench->add_option("--out", b_args.out, "CSV output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (vec->parsed()) return cmd_vectorize(vec_args);
        if (cl->parsed()) return cmd_cluster(cl_args);
        if (bench->parsed()) return cmd_bench(b_args);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
