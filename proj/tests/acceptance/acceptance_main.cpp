// Acceptance gate: one self-contained check per shipped guarantee, each
// printing a single [PASS]/[FAIL] line. Exits nonzero if anything fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../oracle.hpp"
#include "sskm/corpus.hpp"
#include "sskm/engine.hpp"
#include "sskm/prune_index.hpp"
#include "sskm/sparse_vector.hpp"
#include "sskm/synthetic.hpp"

using sskm::CorpusMatrix;
using sskm::IterationStats;
using sskm::Mode;
using sskm::MultiIndex;
using sskm::RunConfig;
using sskm::SparseVector;
using sskm::ThresholdEntry;

namespace {

const std::vector<double> kLambdas = {0.1, 0.25, 0.4, 0.6};

struct Failure {
    std::string detail;
};

void expect(bool ok, const std::string& detail) {
    if (!ok) throw Failure{detail};
}

// Mirrors the engine's run loop through the public per-iteration operations
// so intermediate assignment vectors can be captured.
class Stepper {
public:
    Stepper(const CorpusMatrix& data, const RunConfig& cfg) : config_(cfg) {
        auto seeded = sskm::seed_kmeanspp(data, cfg.k, cfg.seed, cfg.threads);
        state_.assignments = std::move(seeded.assignments);
        state_.sims = std::move(seeded.sims);
        state_.unchanged.assign(cfg.k, 0);
    }

    IterationStats step(const CorpusMatrix& data) {
        state_.iteration += 1;
        auto update = sskm::compute_centroids(data, state_.assignments, state_.sims, config_.k,
                                              config_.threads);
        std::uint32_t n_unchanged = 0;
        double drift = 0.0;
        if (state_.iteration == 1) {
            state_.unchanged.assign(config_.k, 0);
        } else {
            auto ur = sskm::detect_unchanged(state_.centroids, update.centroids,
                                             config_.ncc_epsilon, config_.threads);
            for (std::uint32_t j : update.repaired) {
                if (ur.unchanged[j]) {
                    ur.unchanged[j] = 0;
                    --ur.n_unchanged;
                }
            }
            state_.unchanged = std::move(ur.unchanged);
            n_unchanged = ur.n_unchanged;
            drift = ur.max_sq_drift;
        }
        state_.prev_centroids = std::move(state_.centroids);
        state_.centroids = std::move(update.centroids);

        MultiIndex index;
        const MultiIndex* index_ptr = nullptr;
        if (config_.mode == Mode::kNccIndex && state_.iteration > 1 &&
            config_.k - n_unchanged > config_.index_activation_threshold) {
            index = MultiIndex::build(state_.centroids, config_.lambdas);
            index_ptr = &index;
        }
        IterationStats st = sskm::assign(data, state_, config_, index_ptr);
        st.max_sq_drift = drift;
        return st;
    }

    const std::vector<std::uint32_t>& assignments() const { return state_.assignments; }

private:
    RunConfig config_;
    sskm::ClusteringState state_;
};

// ---- criterion 1 -----------------------------------------------------------

void criterion_mode_equivalence() {
    CorpusMatrix data = sskm::synthetic_zipf_corpus({2000, 5000, 10.0, 1.1, 7});
    RunConfig base;
    base.k = 50;
    base.seed = 7;
    base.ncc_epsilon = 0.0;
    base.index_activation_threshold = 0;  // force the index on so its math is exercised

    RunConfig ncc = base;
    ncc.mode = Mode::kNcc;
    RunConfig idx = base;
    idx.mode = Mode::kNccIndex;

    Stepper sb(data, base), sn(data, ncc), si(data, idx);
    for (std::uint32_t iter = 1; iter <= base.max_iters; ++iter) {
        IterationStats st = sb.step(data);
        sn.step(data);
        si.step(data);
        expect(sb.assignments() == sn.assignments(),
               "ncc diverged from baseline at iteration " + std::to_string(iter));
        expect(sb.assignments() == si.assignments(),
               "ncc+index diverged from baseline at iteration " + std::to_string(iter));
        if (st.n_reassigned == 0) return;
        if (iter > 1 && st.max_sq_drift < base.conv_sq_dist) return;  // same stop rule as run()
    }
    expect(false, "did not converge within the iteration cap");
}

// ---- criterion 2 -----------------------------------------------------------

void criterion_index_soundness() {
    std::mt19937_64 gen(20260815);
    const std::uint32_t dims = 200;
    for (int trial = 0; trial < 1000; ++trial) {
        std::size_t k = 5 + sskm::uniform_index(gen, 96);  // [5, 100]
        std::vector<SparseVector> cents;
        cents.reserve(k);
        for (std::size_t c = 0; c < k; ++c) {
            cents.push_back(oracle::random_unit(gen, dims, 1 + sskm::uniform_index(gen, 12)));
        }
        MultiIndex m = MultiIndex::build(cents, kLambdas);
        SparseVector x = oracle::random_unit(gen, dims, 1 + sskm::uniform_index(gen, 12));
        auto counts = sskm::overlap_counts(m.general(), x);
        for (const auto& p : m.thresholds()) {
            auto cands = sskm::candidates(p, x, counts);
            auto required = oracle::reachable(cents, x, p.lambda, dims);
            bool subset = std::includes(cands.begin(), cands.end(), required.begin(),
                                        required.end());
            expect(subset, "missed a reachable centroid in trial " + std::to_string(trial) +
                               " at lambda " + std::to_string(p.lambda));
        }
    }
}

// ---- criterion 3 -----------------------------------------------------------

void criterion_support_bound() {
    std::mt19937_64 gen(3);
    int tested = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        bool negative = trial % 4 == 0;
        SparseVector c = oracle::random_unit(gen, 60, 1 + sskm::uniform_index(gen, 10), negative);
        SparseVector x = oracle::random_unit(gen, 60, 1 + sskm::uniform_index(gen, 10), negative);
        double restricted = 0.0;
        for (const sskm::Entry& e : c.entries()) {
            for (const sskm::Entry& f : x.entries()) {
                if (e.dim == f.dim) restricted += e.weight * e.weight;
            }
        }
        double d = sskm::dot(c, x);
        for (double lam : kLambdas) {
            if (restricted < lam * lam) {
                ++tested;
                expect(d < lam, "dot " + std::to_string(d) + " reached lambda " +
                                    std::to_string(lam) + " with restricted mass " +
                                    std::to_string(restricted));
            }
        }
    }
    expect(tested > 10000, "bound was vacuous in most trials");
}

// ---- criterion 4 -----------------------------------------------------------

void criterion_build_cost() {
    std::mt19937_64 gen(4);
    std::vector<SparseVector> cents;
    cents.reserve(100);
    for (int c = 0; c < 100; ++c) {
        std::size_t m = 1 + sskm::uniform_index(gen, 10000);  // up to 10,000 nonzeros
        cents.push_back(oracle::random_unit(gen, 40000, m));
    }
    MultiIndex m = MultiIndex::build(cents, kLambdas);
    for (const auto& p : m.thresholds()) {
        for (std::size_t c = 0; c < cents.size(); ++c) {
            expect(p.window_ops[c] <= 2 * cents[c].nnz(),
                   "centroid " + std::to_string(c) + " spent " +
                       std::to_string(p.window_ops[c]) + " ops on " +
                       std::to_string(cents[c].nnz()) + " nonzeros");
        }
    }
}

// ---- criterion 5 -----------------------------------------------------------

void criterion_worked_examples() {
    SparseVector c({{0, 0.9}, {1, 0.3}, {2, 0.3}, {3, 0.1}});
    MultiIndex m = MultiIndex::build({c}, {0.4, 0.6});

    const auto& p04 = m.thresholds()[0].postings;
    expect(p04.size() == 2, "lambda 0.4 should index exactly dims 0 and 1");
    expect(p04.count(0) && p04.at(0) == std::vector<ThresholdEntry>{{0, 1}},
           "lambda 0.4 dim 0 entry wrong");
    expect(p04.count(1) && p04.at(1) == std::vector<ThresholdEntry>{{0, 2}},
           "lambda 0.4 dim 1 entry wrong");

    const auto& p06 = m.thresholds()[1].postings;
    expect(p06.size() == 1, "lambda 0.6 should index exactly dim 0");
    expect(p06.count(0) && p06.at(0) == std::vector<ThresholdEntry>{{0, 1}},
           "lambda 0.6 dim 0 entry wrong");
}

// ---- criterion 6 -----------------------------------------------------------

void criterion_convergence() {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        CorpusMatrix data = sskm::synthetic_zipf_corpus({600, 2000, 8.0, 1.1, seed});
        RunConfig cfg;
        cfg.k = 12;
        cfg.seed = seed;
        cfg.mode = seed % 3 == 0 ? Mode::kBaseline : (seed % 3 == 1 ? Mode::kNcc : Mode::kNccIndex);
        cfg.index_activation_threshold = 0;
        auto r = sskm::run(data, cfg);
        expect(r.stop_reason != sskm::StopReason::kMaxIterations,
               "run " + std::to_string(seed) + " hit the iteration cap");
        if (r.stop_reason == sskm::StopReason::kNoReassignments) {
            expect(r.iterations.back().n_reassigned == 0, "stop flag contradicts stats");
        } else {
            expect(r.iterations.back().max_sq_drift < cfg.conv_sq_dist,
                   "drift stop fired above the threshold");
        }
        for (std::size_t t = 1; t < r.iterations.size(); ++t) {
            expect(r.iterations[t].objective >= r.iterations[t - 1].objective,
                   "objective decreased at iteration " + std::to_string(t + 1) + " of run " +
                       std::to_string(seed));
        }
    }
}

// ---- criterion 7 -----------------------------------------------------------

struct OpCounts {
    std::uint64_t baseline = 0;
    std::uint64_t ncc = 0;
    std::uint64_t index = 0;
};

OpCounts measure_ops(const CorpusMatrix& data, std::uint32_t k) {
    OpCounts ops;
    RunConfig cfg;
    cfg.k = k;
    cfg.seed = 7;
    for (Mode mode : {Mode::kBaseline, Mode::kNcc, Mode::kNccIndex}) {
        cfg.mode = mode;
        auto r = sskm::run(data, cfg);
        std::uint64_t total = r.total_dot_products();
        if (mode == Mode::kBaseline) {
            std::uint64_t expect_dots =
                static_cast<std::uint64_t>(k) * data.size() * r.iterations.size();
            expect(total == expect_dots, "baseline accounting drifted from k*N*iterations");
            ops.baseline = total;
        } else if (mode == Mode::kNcc) {
            ops.ncc = total;
        } else {
            ops.index = total;
        }
    }
    return ops;
}

void criterion_operation_reduction() {
    CorpusMatrix data = sskm::synthetic_zipf_corpus({10000, 20000, 10.0, 1.1, 7});
    OpCounts big = measure_ops(data, 500);
    double ratio_index = static_cast<double>(big.index) / static_cast<double>(big.baseline);
    double ratio_ncc = static_cast<double>(big.ncc) / static_cast<double>(big.baseline);
    expect(ratio_index <= 0.60, "ncc+index used " + std::to_string(100 * ratio_index) +
                                    "% of baseline dots at k=500 (needs <= 60%)");
    expect(ratio_ncc <= 0.90, "ncc used " + std::to_string(100 * ratio_ncc) +
                                  "% of baseline dots at k=500 (needs <= 90%)");

    OpCounts small = measure_ops(data, 50);
    double ratio_small = static_cast<double>(small.index) / static_cast<double>(small.baseline);
    expect(ratio_index < ratio_small,
           "index advantage did not grow with k (k=500 ratio " + std::to_string(ratio_index) +
               " vs k=50 ratio " + std::to_string(ratio_small) + ")");
    std::printf("        dot-product ratios vs baseline: k=500 ncc %.3f, ncc+index %.3f; "
                "k=50 ncc+index %.3f\n",
                ratio_ncc, ratio_index, ratio_small);
}

// ---- criterion 8 -----------------------------------------------------------

void criterion_tfidf_fixture() {
    std::vector<std::pair<std::string, std::string>> docs = {
        {"d1", "Apple banana apple!"},
        {"d2", "banana cherry"},
        {"d3", "the of and"},
        {"d4", "apple cherry durian"},
    };
    auto res = sskm::vectorize_corpus(docs, {"the", "of", "and"}, 1.0);

    expect(res.dropped_doc_ids == std::vector<std::string>{"d3"}, "d3 was not dropped");
    expect(res.matrix.doc_ids == std::vector<std::string>{"d1", "d2", "d4"}, "wrong ids kept");
    expect(res.vocab.n_docs == 3, "stop-word-only doc leaked into the corpus count");
    expect(res.vocab.size() == 4, "vocabulary should be apple/banana/cherry/durian");
    auto dim = [&](const char* t) { return res.vocab.term_to_dim.at(t); };
    expect(dim("apple") == 0 && dim("banana") == 1 && dim("cherry") == 2 && dim("durian") == 3,
           "dims not in first-occurrence order");
    expect(res.vocab.doc_freq == std::vector<std::uint32_t>{2, 2, 2, 1}, "df hand count differs");

    // raw weights: tf * ln(3/df)
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-15 * std::abs(b); };
    SparseVector w1 = sskm::tfidf(sskm::tokenize(docs[0].second), res.vocab);
    expect(w1.nnz() == 2, "d1 should weight apple and banana");
    expect(close(w1.entries()[0].weight, 2.0 * std::log(1.5)), "d1 apple weight");
    expect(close(w1.entries()[1].weight, 1.0 * std::log(1.5)), "d1 banana weight");
    SparseVector w4 = sskm::tfidf(sskm::tokenize(docs[3].second), res.vocab);
    expect(w4.nnz() == 3, "d4 should weight apple, cherry, durian");
    expect(close(w4.entries()[2].weight, std::log(3.0)), "d4 durian weight");

    for (const SparseVector& v : res.matrix.vectors) {
        expect(std::abs(v.norm() - 1.0) <= 1e-9, "row norm drifted beyond 1e-9");
    }
    // normalized d1 is the (2,1)/sqrt(5) direction
    expect(close(res.matrix.vectors[0].entries()[0].weight, 2.0 / std::sqrt(5.0)),
           "d1 normalized apple weight");
    expect(close(res.matrix.vectors[0].entries()[1].weight, 1.0 / std::sqrt(5.0)),
           "d1 normalized banana weight");
}

// ---- criterion 9 -----------------------------------------------------------

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    expect(in.good(), "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_cli_determinism() {
    const char* bin = std::getenv("SSKM_BIN");
    expect(bin != nullptr, "SSKM_BIN not set");
    auto dir = std::filesystem::temp_directory_path() / "sskm_acceptance";
    std::filesystem::create_directories(dir);

    CorpusMatrix data = sskm::synthetic_zipf_corpus({300, 800, 8.0, 1.1, 11});
    std::string mtx = (dir / "input.mtx").string();
    sskm::write_matrix(mtx, data);

    std::string reference;
    int run_id = 0;
    for (const char* threads : {"1", "2", "4"}) {
        for (int repeat = 0; repeat < 3; ++repeat) {
            std::string assign = (dir / ("a" + std::to_string(run_id) + ".tsv")).string();
            std::string report = (dir / ("r" + std::to_string(run_id) + ".json")).string();
            ++run_id;
            std::string cmd = std::string(bin) +
                              " cluster --input " + mtx +
                              " --k 8 --mode ncc+index --index-activation 0 --seed 5" +
                              " --threads " + threads + " --out-assignments " + assign +
                              " --out-report " + report + " > /dev/null";
            expect(std::system(cmd.c_str()) == 0, "cluster invocation failed");
            std::string body = slurp(assign);
            if (reference.empty()) {
                reference = body;
                expect(!reference.empty(), "assignment file came out empty");
            } else {
                expect(body == reference,
                       "assignments differ at threads=" + std::string(threads) + " repeat " +
                           std::to_string(repeat));
            }
        }
    }
}

}  // namespace

int main() {
    struct Criterion {
        int number;
        const char* label;
        std::function<void()> fn;
    };
    const std::vector<Criterion> criteria = {
        {1, "mode equivalence: identical per-iteration assignments (baseline/ncc/ncc+index)",
         criterion_mode_equivalence},
        {2, "index soundness: candidates cover every centroid with dot >= lambda (1000 trials)",
         criterion_index_soundness},
        {3, "support bound: restricted squared mass below lambda^2 implies dot < lambda (10000 pairs)",
         criterion_support_bound},
        {4, "linear build: <= 2m squared-value ops per centroid (100 centroids, m <= 10000)",
         criterion_build_cost},
        {5, "worked examples: exact threshold entries for the 0.9/0.3/0.3/0.1 centroid",
         criterion_worked_examples},
        {6, "convergence: stops by reassignment/drift rule, objective never decreases (20 runs)",
         criterion_convergence},
        {7, "operation reduction: ncc+index <= 60% and ncc <= 90% of baseline dots at k=500",
         criterion_operation_reduction},
        {8, "tf-idf fixture: hand-computed vocabulary, dfs, weights, and unit norms",
         criterion_tfidf_fixture},
        {9, "cli determinism: byte-identical assignments across 3 repeats and thread counts",
         criterion_cli_determinism},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        std::string verdict = "PASS";
        std::string detail;
        try {
            c.fn();
        } catch (const Failure& f) {
            verdict = "FAIL";
            detail = f.detail;
            ++failures;
        } catch (const std::exception& e) {
            verdict = "FAIL";
            detail = std::string("unexpected error: ") + e.what();
            ++failures;
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] criterion %d: %s (%.2fs)%s%s\n", verdict.c_str(), c.number, c.label,
                    secs, detail.empty() ? "" : " — ", detail.c_str());
        std::fflush(stdout);
    }
    if (failures > 0) {
        std::printf("%d of %zu criteria failed\n", failures, criteria.size());
        return 1;
    }
    std::printf("all %zu criteria passed\n", criteria.size());
    return 0;
}
