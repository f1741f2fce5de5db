#include "sskm/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "sskm/parallel.hpp"
#include "sskm/random.hpp"

namespace sskm {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

Mode parse_mode(const std::string& name) {
    if (name == "baseline") return Mode::kBaseline;
    if (name == "ncc") return Mode::kNcc;
    if (name == "ncc+index") return Mode::kNccIndex;
    throw std::invalid_argument("unknown mode '" + name +
                                "' (expected baseline, ncc, or ncc+index)");
}

const char* mode_name(Mode mode) {
    switch (mode) {
        case Mode::kBaseline: return "baseline";
        case Mode::kNcc: return "ncc";
        case Mode::kNccIndex: return "ncc+index";
    }
    return "?";
}

const char* stop_reason_name(StopReason reason) {
    switch (reason) {
        case StopReason::kNoReassignments: return "no_reassignments";
        case StopReason::kCentroidDrift: return "centroid_drift";
        case StopReason::kMaxIterations: return "max_iterations";
    }
    return "?";
}

void RunConfig::validate(std::size_t n_docs) const {
    if (k < 2) throw std::invalid_argument("k must be at least 2");
    if (k > n_docs) {
        throw std::invalid_argument("k (" + std::to_string(k) + ") exceeds the number of documents (" +
                                    std::to_string(n_docs) + ")");
    }
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > 0.0 && lambdas[i] < 1.0)) {
            throw std::invalid_argument("lambda must be in (0, 1)");
        }
        if (i > 0 && !(lambdas[i] > lambdas[i - 1])) {
            throw std::invalid_argument("lambdas must be strictly ascending");
        }
    }
    if (!(conv_sq_dist > 0.0)) throw std::invalid_argument("conv_sq_dist must be positive");
    if (ncc_epsilon < 0.0) throw std::invalid_argument("ncc_epsilon must be nonnegative");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
}

SeedResult seed_kmeanspp(const CorpusMatrix& data, std::uint32_t k, std::uint64_t seed,
                         std::uint32_t threads) {
    const std::size_t n = data.size();
    if (n == 0) throw std::invalid_argument("empty corpus");
    if (k < 1 || k > n) {
        throw std::invalid_argument("k must be between 1 and the number of documents");
    }

    std::mt19937_64 gen(seed);
    SeedResult r;
    r.seeds.reserve(k);
    r.assignments.assign(n, 0);
    r.sims.assign(n, -2.0);
    std::vector<std::uint8_t> chosen(n, 0);
    std::vector<double> cum(n);

    auto add_seed = [&](std::size_t doc, std::uint32_t cluster) {
        chosen[doc] = 1;
        r.seeds.push_back(static_cast<std::uint32_t>(doc));
        const SparseVector& s = data.vectors[doc];
        // Strictly-greater updates keep the lowest cluster id on ties, the
        // same rule the assignment step uses.
        parallel_for(n, threads, [&](std::size_t begin, std::size_t end, unsigned) {
            for (std::size_t i = begin; i < end; ++i) {
                double sim = dot(data.vectors[i], s);
                if (sim > r.sims[i]) {
                    r.sims[i] = sim;
                    r.assignments[i] = cluster;
                }
            }
        });
    };

    add_seed(uniform_index(gen, n), 0);
    for (std::uint32_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double w = 0.0;
            if (!chosen[i]) {
                double d = 1.0 - r.sims[i];
                if (d > 0.0) w = d * d;
            }
            total += w;
            cum[i] = total;
        }
        std::size_t pick;
        if (total > 0.0) {
            double target = uniform_unit(gen) * total;
            pick = static_cast<std::size_t>(
                std::upper_bound(cum.begin(), cum.end(), target) - cum.begin());
            if (pick >= n) {
                // target rounded up to the total; take the last positive-weight doc
                pick = n - 1;
                while (chosen[pick]) --pick;
            }
        } else {
            // every remaining document duplicates a seed; fall back to the
            // lowest unchosen index
            pick = 0;
            while (chosen[pick]) ++pick;
        }
        add_seed(pick, c);
    }
    return r;
}

std::vector<std::uint32_t> init_kmeanspp(const CorpusMatrix& data, std::uint32_t k,
                                         std::uint64_t seed) {
    return seed_kmeanspp(data, k, seed).seeds;
}

CentroidUpdate compute_centroids(const CorpusMatrix& data,
                                 std::vector<std::uint32_t>& assignments,
                                 const std::vector<double>& sims, std::uint32_t k,
                                 std::uint32_t threads) {
    const std::size_t n = data.size();
    if (assignments.size() != n || sims.size() != n) {
        throw std::invalid_argument("assignments/sims size mismatch");
    }
    if (k < 1 || k > n) throw std::invalid_argument("invalid cluster count");

    CentroidUpdate out;
    std::vector<std::size_t> sizes(k, 0);
    for (std::uint32_t a : assignments) {
        if (a >= k) throw std::invalid_argument("assignment out of range");
        ++sizes[a];
    }

    // Refill each empty cluster (ascending id) with the document worst served
    // by its current cluster, taken from a cluster that can spare it.
    for (std::uint32_t j = 0; j < k; ++j) {
        if (sizes[j] != 0) continue;
        std::size_t donor = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (sizes[assignments[i]] < 2) continue;
            if (donor == n || sims[i] < sims[donor]) donor = i;
        }
        --sizes[assignments[donor]];
        assignments[donor] = j;
        sizes[j] = 1;
        out.repaired.push_back(j);
    }

    // CSR member lists, ascending document index within each cluster.
    std::vector<std::size_t> offset(k + 1, 0);
    for (std::uint32_t a : assignments) ++offset[a + 1];
    for (std::uint32_t j = 0; j < k; ++j) offset[j + 1] += offset[j];
    std::vector<std::uint32_t> members(n);
    std::vector<std::size_t> fill(offset.begin(), offset.end() - 1);
    for (std::size_t i = 0; i < n; ++i) {
        members[fill[assignments[i]]++] = static_cast<std::uint32_t>(i);
    }

    out.centroids.resize(k);
    unsigned n_workers = resolve_threads(threads, k);
    std::vector<DenseAccumulator> acc;
    acc.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) acc.emplace_back(data.dims);
    parallel_for(k, n_workers, [&](std::size_t begin, std::size_t end, unsigned w) {
        DenseAccumulator& sum = acc[w];
        for (std::size_t j = begin; j < end; ++j) {
            sum.clear();
            for (std::size_t m = offset[j]; m < offset[j + 1]; ++m) {
                sum.add(data.vectors[members[m]]);
            }
            out.centroids[j] = normalize(sum.extract(data.dims));
        }
    });
    return out;
}

UnchangedResult detect_unchanged(const std::vector<SparseVector>& prev,
                                 const std::vector<SparseVector>& next, double ncc_epsilon,
                                 std::uint32_t threads) {
    if (prev.size() != next.size()) throw std::invalid_argument("centroid count mismatch");
    const std::size_t k = prev.size();
    UnchangedResult r;
    r.unchanged.assign(k, 0);
    std::vector<double> drift(k, 0.0);
    parallel_for(k, threads, [&](std::size_t begin, std::size_t end, unsigned) {
        for (std::size_t j = begin; j < end; ++j) {
            drift[j] = sq_euclidean(prev[j], next[j]);
            if (drift[j] <= ncc_epsilon) r.unchanged[j] = 1;
        }
    });
    for (std::size_t j = 0; j < k; ++j) {
        if (r.unchanged[j]) ++r.n_unchanged;
        if (drift[j] > r.max_sq_drift) r.max_sq_drift = drift[j];
    }
    return r;
}

IterationStats assign(const CorpusMatrix& data, ClusteringState& state, const RunConfig& config,
                      const MultiIndex* index) {
    const std::size_t n = data.size();
    const auto k = static_cast<std::uint32_t>(state.centroids.size());
    const bool full_scan = state.iteration <= 1 || config.mode == Mode::kBaseline;

    IterationStats st;
    st.iteration = state.iteration;
    st.index_active = index != nullptr;

    std::vector<std::uint32_t> changed_ids, unchanged_ids;
    for (std::uint32_t j = 0; j < k; ++j) {
        (state.unchanged[j] ? unchanged_ids : changed_ids).push_back(j);
    }
    st.n_unchanged_centroids = static_cast<std::uint32_t>(unchanged_ids.size());

    struct Counters {
        std::uint64_t dots = 0;
        std::uint64_t reassigned = 0;
        std::uint64_t queries = 0;
        std::uint64_t cands = 0;
    };
    unsigned n_workers = resolve_threads(config.threads, n);
    std::vector<Counters> counters(n_workers);
    std::vector<IndexQuery> scratch(index ? n_workers : 0);

    parallel_for(n, n_workers, [&](std::size_t begin, std::size_t end, unsigned w) {
        Counters& ct = counters[w];
        IndexQuery* query = index ? &scratch[w] : nullptr;
        if (query) query->prepare(k);

        for (std::size_t i = begin; i < end; ++i) {
            const SparseVector& x = data.vectors[i];
            const std::uint32_t old_a = state.assignments[i];
            const double old_sim = state.sims[i];
            std::uint32_t arg = 0;
            double best = -2.0;

            auto eval = [&](std::uint32_t j) {
                double s = dot(x, state.centroids[j]);
                ++ct.dots;
                if (s > best || (s == best && j < arg)) {
                    best = s;
                    arg = j;
                }
            };

            if (full_scan) {
                for (std::uint32_t j = 0; j < k; ++j) eval(j);
            } else {
                const bool a_unchanged = state.unchanged[old_a] != 0;
                if (a_unchanged) {
                    best = old_sim;  // unchanged centroid: the cache is current
                } else {
                    best = dot(x, state.centroids[old_a]);  // refresh the baseline
                    ++ct.dots;
                }
                arg = old_a;

                bool used_index = false;
                if (index) {
                    const ThresholdIndex* p = index->select_threshold(best);
                    if (p) {
                        query->compute_overlaps(index->general(), x);
                        const auto& cands = query->collect_candidates(*p, x);
                        ++ct.queries;
                        ct.cands += cands.size();
                        for (std::uint32_t c : cands) {
                            if (c != old_a && !state.unchanged[c]) eval(c);
                        }
                        if (!a_unchanged && !(best > old_sim)) {
                            // The refreshed scan did not beat the previous max, so
                            // an unchanged centroid may tie or exceed it; those are
                            // bounded by old_sim and, when relevant, are candidates.
                            for (std::uint32_t c : cands) {
                                if (c != old_a && state.unchanged[c]) eval(c);
                            }
                        }
                        used_index = true;
                    }
                }
                if (!used_index) {
                    for (std::uint32_t j : changed_ids) {
                        if (j != old_a) eval(j);
                    }
                    if (!a_unchanged && !(best > old_sim)) {
                        for (std::uint32_t j : unchanged_ids) eval(j);
                    }
                }
            }

            if (arg != old_a) ++ct.reassigned;
            state.assignments[i] = arg;
            state.sims[i] = best;
        }
    });

    for (const Counters& ct : counters) {
        st.dot_products += ct.dots;
        st.n_reassigned += ct.reassigned;
        st.index_queries += ct.queries;
        st.candidates_total += ct.cands;
    }
    return st;
}

double objective(const CorpusMatrix& data, const std::vector<std::uint32_t>& assignments,
                 const std::vector<SparseVector>& centroids) {
    double sum = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        sum += dot(data.vectors[i], centroids[assignments[i]]);
    }
    return sum;
}

std::uint64_t ClusteringResult::total_dot_products() const {
    std::uint64_t total = 0;
    for (const IterationStats& it : iterations) total += it.dot_products;
    return total;
}

double ClusteringResult::total_index_build_seconds() const {
    double total = 0.0;
    for (const IterationStats& it : iterations) total += it.index_build_seconds;
    return total;
}

ClusteringResult run(const CorpusMatrix& data, const RunConfig& config) {
    config.validate(data.size());
    const std::uint32_t k = config.k;

    SeedResult seeded = seed_kmeanspp(data, k, config.seed, config.threads);
    ClusteringState state;
    state.assignments = std::move(seeded.assignments);
    state.sims = std::move(seeded.sims);
    state.unchanged.assign(k, 0);

    ClusteringResult result;
    StopReason stop = StopReason::kMaxIterations;
    for (std::uint32_t iter = 1; iter <= config.max_iters; ++iter) {
        auto t0 = std::chrono::steady_clock::now();
        state.iteration = iter;

        CentroidUpdate update =
            compute_centroids(data, state.assignments, state.sims, k, config.threads);

        IterationStats st;
        std::uint32_t n_unchanged = 0;
        if (iter == 1) {
            state.unchanged.assign(k, 0);
        } else {
            UnchangedResult ur = detect_unchanged(state.centroids, update.centroids,
                                                  config.ncc_epsilon, config.threads);
            for (std::uint32_t j : update.repaired) {
                if (ur.unchanged[j]) {
                    ur.unchanged[j] = 0;
                    --ur.n_unchanged;
                }
            }
            state.unchanged = std::move(ur.unchanged);
            st.max_sq_drift = ur.max_sq_drift;
            n_unchanged = ur.n_unchanged;
        }
        state.prev_centroids = std::move(state.centroids);
        state.centroids = std::move(update.centroids);

        MultiIndex index;
        const MultiIndex* index_ptr = nullptr;
        if (config.mode == Mode::kNccIndex && iter > 1 &&
            k - n_unchanged > config.index_activation_threshold) {
            auto tb = std::chrono::steady_clock::now();
            index = MultiIndex::build(state.centroids, config.lambdas);
            st.index_build_seconds = seconds_since(tb);
            index_ptr = &index;
        }

        IterationStats astats = assign(data, state, config, index_ptr);
        st.iteration = iter;
        st.n_reassigned = astats.n_reassigned;
        st.n_unchanged_centroids = astats.n_unchanged_centroids;
        st.dot_products = astats.dot_products;
        st.index_queries = astats.index_queries;
        st.candidates_total = astats.candidates_total;
        st.index_active = astats.index_active;

        double obj = 0.0;
        for (double s : state.sims) obj += s;
        st.objective = obj;
        st.wall_seconds = seconds_since(t0);
        result.iterations.push_back(st);

        if (st.n_reassigned == 0) {
            stop = StopReason::kNoReassignments;
            break;
        }
        if (iter > 1 && st.max_sq_drift < config.conv_sq_dist) {
            stop = StopReason::kCentroidDrift;
            break;
        }
    }

    result.stop_reason = stop;
    result.assignments = std::move(state.assignments);
    result.sims = std::move(state.sims);
    result.centroids = std::move(state.centroids);
    result.objective = result.iterations.back().objective;
    return result;
}

}  // namespace sskm
