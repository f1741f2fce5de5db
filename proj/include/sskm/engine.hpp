#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sskm/corpus.hpp"
#include "sskm/prune_index.hpp"
#include "sskm/sparse_vector.hpp"

namespace sskm {

enum class Mode { kBaseline, kNcc, kNccIndex };

/// Parses "baseline" | "ncc" | "ncc+index"; throws std::invalid_argument on
/// anything else.
Mode parse_mode(const std::string& name);
const char* mode_name(Mode mode);

struct RunConfig {
    std::uint32_t k = 2;
    Mode mode = Mode::kBaseline;
    std::vector<double> lambdas{0.1, 0.25, 0.4, 0.6};
    double conv_sq_dist = 0.0001;
    /// Squared-Euclidean tolerance for treating a centroid as unchanged.
    /// 0 preserves exact mode equivalence; positive values trade exactness
    /// for more skipping.
    double ncc_epsilon = 0.0;
    /// The index path runs only when the number of changed centroids
    /// exceeds this; below it the plain NCC scan is cheaper than a rebuild.
    std::uint32_t index_activation_threshold = 100;
    std::uint32_t max_iters = 100;
    std::uint64_t seed = 0;
    /// Worker cap; 0 = hardware concurrency. Results are identical for any
    /// value.
    std::uint32_t threads = 0;

    /// Throws std::invalid_argument when a field is out of range for a
    /// corpus of n_docs documents.
    void validate(std::size_t n_docs) const;
};

struct IterationStats {
    std::uint32_t iteration = 0;
    std::uint64_t n_reassigned = 0;
    std::uint32_t n_unchanged_centroids = 0;
    std::uint64_t dot_products = 0;
    std::uint64_t index_queries = 0;
    std::uint64_t candidates_total = 0;
    double wall_seconds = 0.0;
    double index_build_seconds = 0.0;
    bool index_active = false;
    /// Max squared centroid drift vs the previous iteration; 0 for
    /// iteration 1, which has no predecessor.
    double max_sq_drift = 0.0;
    double objective = 0.0;
};

enum class StopReason { kNoReassignments, kCentroidDrift, kMaxIterations };
const char* stop_reason_name(StopReason reason);

/// Seeding output: the chosen documents plus the provisional nearest-seed
/// assignment each document ends up with (ties: lowest seed index).
struct SeedResult {
    std::vector<std::uint32_t> seeds;
    std::vector<std::uint32_t> assignments;
    std::vector<double> sims;
};

/// k-Means++ adapted to the sphere: the first seed is uniform, each next one
/// is drawn with probability proportional to d^2 where d = max(0, 1 - best
/// similarity to the seeds so far). Deterministic given the seed value, for
/// any thread count.
SeedResult seed_kmeanspp(const CorpusMatrix& data, std::uint32_t k, std::uint64_t seed,
                         std::uint32_t threads = 0);

/// Seed document indices only (see seed_kmeanspp).
std::vector<std::uint32_t> init_kmeanspp(const CorpusMatrix& data, std::uint32_t k,
                                         std::uint64_t seed);

struct CentroidUpdate {
    std::vector<SparseVector> centroids;
    /// Clusters that were empty and got refilled; the engine forces these
    /// to count as changed.
    std::vector<std::uint32_t> repaired;
};

/// Normalized per-cluster sums, members added in ascending document order so
/// the result is bitwise identical for any worker count. Empty clusters are
/// repaired before normalization by moving in the document with the lowest
/// cached similarity (ties: lowest index) from a cluster of size >= 2, which
/// mutates `assignments`.
CentroidUpdate compute_centroids(const CorpusMatrix& data,
                                 std::vector<std::uint32_t>& assignments,
                                 const std::vector<double>& sims, std::uint32_t k,
                                 std::uint32_t threads);

struct UnchangedResult {
    std::vector<std::uint8_t> unchanged;  // flag per cluster (the set C_u)
    std::uint32_t n_unchanged = 0;
    double max_sq_drift = 0.0;
};

/// Flags cluster j iff sq_euclidean(prev[j], next[j]) <= ncc_epsilon. With
/// epsilon 0 that means bitwise-identical centroids.
UnchangedResult detect_unchanged(const std::vector<SparseVector>& prev,
                                 const std::vector<SparseVector>& next, double ncc_epsilon,
                                 std::uint32_t threads);

struct ClusteringState {
    std::vector<std::uint32_t> assignments;
    std::vector<double> sims;  // similarity to the assigned centroid
    std::vector<SparseVector> centroids;
    std::vector<SparseVector> prev_centroids;
    std::vector<std::uint8_t> unchanged;  // C_u flags, all clear on iteration 1
    std::uint32_t iteration = 0;
};

/// One assignment step over all documents. Iteration 1 always runs the full
/// baseline scan (there is no trustworthy cache yet); later iterations follow
/// config.mode. `index` must be non-null exactly when the index path should
/// run this iteration. All three modes produce identical assignments when
/// ncc_epsilon is 0; ties go to the lowest cluster id.
IterationStats assign(const CorpusMatrix& data, ClusteringState& state, const RunConfig& config,
                      const MultiIndex* index);

/// Sum over documents of dot(x_i, centroid[assignments[i]]), accumulated in
/// ascending document order.
double objective(const CorpusMatrix& data, const std::vector<std::uint32_t>& assignments,
                 const std::vector<SparseVector>& centroids);

struct ClusteringResult {
    std::vector<std::uint32_t> assignments;
    std::vector<double> sims;
    std::vector<SparseVector> centroids;
    std::vector<IterationStats> iterations;
    double objective = 0.0;
    StopReason stop_reason = StopReason::kMaxIterations;

    std::uint64_t total_dot_products() const;
    double total_index_build_seconds() const;
};

/// Full clustering run: k-means++ seeding, then iterations of
/// compute_centroids -> detect_unchanged -> assign until no document moves,
/// the max squared centroid drift falls below conv_sq_dist, or max_iters.
/// Bitwise deterministic given config.seed, for any thread count.
ClusteringResult run(const CorpusMatrix& data, const RunConfig& config);

}  // namespace sskm
