#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "sskm/sparse_vector.hpp"

namespace sskm {

/// Posting lists from dimension to the centroids with a nonzero weight
/// there. Lists are sorted by centroid id and duplicate-free.
struct GeneralIndex {
    std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> postings;
};

struct ThresholdEntry {
    std::uint32_t centroid;
    std::uint32_t min_overlap;

    friend bool operator==(const ThresholdEntry& a, const ThresholdEntry& b) {
        return a.centroid == b.centroid && a.min_overlap == b.min_overlap;
    }
};

/// Pruning structure for one dot-product threshold. postings[d] holds
/// (centroid, min_overlap) pairs: a query whose support includes d can reach
/// dot >= lambda against that centroid only if the total support overlap is
/// at least min_overlap. Centroids within a posting list are sorted by id.
struct ThresholdIndex {
    double lambda = 0.0;
    std::unordered_map<std::uint32_t, std::vector<ThresholdEntry>> postings;
    /// Squared-value additions + subtractions spent building each centroid's
    /// entries; the sliding window keeps this at most 2m for m nonzeros.
    std::vector<std::uint32_t> window_ops;
};

/// One general index shared by a family of threshold indexes with strictly
/// ascending lambdas, all built from the same centroid snapshot.
class MultiIndex {
public:
    /// Centroids must be unit length (norm within 1e-6 of 1); every lambda
    /// must lie in (0, 1) and the sequence must be strictly ascending.
    static MultiIndex build(const std::vector<SparseVector>& centroids,
                            const std::vector<double>& lambdas);

    const GeneralIndex& general() const { return g_; }
    const std::vector<ThresholdIndex>& thresholds() const { return thresholds_; }
    std::size_t n_centroids() const { return n_centroids_; }

    /// Strongest applicable structure: the highest lambda <= baseline_sim,
    /// or nullptr when even the lowest lambda exceeds it (the caller then
    /// falls back to a full scan).
    const ThresholdIndex* select_threshold(double baseline_sim) const;

private:
    GeneralIndex g_;
    std::vector<ThresholdIndex> thresholds_;
    std::size_t n_centroids_ = 0;
};

/// |support(x) ∩ support(c)| for every centroid c sharing at least one dim
/// with x; zero-overlap centroids are absent.
std::unordered_map<std::uint32_t, std::uint32_t> overlap_counts(const GeneralIndex& g,
                                                                const SparseVector& x);

/// Centroid ids (ascending, deduplicated) that meet some min_overlap
/// requirement of p at a dim of x. Guaranteed superset of
/// {c : dot(c, x) >= p.lambda} for unit-length x.
std::vector<std::uint32_t> candidates(
    const ThresholdIndex& p, const SparseVector& x,
    const std::unordered_map<std::uint32_t, std::uint32_t>& counts);

/// Reusable per-worker query scratch. Overlap counts and candidate flags are
/// epoch-stamped, so clearing between queries is O(touched) without
/// reallocating.
class IndexQuery {
public:
    /// Sizes the scratch for centroid ids < n_centroids. Cheap when already
    /// large enough.
    void prepare(std::size_t n_centroids);

    /// Query step 1: count shared support dims per centroid.
    void compute_overlaps(const GeneralIndex& g, const SparseVector& x);

    /// Overlap of the most recent compute_overlaps query with `centroid`.
    std::uint32_t count(std::uint32_t centroid) const {
        return count_stamp_[centroid] == overlap_epoch_ ? counts_[centroid] : 0;
    }

    /// Query step 2: centroids meeting a min_overlap requirement at some dim
    /// of x, ascending. Valid until the next collect_candidates call.
    const std::vector<std::uint32_t>& collect_candidates(const ThresholdIndex& p,
                                                         const SparseVector& x);

private:
    std::vector<std::uint32_t> counts_;
    std::vector<std::uint64_t> count_stamp_;
    std::vector<std::uint64_t> cand_stamp_;
    std::vector<std::uint32_t> candidates_;
    std::uint64_t overlap_epoch_ = 0;
    std::uint64_t cand_epoch_ = 0;
};

}  // namespace sskm
