#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace sskm {

/// One nonzero coordinate of a sparse vector.
struct Entry {
    std::uint32_t dim;
    double weight;

    friend bool operator==(const Entry& a, const Entry& b) {
        return a.dim == b.dim && a.weight == b.weight;
    }
};

/// Sparse vector stored as (dim, weight) pairs with strictly increasing
/// dims and nonzero weights. Immutable after construction; cheap to share.
class SparseVector {
public:
    SparseVector() = default;

    /// `entries` must be sorted by dim, duplicate-free, all weights nonzero.
    /// `dims` is the total dimensionality (informational; 0 = unspecified).
    explicit SparseVector(std::vector<Entry> entries, std::uint32_t dims = 0);

    /// Builds from possibly unsorted (dim, weight) pairs; duplicate dims are
    /// summed, exact-zero results dropped.
    static SparseVector from_pairs(std::vector<std::pair<std::uint32_t, double>> pairs,
                                   std::uint32_t dims = 0);

    const std::vector<Entry>& entries() const { return entries_; }
    std::size_t nnz() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    std::uint32_t dims() const { return dims_; }

    /// Largest dim plus one, 0 for the empty vector.
    std::uint32_t max_dim_bound() const {
        return entries_.empty() ? 0 : entries_.back().dim + 1;
    }

    double norm() const;

    friend bool operator==(const SparseVector& a, const SparseVector& b) {
        return a.entries_ == b.entries_;
    }

private:
    std::vector<Entry> entries_;
    std::uint32_t dims_ = 0;
};

/// Dot product over the shared support. Accumulates products in ascending
/// dim order regardless of argument order or skip strategy, so the result
/// is bitwise symmetric.
double dot(const SparseVector& a, const SparseVector& b);

/// Scales to unit Euclidean length. The division is repeated (at most a few
/// passes) until the recomputed norm is exactly 1.0, which makes the
/// operation idempotent at the bit level. Throws std::invalid_argument on
/// the zero vector.
SparseVector normalize(const SparseVector& v);

/// Squared Euclidean distance over the union of supports.
double sq_euclidean(const SparseVector& a, const SparseVector& b);

/// Dense accumulation buffer for centroid sums. Single writer; clearing is
/// O(touched) via an epoch stamp, so one buffer can be reused across many
/// clusters without re-zeroing the full dimensionality.
class DenseAccumulator {
public:
    explicit DenseAccumulator(std::size_t dims);

    void clear();

    /// Adds every entry of `v`; grows the buffer if v exceeds it.
    void add(const SparseVector& v);

    double value(std::uint32_t dim) const;
    std::size_t dims() const { return values_.size(); }

    /// Touched dims in ascending order with their accumulated values;
    /// exact zeros (from cancellation) are dropped.
    SparseVector extract(std::uint32_t dims_info = 0) const;

private:
    std::vector<double> values_;
    std::vector<std::uint64_t> stamp_;
    std::vector<std::uint32_t> touched_;
    std::uint64_t epoch_ = 1;
};

}  // namespace sskm
