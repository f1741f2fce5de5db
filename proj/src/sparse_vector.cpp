#include "sskm/sparse_vector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sskm {

SparseVector::SparseVector(std::vector<Entry> entries, std::uint32_t dims)
    : entries_(std::move(entries)), dims_(dims) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].weight == 0.0) {
            throw std::invalid_argument("SparseVector: zero weight at dim " +
                                        std::to_string(entries_[i].dim));
        }
        if (i > 0 && entries_[i - 1].dim >= entries_[i].dim) {
            throw std::invalid_argument("SparseVector: dims not strictly increasing");
        }
    }
}

SparseVector SparseVector::from_pairs(std::vector<std::pair<std::uint32_t, double>> pairs,
                                      std::uint32_t dims) {
    std::sort(pairs.begin(), pairs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Entry> entries;
    entries.reserve(pairs.size());
    for (std::size_t i = 0; i < pairs.size();) {
        std::uint32_t d = pairs[i].first;
        double w = 0.0;
        for (; i < pairs.size() && pairs[i].first == d; ++i) w += pairs[i].second;
        if (w != 0.0) entries.push_back({d, w});
    }
    return SparseVector(std::move(entries), dims);
}

double SparseVector::norm() const {
    double s = 0.0;
    for (const Entry& e : entries_) s += e.weight * e.weight;
    return std::sqrt(s);
}

namespace {

// Galloping lower_bound: first position in [lo, n) with entries[pos].dim >= dim.
std::size_t gallop_to(const std::vector<Entry>& entries, std::size_t lo, std::uint32_t dim) {
    std::size_t n = entries.size();
    std::size_t step = 1;
    std::size_t hi = lo;
    while (hi < n && entries[hi].dim < dim) {
        lo = hi + 1;
        hi += step;
        step <<= 1;
    }
    if (hi > n) hi = n;
    while (lo < n && entries[lo].dim < dim) {
        // binary search within [lo, hi)
        std::size_t mid = lo + (hi - lo) / 2;
        if (mid == lo) break;
        if (entries[mid].dim < dim) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    while (lo < n && entries[lo].dim < dim) ++lo;
    return lo;
}

// Shared dims are visited in ascending order by both strategies, so the
// floating-point sum is identical whichever one runs.
double dot_impl(const std::vector<Entry>& small, const std::vector<Entry>& big) {
    double s = 0.0;
    if (small.empty() || big.empty()) return 0.0;
    if (big.size() / (small.size() + 1) >= 16) {
        std::size_t pos = 0;
        for (const Entry& e : small) {
            pos = gallop_to(big, pos, e.dim);
            if (pos == big.size()) break;
            if (big[pos].dim == e.dim) {
                s += e.weight * big[pos].weight;
                ++pos;
            }
        }
        return s;
    }
    std::size_t i = 0, j = 0;
    while (i < small.size() && j < big.size()) {
        std::uint32_t di = small[i].dim, dj = big[j].dim;
        if (di == dj) {
            s += small[i].weight * big[j].weight;
            ++i;
            ++j;
        } else if (di < dj) {
            ++i;
        } else {
            ++j;
        }
    }
    return s;
}

}  // namespace

double dot(const SparseVector& a, const SparseVector& b) {
    if (a.nnz() <= b.nnz()) return dot_impl(a.entries(), b.entries());
    return dot_impl(b.entries(), a.entries());
}

namespace {

bool lex_less(const std::vector<Entry>& a, const std::vector<Entry>& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i].weight != b[i].weight) return a[i].weight < b[i].weight;
    }
    return a.size() < b.size();
}

// One step of the unit-scaling map: exact power-of-two rescales while the
// squared sum under- or overflows, then one division by the computed norm.
// Quotients that round to zero are dropped; an exact unit norm is a fixpoint.
std::vector<Entry> unit_step(std::vector<Entry> cur) {
    for (;;) {
        double s = 0.0;
        for (const Entry& e : cur) s += e.weight * e.weight;
        double n = std::sqrt(s);
        if (n == 0.0 || std::isinf(n)) {
            // The squared sum under- or overflowed; an exact power-of-two
            // rescale moves the weights into range without touching mantissas.
            double scale = n == 0.0 ? 0x1p538 : 0x1p-538;
            std::vector<Entry> scaled;
            scaled.reserve(cur.size());
            for (const Entry& e : cur) {
                double w = e.weight * scale;
                if (w != 0.0) scaled.push_back({e.dim, w});
            }
            if (scaled.empty()) throw std::invalid_argument("cannot normalize zero vector");
            cur = std::move(scaled);
            continue;
        }
        if (n == 1.0) return cur;
        std::vector<Entry> next;
        next.reserve(cur.size());
        for (const Entry& e : cur) {
            double w = e.weight / n;
            if (w != 0.0) next.push_back({e.dim, w});  // components below ~n*5e-324 vanish
        }
        return next;
    }
}

}  // namespace

// Dividing by the computed norm once leaves the recomputed norm one ulp off
// 1.0 for roughly a quarter of all inputs, which would make repeated
// normalization drift bit by bit. Iterating the division instead lands on the
// orbit's terminal cycle and returns its canonical element — the fixpoint
// itself, or the lexicographically smallest state of the cycle — so the
// result is bitwise idempotent.
SparseVector normalize(const SparseVector& v) {
    if (v.empty()) throw std::invalid_argument("cannot normalize zero vector");
    if (v.nnz() == 1) {
        // sqrt(w*w) can land one ulp off |w|; the exact unit vector is +/-1.
        Entry e = v.entries()[0];
        e.weight = e.weight > 0.0 ? 1.0 : -1.0;
        return SparseVector({e}, v.dims());
    }

    std::vector<Entry> cur = v.entries();
    std::vector<Entry> prev;
    // Nearly every input settles within a few passes.
    for (int pass = 0; pass < 8; ++pass) {
        std::vector<Entry> next = unit_step(cur);
        if (next == cur) return SparseVector(std::move(next), v.dims());  // fixpoint
        if (next == prev) {
            // period-2 cycle: both elements map to each other; return the
            // lexicographically smaller one so either entry point agrees
            if (lex_less(cur, next)) next = std::move(cur);
            return SparseVector(std::move(next), v.dims());
        }
        prev = std::move(cur);
        cur = std::move(next);
    }
    // Rare long orbits: a weight a few orders of magnitude below its siblings
    // drifts through its finer ulp grid for ~1e5 passes before the orbit
    // repeats. Brent's cycle detection finds the terminal cycle in linear
    // time, and the lexicographically smallest state on that cycle is the
    // same wherever the orbit entered it, which keeps the result idempotent.
    std::size_t power = 1;
    std::size_t lam = 1;
    std::vector<Entry> tortoise = cur;
    std::vector<Entry> hare = unit_step(std::move(cur));
    while (tortoise != hare) {
        if (power == lam) {
            tortoise = hare;
            power *= 2;
            lam = 0;
        }
        hare = unit_step(std::move(hare));
        ++lam;
    }
    std::vector<Entry> best = hare;
    std::vector<Entry> walk = unit_step(std::move(hare));
    for (std::size_t i = 1; i < lam; ++i) {
        if (lex_less(walk, best)) best = walk;
        walk = unit_step(std::move(walk));
    }
    return SparseVector(std::move(best), v.dims());
}

double sq_euclidean(const SparseVector& a, const SparseVector& b) {
    const auto& ea = a.entries();
    const auto& eb = b.entries();
    double s = 0.0;
    std::size_t i = 0, j = 0;
    while (i < ea.size() && j < eb.size()) {
        std::uint32_t di = ea[i].dim, dj = eb[j].dim;
        double d;
        if (di == dj) {
            d = ea[i].weight - eb[j].weight;
            ++i;
            ++j;
        } else if (di < dj) {
            d = ea[i].weight;
            ++i;
        } else {
            d = -eb[j].weight;
            ++j;
        }
        s += d * d;
    }
    for (; i < ea.size(); ++i) s += ea[i].weight * ea[i].weight;
    for (; j < eb.size(); ++j) s += eb[j].weight * eb[j].weight;
    return s;
}

DenseAccumulator::DenseAccumulator(std::size_t dims) : values_(dims, 0.0), stamp_(dims, 0) {}

void DenseAccumulator::clear() {
    ++epoch_;
    touched_.clear();
}

void DenseAccumulator::add(const SparseVector& v) {
    std::uint32_t need = v.max_dim_bound();
    if (need > values_.size()) {
        values_.resize(need, 0.0);
        stamp_.resize(need, 0);
    }
    for (const Entry& e : v.entries()) {
        if (stamp_[e.dim] != epoch_) {
            stamp_[e.dim] = epoch_;
            values_[e.dim] = 0.0;
            touched_.push_back(e.dim);
        }
        values_[e.dim] += e.weight;
    }
}

double DenseAccumulator::value(std::uint32_t dim) const {
    if (dim >= values_.size() || stamp_[dim] != epoch_) return 0.0;
    return values_[dim];
}

SparseVector DenseAccumulator::extract(std::uint32_t dims_info) const {
    std::vector<std::uint32_t> dims(touched_);
    std::sort(dims.begin(), dims.end());
    std::vector<Entry> entries;
    entries.reserve(dims.size());
    for (std::uint32_t d : dims) {
        if (values_[d] != 0.0) entries.push_back({d, values_[d]});
    }
    return SparseVector(std::move(entries), dims_info);
}

}  // namespace sskm
