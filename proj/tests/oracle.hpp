#pragma once

// Independent reference implementations used to cross-check the sparse fast
// paths. Everything here is deliberately naive dense arithmetic; keep it free
// of the library's own kernels (construction helpers excepted).

#include <cmath>
#include <cstdint>
#include <random>
#include <unordered_set>
#include <vector>

#include "sskm/random.hpp"
#include "sskm/sparse_vector.hpp"

namespace oracle {

inline std::vector<double> dense(const sskm::SparseVector& v, std::size_t dims) {
    std::vector<double> out(dims, 0.0);
    for (const sskm::Entry& e : v.entries()) out[e.dim] = e.weight;
    return out;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

inline double sq_euclidean(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    std::size_t n = a.size() > b.size() ? a.size() : b.size();
    for (std::size_t i = 0; i < n; ++i) {
        double av = i < a.size() ? a[i] : 0.0;
        double bv = i < b.size() ? b[i] : 0.0;
        s += (av - bv) * (av - bv);
    }
    return s;
}

/// {c : dot(centroid_c, x) >= lam} by exhaustive dense evaluation.
inline std::vector<std::uint32_t> reachable(const std::vector<sskm::SparseVector>& centroids,
                                            const sskm::SparseVector& x, double lam,
                                            std::size_t dims) {
    std::vector<std::uint32_t> out;
    std::vector<double> xd = dense(x, dims);
    for (std::uint32_t c = 0; c < centroids.size(); ++c) {
        if (dot(dense(centroids[c], dims), xd) >= lam) out.push_back(c);
    }
    return out;
}

/// Random unit vector with nnz distinct dims below `dims`; weights uniform in
/// (0, 1], optionally sign-flipped. Uses the library's pinned RNG helpers so
/// seeds reproduce across standard libraries.
inline sskm::SparseVector random_unit(std::mt19937_64& gen, std::uint32_t dims, std::size_t nnz,
                                      bool allow_negative = false) {
    std::unordered_set<std::uint32_t> used;
    std::vector<std::pair<std::uint32_t, double>> pairs;
    while (pairs.size() < nnz) {
        auto d = static_cast<std::uint32_t>(sskm::uniform_index(gen, dims));
        if (!used.insert(d).second) continue;
        double w = 1.0 - sskm::uniform_unit(gen);  // (0, 1]
        if (allow_negative && sskm::uniform_unit(gen) < 0.5) w = -w;
        pairs.emplace_back(d, w);
    }
    return sskm::normalize(sskm::SparseVector::from_pairs(std::move(pairs), dims));
}

}  // namespace oracle
