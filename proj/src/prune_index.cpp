#include "sskm/prune_index.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sskm {

namespace {

// The window comparison uses lambda^2 shaved by this relative slack, so
// floating-point rounding in the running sum can only shorten windows and
// lower min_overlap counts. That direction admits extra candidates but never
// prunes a true one, keeping the superset guarantee intact.
constexpr double kSumSlack = 1e-9;

}  // namespace

MultiIndex MultiIndex::build(const std::vector<SparseVector>& centroids,
                             const std::vector<double>& lambdas) {
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > 0.0 && lambdas[i] < 1.0)) {
            throw std::invalid_argument("lambda must be in (0, 1)");
        }
        if (i > 0 && !(lambdas[i] > lambdas[i - 1])) {
            throw std::invalid_argument("lambdas must be strictly ascending");
        }
    }

    MultiIndex m;
    m.n_centroids_ = centroids.size();
    for (std::uint32_t c = 0; c < centroids.size(); ++c) {
        double n = centroids[c].norm();
        if (std::abs(n - 1.0) > 1e-6) {
            throw std::invalid_argument("non-unit centroid " + std::to_string(c) + " (norm " +
                                        std::to_string(n) + ")");
        }
        for (const Entry& e : centroids[c].entries()) {
            m.g_.postings[e.dim].push_back(c);
        }
    }

    m.thresholds_.reserve(lambdas.size());
    for (double lambda : lambdas) {
        ThresholdIndex p;
        p.lambda = lambda;
        p.window_ops.assign(centroids.size(), 0);
        m.thresholds_.push_back(std::move(p));
    }

    // Per centroid: (squared weight, dim) in descending squared weight, ties
    // broken by ascending dim for a reproducible build.
    std::vector<std::pair<double, std::uint32_t>> ranked;
    for (std::uint32_t c = 0; c < centroids.size(); ++c) {
        ranked.clear();
        for (const Entry& e : centroids[c].entries()) {
            ranked.emplace_back(e.weight * e.weight, e.dim);
        }
        std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });

        for (ThresholdIndex& p : m.thresholds_) {
            const double target = p.lambda * p.lambda * (1.0 - kSumSlack);
            std::uint32_t ops = 0;
            std::size_t tail = 0;
            double sum = 0.0;
            // Sliding window over the descending-sorted squared weights: for
            // each start j, grow the tail until the window reaches lambda^2;
            // min_overlap is the window length. Each squared value is added
            // once and subtracted at most once (<= 2m operations).
            for (std::size_t j = 0; j < ranked.size(); ++j) {
                while (tail < ranked.size() && sum < target) {
                    sum += ranked[tail].first;
                    ++tail;
                    ++ops;
                }
                if (sum < target) break;  // suffix exhausted: stop this centroid
                p.postings[ranked[j].second].push_back(
                    {c, static_cast<std::uint32_t>(tail - j)});
                sum -= ranked[j].first;
                ++ops;
            }
            p.window_ops[c] = ops;
        }
    }
    return m;
}

const ThresholdIndex* MultiIndex::select_threshold(double baseline_sim) const {
    const ThresholdIndex* best = nullptr;
    for (const ThresholdIndex& p : thresholds_) {
        if (p.lambda <= baseline_sim) {
            best = &p;
        } else {
            break;
        }
    }
    return best;
}

std::unordered_map<std::uint32_t, std::uint32_t> overlap_counts(const GeneralIndex& g,
                                                                const SparseVector& x) {
    std::unordered_map<std::uint32_t, std::uint32_t> counts;
    for (const Entry& e : x.entries()) {
        auto it = g.postings.find(e.dim);
        if (it == g.postings.end()) continue;
        for (std::uint32_t c : it->second) ++counts[c];
    }
    return counts;
}

std::vector<std::uint32_t> candidates(
    const ThresholdIndex& p, const SparseVector& x,
    const std::unordered_map<std::uint32_t, std::uint32_t>& counts) {
    std::vector<std::uint32_t> out;
    for (const Entry& e : x.entries()) {
        auto it = p.postings.find(e.dim);
        if (it == p.postings.end()) continue;
        for (const ThresholdEntry& te : it->second) {
            auto cit = counts.find(te.centroid);
            if (cit != counts.end() && cit->second >= te.min_overlap) {
                out.push_back(te.centroid);
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void IndexQuery::prepare(std::size_t n_centroids) {
    if (counts_.size() < n_centroids) {
        counts_.resize(n_centroids, 0);
        count_stamp_.resize(n_centroids, 0);
        cand_stamp_.resize(n_centroids, 0);
    }
}

void IndexQuery::compute_overlaps(const GeneralIndex& g, const SparseVector& x) {
    ++overlap_epoch_;
    for (const Entry& e : x.entries()) {
        auto it = g.postings.find(e.dim);
        if (it == g.postings.end()) continue;
        for (std::uint32_t c : it->second) {
            if (count_stamp_[c] != overlap_epoch_) {
                count_stamp_[c] = overlap_epoch_;
                counts_[c] = 1;
            } else {
                ++counts_[c];
            }
        }
    }
}

const std::vector<std::uint32_t>& IndexQuery::collect_candidates(const ThresholdIndex& p,
                                                                 const SparseVector& x) {
    ++cand_epoch_;
    candidates_.clear();
    for (const Entry& e : x.entries()) {
        auto it = p.postings.find(e.dim);
        if (it == p.postings.end()) continue;
        for (const ThresholdEntry& te : it->second) {
            if (count(te.centroid) >= te.min_overlap && cand_stamp_[te.centroid] != cand_epoch_) {
                cand_stamp_[te.centroid] = cand_epoch_;
                candidates_.push_back(te.centroid);
            }
        }
    }
    std::sort(candidates_.begin(), candidates_.end());
    return candidates_;
}

}  // namespace sskm
