#include "sskm/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "sskm/random.hpp"

namespace sskm {

ZipfSpec parse_zipf_spec(const std::string& text) {
    std::istringstream in(text);
    ZipfSpec spec;
    char c1 = 0, c2 = 0, c3 = 0, c4 = 0;
    in >> spec.n_docs >> c1 >> spec.vocab >> c2 >> spec.avg_nnz >> c3 >> spec.zipf_s >> c4 >>
        spec.seed;
    if (in.fail() || c1 != ',' || c2 != ',' || c3 != ',' || c4 != ',' ||
        !(in >> std::ws).eof()) {
        throw std::invalid_argument("synthetic spec must be 'N,V,avg_nnz,zipf_s,seed', got '" +
                                    text + "'");
    }
    if (spec.n_docs < 1) throw std::invalid_argument("synthetic N must be at least 1");
    if (spec.vocab < 1) throw std::invalid_argument("synthetic V must be at least 1");
    if (spec.avg_nnz < 1.0) throw std::invalid_argument("synthetic avg_nnz must be at least 1");
    if (!(spec.zipf_s > 0.0)) throw std::invalid_argument("synthetic zipf_s must be positive");
    return spec;
}

CorpusMatrix synthetic_zipf_corpus(const ZipfSpec& spec) {
    if (spec.n_docs < 1 || spec.vocab < 1 || spec.avg_nnz < 1.0 || !(spec.zipf_s > 0.0)) {
        throw std::invalid_argument("invalid synthetic corpus spec");
    }

    // Inverse-CDF table over ranks: P(rank r) ∝ 1 / r^s.
    std::vector<double> cum(spec.vocab);
    double total = 0.0;
    for (std::uint32_t r = 0; r < spec.vocab; ++r) {
        total += std::pow(static_cast<double>(r) + 1.0, -spec.zipf_s);
        cum[r] = total;
    }

    std::mt19937_64 gen(spec.seed);
    const auto min_tokens = static_cast<std::size_t>(std::max(1.0, std::ceil(spec.avg_nnz / 2.0)));
    const auto max_tokens = static_cast<std::size_t>(std::max(1.0, std::floor(spec.avg_nnz * 1.5)));

    CorpusMatrix matrix;
    matrix.dims = spec.vocab;
    matrix.vectors.reserve(spec.n_docs);
    matrix.doc_ids.reserve(spec.n_docs);
    std::vector<std::pair<std::uint32_t, double>> counts;
    for (std::size_t i = 0; i < spec.n_docs; ++i) {
        std::size_t n_tokens =
            min_tokens + uniform_index(gen, max_tokens - min_tokens + 1);
        counts.clear();
        for (std::size_t t = 0; t < n_tokens; ++t) {
            double target = uniform_unit(gen) * total;
            auto it = std::upper_bound(cum.begin(), cum.end(), target);
            auto dim = static_cast<std::uint32_t>(
                it == cum.end() ? spec.vocab - 1 : it - cum.begin());
            counts.emplace_back(dim, 1.0);
        }
        matrix.vectors.push_back(normalize(SparseVector::from_pairs(counts, spec.vocab)));
        matrix.doc_ids.push_back(std::to_string(i));
    }
    return matrix;
}

}  // namespace sskm
