#pragma once

#include <cstdint>
#include <string>

#include "sskm/corpus.hpp"

namespace sskm {

struct ZipfSpec {
    std::size_t n_docs = 0;
    std::uint32_t vocab = 0;
    /// Token draws per document are uniform in [avg_nnz/2, 3*avg_nnz/2], so
    /// this steers the expected document length; repeated terms merge, which
    /// makes the realized average nnz land slightly below it.
    double avg_nnz = 10.0;
    double zipf_s = 1.1;
    std::uint64_t seed = 0;
};

/// Parses "N,V,avg_nnz,zipf_s,seed"; throws std::invalid_argument on
/// malformed or out-of-range fields.
ZipfSpec parse_zipf_spec(const std::string& text);

/// Synthetic documents whose term picks follow a Zipf distribution over the
/// vocabulary (rank r drawn with probability proportional to 1/r^s). Term
/// counts become tf weights, normalized to unit length. Deterministic given
/// spec.seed; doc ids are the row numbers.
CorpusMatrix synthetic_zipf_corpus(const ZipfSpec& spec);

}  // namespace sskm
