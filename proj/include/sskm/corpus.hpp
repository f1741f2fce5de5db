#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sskm/sparse_vector.hpp"

namespace sskm {

using StopWords = std::unordered_set<std::string>;

/// Term-to-dimension mapping plus the document frequencies needed for IDF.
struct Vocabulary {
    std::unordered_map<std::string, std::uint32_t> term_to_dim;
    std::vector<std::uint32_t> doc_freq;  // indexed by dim
    std::uint32_t n_docs = 0;

    std::uint32_t size() const { return static_cast<std::uint32_t>(doc_freq.size()); }
};

/// Unit-length document vectors plus their ids; dims is the vocabulary size.
struct CorpusMatrix {
    std::vector<SparseVector> vectors;
    std::vector<std::string> doc_ids;
    std::uint32_t dims = 0;

    std::size_t size() const { return vectors.size(); }
};

/// Lowercased word sequence. Words are maximal runs of ASCII alphanumerics
/// and non-ASCII UTF-8 code points; every ASCII non-alphanumeric byte
/// splits. Only ASCII letters are case-folded.
std::vector<std::string> tokenize(const std::string& text);

/// Assigns dimensions in first-occurrence order to terms that survive the
/// stop list and the max document-frequency ratio. doc_freq counts
/// documents, not occurrences. Throws if nothing survives.
Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& docs,
                            const StopWords& stop_words, double max_df_ratio);

/// Raw tf * ln(n_docs / df) weights, unnormalized; zero weights (df == N)
/// and out-of-vocabulary terms are dropped. Empty result -> empty vector.
SparseVector tfidf(const std::vector<std::string>& doc, const Vocabulary& vocab);

/// Unit-length TF-IDF vector, or nullopt for a document whose weights all
/// vanish (dropped from the corpus).
std::optional<SparseVector> vectorize(const std::vector<std::string>& doc,
                                      const Vocabulary& vocab);

struct VectorizeResult {
    CorpusMatrix matrix;
    Vocabulary vocab;
    std::vector<std::string> dropped_doc_ids;
};

/// Full ingestion pipeline. Documents containing nothing but stop words are
/// excluded before the vocabulary pass (so they do not dilute IDF); anything
/// that still vectorizes to zero is dropped afterwards. Both kinds are
/// recorded in dropped_doc_ids.
VectorizeResult vectorize_corpus(const std::vector<std::pair<std::string, std::string>>& docs,
                                 const StopWords& stop_words, double max_df_ratio);

/// JSON Lines reader: one object per line with string fields "id" and
/// "text". Malformed lines raise errors that name the line number.
std::vector<std::pair<std::string, std::string>> load_jsonl(const std::string& path);

/// One term per line; blank lines ignored.
StopWords load_stopwords(const std::string& path);

/// Coordinate text format:
///   %%sparse-unit-matrix <n_rows> <n_dims> <nnz>
///   <row> <dim> <weight>          (0-based, rows then dims ascending)
/// Weights are printed with 17 significant digits so write -> load
/// round-trips bitwise. Doc ids go to a sidecar at path + ".ids".
void write_matrix(const std::string& path, const CorpusMatrix& matrix);
CorpusMatrix load_matrix(const std::string& path);

/// Vocabulary sidecar: "%%vocabulary <n_terms> <n_docs>" then one
/// "<term> <df>" line per dimension in dim order.
void write_vocabulary(const std::string& path, const Vocabulary& vocab);
Vocabulary load_vocabulary(const std::string& path);

}  // namespace sskm
