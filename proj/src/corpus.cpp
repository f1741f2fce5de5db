#include "sskm/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sskm {

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> terms;
    std::string current;
    for (unsigned char c : text) {
        bool word_char = std::isalnum(c) || c >= 0x80;
        if (word_char) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (!current.empty()) {
            terms.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) terms.push_back(std::move(current));
    return terms;
}

Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& docs,
                            const StopWords& stop_words, double max_df_ratio) {
    if (docs.empty()) throw std::invalid_argument("empty corpus");
    if (!(max_df_ratio > 0.0 && max_df_ratio <= 1.0)) {
        throw std::invalid_argument("max_df_ratio must be in (0, 1]");
    }
    auto n_docs = static_cast<std::uint32_t>(docs.size());

    std::vector<std::string> order;  // first occurrence across the corpus
    std::unordered_map<std::string, std::uint32_t> df;
    for (const auto& doc : docs) {
        for (const auto& term : doc) {
            if (df.emplace(term, 0).second) order.push_back(term);
        }
        // second pass per doc so df counts documents once per term
        std::unordered_set<std::string> seen;
        for (const auto& term : doc) {
            if (seen.insert(term).second) ++df[term];
        }
    }

    Vocabulary vocab;
    vocab.n_docs = n_docs;
    for (const auto& term : order) {
        if (stop_words.count(term)) continue;
        std::uint32_t f = df[term];
        if (static_cast<double>(f) / static_cast<double>(n_docs) > max_df_ratio) continue;
        vocab.term_to_dim.emplace(term, static_cast<std::uint32_t>(vocab.doc_freq.size()));
        vocab.doc_freq.push_back(f);
    }
    if (vocab.doc_freq.empty()) throw std::runtime_error("empty vocabulary");
    return vocab;
}

SparseVector tfidf(const std::vector<std::string>& doc, const Vocabulary& vocab) {
    std::unordered_map<std::uint32_t, std::uint32_t> tf;
    for (const auto& term : doc) {
        auto it = vocab.term_to_dim.find(term);
        if (it != vocab.term_to_dim.end()) ++tf[it->second];
    }
    std::vector<Entry> entries;
    entries.reserve(tf.size());
    for (const auto& [dim, count] : tf) {
        double idf = std::log(static_cast<double>(vocab.n_docs) /
                              static_cast<double>(vocab.doc_freq[dim]));
        double w = static_cast<double>(count) * idf;
        if (w != 0.0) entries.push_back({dim, w});
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.dim < b.dim; });
    return SparseVector(std::move(entries), vocab.size());
}

std::optional<SparseVector> vectorize(const std::vector<std::string>& doc,
                                      const Vocabulary& vocab) {
    SparseVector raw = tfidf(doc, vocab);
    if (raw.empty()) return std::nullopt;
    return normalize(raw);
}

VectorizeResult vectorize_corpus(const std::vector<std::pair<std::string, std::string>>& docs,
                                 const StopWords& stop_words, double max_df_ratio) {
    if (docs.empty()) throw std::runtime_error("empty corpus");

    VectorizeResult result;
    std::vector<std::vector<std::string>> kept_tokens;
    std::vector<const std::string*> kept_ids;
    kept_tokens.reserve(docs.size());
    for (const auto& [id, text] : docs) {
        auto tokens = tokenize(text);
        bool only_stop = true;
        for (const auto& t : tokens) {
            if (!stop_words.count(t)) {
                only_stop = false;
                break;
            }
        }
        if (tokens.empty() || only_stop) {
            result.dropped_doc_ids.push_back(id);
        } else {
            kept_tokens.push_back(std::move(tokens));
            kept_ids.push_back(&id);
        }
    }
    if (kept_tokens.empty()) throw std::runtime_error("empty corpus");

    result.vocab = build_vocabulary(kept_tokens, stop_words, max_df_ratio);
    result.matrix.dims = result.vocab.size();
    for (std::size_t i = 0; i < kept_tokens.size(); ++i) {
        auto vec = vectorize(kept_tokens[i], result.vocab);
        if (vec) {
            result.matrix.vectors.push_back(std::move(*vec));
            result.matrix.doc_ids.push_back(*kept_ids[i]);
        } else {
            result.dropped_doc_ids.push_back(*kept_ids[i]);
        }
    }
    if (result.matrix.vectors.empty()) throw std::runtime_error("empty corpus");
    return result;
}

std::vector<std::pair<std::string, std::string>> load_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::pair<std::string, std::string>> docs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": invalid JSON: " + e.what());
        }
        if (!obj.is_object() || !obj.contains("id") || !obj["id"].is_string() ||
            !obj.contains("text") || !obj["text"].is_string()) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected object with string fields \"id\" and \"text\"");
        }
        docs.emplace_back(obj["id"].get<std::string>(), obj["text"].get<std::string>());
    }
    return docs;
}

StopWords load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    StopWords words;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (!line.empty()) words.insert(line);
    }
    return words;
}

namespace {

const char kMatrixHeader[] = "%%sparse-unit-matrix";

std::runtime_error format_error(const std::string& path, std::size_t line_no,
                                const std::string& what) {
    return std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

}  // namespace

void write_matrix(const std::string& path, const CorpusMatrix& matrix) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    std::size_t nnz = 0;
    for (const auto& v : matrix.vectors) nnz += v.nnz();
    std::fprintf(f, "%s %zu %u %zu\n", kMatrixHeader, matrix.vectors.size(), matrix.dims, nnz);
    for (std::size_t row = 0; row < matrix.vectors.size(); ++row) {
        for (const Entry& e : matrix.vectors[row].entries()) {
            std::fprintf(f, "%zu %u %.17g\n", row, e.dim, e.weight);
        }
    }
    if (std::fclose(f) != 0) throw std::runtime_error("write failed: " + path);

    std::ofstream ids(path + ".ids");
    if (!ids) throw std::runtime_error("cannot open " + path + ".ids for writing");
    for (const auto& id : matrix.doc_ids) ids << id << '\n';
    if (!ids) throw std::runtime_error("write failed: " + path + ".ids");
}

CorpusMatrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");

    std::istringstream header(line);
    std::string magic;
    std::size_t n_rows = 0, nnz = 0;
    std::uint32_t n_dims = 0;
    header >> magic >> n_rows >> n_dims >> nnz;
    if (magic != kMatrixHeader || header.fail()) {
        throw format_error(path, 1, "bad header, expected '" + std::string(kMatrixHeader) +
                                        " <n_rows> <n_dims> <nnz>'");
    }

    CorpusMatrix matrix;
    matrix.dims = n_dims;
    matrix.vectors.reserve(n_rows);
    std::vector<Entry> entries;
    std::size_t current_row = 0, seen = 0, line_no = 1;

    auto flush_row = [&](std::size_t upto) {
        while (current_row < upto) {
            matrix.vectors.emplace_back(std::move(entries), n_dims);
            entries.clear();
            ++current_row;
        }
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::size_t row;
        std::uint32_t dim;
        double weight;
        if (std::sscanf(line.c_str(), "%zu %u %lg", &row, &dim, &weight) != 3) {
            throw format_error(path, line_no, "expected '<row> <dim> <weight>'");
        }
        if (row >= n_rows) throw format_error(path, line_no, "row index out of bounds");
        if (dim >= n_dims) throw format_error(path, line_no, "dim index out of bounds");
        if (row < current_row) throw format_error(path, line_no, "rows out of order");
        if (row == current_row && !entries.empty() && entries.back().dim >= dim) {
            throw format_error(path, line_no, "dims out of order within row");
        }
        if (weight == 0.0) throw format_error(path, line_no, "zero weight");
        flush_row(row);
        entries.push_back({dim, weight});
        ++seen;
    }
    flush_row(n_rows);
    if (seen != nnz) {
        throw std::runtime_error(path + ": header declares " + std::to_string(nnz) +
                                 " entries but file has " + std::to_string(seen));
    }
    for (std::size_t row = 0; row < matrix.vectors.size(); ++row) {
        double n = matrix.vectors[row].norm();
        if (std::abs(n - 1.0) > 1e-9) {
            throw std::runtime_error(path + ": row " + std::to_string(row) +
                                     " is not unit length (norm " + std::to_string(n) + ")");
        }
    }

    std::ifstream ids(path + ".ids");
    if (!ids) throw std::runtime_error("cannot open " + path + ".ids");
    while (std::getline(ids, line)) matrix.doc_ids.push_back(line);
    if (matrix.doc_ids.size() != matrix.vectors.size()) {
        throw std::runtime_error(path + ".ids: has " + std::to_string(matrix.doc_ids.size()) +
                                 " ids for " + std::to_string(matrix.vectors.size()) + " rows");
    }
    return matrix;
}

void write_vocabulary(const std::string& path, const Vocabulary& vocab) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    std::vector<const std::string*> terms(vocab.size());
    for (const auto& [term, dim] : vocab.term_to_dim) terms[dim] = &term;
    out << "%%vocabulary " << vocab.size() << ' ' << vocab.n_docs << '\n';
    for (std::uint32_t d = 0; d < vocab.size(); ++d) {
        out << *terms[d] << ' ' << vocab.doc_freq[d] << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

Vocabulary load_vocabulary(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    std::istringstream header(line);
    std::string magic;
    std::uint32_t n_terms = 0, n_docs = 0;
    header >> magic >> n_terms >> n_docs;
    if (magic != "%%vocabulary" || header.fail()) {
        throw format_error(path, 1, "bad header, expected '%%vocabulary <n_terms> <n_docs>'");
    }
    Vocabulary vocab;
    vocab.n_docs = n_docs;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string term;
        std::uint32_t df = 0;
        row >> term >> df;
        if (row.fail() || term.empty()) {
            throw format_error(path, line_no, "expected '<term> <df>'");
        }
        vocab.term_to_dim.emplace(term, static_cast<std::uint32_t>(vocab.doc_freq.size()));
        vocab.doc_freq.push_back(df);
    }
    if (vocab.size() != n_terms) {
        throw std::runtime_error(path + ": header declares " + std::to_string(n_terms) +
                                 " terms but file has " + std::to_string(vocab.size()));
    }
    return vocab;
}

}  // namespace sskm
