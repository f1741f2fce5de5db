#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sskm/corpus.hpp"
#include "sskm/engine.hpp"
#include "sskm/prune_index.hpp"
#include "sskm/sparse_vector.hpp"
#include "sskm/synthetic.hpp"

namespace py = pybind11;

namespace {

std::vector<std::pair<std::uint32_t, double>> vector_pairs(const sskm::SparseVector& v) {
    std::vector<std::pair<std::uint32_t, double>> pairs;
    pairs.reserve(v.nnz());
    for (const sskm::Entry& e : v.entries()) pairs.emplace_back(e.dim, e.weight);
    return pairs;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "sparse spherical k-means core";

    py::class_<sskm::SparseVector>(m, "SparseVector")
        .def(py::init([](const std::vector<std::pair<std::uint32_t, double>>& pairs,
                         std::uint32_t dims) {
                 return sskm::SparseVector::from_pairs(pairs, dims);
             }),
             py::arg("pairs"), py::arg("dims") = 0)
        .def_property_readonly("nnz", &sskm::SparseVector::nnz)
        .def_property_readonly("dims", &sskm::SparseVector::dims)
        .def("entries", &vector_pairs)
        .def("norm", &sskm::SparseVector::norm)
        .def("__eq__", [](const sskm::SparseVector& a, const sskm::SparseVector& b) {
            return a == b;
        });

    m.def("dot", &sskm::dot, py::arg("a"), py::arg("b"));
    m.def("normalize", &sskm::normalize, py::arg("v"));
    m.def("sq_euclidean", &sskm::sq_euclidean, py::arg("a"), py::arg("b"));

    py::class_<sskm::CorpusMatrix>(m, "CorpusMatrix")
        .def(py::init<>())
        .def_property_readonly("n_docs", &sskm::CorpusMatrix::size)
        .def_readonly("dims", &sskm::CorpusMatrix::dims)
        .def_readonly("doc_ids", &sskm::CorpusMatrix::doc_ids)
        .def("row",
             [](const sskm::CorpusMatrix& m_, std::size_t i) { return m_.vectors.at(i); });

    m.def("tokenize", &sskm::tokenize, py::arg("text"));
    m.def(
        "vectorize_corpus",
        [](const std::vector<std::pair<std::string, std::string>>& docs,
           const std::vector<std::string>& stop_words, double max_df) {
            sskm::StopWords stop(stop_words.begin(), stop_words.end());
            sskm::VectorizeResult r = sskm::vectorize_corpus(docs, stop, max_df);
            return py::make_tuple(std::move(r.matrix), r.vocab.size(), r.dropped_doc_ids);
        },
        py::arg("docs"), py::arg("stop_words") = std::vector<std::string>{},
        py::arg("max_df") = 0.5,
        "Returns (matrix, vocabulary size, dropped doc ids).");
    m.def("load_matrix", &sskm::load_matrix, py::arg("path"));
    m.def("write_matrix", &sskm::write_matrix, py::arg("path"), py::arg("matrix"));

    m.def(
        "synthetic_zipf",
        [](std::size_t n_docs, std::uint32_t vocab, double avg_nnz, double zipf_s,
           std::uint64_t seed) {
            return sskm::synthetic_zipf_corpus({n_docs, vocab, avg_nnz, zipf_s, seed});
        },
        py::arg("n_docs"), py::arg("vocab"), py::arg("avg_nnz") = 10.0,
        py::arg("zipf_s") = 1.1, py::arg("seed") = 0);

    m.def(
        "index_candidates",
        [](const std::vector<sskm::SparseVector>& centroids, double lam,
           const sskm::SparseVector& query) {
            sskm::MultiIndex index = sskm::MultiIndex::build(centroids, {lam});
            auto counts = sskm::overlap_counts(index.general(), query);
            return sskm::candidates(index.thresholds().front(), query, counts);
        },
        py::arg("centroids"), py::arg("lam"), py::arg("query"),
        "Centroid ids that may reach dot >= lam against the query.");

    py::class_<sskm::IterationStats>(m, "IterationStats")
        .def_readonly("iteration", &sskm::IterationStats::iteration)
        .def_readonly("n_reassigned", &sskm::IterationStats::n_reassigned)
        .def_readonly("n_unchanged_centroids", &sskm::IterationStats::n_unchanged_centroids)
        .def_readonly("dot_products", &sskm::IterationStats::dot_products)
        .def_readonly("index_queries", &sskm::IterationStats::index_queries)
        .def_readonly("candidates_total", &sskm::IterationStats::candidates_total)
        .def_readonly("wall_seconds", &sskm::IterationStats::wall_seconds)
        .def_readonly("index_build_seconds", &sskm::IterationStats::index_build_seconds)
        .def_readonly("index_active", &sskm::IterationStats::index_active)
        .def_readonly("max_sq_drift", &sskm::IterationStats::max_sq_drift)
        .def_readonly("objective", &sskm::IterationStats::objective);

    py::class_<sskm::ClusteringResult>(m, "ClusteringResult")
        .def_readonly("assignments", &sskm::ClusteringResult::assignments)
        .def_readonly("sims", &sskm::ClusteringResult::sims)
        .def_readonly("iterations", &sskm::ClusteringResult::iterations)
        .def_readonly("objective", &sskm::ClusteringResult::objective)
        .def_property_readonly("stop_reason", [](const sskm::ClusteringResult& r) {
            return std::string(sskm::stop_reason_name(r.stop_reason));
        })
        .def_property_readonly("n_clusters", [](const sskm::ClusteringResult& r) {
            return r.centroids.size();
        })
        .def("total_dot_products", &sskm::ClusteringResult::total_dot_products);

    m.def(
        "cluster",
        [](const sskm::CorpusMatrix& data, std::uint32_t k, const std::string& mode,
           std::uint64_t seed, const std::vector<double>& lambdas, double conv_sq_dist,
           double ncc_epsilon, std::uint32_t index_activation_threshold, std::uint32_t max_iters,
           std::uint32_t threads) {
            sskm::RunConfig cfg;
            cfg.k = k;
            cfg.mode = sskm::parse_mode(mode);
            cfg.lambdas = lambdas;
            cfg.conv_sq_dist = conv_sq_dist;
            cfg.ncc_epsilon = ncc_epsilon;
            cfg.index_activation_threshold = index_activation_threshold;
            cfg.max_iters = max_iters;
            cfg.seed = seed;
            cfg.threads = threads;
            return sskm::run(data, cfg);
        },
        py::arg("data"), py::arg("k"), py::arg("mode") = "baseline", py::arg("seed") = 0,
        py::arg("lambdas") = std::vector<double>{0.1, 0.25, 0.4, 0.6},
        py::arg("conv_sq_dist") = 0.0001, py::arg("ncc_epsilon") = 0.0,
        py::arg("index_activation_threshold") = 100, py::arg("max_iters") = 100,
        py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());
}
