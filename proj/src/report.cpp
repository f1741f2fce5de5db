#include "sskm/report.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace sskm {

RunReport make_report(const RunConfig& config, const CorpusMatrix& data,
                      const ClusteringResult& result) {
    RunReport report;
    report.config = config;
    report.n_docs = data.size();
    report.dims = data.dims;
    report.iterations = result.iterations;
    report.objective = result.objective;
    report.stop_reason = result.stop_reason;
    report.cluster_sizes.assign(config.k, 0);
    for (std::uint32_t a : result.assignments) ++report.cluster_sizes[a];
    return report;
}

std::string to_json(const RunReport& report) {
    nlohmann::json j;
    j["config"] = {
        {"k", report.config.k},
        {"mode", mode_name(report.config.mode)},
        {"lambdas", report.config.lambdas},
        {"conv_sq_dist", report.config.conv_sq_dist},
        {"ncc_epsilon", report.config.ncc_epsilon},
        {"index_activation_threshold", report.config.index_activation_threshold},
        {"max_iters", report.config.max_iters},
        {"seed", report.config.seed},
        {"threads", report.config.threads},
    };
    j["n_docs"] = report.n_docs;
    j["dims"] = report.dims;

    nlohmann::json iterations = nlohmann::json::array();
    std::uint64_t total_dots = 0, total_queries = 0, total_candidates = 0, total_reassigned = 0;
    double total_wall = 0.0, total_index_build = 0.0;
    for (const IterationStats& it : report.iterations) {
        iterations.push_back({
            {"iteration", it.iteration},
            {"n_reassigned", it.n_reassigned},
            {"n_unchanged_centroids", it.n_unchanged_centroids},
            {"dot_products", it.dot_products},
            {"index_queries", it.index_queries},
            {"candidates_total", it.candidates_total},
            {"wall_seconds", it.wall_seconds},
            {"index_build_seconds", it.index_build_seconds},
            {"index_active", it.index_active},
            {"max_sq_drift", it.max_sq_drift},
            {"objective", it.objective},
        });
        total_dots += it.dot_products;
        total_queries += it.index_queries;
        total_candidates += it.candidates_total;
        total_reassigned += it.n_reassigned;
        total_wall += it.wall_seconds;
        total_index_build += it.index_build_seconds;
    }
    j["iterations"] = std::move(iterations);
    j["totals"] = {
        {"iterations", report.iterations.size()},
        {"dot_products", total_dots},
        {"index_queries", total_queries},
        {"candidates_total", total_candidates},
        {"n_reassigned", total_reassigned},
        {"wall_seconds", total_wall},
        {"index_build_seconds", total_index_build},
    };
    j["objective"] = report.objective;
    j["stop_reason"] = stop_reason_name(report.stop_reason);
    j["dropped_doc_ids"] = report.dropped_doc_ids;
    j["cluster_sizes"] = report.cluster_sizes;
    return j.dump(2) + "\n";
}

void write_report(const std::string& path, const RunReport& report) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << to_json(report);
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace sskm
