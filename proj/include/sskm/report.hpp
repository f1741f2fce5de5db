#pragma once

#include <string>
#include <vector>

#include "sskm/corpus.hpp"
#include "sskm/engine.hpp"

namespace sskm {

/// Machine-readable record of one clustering run: the configuration, every
/// iteration's counters, totals (sums of the per-iteration values), and the
/// final solution summary.
struct RunReport {
    RunConfig config;
    std::size_t n_docs = 0;
    std::uint32_t dims = 0;
    std::vector<IterationStats> iterations;
    double objective = 0.0;
    StopReason stop_reason = StopReason::kMaxIterations;
    std::vector<std::string> dropped_doc_ids;
    std::vector<std::uint64_t> cluster_sizes;
};

RunReport make_report(const RunConfig& config, const CorpusMatrix& data,
                      const ClusteringResult& result);

std::string to_json(const RunReport& report);

void write_report(const std::string& path, const RunReport& report);

}  // namespace sskm
