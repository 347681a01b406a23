#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kgs/oracle.hpp"
#include "kgs/pipeline.hpp"

namespace kgs {

// `count` queries of k vertex keywords, each drawn uniformly from one
// connected ABox component that has at least k vertices.
std::vector<KeywordQuery> generate_queries(const KnowledgeGraph& g, std::size_t k, std::size_t count,
                                           std::uint64_t seed);

struct BenchConfig {
  bool ablations = false;  // also run without patch-up and without path selection
  bool exact = true;       // run the exact oracle where its budget allows
  bool timing = false;     // record wall-clock times; zero otherwise
  OracleLimits limits;
};

struct BenchRow {
  std::size_t query_id = 0;
  std::size_t k = 0;
  std::string system;
  std::optional<std::size_t> size;  // tree edges; empty when no tree
  double elapsed_ms = 0.0;
  std::optional<double> app_er;  // against the exact optimum
};

struct SystemSummary {
  std::string system;
  std::size_t queries = 0;
  std::size_t answered = 0;
  std::size_t scored = 0;
  double mean_app_er = 0.0;
  double median_app_er = 0.0;
  double coverage = 0.0;  // mean per-query result coverage
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<SystemSummary> summary;

  std::string csv() const;
  std::string summary_table() const;
};

BenchReport run_bench(const SearchContext& ctx, const std::vector<KeywordQuery>& queries, const BenchConfig& config = {});

}  // namespace kgs
