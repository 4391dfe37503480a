#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "prao/network.hpp"
#include "prao/pivots.hpp"
#include "prao/query_types.hpp"
#include "prao/spatial_index.hpp"
#include "prao/weather.hpp"

namespace prao {

struct BenchConfig {
  std::vector<std::string> algorithms{"prao", "astar", "filterfirst"};
  int repeats = 3;
  bool greedy_seed = false;
};

struct BenchRow {
  std::string algorithm;
  std::size_t query = 0;
  int repeat = 0;
  QueryResult result;
};

struct MetricSummary {
  double mean = 0;
  double median = 0;
};

struct AlgoSummary {
  std::string algorithm;
  std::size_t rows = 0;
  std::size_t found = 0;
  MetricSummary wall_ms;
  MetricSummary node_accesses;
  MetricSummary edge_expansions;
  MetricSummary max_queue;
  MetricSummary max_heap;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<AlgoSummary> summary;
};

// prao and astar disagreed on a query; what() carries a diagnostic dump.
class BenchMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

MetricSummary summarize(std::vector<double> xs);
std::vector<AlgoSummary> summarize_rows(const std::vector<BenchRow>& rows);

/// Runs every algorithm on every query `repeats` times. When both prao and
/// astar run, each prao result is checked against astar's before its row is
/// kept. JSON rows go to `json` as they are produced (may be null).
BenchReport run_bench(const SpatialIndex& index, const RoadNetwork& net, const WeatherStore& store,
                      const PivotTable& pivots, const std::vector<PraoQuery>& queries, const BenchConfig& cfg,
                      std::ostream* json = nullptr);

std::string row_json(const BenchRow& row);
std::string summary_json(const AlgoSummary& s);
void print_summary_table(std::ostream& out, const std::vector<AlgoSummary>& summary);

struct UpdateBatchStat {
  std::int64_t new_base = 0;
  std::size_t changed_slots = 0;
  std::size_t recomputed = 0;
  double ms = 0;          // apply_update + propagate_weather_update
  bool verified = false;  // compared against a full rebuild
  bool equal = true;
};

struct UpdateBenchReport {
  std::vector<UpdateBatchStat> batches;
  double median_ms = 0;
  double p95_ms = 0;
  double max_ms = 0;
  bool all_equal = true;
};

/// Applies `batches` in order, timing each, and compares the propagated
/// aggregates with a fresh rebuild every `verify_every` batches and after
/// the last one.
UpdateBenchReport run_update_bench(const RoadNetwork& net, WeatherStore& store, SpatialIndex& index,
                                   const std::vector<std::vector<WeatherRecord>>& batches, int verify_every = 6);

std::string update_json(const UpdateBatchStat& b);

}  // namespace prao
