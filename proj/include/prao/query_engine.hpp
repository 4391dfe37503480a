#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "prao/network.hpp"
#include "prao/pivots.hpp"
#include "prao/pruning.hpp"
#include "prao/query_types.hpp"
#include "prao/spatial_index.hpp"
#include "prao/weather.hpp"

namespace prao {

enum class PruneReason { Keyword, WeatherBound, WeatherExact, Time, Horizon };
const char* to_string(PruneReason r);

/// Receives every pruning decision made by prao_qp (test instrumentation).
class PruneObserver {
 public:
  virtual ~PruneObserver() = default;
  // Node path rejected at `level`; `path` ends with the rejected position.
  virtual void node_pruned(int level, std::span<const NodeId> path, PruneReason why) = 0;
  // Edge path from src rejected; `path` ends with the rejected edge.
  virtual void edge_pruned(std::span<const EdgeId> path, PruneReason why) = 0;
};

struct PraoOptions {
  bool greedy_seed = false;
  std::uint64_t greedy_budget = 0;  // 0 = 50 * |V|
  PruneObserver* observer = nullptr;
};

QueryResult prao_qp(const SpatialIndex& index, const RoadNetwork& net, const WeatherStore& store,
                    const PivotTable& pivots, const PraoQuery& q, const PraoOptions& opts = {});

QueryResult astar_baseline(const RoadNetwork& net, const WeatherStore& store, const PivotTable& pivots,
                           const PraoQuery& q);

QueryResult filterfirst_baseline(const RoadNetwork& net, const WeatherStore& store, const PivotTable& pivots,
                                 const PraoQuery& q);

/// Keyword-clean and weather-valid at every edge, departing at q.depart.
/// Throws HorizonError if a traversal leaves the weather window.
bool validate_path(const RoadNetwork& net, const WeatherStore& store, std::span<const EdgeId> path,
                   const PraoQuery& q);

/// Travel time of a path (sum of edge times in path order).
double path_time(const RoadNetwork& net, std::span<const EdgeId> path);

struct OracleResult {
  QueryResult result;
  std::vector<std::vector<EdgeId>> optimal_paths;  // all paths within 1e-12 h of the optimum
  std::vector<double> best_arrival;                // T*(x) over all enumerated valid paths
  bool truncated = false;         // a hop-limit prefix was still faster than the optimum
  bool prefix_monotone = false;   // some optimal path uses minimal arrivals throughout
  int monotone_path = -1;         // index into optimal_paths
  std::uint64_t paths_enumerated = 0;
};

/// Exhaustive depth-first enumeration of simple valid paths up to hop_limit.
OracleResult brute_force_oracle(const RoadNetwork& net, const WeatherStore& store, const PraoQuery& q,
                                int hop_limit = 12);

}  // namespace prao
