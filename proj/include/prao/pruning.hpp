#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "prao/network.hpp"
#include "prao/pivots.hpp"
#include "prao/query_types.hpp"
#include "prao/spatial_index.hpp"
#include "prao/weather.hpp"

namespace prao {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Time comparisons against lambda tolerate this much round-off, in the
// direction of pruning less.
inline constexpr double kTimeSlack = 1e-9;

struct TimeBounds {
  double lb_T = 0;
  std::optional<double> ub_T;
};

/// Per-query data shared by the pruning predicates.
struct PruneContext {
  const RoadNetwork* net = nullptr;
  const WeatherStore* store = nullptr;
  const PivotTable* pivots = nullptr;
  int type = 0;
  double eps = 0;
  double alpha = 0.5;
  double depart = 0;
  VertexId dst = 0;
  KeywordBitmap S;

  double heuristic(VertexId v) const;
};

/// Validates the query against the network and weather window and resolves
/// its weather type and keyword bitmap.
PruneContext make_context(const RoadNetwork& net, const WeatherStore& store, const PivotTable* pivots,
                          const PraoQuery& q);

bool keyword_prune_edge(const RoadNetwork& net, EdgeId e, const KeywordBitmap& S);
bool keyword_prune_node(const SpatialIndex& idx, NodeId n, const KeywordBitmap& S);

/// Upper-bound rule for one edge traversal: some touched slot has
/// ub_pr_leq < 1 - alpha. Throws HorizonError outside the window.
bool weather_prune_edge(const WeatherStore& store, const Edge& e, double t_dep, double t_arr, double eps,
                        double alpha, int type = 0);

/// Node rule: every slot touched by [t_lo, t_hi) is unsafe for the node.
/// Slots outside the window are never treated as unsafe.
bool weather_prune_node(const SpatialIndex& idx, const WeatherStore& store, NodeId n, double t_lo, double t_hi,
                        double eps, double alpha, int type = 0);

/// Exact validity of one traversal: exact_pr_violate < alpha.
bool edge_weather_valid(const WeatherStore& store, const Edge& e, double t_dep, double eps, double alpha,
                        int type = 0);

/// Accumulated time plus lb_dist(frontier, dst) / max_vel.
double lb_T_partial(double elapsed, VertexId frontier, VertexId dst, const PivotTable& pivots, double max_vel);

/// Sum of lb_t over node-path positions after the first.
double lb_T_node_path(const SpatialIndex& idx, std::span<const NodeId> path);

inline bool time_prune(double lb_T, double lambda) { return lb_T > lambda + kTimeSlack; }

enum class EdgeCheck { Ok, Keyword, WeatherBound, WeatherExact, Horizon };

/// Full edge check in the order keyword, upper-bound rule, exact check.
EdgeCheck check_edge(const PruneContext& ctx, EdgeId e, double t_dep);

struct SeedPath {
  std::vector<EdgeId> path;
  double time = 0;
};

/// Best-first search from src by elapsed + heuristic, expanding only edges
/// that pass the keyword and weather checks at their traversal times. Returns
/// the first complete path, or nothing once `budget` expansions are used
/// (0 means 50 * |V|).
std::optional<SeedPath> greedy_ub_seed(const PruneContext& ctx, VertexId src, std::uint64_t budget = 0);

}  // namespace prao
