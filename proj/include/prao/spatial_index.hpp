#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "prao/keywords.hpp"
#include "prao/network.hpp"
#include "prao/weather.hpp"

namespace prao {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = ~NodeId{0};

struct Rect {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  static Rect of_edge(const RoadNetwork& net, const Edge& e);
  void expand(const Rect& r);
  bool contains(const Rect& r) const { return x0 <= r.x0 && y0 <= r.y0 && r.x1 <= x1 && r.y1 <= y1; }
  double cx() const { return 0.5 * (x0 + x1); }
  double cy() const { return 0.5 * (y0 + y1); }
  bool operator==(const Rect&) const = default;
};

struct IndexNode {
  NodeId id = 0;
  int level = 0;  // leaves are 0; their entries (edges) are level -1
  NodeId parent = kNoNode;
  Rect mbr;
  std::vector<std::uint32_t> children;  // node ids, or edge ids when level == 0
  double lb_t = 0;
  double ub_t = 0;
  KeywordBitmap kw;  // keywords carried by every descendant edge

  bool operator==(const IndexNode&) const = default;
};

// Per-hour weather ingredients kept for every node (and derivable per edge).
enum WeatherField : int { kLbW = 0, kUbW = 1, kMinEdgeUb = 2, kMinConf = 3, kMaxConf = 4, kFieldCount = 5 };

/// Upper bound on Pr{value <= eps} for any edge under a node, from that
/// node's ingredients at one hour.
double node_ub_from_fields(double lb_w, double ub_w, double min_edge_ub, double min_conf, double max_conf,
                           double eps);

/// Adjacency among the nodes of one level. Two nodes are adjacent iff some
/// descendant edges share a vertex (a node is self-adjacent iff two of its
/// own edges share a vertex).
class ConnectionGraph {
 public:
  ConnectionGraph() = default;
  ConnectionGraph(std::vector<std::size_t> off, std::vector<NodeId> nbr, std::vector<NodeId> local_of,
                  std::vector<NodeId> nodes)
      : off_(std::move(off)), nbr_(std::move(nbr)), local_(std::move(local_of)), nodes_(std::move(nodes)) {}

  std::span<const NodeId> neighbors(NodeId node) const {
    const NodeId i = local_[node];
    return {nbr_.data() + off_[i], nbr_.data() + off_[i + 1]};
  }
  bool adjacent(NodeId a, NodeId b) const;
  const std::vector<NodeId>& nodes() const { return nodes_; }
  bool operator==(const ConnectionGraph&) const = default;

  std::vector<std::size_t> off_;
  std::vector<NodeId> nbr_;    // sorted per node
  std::vector<NodeId> local_;  // global node id -> local index (kNoNode when on another level)
  std::vector<NodeId> nodes_;
};

/// STR-packed tree over edge MBRs with travel-time, keyword and weather
/// summaries, per-level connection graphs and an edge locator.
class SpatialIndex {
 public:
  SpatialIndex() = default;

  static SpatialIndex build(const RoadNetwork& net, const WeatherStore& store, std::size_t fanout = 32);

  std::size_t fanout() const { return fanout_; }
  int height() const { return height_; }
  NodeId root() const { return root_; }
  std::size_t node_count() const { return nodes_.size(); }
  const IndexNode& node(NodeId id) const { return nodes_[id]; }
  const std::vector<IndexNode>& nodes() const { return nodes_; }
  const std::vector<NodeId>& level_nodes(int level) const { return levels_[level]; }
  const ConnectionGraph& connections(int level) const { return conn_[level]; }

  NodeId leaf_of(EdgeId e) const { return locator_[std::size_t(e) * (height_ + 1) + height_]; }
  /// Ancestor of edge e at `level` (0 = leaf ... height = root).
  NodeId ancestor(EdgeId e, int level) const {
    return locator_[std::size_t(e) * (height_ + 1) + (height_ - level)];
  }
  /// Root-to-leaf node ids for edge e.
  std::span<const NodeId> locate(EdgeId e) const {
    return {locator_.data() + std::size_t(e) * (height_ + 1), static_cast<std::size_t>(height_ + 1)};
  }

  int horizon() const { return horizon_; }
  std::size_t type_count() const { return agg_.size(); }
  const double* field_row(int type, NodeId n, WeatherField f) const {
    return agg_[type].data() + (std::size_t(n) * kFieldCount + f) * horizon_;
  }
  double field(int type, NodeId n, WeatherField f, std::size_t phys) const { return field_row(type, n, f)[phys]; }

  double node_ub_pr_leq(const WeatherStore& store, NodeId n, std::int64_t hour, double eps, int type = 0) const;

  /// Recompute every weather aggregate from the store.
  void rebuild_weather(const RoadNetwork& net, const WeatherStore& store);

  /// Bottom-up refresh after store.apply_update. Returns the number of
  /// (node, slot) aggregates recomputed.
  std::size_t propagate_weather_update(const RoadNetwork& net, const WeatherStore& store,
                                       std::span<const ChangedSlot> changed);

  /// Structural equality plus byte equality of the weather aggregates.
  bool same_weather(const SpatialIndex& o) const { return agg_ == o.agg_; }
  bool same_structure(const SpatialIndex& o) const;

  // Storage below is public for the sidecar serializer.
  std::size_t fanout_ = 32;
  int height_ = 0;
  NodeId root_ = kNoNode;
  std::vector<IndexNode> nodes_;
  std::vector<std::vector<NodeId>> levels_;
  std::vector<ConnectionGraph> conn_;
  std::vector<NodeId> locator_;  // [edge * (height + 1) + depth], depth 0 = root
  int horizon_ = 0;
  std::vector<std::vector<double>> agg_;  // per type, [(node * kFieldCount + field) * horizon + phys]

  void build_connections(const RoadNetwork& net);

 private:
  void compute_node_slot(const RoadNetwork& net, const WeatherStore& store, int type, NodeId n, std::size_t p);
};

}  // namespace prao
