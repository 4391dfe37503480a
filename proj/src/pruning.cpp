#include "prao/pruning.hpp"

#include <algorithm>
#include <cmath>

#include "prao/error.hpp"
#include "search_detail.hpp"

namespace prao {

double PruneContext::heuristic(VertexId v) const {
  if (pivots == nullptr || pivots->d() == 0) return 0.0;
  return pivots->lb_dist(v, dst) / net->max_velocity();
}

PruneContext make_context(const RoadNetwork& net, const WeatherStore& store, const PivotTable* pivots,
                          const PraoQuery& q) {
  if (q.src >= net.vertex_count() || q.dst >= net.vertex_count()) throw QueryError("query vertex out of range");
  if (q.src == q.dst) throw QueryError("query needs src != dst");
  if (!(q.alpha > 0 && q.alpha < 1)) throw QueryError("alpha must be in (0, 1)");
  if (!std::isfinite(q.epsilon)) throw QueryError("epsilon must be finite");
  if (!(q.depart >= static_cast<double>(store.base_hour()) && q.depart < static_cast<double>(store.end_hour()))) {
    throw HorizonError("departure " + std::to_string(q.depart) + " outside weather window");
  }
  if (pivots != nullptr && pivots->d() > 0 && pivots->vertex_count() != net.vertex_count()) {
    throw QueryError("pivot table does not match the network");
  }
  PruneContext ctx;
  ctx.net = &net;
  ctx.store = &store;
  ctx.pivots = pivots;
  ctx.type = store.require_type(q.type);
  ctx.eps = q.epsilon;
  ctx.alpha = q.alpha;
  ctx.depart = q.depart;
  ctx.dst = q.dst;
  ctx.S = bitmap_of(q.obstacles, net.dictionary());
  return ctx;
}

bool keyword_prune_edge(const RoadNetwork& net, EdgeId e, const KeywordBitmap& S) {
  return bitmap_intersects(net.edge_bitmap(e), S);
}

bool keyword_prune_node(const SpatialIndex& idx, NodeId n, const KeywordBitmap& S) {
  return bitmap_intersects(idx.node(n).kw, S);
}

bool weather_prune_edge(const WeatherStore& store, const Edge& e, double t_dep, double t_arr, double eps,
                        double alpha, int type) {
  return edge_min_ub(store, e, traversal_slots(t_dep, t_arr), eps, type) < 1.0 - alpha;
}

bool weather_prune_node(const SpatialIndex& idx, const WeatherStore& store, NodeId n, double t_lo, double t_hi,
                        double eps, double alpha, int type) {
  const SlotRange r = traversal_slots(t_lo, t_hi);
  if (r.first < store.base_hour() || r.last >= store.end_hour()) return false;
  for (std::int64_t h = r.first; h <= r.last; ++h) {
    if (!(idx.node_ub_pr_leq(store, n, h, eps, type) < 1.0 - alpha)) return false;
  }
  return true;
}

bool edge_weather_valid(const WeatherStore& store, const Edge& e, double t_dep, double eps, double alpha,
                        int type) {
  return exact_pr_violate(store, e, t_dep, t_dep + e.w, eps, type) < alpha;
}

double lb_T_partial(double elapsed, VertexId frontier, VertexId dst, const PivotTable& pivots, double max_vel) {
  return elapsed + pivots.lb_dist(frontier, dst) / max_vel;
}

double lb_T_node_path(const SpatialIndex& idx, std::span<const NodeId> path) {
  double s = 0;
  for (std::size_t i = 1; i < path.size(); ++i) s += idx.node(path[i]).lb_t;
  return s;
}

EdgeCheck check_edge(const PruneContext& ctx, EdgeId e, double t_dep) {
  if (keyword_prune_edge(*ctx.net, e, ctx.S)) return EdgeCheck::Keyword;
  const Edge& ed = ctx.net->edge(e);
  const double t0 = ctx.depart + t_dep;
  const double t1 = t0 + ed.w;
  const SlotRange r = traversal_slots(t0, t1);
  if (r.first < ctx.store->base_hour() || r.last >= ctx.store->end_hour()) return EdgeCheck::Horizon;
  if (edge_min_ub(*ctx.store, ed, r, ctx.eps, ctx.type) < 1.0 - ctx.alpha) return EdgeCheck::WeatherBound;
  if (!(exact_pr_violate(*ctx.store, ed, t0, t1, ctx.eps, ctx.type) < ctx.alpha)) return EdgeCheck::WeatherExact;
  return EdgeCheck::Ok;
}

std::optional<SeedPath> greedy_ub_seed(const PruneContext& ctx, VertexId src, std::uint64_t budget) {
  if (budget == 0) budget = 50 * static_cast<std::uint64_t>(ctx.net->vertex_count());
  QueryStats scratch;
  auto out = detail::label_setting_astar(
      ctx, src, [&](EdgeId e, double t) { return check_edge(ctx, e, t) == EdgeCheck::Ok; }, scratch, budget);
  if (!out.found) return std::nullopt;
  return SeedPath{std::move(out.path), out.time};
}

}  // namespace prao
