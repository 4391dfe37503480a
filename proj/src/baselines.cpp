#include <chrono>

#include "prao/query_engine.hpp"
#include "search_detail.hpp"

namespace prao {

QueryResult astar_baseline(const RoadNetwork& net, const WeatherStore& store, const PivotTable& pivots,
                           const PraoQuery& q) {
  const auto t0 = std::chrono::steady_clock::now();
  const PruneContext ctx = make_context(net, store, &pivots, q);
  QueryResult res;
  auto out = detail::label_setting_astar(
      ctx, q.src, [&](EdgeId e, double t) { return detail::count_check(check_edge(ctx, e, t), res.stats); },
      res.stats);
  res.found = out.found;
  res.path = std::move(out.path);
  res.total_time = out.time;
  res.stats.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

QueryResult filterfirst_baseline(const RoadNetwork& net, const WeatherStore& store, const PivotTable& pivots,
                                 const PraoQuery& q) {
  const auto t0 = std::chrono::steady_clock::now();
  const PruneContext ctx = make_context(net, store, &pivots, q);
  QueryResult res;
  // Drop every edge that carries an obstacle keyword or is unsafe at any hour
  // from departure to the end of the window.
  SlotRange rest{static_cast<std::int64_t>(std::floor(q.depart)), store.end_hour() - 1};
  std::vector<char> keep(net.edge_count(), 0);
  for (EdgeId e = 0; e < net.edge_count(); ++e) {
    if (keyword_prune_edge(net, e, ctx.S)) continue;
    const Edge& ed = net.edge(e);
    double worst = 0;
    for (std::int64_t h = rest.first; h <= rest.last; ++h) {
      const Forecast fu = store.at(ed.u, h, ctx.type);
      const Forecast fv = store.at(ed.v, h, ctx.type);
      worst = std::max(worst, slot_violation(fu.value, fu.confidence, fv.value, fv.confidence, q.epsilon));
    }
    keep[e] = worst < q.alpha;
  }
  auto out = detail::label_setting_astar(
      ctx, q.src,
      [&](EdgeId e, double t) {
        if (!keep[e]) return false;
        const double t1 = q.depart + t + net.edge(e).w;
        if (traversal_slots(q.depart + t, t1).last >= store.end_hour()) {
          ++res.stats.horizon_blocked;
          return false;
        }
        return true;
      },
      res.stats);
  res.found = out.found;
  res.path = std::move(out.path);
  res.total_time = out.time;
  res.stats.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace prao
