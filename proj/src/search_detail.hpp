#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <vector>

#include "prao/pruning.hpp"

namespace prao::detail {

struct AstarOutcome {
  bool found = false;
  bool budget_exhausted = false;
  std::vector<EdgeId> path;
  double time = 0;
};

// Label-setting best-first search keyed by elapsed + heuristic. `edge_ok(e,
// t_dep)` decides whether an edge may be taken when leaving at t_dep (hours
// since departure). Ties pop in insertion order.
template <class EdgeOk>
AstarOutcome label_setting_astar(const PruneContext& ctx, VertexId src, EdgeOk&& edge_ok, QueryStats& st,
                                 std::uint64_t budget = 0) {
  const RoadNetwork& net = *ctx.net;
  struct Item {
    double key;
    std::uint64_t seq;
    VertexId v;
    double elapsed;
    EdgeId via;
    bool operator>(const Item& o) const { return key != o.key ? key > o.key : seq > o.seq; }
  };
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  std::vector<char> closed(net.vertex_count(), 0);
  std::vector<EdgeId> pred(net.vertex_count(), kNoEdge);
  std::uint64_t seq = 0;
  pq.push({ctx.heuristic(src), seq++, src, 0.0, kNoEdge});
  ++st.heap_pushes;
  st.max_heap = std::max<std::uint64_t>(st.max_heap, pq.size());
  AstarOutcome out;
  while (!pq.empty()) {
    const Item it = pq.top();
    pq.pop();
    ++st.heap_pops;
    if (closed[it.v]) continue;
    closed[it.v] = 1;
    pred[it.v] = it.via;
    if (it.v == ctx.dst) {
      out.found = true;
      out.time = it.elapsed;
      for (VertexId x = it.v; x != src;) {
        const EdgeId e = pred[x];
        out.path.push_back(e);
        x = net.other_end(e, x);
      }
      std::reverse(out.path.begin(), out.path.end());
      return out;
    }
    for (EdgeId e : net.incident(it.v)) {
      const VertexId w = net.other_end(e, it.v);
      if (closed[w]) continue;
      if (budget != 0 && st.edge_expansions >= budget) {
        out.budget_exhausted = true;
        return out;
      }
      ++st.edge_expansions;
      if (!edge_ok(e, it.elapsed)) continue;
      const double t = it.elapsed + net.edge(e).w;
      pq.push({t + ctx.heuristic(w), seq++, w, t, e});
      ++st.heap_pushes;
      st.max_heap = std::max<std::uint64_t>(st.max_heap, pq.size());
    }
  }
  return out;
}

// Counts an edge check outcome into the stats.
inline bool count_check(EdgeCheck c, QueryStats& st) {
  switch (c) {
    case EdgeCheck::Ok: return true;
    case EdgeCheck::Keyword: ++st.edge_keyword_prunes; break;
    case EdgeCheck::WeatherBound: ++st.edge_weather_prunes; break;
    case EdgeCheck::WeatherExact: ++st.edge_exact_rejects; break;
    case EdgeCheck::Horizon: ++st.horizon_blocked; break;
  }
  return false;
}

}  // namespace prao::detail
