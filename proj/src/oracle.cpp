#include <algorithm>

#include "prao/query_engine.hpp"

namespace prao {

namespace {

constexpr double kTie = 1e-12;

struct Dfs {
  const PruneContext& ctx;
  const RoadNetwork& net;
  int hop_limit;
  OracleResult& out;
  std::vector<char> on_path;
  std::vector<EdgeId> stack;
  std::vector<std::pair<std::vector<EdgeId>, double>> optimal;
  double best = kInf;
  double trunc_min = kInf;

  void run(VertexId v, double elapsed) {
    for (EdgeId e : net.incident(v)) {
      const VertexId w = net.other_end(e, v);
      if (on_path[w]) continue;
      if (check_edge(ctx, e, elapsed) != EdgeCheck::Ok) continue;
      const double t = elapsed + net.edge(e).w;
      // Paths slower than the best complete path cannot lower any arrival that
      // matters for optimal-path prefixes.
      if (t > best + kTie) continue;
      out.best_arrival[w] = std::min(out.best_arrival[w], t);
      stack.push_back(e);
      if (w == ctx.dst) {
        ++out.paths_enumerated;
        if (t < best) best = t;
        optimal.emplace_back(stack, t);
      } else if (static_cast<int>(stack.size()) == hop_limit) {
        trunc_min = std::min(trunc_min, t);
      } else {
        on_path[w] = 1;
        run(w, t);
        on_path[w] = 0;
      }
      stack.pop_back();
    }
  }
};

}  // namespace

OracleResult brute_force_oracle(const RoadNetwork& net, const WeatherStore& store, const PraoQuery& q,
                                int hop_limit) {
  const PruneContext ctx = make_context(net, store, nullptr, q);
  OracleResult out;
  out.best_arrival.assign(net.vertex_count(), kInf);
  out.best_arrival[q.src] = 0;
  Dfs dfs{ctx, net, hop_limit, out, std::vector<char>(net.vertex_count(), 0), {}, {}};
  dfs.on_path[q.src] = 1;
  dfs.run(q.src, 0.0);

  out.truncated = dfs.trunc_min < dfs.best;
  if (dfs.best == kInf) {
    out.prefix_monotone = !out.truncated;
    return out;
  }
  for (auto& [path, t] : dfs.optimal) {
    if (t <= dfs.best + kTie) out.optimal_paths.push_back(path);
  }
  for (std::size_t i = 0; i < out.optimal_paths.size() && out.monotone_path < 0; ++i) {
    VertexId at = q.src;
    double t = 0;
    bool mono = true;
    for (EdgeId e : out.optimal_paths[i]) {
      t += net.edge(e).w;
      at = net.other_end(e, at);
      if (t > out.best_arrival[at] + kTie) {
        mono = false;
        break;
      }
    }
    if (mono) out.monotone_path = static_cast<int>(i);
  }
  out.prefix_monotone = !out.truncated && out.monotone_path >= 0;
  const std::size_t pick = out.monotone_path >= 0 ? static_cast<std::size_t>(out.monotone_path) : 0;
  out.result.found = true;
  out.result.path = out.optimal_paths[pick];
  out.result.total_time = path_time(net, out.result.path);
  return out;
}

}  // namespace prao
