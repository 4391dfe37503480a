#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "prao/network.hpp"
#include "prao/weather.hpp"
#include "prao/workload.hpp"

namespace support {

using namespace prao;

// Small connected network on a plane sized so typical edges take well under
// an hour to traverse.
inline RoadNetwork small_network(std::uint64_t seed, std::size_t n, double plane = 45) {
  GenConfig cfg;
  cfg.n_vertices = n;
  cfg.plane = plane;
  cfg.seed = seed;
  return gen_network(cfg);
}

inline WeatherStore store_from(const RoadNetwork& net, const std::vector<WeatherRecord>& recs, int horizon,
                               std::int64_t base, const std::string& type = "wind_speed") {
  WeatherStore s(net.vertex_count(), horizon, base, {type});
  for (const WeatherRecord& r : recs) {
    if (r.hour >= base && r.hour < base + horizon) s.set(r.vertex, r.hour, 0, {r.value, r.confidence});
  }
  return s;
}

inline WeatherStore random_store(const RoadNetwork& net, std::uint64_t seed, int horizon = 24,
                                 std::int64_t base = 0) {
  GenConfig cfg;
  cfg.seed = seed;
  cfg.horizon = horizon;
  cfg.base_hour = base;
  return store_from(net, gen_weather(net, cfg), horizon, base);
}

// Pr{value <= eps} at a point of an edge, enumerating the four accuracy worlds.
// In world A the point takes the interpolated value; B and C take the accurate
// endpoint's value; in world D nothing is known so the point may be <= eps.
inline double worlds_pr_leq_at(double vu, double pu, double vv, double pv, double eps, double point_value) {
  double pr = 0;
  if (point_value <= eps) pr += pu * pv;
  if (vv <= eps) pr += (1 - pu) * pv;
  if (vu <= eps) pr += pu * (1 - pv);
  pr += (1 - pu) * (1 - pv);
  return pr;
}

// Pessimistic Pr{violation} for a slot: world A uses the worse endpoint,
// D always violates.
inline double worlds_violation(double vu, double pu, double vv, double pv, double eps) {
  double ok = 0;
  if (std::max(vu, vv) <= eps) ok += pu * pv;
  if (vv <= eps) ok += (1 - pu) * pv;
  if (vu <= eps) ok += pu * (1 - pv);
  return 1 - ok;
}

// Floyd-Warshall over edge lengths.
inline std::vector<std::vector<double>> all_pairs_lengths(const RoadNetwork& net) {
  const std::size_t n = net.vertex_count();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const Edge& e : net.edges()) {
    d[e.u][e.v] = std::min(d[e.u][e.v], e.len);
    d[e.v][e.u] = std::min(d[e.v][e.u], e.len);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    }
  }
  return d;
}

}  // namespace support

#include "prao/pivots.hpp"
#include "prao/query_engine.hpp"
#include "prao/spatial_index.hpp"

namespace support {

struct Instance {
  RoadNetwork net;
  WeatherStore store;
  PivotTable pivots;
  SpatialIndex index;
  PraoQuery query;
};

// Random small instance: 20-40 vertices, 12-hour window, randomized
// threshold, confidence level and obstacle keywords.
inline Instance random_instance(std::uint64_t seed, std::size_t fanout = 4) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 1);
  std::uniform_int_distribution<std::size_t> nv(20, 40);
  const std::size_t n = nv(rng);
  Instance in{small_network(seed, n), {}, {}, {}, {}};
  in.store = random_store(in.net, seed + 1000, 12);
  PivotSearchConfig pc;
  pc.d = 3;
  pc.global_iter = 2;
  pc.swap_iter = 10;
  pc.seed = seed;
  in.pivots = PivotTable(in.net, obtain_pivots(in.net, pc, all_pairs(n)).pivots);
  in.index = SpatialIndex::build(in.net, in.store, fanout);
  std::uniform_int_distribution<VertexId> v(0, static_cast<VertexId>(n - 1));
  std::uniform_real_distribution<double> eps(50, 95), dep(0, 5);
  std::uniform_int_distribution<int> alpha(1, 9), ks(0, 3);
  std::uniform_int_distribution<KeywordId> kw(0, 15);
  PraoQuery& q = in.query;
  q.src = v(rng);
  do {
    q.dst = v(rng);
  } while (q.dst == q.src);
  q.epsilon = eps(rng);
  q.alpha = alpha(rng) / 10.0;
  q.depart = dep(rng);
  for (int i = ks(rng); i > 0; --i) q.obstacles.push_back(kw(rng));
  return in;
}

}  // namespace support
