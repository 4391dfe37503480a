#include <gtest/gtest.h>

#include <random>

#include "prao/error.hpp"
#include "prao/query_engine.hpp"
#include "support.hpp"

using namespace prao;

namespace {

constexpr double kTol = 1e-9;

// a=0, b=1, c=2, d=3. Edge 0 is a direct a-d road (0.45 h); a-b-d takes
// 0.5 h per edge; a-c-d takes 1.0 h then 0.8 h and a-c carries keyword 5.
struct Diamond {
  RoadNetwork net;
  WeatherStore store{4, 6, 0, {"wind_speed"}};

  Diamond()
      : net({{0, 0, 0}, {1, 10, 10}, {2, 10, -10}, {3, 20, 0}},
            {{0, 0, 3, 20, 0.45, {}},
             {1, 0, 1, 15, 0.5, {}},
             {2, 1, 3, 15, 0.5, {}},
             {3, 0, 2, 15, 1.0, {5}},
             {4, 2, 3, 15, 0.8, {}}}) {
    for (VertexId v = 0; v < 4; ++v) {
      for (int h = 0; h < 6; ++h) store.set(v, h, 0, {20, 0.9});
    }
  }

  PraoQuery query(double depart = 0) const {
    PraoQuery q;
    q.src = 0;
    q.dst = 3;
    q.epsilon = 40;
    q.depart = depart;
    return q;
  }

  QueryResult run(const PraoQuery& q, std::size_t fanout = 2) const {
    const SpatialIndex idx = SpatialIndex::build(net, store, fanout);
    const PivotTable piv(net, {0, 3});
    return prao_qp(idx, net, store, piv, q);
  }
};

}  // namespace

TEST(PraoQp, TakesDirectEdgeWhenClear) {
  Diamond d;
  const QueryResult r = d.run(d.query());
  ASSERT_TRUE(r.found);
  EXPECT_EQ(r.path, std::vector<EdgeId>{0});
  EXPECT_DOUBLE_EQ(r.total_time, 0.45);
}

TEST(PraoQp, DetoursAroundEarlyStorm) {
  Diamond d;
  // Hour 0 is stormy at d, so the direct edge is blocked at departure;
  // both two-edge routes reach d during hour 1, which is calm.
  d.store.set(3, 0, 0, {90, 0.95});
  const PraoQuery q = d.query(0.5);
  const QueryResult r = d.run(q);
  const OracleResult o = brute_force_oracle(d.net, d.store, q);
  ASSERT_TRUE(o.result.found);
  EXPECT_EQ(o.result.path, (std::vector<EdgeId>{1, 2}));
  ASSERT_TRUE(r.found);
  EXPECT_EQ(r.path, (std::vector<EdgeId>{1, 2}));
  EXPECT_NEAR(r.total_time, 1.0, kTol);
}

TEST(PraoQp, KeywordObstacleForcesOtherDetour) {
  Diamond d;
  d.store.set(3, 0, 0, {90, 0.95});
  d.store.set(1, 0, 0, {90, 0.95});  // b is stormy too
  PraoQuery q = d.query(0.0);
  q.obstacles = {5};  // and a-c carries an obstacle keyword
  EXPECT_FALSE(d.run(q).found);
  q.obstacles.clear();
  const QueryResult r = d.run(q);
  ASSERT_TRUE(r.found);
  EXPECT_EQ(r.path, (std::vector<EdgeId>{3, 4}));
}

TEST(PraoQp, InfeasibleReturnsEmptyEverywhere) {
  Diamond d;
  for (VertexId v = 0; v < 4; ++v) {
    for (int h = 0; h < 6; ++h) d.store.set(v, h, 0, {99, 1});
  }
  const PraoQuery q = d.query();
  const PivotTable piv(d.net, {0, 3});
  EXPECT_FALSE(d.run(q).found);
  EXPECT_TRUE(d.run(q).path.empty());
  EXPECT_FALSE(astar_baseline(d.net, d.store, piv, q).found);
  EXPECT_FALSE(filterfirst_baseline(d.net, d.store, piv, q).found);
  EXPECT_FALSE(brute_force_oracle(d.net, d.store, q).result.found);
}

TEST(PraoQp, WindowEndBlocksInsteadOfThrowing) {
  Diamond d;
  const PraoQuery q = d.query(5.7);  // every first edge would end past hour 6
  const QueryResult r = d.run(q);
  EXPECT_FALSE(r.found);
  EXPECT_GT(r.stats.horizon_blocked, 0u);
}

TEST(PraoQp, AgreesWithOracleOnRandomInstances) {
  int checked = 0, feasible = 0;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto in = support::random_instance(seed);
    const OracleResult o = brute_force_oracle(in.net, in.store, in.query);
    if (!o.prefix_monotone) continue;
    ++checked;
    const QueryResult r = prao_qp(in.index, in.net, in.store, in.pivots, in.query);
    ASSERT_EQ(r.found, o.result.found) << "seed " << seed;
    if (!r.found) continue;
    ++feasible;
    EXPECT_NEAR(r.total_time, o.result.total_time, kTol) << "seed " << seed;
    EXPECT_TRUE(validate_path(in.net, in.store, r.path, in.query));
    EXPECT_NEAR(path_time(in.net, r.path), r.total_time, 1e-12);
  }
  EXPECT_GT(checked, 40);
  EXPECT_GT(feasible, 10);
}

TEST(PraoQp, GreedySeedDoesNotChangeAnswer) {
  for (std::uint64_t seed = 100; seed <= 140; ++seed) {
    const auto in = support::random_instance(seed);
    PraoOptions opts;
    opts.greedy_seed = true;
    const QueryResult a = prao_qp(in.index, in.net, in.store, in.pivots, in.query);
    const QueryResult b = prao_qp(in.index, in.net, in.store, in.pivots, in.query, opts);
    ASSERT_EQ(a.found, b.found) << "seed " << seed;
    if (a.found) {
      EXPECT_NEAR(a.total_time, b.total_time, kTol);
    }
  }
}

TEST(PraoQp, FanoutDoesNotChangeAnswer) {
  for (std::uint64_t seed = 200; seed <= 230; ++seed) {
    auto in = support::random_instance(seed);
    const QueryResult a = prao_qp(in.index, in.net, in.store, in.pivots, in.query);
    for (std::size_t f : {2u, 3u, 16u}) {
      const SpatialIndex idx = SpatialIndex::build(in.net, in.store, f);
      const QueryResult b = prao_qp(idx, in.net, in.store, in.pivots, in.query);
      ASSERT_EQ(a.found, b.found) << "seed " << seed << " fanout " << f;
      if (a.found) {
        EXPECT_NEAR(a.total_time, b.total_time, kTol);
      }
    }
  }
}

TEST(PraoQp, RejectsMismatchedIndex) {
  auto in = support::random_instance(3);
  WeatherStore other(in.net.vertex_count(), 5, 0, {"wind_speed"});
  EXPECT_ANY_THROW(prao_qp(in.index, in.net, other, in.pivots, in.query));
}

TEST(AstarBaseline, MatchesPraoAndValidates) {
  for (std::uint64_t seed = 300; seed <= 360; ++seed) {
    const auto in = support::random_instance(seed);
    const QueryResult a = astar_baseline(in.net, in.store, in.pivots, in.query);
    const QueryResult p = prao_qp(in.index, in.net, in.store, in.pivots, in.query);
    ASSERT_EQ(a.found, p.found) << "seed " << seed;
    if (!a.found) continue;
    EXPECT_TRUE(validate_path(in.net, in.store, a.path, in.query));
    EXPECT_NEAR(a.total_time, p.total_time, kTol);
  }
}

TEST(FilterFirstBaseline, NeverFasterThanPrao) {
  int both = 0;
  for (std::uint64_t seed = 400; seed <= 480; ++seed) {
    const auto in = support::random_instance(seed);
    const QueryResult f = filterfirst_baseline(in.net, in.store, in.pivots, in.query);
    const QueryResult p = prao_qp(in.index, in.net, in.store, in.pivots, in.query);
    if (f.found) {
      EXPECT_TRUE(validate_path(in.net, in.store, f.path, in.query));
    }
    if (f.found && p.found) {
      ++both;
      EXPECT_GE(f.total_time + kTol, p.total_time);
    }
  }
  EXPECT_GT(both, 0);
}

TEST(ValidatePath, MetropolitanEdgeRejected) {
  std::vector<Vertex> vs{{0, 0, 0}, {1, 30, 0}, {2, 60, 0}};
  const KeywordId metropolitan = 7;
  RoadNetwork net(vs, {{0, 0, 1, 30, 0.2, {metropolitan}}, {1, 1, 2, 30, 0.2, {}}});
  WeatherStore s(3, 2, 8, {"wind_speed"});
  for (VertexId v = 0; v < 3; ++v) {
    s.set(v, 8, 0, {10, 0.9});
    s.set(v, 9, 0, {10, 0.9});
  }
  PraoQuery q;
  q.src = 0;
  q.dst = 2;
  q.epsilon = 40;
  q.depart = 8;
  const std::vector<EdgeId> path{0, 1};
  EXPECT_TRUE(validate_path(net, s, path, q));
  q.obstacles = {3, metropolitan};
  EXPECT_FALSE(validate_path(net, s, path, q));
}

TEST(ValidatePath, MatchesManualRecomputation) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    const auto in = support::random_instance(1000 + i / 10);
    // Random simple walk from src.
    std::vector<EdgeId> path;
    std::vector<char> seen(in.net.vertex_count(), 0);
    VertexId at = in.query.src;
    seen[at] = 1;
    std::uniform_int_distribution<int> len(1, 6);
    for (int k = len(rng); k > 0; --k) {
      std::vector<EdgeId> opts;
      for (EdgeId e : in.net.incident(at)) {
        if (!seen[in.net.other_end(e, at)]) opts.push_back(e);
      }
      if (opts.empty()) break;
      const EdgeId e = opts[std::uniform_int_distribution<std::size_t>(0, opts.size() - 1)(rng)];
      path.push_back(e);
      at = in.net.other_end(e, at);
      seen[at] = 1;
    }
    if (path.empty()) continue;
    PraoQuery q = in.query;
    q.dst = at;
    bool want = true;
    bool horizon = false;
    double t = q.depart;
    for (EdgeId e : path) {
      const Edge& ed = in.net.edge(e);
      for (KeywordId k : ed.keywords) {
        want = want && std::find(q.obstacles.begin(), q.obstacles.end(), k) == q.obstacles.end();
      }
      const SlotRange r = traversal_slots(t, t + ed.w);
      if (r.last >= in.store.end_hour()) {
        horizon = true;
        break;
      }
      for (std::int64_t h = r.first; h <= r.last; ++h) {
        const Forecast a = in.store.at(ed.u, h), b = in.store.at(ed.v, h);
        want = want && support::worlds_violation(a.value, a.confidence, b.value, b.confidence, q.epsilon) < q.alpha;
      }
      t += ed.w;
    }
    if (q.src == q.dst) continue;
    if (horizon) {
      // Keyword failures are reported before reaching the window end.
      try {
        validate_path(in.net, in.store, path, q);
      } catch (const HorizonError&) {
      }
      continue;
    }
    EXPECT_EQ(validate_path(in.net, in.store, path, q), want) << "case " << i;
  }
}

TEST(Oracle, LooseningConstraintsNeverSlower) {
  for (std::uint64_t seed = 500; seed <= 540; ++seed) {
    const auto in = support::random_instance(seed);
    PraoQuery q = in.query;
    const OracleResult base = brute_force_oracle(in.net, in.store, q);
    q.epsilon += 10;
    const OracleResult looser_eps = brute_force_oracle(in.net, in.store, q);
    q = in.query;
    q.alpha = std::min(0.95, q.alpha + 0.2);
    const OracleResult looser_alpha = brute_force_oracle(in.net, in.store, q);
    for (const OracleResult* o : {&looser_eps, &looser_alpha}) {
      if (base.result.found) {
        ASSERT_TRUE(o->result.found) << "seed " << seed;
        EXPECT_LE(o->result.total_time, base.result.total_time + 1e-12);
      }
    }
  }
}

TEST(Oracle, BestArrivalIsConsistent) {
  for (std::uint64_t seed = 600; seed <= 620; ++seed) {
    const auto in = support::random_instance(seed);
    const OracleResult o = brute_force_oracle(in.net, in.store, in.query);
    EXPECT_EQ(o.best_arrival[in.query.src], 0.0);
    if (!o.result.found) continue;
    EXPECT_NEAR(o.best_arrival[in.query.dst], o.result.total_time, 1e-12);
    for (const auto& p : o.optimal_paths) {
      EXPECT_NEAR(path_time(in.net, p), o.result.total_time, 1e-12);
      EXPECT_TRUE(validate_path(in.net, in.store, p, in.query));
    }
  }
}

TEST(PraoQp, DeterministicAcrossRuns) {
  for (std::uint64_t seed = 700; seed <= 720; ++seed) {
    const auto in = support::random_instance(seed);
    const QueryResult a = prao_qp(in.index, in.net, in.store, in.pivots, in.query);
    const QueryResult b = prao_qp(in.index, in.net, in.store, in.pivots, in.query);
    EXPECT_EQ(a.path, b.path);
    EXPECT_EQ(a.stats.node_accesses, b.stats.node_accesses);
    EXPECT_EQ(a.stats.edge_expansions, b.stats.edge_expansions);
  }
}
