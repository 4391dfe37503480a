#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "prao/spatial_index.hpp"
#include "support.hpp"

using namespace prao;

namespace {

void collect_edges(const SpatialIndex& idx, NodeId n, std::vector<EdgeId>& out) {
  const IndexNode& node = idx.node(n);
  for (std::uint32_t c : node.children) {
    if (node.level == 0) {
      out.push_back(c);
    } else {
      collect_edges(idx, c, out);
    }
  }
}

struct Fixture {
  RoadNetwork net;
  WeatherStore store;
  SpatialIndex idx;

  Fixture(std::uint64_t seed, std::size_t n, std::size_t fanout, double plane = 200)
      : net(support::small_network(seed, n, plane)),
        store(support::random_store(net, seed + 100, 6, 0)),
        idx(SpatialIndex::build(net, store, fanout)) {}
};

}  // namespace

TEST(SpatialIndex, EveryEdgeInExactlyOneLeaf) {
  Fixture f(1, 400, 8);
  std::vector<int> seen(f.net.edge_count(), 0);
  for (NodeId leaf : f.idx.level_nodes(0)) {
    for (std::uint32_t e : f.idx.node(leaf).children) {
      ++seen[e];
      EXPECT_EQ(f.idx.leaf_of(e), leaf);
    }
  }
  for (int s : seen) EXPECT_EQ(s, 1);
  EXPECT_EQ(f.idx.level_nodes(f.idx.height()).size(), 1u);
  EXPECT_EQ(f.idx.level_nodes(f.idx.height())[0], f.idx.root());
}

TEST(SpatialIndex, LocatorFollowsParents) {
  Fixture f(2, 300, 4);
  for (EdgeId e = 0; e < f.net.edge_count(); ++e) {
    auto path = f.idx.locate(e);
    ASSERT_EQ(path.size(), std::size_t(f.idx.height() + 1));
    EXPECT_EQ(path.front(), f.idx.root());
    for (std::size_t i = 1; i < path.size(); ++i) EXPECT_EQ(f.idx.node(path[i]).parent, path[i - 1]);
    for (int l = 0; l <= f.idx.height(); ++l) EXPECT_EQ(f.idx.node(f.idx.ancestor(e, l)).level, l);
  }
}

TEST(SpatialIndex, SummariesMatchDescendantScan) {
  Fixture f(3, 300, 6);
  const auto& dict = f.net.dictionary();
  for (const IndexNode& n : f.idx.nodes()) {
    std::vector<EdgeId> es;
    collect_edges(f.idx, n.id, es);
    ASSERT_FALSE(es.empty());
    double lb = INFINITY, ub = 0;
    std::set<KeywordId> common(f.net.edge(es[0]).keywords.begin(), f.net.edge(es[0]).keywords.end());
    for (EdgeId e : es) {
      const Edge& edge = f.net.edge(e);
      lb = std::min(lb, edge.w);
      ub = std::max(ub, edge.w);
      EXPECT_TRUE(n.mbr.contains(Rect::of_edge(f.net, edge)));
      std::set<KeywordId> k(edge.keywords.begin(), edge.keywords.end()), keep;
      std::set_intersection(common.begin(), common.end(), k.begin(), k.end(), std::inserter(keep, keep.end()));
      common = keep;
    }
    EXPECT_EQ(n.lb_t, lb);
    EXPECT_EQ(n.ub_t, ub);
    std::vector<KeywordId> cv(common.begin(), common.end());
    EXPECT_EQ(n.kw, bitmap_of(cv, dict));
  }
}

TEST(SpatialIndex, WeatherAggregatesMatchDescendantScan) {
  Fixture f(4, 250, 5);
  for (const IndexNode& n : f.idx.nodes()) {
    std::vector<EdgeId> es;
    collect_edges(f.idx, n.id, es);
    for (std::int64_t h = 0; h < 6; ++h) {
      double lo = INFINITY, hi = -INFINITY, min_hi = INFINITY, cmin = INFINITY, cmax = -INFINITY;
      for (EdgeId e : es) {
        const Forecast a = f.store.at(f.net.edge(e).u, h), b = f.store.at(f.net.edge(e).v, h);
        lo = std::min({lo, a.value, b.value});
        hi = std::max({hi, a.value, b.value});
        min_hi = std::min(min_hi, std::max(a.value, b.value));
        cmin = std::min({cmin, a.confidence, b.confidence});
        cmax = std::max({cmax, a.confidence, b.confidence});
      }
      const std::size_t p = f.store.phys(h);
      EXPECT_EQ(f.idx.field(0, n.id, kLbW, p), lo);
      EXPECT_EQ(f.idx.field(0, n.id, kUbW, p), hi);
      EXPECT_EQ(f.idx.field(0, n.id, kMinEdgeUb, p), min_hi);
      EXPECT_EQ(f.idx.field(0, n.id, kMinConf, p), cmin);
      EXPECT_EQ(f.idx.field(0, n.id, kMaxConf, p), cmax);
    }
  }
}

TEST(SpatialIndex, ConnectionGraphMatchesSharedVertices) {
  Fixture f(5, 200, 4);
  for (int l = 0; l <= f.idx.height(); ++l) {
    std::set<std::pair<NodeId, NodeId>> want;
    for (VertexId v = 0; v < f.net.vertex_count(); ++v) {
      auto inc = f.net.incident(v);
      for (std::size_t i = 0; i < inc.size(); ++i) {
        for (std::size_t j = 0; j < inc.size(); ++j) {
          if (i != j) want.emplace(f.idx.ancestor(inc[i], l), f.idx.ancestor(inc[j], l));
        }
      }
    }
    const ConnectionGraph& g = f.idx.connections(l);
    std::set<std::pair<NodeId, NodeId>> got;
    for (NodeId a : f.idx.level_nodes(l)) {
      for (NodeId b : g.neighbors(a)) got.emplace(a, b);
    }
    EXPECT_EQ(got, want) << "level " << l;
    for (auto [a, b] : want) EXPECT_TRUE(g.adjacent(a, b));
  }
}

TEST(NodeUb, FieldExamples) {
  EXPECT_EQ(node_ub_from_fields(10, 35, 20, 0.6, 0.9, 40), 1.0);
  EXPECT_NEAR(node_ub_from_fields(50, 90, 60, 0.8, 0.95, 40), 0.2 * 0.2, 1e-15);
}

TEST(NodeUb, DominatesDescendantEdgesProperty) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> eps(0, 100);
  for (std::uint64_t seed = 10; seed < 16; ++seed) {
    Fixture f(seed, 150, 4);
    for (const IndexNode& n : f.idx.nodes()) {
      std::vector<EdgeId> es;
      collect_edges(f.idx, n.id, es);
      for (std::int64_t h = 0; h < 6; ++h) {
        const double e = eps(rng);
        const double node_ub = f.idx.node_ub_pr_leq(f.store, n.id, h, e);
        for (EdgeId x : es) EXPECT_GE(node_ub, edge_ub_pr_leq(f.store, f.net.edge(x), h, e));
      }
    }
  }
}

namespace {

std::vector<WeatherRecord> random_batch(const WeatherStore& s, std::mt19937_64& rng, bool advance) {
  std::uniform_real_distribution<double> v(0, 100), p(0.5, 1);
  std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(s.vertex_count() - 1));
  std::uniform_int_distribution<std::int64_t> hour(s.base_hour(), s.end_hour() - 1);
  std::vector<WeatherRecord> b;
  if (advance) {
    const std::int64_t h = s.end_hour();
    for (VertexId x = 0; x < s.vertex_count(); ++x) b.push_back({x, h, "wind_speed", v(rng), p(rng)});
  }
  for (int i = 0; i < 5; ++i) {
    // Revisions must stay inside the window after any advance in this batch.
    std::int64_t h = hour(rng);
    if (advance && h == s.base_hour()) ++h;
    b.push_back({pick(rng), h, "wind_speed", v(rng), p(rng)});
  }
  return b;
}

}  // namespace

TEST(PropagateUpdate, EqualsFullRebuild) {
  Fixture f(7, 300, 5);
  std::mt19937_64 rng(8);
  for (int i = 0; i < 50; ++i) {
    const auto batch = random_batch(f.store, rng, i % 2 == 0);
    const UpdateReport rep = f.store.apply_update(batch);
    f.idx.propagate_weather_update(f.net, f.store, rep.changed);
    SpatialIndex fresh = f.idx;
    fresh.rebuild_weather(f.net, f.store);
    ASSERT_TRUE(fresh.same_weather(f.idx)) << "batch " << i;
  }
}

TEST(PropagateUpdate, NoChangeTouchesNothing) {
  Fixture f(9, 100, 4);
  EXPECT_EQ(f.idx.propagate_weather_update(f.net, f.store, {}), 0u);
  const Forecast cur = f.store.at(3, 2);
  std::vector<WeatherRecord> same{{3, 2, "wind_speed", cur.value, cur.confidence}};
  const UpdateReport rep = f.store.apply_update(same);
  EXPECT_EQ(f.idx.propagate_weather_update(f.net, f.store, rep.changed), 0u);
}

TEST(SpatialIndex, DefaultScaleHeight) {
  GenConfig cfg;
  cfg.n_vertices = 30000;
  cfg.horizon = 2;
  const RoadNetwork net = gen_network(cfg);
  const WeatherStore store = support::store_from(net, gen_weather(net, cfg), 2, 0);
  const SpatialIndex idx = SpatialIndex::build(net, store, 32);
  const int bound = static_cast<int>(std::ceil(std::log(net.edge_count() / 32.0) / std::log(32.0)));
  EXPECT_LE(idx.height(), std::max(bound, 4));
  EXPECT_LE(idx.height(), 4);
}

TEST(SpatialIndex, BuildIsDeterministic) {
  Fixture a(11, 200, 6), b(11, 200, 6);
  EXPECT_TRUE(a.idx.same_structure(b.idx));
  EXPECT_TRUE(a.idx.same_weather(b.idx));
}
