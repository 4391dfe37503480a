#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "prao/error.hpp"
#include "prao/weather.hpp"
#include "support.hpp"

using namespace prao;

namespace {

// Eight-vertex example: wind speed and confidence at 8am and 9am.
struct ExampleWeather {
  std::vector<Vertex> vs;
  std::vector<Edge> es;
  WeatherStore store{8, 2, 8, {"wind_speed"}};

  ExampleWeather() {
    const double table[8][4] = {{10, 0.9, 15, 1},   {15, 0.8, 20, 0.9}, {50, 0.9, 65, 0.8}, {20, 0.9, 25, 0.8},
                                {35, 0.9, 40, 0.9}, {20, 1, 25, 0.9},   {10, 0.8, 15, 1},   {10, 0.9, 10, 1}};
    for (VertexId v = 0; v < 8; ++v) {
      store.set(v, 8, 0, {table[v][0], table[v][1]});
      store.set(v, 9, 0, {table[v][2], table[v][3]});
    }
  }
};

}  // namespace

TEST(SlotValue, ExampleVertexTwo) {
  ExampleWeather ex;
  const Forecast f = slot_value(ex.store, 2, 8.0);
  EXPECT_EQ(f.value, 50);
  EXPECT_EQ(f.confidence, 0.9);
  EXPECT_EQ(slot_value(ex.store, 2, 8.99).value, 50);
  EXPECT_EQ(slot_value(ex.store, 2, 9.0).value, 65);
  EXPECT_THROW(slot_value(ex.store, 2, 10.0), HorizonError);
  EXPECT_THROW(slot_value(ex.store, 2, 7.5), HorizonError);
}

TEST(EdgeWeatherBounds, ExampleEdgeFourSix) {
  ExampleWeather ex;
  Edge e{0, 4, 6, 30, 0.2, {}};
  auto [lo, hi] = edge_weather_bounds(ex.store, e, 8);
  EXPECT_EQ(lo, 10);
  EXPECT_EQ(hi, 35);
}

TEST(Idw, ExampleIsExactly28) { EXPECT_EQ(idw_interpolate(30, 20, 2, 8), 28.0); }

TEST(Idw, EndpointsAndBoundsProperty) {
  EXPECT_EQ(idw_interpolate(30, 20, 0, 10), 30);
  EXPECT_EQ(idw_interpolate(30, 20, 10, 0), 20);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> val(0, 100), frac(0, 1);
  for (int i = 0; i < 100; ++i) {
    const double a = val(rng), b = val(rng), len = 1 + val(rng), x = frac(rng) * len;
    const double w = idw_interpolate(a, b, x, len - x);
    EXPECT_GE(w, std::min(a, b) - 1e-12);
    EXPECT_LE(w, std::max(a, b) + 1e-12);
  }
}

TEST(CaseConfidence, ProductsAndTotal) {
  EXPECT_DOUBLE_EQ(case_confidence(WorldCase::A, 0.9, 0.8), 0.9 * 0.8);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> p(0, 1);
  for (int i = 0; i < 1000; ++i) {
    const double a = p(rng), b = p(rng);
    const double total = case_confidence(WorldCase::A, a, b) + case_confidence(WorldCase::B, a, b) +
                         case_confidence(WorldCase::C, a, b) + case_confidence(WorldCase::D, a, b);
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(UbPrLeq, CaseExamples) {
  EXPECT_EQ(ub_pr_leq(30, 0.7, 20, 0.6, 40), 1.0);
  EXPECT_NEAR(ub_pr_leq(20, 0.9, 65, 0.8, 40), 1 - 0.8 * 0.1, 1e-15);
  EXPECT_NEAR(ub_pr_leq(50, 0.9, 65, 0.8, 40), 0.1 * 0.2, 1e-15);
  // Mirror of the mixed case.
  EXPECT_NEAR(ub_pr_leq(65, 0.8, 20, 0.9, 40), 1 - 0.8 * 0.1, 1e-15);
  // A value equal to eps is not a violation.
  EXPECT_EQ(ub_pr_leq(40, 0.5, 40, 0.5, 40), 1.0);
}

TEST(UbPrLeq, DominatesPointProbabilityProperty) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> v(0, 20);
  std::uniform_real_distribution<double> p(0.0, 1.0), frac(0, 1);
  for (int i = 0; i < 2000; ++i) {
    const double vu = 5.0 * v(rng), vv = 5.0 * v(rng), pu = p(rng), pv = p(rng), eps = 5.0 * v(rng);
    const double ub = ub_pr_leq(vu, pu, vv, pv, eps);
    for (int k = 0; k < 5; ++k) {
      const double x = frac(rng);
      const double at = support::worlds_pr_leq_at(vu, pu, vv, pv, eps, idw_interpolate(vu, vv, x, 1 - x));
      EXPECT_GE(ub + 1e-12, at) << vu << ' ' << pu << ' ' << vv << ' ' << pv << ' ' << eps;
    }
  }
}

TEST(SlotViolation, OnlyWorldDWhenBothSafe) {
  EXPECT_NEAR(slot_violation(10, 0.8, 20, 0.9, 40), 0.2 * 0.1, 1e-15);
}

TEST(SlotViolation, MatchesWorldEnumerationProperty) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> v(0, 20);
  std::uniform_real_distribution<double> p(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double vu = 5.0 * v(rng), vv = 5.0 * v(rng), pu = p(rng), pv = p(rng), eps = 5.0 * v(rng);
    EXPECT_NEAR(slot_violation(vu, pu, vv, pv, eps), support::worlds_violation(vu, pu, vv, pv, eps), 1e-12);
    // Direction of travel does not matter.
    EXPECT_EQ(slot_violation(vu, pu, vv, pv, eps), slot_violation(vv, pv, vu, pu, eps));
  }
}

TEST(ExactPrViolate, MaxOverTouchedSlots) {
  const RoadNetwork net = support::small_network(7, 40);
  const WeatherStore store = support::random_store(net, 8, 24, 5);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> t(5, 25);
  for (int i = 0; i < 1000; ++i) {
    const Edge& e = net.edge(static_cast<EdgeId>(i % net.edge_count()));
    const double dep = t(rng), arr = dep + e.w;
    const SlotRange r = traversal_slots(dep, arr);
    if (r.last >= store.end_hour()) {
      EXPECT_THROW(exact_pr_violate(store, e, dep, arr, 50), HorizonError);
      continue;
    }
    double want = 0, want_ub = 1;
    for (std::int64_t h = r.first; h <= r.last; ++h) {
      const Forecast a = store.at(e.u, h), b = store.at(e.v, h);
      want = std::max(want, support::worlds_violation(a.value, a.confidence, b.value, b.confidence, 50));
      want_ub = std::min(want_ub, ub_pr_leq(a.value, a.confidence, b.value, b.confidence, 50));
    }
    EXPECT_NEAR(exact_pr_violate(store, e, dep, arr, 50), want, 1e-12);
    EXPECT_EQ(edge_min_ub(store, e, r, 50), want_ub);
  }
}

TEST(TraversalSlots, HalfOpenInterval) {
  auto r = traversal_slots(8.2, 9.0);
  EXPECT_EQ(r.first, 8);
  EXPECT_EQ(r.last, 8);
  r = traversal_slots(8.2, 9.1);
  EXPECT_EQ(r.last, 9);
  r = traversal_slots(8.0, 8.0);
  EXPECT_EQ(r.size(), 1u);
  r = traversal_slots(7.5, 10.25);
  EXPECT_EQ(r.first, 7);
  EXPECT_EQ(r.last, 10);
}

TEST(TraversalSlots, RequireSlotsChecksWindow) {
  WeatherStore s(1, 4, 10, {"wind_speed"});
  EXPECT_NO_THROW(require_slots(s, {10, 13}));
  EXPECT_THROW(require_slots(s, {9, 10}), HorizonError);
  EXPECT_THROW(require_slots(s, {12, 14}), HorizonError);
}

namespace {

std::vector<WeatherRecord> hour_batch(std::size_t n, std::int64_t hour, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> v(0, 100), p(0.5, 1);
  std::vector<WeatherRecord> b;
  for (VertexId x = 0; x < n; ++x) b.push_back({x, hour, "wind_speed", v(rng), p(rng)});
  return b;
}

}  // namespace

TEST(ApplyUpdate, AdvancingMatchesFreshWindowProperty) {
  std::mt19937_64 rng(10);
  const std::size_t n = 7;
  const int H = 5;
  std::vector<std::vector<WeatherRecord>> hours;
  for (int h = 0; h < 20; ++h) hours.push_back(hour_batch(n, h, rng));
  WeatherStore live(n, H, 0, {"wind_speed"});
  for (int h = 0; h < H; ++h) {
    for (const auto& r : hours[h]) live.set(r.vertex, r.hour, 0, {r.value, r.confidence});
  }
  for (int h = H; h < 20; ++h) {
    const UpdateReport rep = live.apply_update(hours[h]);
    EXPECT_EQ(rep.new_base, h - H + 1);
    EXPECT_EQ(rep.hours_added, 1u);
    WeatherStore fresh(n, H, h - H + 1, {"wind_speed"});
    for (int k = h - H + 1; k <= h; ++k) {
      for (const auto& r : hours[k]) fresh.set(r.vertex, r.hour, 0, {r.value, r.confidence});
    }
    EXPECT_TRUE(live == fresh) << "after hour " << h;
  }
}

TEST(ApplyUpdate, RevisionReportsOnlyRealChanges) {
  std::mt19937_64 rng(11);
  WeatherStore s(3, 4, 0, {"wind_speed"});
  for (int h = 0; h < 4; ++h) {
    for (const auto& r : hour_batch(3, h, rng)) s.set(r.vertex, r.hour, 0, {r.value, r.confidence});
  }
  const Forecast old = s.at(1, 2);
  std::vector<WeatherRecord> same{{1, 2, "wind_speed", old.value, old.confidence}};
  EXPECT_TRUE(s.apply_update(same).changed.empty());
  std::vector<WeatherRecord> rev{{1, 2, "wind_speed", old.value + 1, old.confidence}};
  const UpdateReport rep = s.apply_update(rev);
  ASSERT_EQ(rep.changed.size(), 1u);
  EXPECT_EQ(rep.changed[0], (ChangedSlot{1, 2}));
  EXPECT_EQ(rep.new_base, 0);
}

TEST(ApplyUpdate, RejectsBadBatchesWithoutMutation) {
  std::mt19937_64 rng(12);
  WeatherStore s(3, 4, 10, {"wind_speed"});
  for (int h = 10; h < 14; ++h) {
    for (const auto& r : hour_batch(3, h, rng)) s.set(r.vertex, r.hour, 0, {r.value, r.confidence});
  }
  const WeatherStore before = s;
  auto expired = hour_batch(3, 9, rng);
  EXPECT_THROW(s.apply_update(expired), UpdateError);
  auto gap = hour_batch(3, 15, rng);
  EXPECT_THROW(s.apply_update(gap), UpdateError);
  auto partial = hour_batch(3, 14, rng);
  partial.pop_back();
  EXPECT_THROW(s.apply_update(partial), UpdateError);
  // A valid revision bundled with an invalid record must not be applied.
  auto mixed = hour_batch(3, 12, rng);
  mixed.push_back({0, 3, "wind_speed", 1, 1});
  EXPECT_THROW(s.apply_update(mixed), UpdateError);
  EXPECT_TRUE(s == before);
}

TEST(WeatherIo, SnapshotAndHourlyBatches) {
  const RoadNetwork net = support::small_network(13, 10);
  GenConfig cfg;
  cfg.horizon = 4;
  cfg.extra_hours = 3;
  cfg.base_hour = 100;
  const auto recs = gen_weather(net, cfg);
  std::ostringstream out;
  write_weather(out, recs, "test");
  std::istringstream in(out.str());
  WeatherData wd = read_weather(in, net.vertex_count(), 4);
  EXPECT_EQ(wd.store.base_hour(), 100);
  ASSERT_EQ(wd.updates.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(wd.updates[i].size(), net.vertex_count());
    EXPECT_EQ(wd.updates[i][0].hour, 104 + std::int64_t(i));
  }
  for (const auto& r : recs) {
    if (r.hour >= 104) continue;
    EXPECT_EQ(wd.store.at(r.vertex, r.hour).value, r.value);
    EXPECT_EQ(wd.store.at(r.vertex, r.hour).confidence, r.confidence);
  }
}

TEST(WeatherIo, IncompleteSnapshotRejected) {
  std::istringstream in("W 0 0 wind_speed 10 0.9\nW 1 0 wind_speed 10 0.9\nW 0 1 wind_speed 10 0.9\n");
  EXPECT_THROW(read_weather(in, 2, 2), UpdateError);
}

TEST(WeatherIo, BadLineNamesLine) {
  std::istringstream in("W 0 0 wind_speed 10 0.9\nW 1 zero wind_speed 10 0.9\n");
  try {
    read_weather(in, 2, 1);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}
