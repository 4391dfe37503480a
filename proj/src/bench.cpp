#include "prao/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "prao/query_engine.hpp"

namespace prao {

namespace {

constexpr double kTimeTol = 1e-9;

nlohmann::json stats_json(const QueryStats& s) {
  return {
      {"node_accesses", s.node_accesses},
      {"distinct_nodes", s.distinct_nodes},
      {"edge_expansions", s.edge_expansions},
      {"heap_pushes", s.heap_pushes},
      {"heap_pops", s.heap_pops},
      {"seeds", s.seeds},
      {"node_keyword_prunes", s.node_keyword_prunes},
      {"node_weather_prunes", s.node_weather_prunes},
      {"node_time_prunes", s.node_time_prunes},
      {"edge_keyword_prunes", s.edge_keyword_prunes},
      {"edge_weather_prunes", s.edge_weather_prunes},
      {"edge_exact_rejects", s.edge_exact_rejects},
      {"edge_time_prunes", s.edge_time_prunes},
      {"horizon_blocked", s.horizon_blocked},
      {"inconsistent_discards", s.inconsistent_discards},
      {"refine_rejects", s.refine_rejects},
      {"candidates", s.candidates},
      {"max_queue", s.max_queue},
      {"max_heap", s.max_heap},
      {"wall_ms", s.wall_ms},
  };
}

std::string describe_query(const PraoQuery& q) {
  std::ostringstream o;
  o << "src=" << q.src << " dst=" << q.dst << " type=" << q.type << " eps=" << q.epsilon << " alpha=" << q.alpha
    << std::setprecision(17) << " depart=" << q.depart << " S=";
  for (std::size_t i = 0; i < q.obstacles.size(); ++i) o << (i ? "," : "") << q.obstacles[i];
  return o.str();
}

std::string describe_path(const std::vector<EdgeId>& p) {
  std::ostringstream o;
  for (std::size_t i = 0; i < p.size(); ++i) o << (i ? " " : "") << p[i];
  return o.str();
}

// prao may beat astar only when astar committed to a non-minimal prefix
// label; any other disagreement is a bug.
void cross_check(const RoadNetwork& net, const WeatherStore& store, std::size_t qi, const PraoQuery& q,
                 const QueryResult& prao, const QueryResult& astar) {
  const bool same = prao.found == astar.found &&
                    (!prao.found || std::fabs(prao.total_time - astar.total_time) <= kTimeTol);
  // Only possible off the minimal-prefix assumption; the path must still hold up.
  const bool prao_better = prao.found && (!astar.found || prao.total_time < astar.total_time - kTimeTol) &&
                           validate_path(net, store, prao.path, q);
  if (same || prao_better) return;
  std::ostringstream o;
  o << std::setprecision(17) << "result mismatch on query " << qi << " (" << describe_query(q) << ")\n"
    << "  prao:  found=" << prao.found << " time=" << prao.total_time << " path=[" << describe_path(prao.path)
    << "]\n"
    << "  astar: found=" << astar.found << " time=" << astar.total_time << " path=[" << describe_path(astar.path)
    << "]";
  throw BenchMismatch(o.str());
}

}  // namespace

MetricSummary summarize(std::vector<double> xs) {
  MetricSummary m;
  if (xs.empty()) return m;
  double sum = 0;
  for (double x : xs) sum += x;
  m.mean = sum / static_cast<double>(xs.size());
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  m.median = n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
  return m;
}

std::vector<AlgoSummary> summarize_rows(const std::vector<BenchRow>& rows) {
  std::vector<AlgoSummary> out;
  std::vector<std::string> order;
  for (const BenchRow& r : rows) {
    if (std::find(order.begin(), order.end(), r.algorithm) == order.end()) order.push_back(r.algorithm);
  }
  for (const std::string& algo : order) {
    AlgoSummary s;
    s.algorithm = algo;
    std::vector<double> wall, nodes, edges, q, h;
    for (const BenchRow& r : rows) {
      if (r.algorithm != algo) continue;
      ++s.rows;
      s.found += r.result.found ? 1 : 0;
      const QueryStats& st = r.result.stats;
      wall.push_back(st.wall_ms);
      nodes.push_back(static_cast<double>(st.node_accesses));
      edges.push_back(static_cast<double>(st.edge_expansions));
      q.push_back(static_cast<double>(st.max_queue));
      h.push_back(static_cast<double>(st.max_heap));
    }
    s.wall_ms = summarize(wall);
    s.node_accesses = summarize(nodes);
    s.edge_expansions = summarize(edges);
    s.max_queue = summarize(q);
    s.max_heap = summarize(h);
    out.push_back(std::move(s));
  }
  return out;
}

BenchReport run_bench(const SpatialIndex& index, const RoadNetwork& net, const WeatherStore& store,
                      const PivotTable& pivots, const std::vector<PraoQuery>& queries, const BenchConfig& cfg,
                      std::ostream* json) {
  for (const std::string& a : cfg.algorithms) {
    if (a != "prao" && a != "astar" && a != "filterfirst") throw std::invalid_argument("unknown algorithm " + a);
  }
  const bool check = std::find(cfg.algorithms.begin(), cfg.algorithms.end(), "prao") != cfg.algorithms.end() &&
                     std::find(cfg.algorithms.begin(), cfg.algorithms.end(), "astar") != cfg.algorithms.end();
  PraoOptions opts;
  opts.greedy_seed = cfg.greedy_seed;
  BenchReport report;
  for (std::size_t qi = 0; qi < queries.size(); ++qi) {
    const PraoQuery& q = queries[qi];
    std::vector<BenchRow> pending;
    for (int rep = 0; rep < cfg.repeats; ++rep) {
      for (const std::string& algo : cfg.algorithms) {
        BenchRow row{algo, qi, rep, {}};
        if (algo == "prao") {
          row.result = prao_qp(index, net, store, pivots, q, opts);
        } else if (algo == "astar") {
          row.result = astar_baseline(net, store, pivots, q);
        } else {
          row.result = filterfirst_baseline(net, store, pivots, q);
        }
        pending.push_back(std::move(row));
      }
    }
    if (check) {
      const QueryResult* a = nullptr;
      for (const BenchRow& r : pending) {
        if (r.algorithm == "astar") a = &r.result;
      }
      for (const BenchRow& r : pending) {
        if (r.algorithm == "prao") cross_check(net, store, qi, q, r.result, *a);
      }
    }
    for (BenchRow& r : pending) {
      if (json) *json << row_json(r) << '\n';
      report.rows.push_back(std::move(r));
    }
  }
  report.summary = summarize_rows(report.rows);
  if (json) {
    for (const AlgoSummary& s : report.summary) *json << summary_json(s) << '\n';
  }
  return report;
}

std::string row_json(const BenchRow& row) {
  nlohmann::json j = {
      {"kind", "row"},
      {"algorithm", row.algorithm},
      {"query", row.query},
      {"repeat", row.repeat},
      {"found", row.result.found},
      {"total_time", row.result.total_time},
      {"path", row.result.path},
      {"stats", stats_json(row.result.stats)},
  };
  return j.dump();
}

std::string summary_json(const AlgoSummary& s) {
  auto ms = [](const MetricSummary& m) { return nlohmann::json{{"mean", m.mean}, {"median", m.median}}; };
  nlohmann::json j = {
      {"kind", "summary"},
      {"algorithm", s.algorithm},
      {"rows", s.rows},
      {"found", s.found},
      {"wall_ms", ms(s.wall_ms)},
      {"node_accesses", ms(s.node_accesses)},
      {"edge_expansions", ms(s.edge_expansions)},
      {"max_queue", ms(s.max_queue)},
      {"max_heap", ms(s.max_heap)},
  };
  return j.dump();
}

void print_summary_table(std::ostream& out, const std::vector<AlgoSummary>& summary) {
  out << std::left << std::setw(12) << "algorithm" << std::right << std::setw(6) << "rows" << std::setw(7)
      << "found" << std::setw(12) << "wall_ms" << std::setw(12) << "(median)" << std::setw(14) << "node_acc"
      << std::setw(14) << "edge_exp" << std::setw(10) << "max|Q|" << std::setw(10) << "max|H|" << '\n';
  out << std::fixed;
  for (const AlgoSummary& s : summary) {
    out << std::left << std::setw(12) << s.algorithm << std::right << std::setw(6) << s.rows << std::setw(7)
        << s.found << std::setprecision(3) << std::setw(12) << s.wall_ms.mean << std::setw(12) << s.wall_ms.median
        << std::setprecision(1) << std::setw(14) << s.node_accesses.mean << std::setw(14) << s.edge_expansions.mean
        << std::setw(10) << s.max_queue.mean << std::setw(10) << s.max_heap.mean << '\n';
  }
  out << std::defaultfloat;
}

UpdateBenchReport run_update_bench(const RoadNetwork& net, WeatherStore& store, SpatialIndex& index,
                                   const std::vector<std::vector<WeatherRecord>>& batches, int verify_every) {
  using clock = std::chrono::steady_clock;
  UpdateBenchReport rep;
  std::vector<double> times;
  for (std::size_t i = 0; i < batches.size(); ++i) {
    UpdateBatchStat b;
    const auto t0 = clock::now();
    const UpdateReport u = store.apply_update(batches[i]);
    b.recomputed = index.propagate_weather_update(net, store, u.changed);
    b.ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    b.new_base = u.new_base;
    b.changed_slots = u.changed.size();
    if (verify_every > 0 && ((i + 1) % std::size_t(verify_every) == 0 || i + 1 == batches.size())) {
      SpatialIndex fresh = index;
      fresh.rebuild_weather(net, store);
      b.verified = true;
      b.equal = fresh.same_weather(index);
      rep.all_equal = rep.all_equal && b.equal;
    }
    times.push_back(b.ms);
    rep.batches.push_back(b);
  }
  if (!times.empty()) {
    std::sort(times.begin(), times.end());
    const std::size_t n = times.size();
    rep.median_ms = n % 2 ? times[n / 2] : 0.5 * (times[n / 2 - 1] + times[n / 2]);
    // Nearest-rank percentile.
    rep.p95_ms = times[std::min(n - 1, static_cast<std::size_t>(std::ceil(0.95 * double(n))) - 1)];
    rep.max_ms = times.back();
  }
  return rep;
}

std::string update_json(const UpdateBatchStat& b) {
  nlohmann::json j = {
      {"kind", "update"},   {"new_base", b.new_base}, {"changed_slots", b.changed_slots},
      {"recomputed", b.recomputed}, {"ms", b.ms},   {"verified", b.verified},
      {"equal", b.equal},
  };
  return j.dump();
}

}  // namespace prao
