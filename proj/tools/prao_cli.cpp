// prao: generate workloads, build sidecars, run and benchmark queries.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "prao/bench.hpp"
#include "prao/error.hpp"
#include "prao/kernels/kernels.hpp"
#include "prao/network.hpp"
#include "prao/pivots.hpp"
#include "prao/query_engine.hpp"
#include "prao/sidecar.hpp"
#include "prao/spatial_index.hpp"
#include "prao/weather.hpp"
#include "prao/workload.hpp"

namespace fs = std::filesystem;
using namespace prao;

namespace {

struct Global {
  std::uint64_t seed = 1;
  int horizon = 24;
  std::size_t fanout = 32;
  std::size_t d = 5;
};

struct Inputs {
  std::string network;
  std::string weather;
  std::string pivots;  // defaults to <network>.pivots
  std::string index;   // defaults to <network>.index
  std::string queries;
};

void add_network(CLI::App* c, Inputs& in) {
  c->add_option("--network,-n", in.network, "canonical network file")->required()->check(CLI::ExistingFile);
}
void add_weather(CLI::App* c, Inputs& in) {
  c->add_option("--weather,-w", in.weather, "weather stream file")->required()->check(CLI::ExistingFile);
}
void add_sidecars(CLI::App* c, Inputs& in) {
  c->add_option("--pivots", in.pivots, "pivot cache (default <network>.pivots)");
  c->add_option("--index", in.index, "index cache (default <network>.index)");
}
void add_queries(CLI::App* c, Inputs& in) {
  c->add_option("--queries,-q", in.queries, "query file")->required()->check(CLI::ExistingFile);
}

std::string or_default(const std::string& p, const std::string& net, const char* ext) {
  return p.empty() ? net + ext : p;
}

PivotTable need_pivots(const Inputs& in, const RoadNetwork& net) {
  const std::string p = or_default(in.pivots, in.network, ".pivots");
  if (!fs::exists(p)) {
    throw std::runtime_error("missing pivot cache " + p + "; build it with: prao pivots --network " + in.network);
  }
  return load_pivots(p, net);
}

SpatialIndex need_index(const Inputs& in, const Global& g, const RoadNetwork& net, const WeatherStore& store) {
  const std::string p = or_default(in.index, in.network, ".index");
  if (!fs::exists(p)) {
    throw std::runtime_error("missing index cache " + p + "; build it with: prao index --network " + in.network +
                             " --weather " + in.weather);
  }
  return load_index(p, net, store, g.fanout);
}

std::string cmdline(int argc, char** argv) {
  std::string s = "prao";
  for (int i = 1; i < argc; ++i) s += std::string(" ") + argv[i];
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Routing with ad-hoc keyword and weather obstacles"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--horizon", g.horizon, "weather window length in hours")->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--fanout", g.fanout, "index node capacity")->capture_default_str()->check(CLI::Range(2, 4096));
  app.add_option("--d", g.d, "number of pivots")->capture_default_str()->check(CLI::PositiveNumber);
  bool force_scalar = false;
  app.add_flag("--scalar", force_scalar, "disable SIMD kernels");

  // gen
  auto* gen = app.add_subcommand("gen", "write synthetic network, weather and query files");
  GenConfig gc;
  QueryGenConfig qc;
  std::string out_dir = ".";
  std::string dist = "uniform";
  std::string ca_nodes, ca_edges;
  gen->add_option("--vertices", gc.n_vertices, "vertex count")->capture_default_str();
  gen->add_option("--dist", dist, "uniform|gaussian")->check(CLI::IsMember({"uniform", "gaussian"}))
      ->capture_default_str();
  gen->add_option("--extra-hours", gc.extra_hours, "weather hours past the window (update stream)")
      ->capture_default_str();
  gen->add_option("--ca-nodes", ca_nodes, "import a lon/lat node file instead of synthesizing")
      ->check(CLI::ExistingFile);
  gen->add_option("--ca-edges", ca_edges, "edge file paired with --ca-nodes")->check(CLI::ExistingFile);
  gen->add_option("--count", qc.count, "queries to generate")->capture_default_str();
  gen->add_option("--sigma", qc.sigma, "hop length of the witness walk")->capture_default_str()
      ->check(CLI::Range(2, 1000));
  gen->add_option("--s-size", qc.s_size, "obstacle keywords per query")->capture_default_str();
  gen->add_option("--epsilon", qc.epsilon, "weather threshold")->capture_default_str();
  gen->add_option("--alpha", qc.alpha, "violation probability threshold")->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--max-restarts", qc.max_restarts, "walk restarts before giving up")->capture_default_str();
  gen->add_option("--out,-o", out_dir, "output directory")->capture_default_str();

  // pivots
  auto* piv = app.add_subcommand("pivots", "select pivots and write the pivot cache");
  Inputs in;
  PivotSearchConfig pc;
  std::size_t d_max = 0;
  add_network(piv, in);
  piv->add_option("--out,-o", in.pivots, "output (default <network>.pivots)");
  piv->add_option("--global-iter", pc.global_iter, "random restarts")->capture_default_str();
  piv->add_option("--swap-iter", pc.swap_iter, "swap attempts per restart")->capture_default_str();
  piv->add_option("--sample", pc.sample_size, "vertex pairs sampled for the cost")->capture_default_str();
  piv->add_option("--auto-d", d_max, "pick d in [1, N] by marginal cost gain instead of --d");

  // index
  auto* idx = app.add_subcommand("index", "build the spatial index cache");
  add_network(idx, in);
  add_weather(idx, in);
  idx->add_option("--out,-o", in.index, "output (default <network>.index)");

  // query
  auto* qry = app.add_subcommand("query", "answer queries, one JSON line each");
  std::string algo = "prao";
  bool greedy = false;
  add_network(qry, in);
  add_weather(qry, in);
  add_sidecars(qry, in);
  add_queries(qry, in);
  qry->add_option("--algo", algo, "prao|astar|filterfirst")
      ->check(CLI::IsMember({"prao", "astar", "filterfirst"}))->capture_default_str();
  qry->add_flag("--greedy-seed", greedy, "seed the time bound with a greedy valid path");

  // bench
  auto* bench = app.add_subcommand("bench", "benchmark algorithms on a query file");
  BenchConfig bc;
  std::string report_path;
  add_network(bench, in);
  add_weather(bench, in);
  add_sidecars(bench, in);
  add_queries(bench, in);
  bench->add_option("--algos", bc.algorithms, "algorithms to run")->delimiter(',')
      ->check(CLI::IsMember({"prao", "astar", "filterfirst"}));
  bench->add_option("--repeats", bc.repeats, "runs per query")->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--report", report_path, "JSON-lines report (default stdout)");
  bench->add_flag("--greedy-seed", bc.greedy_seed, "seed the time bound with a greedy valid path");

  // update-bench
  auto* upd = app.add_subcommand("update-bench", "replay hourly weather updates against the index");
  int hours = 0;
  int verify_every = 6;
  add_network(upd, in);
  add_weather(upd, in);
  upd->add_option("--index", in.index, "index cache (default: build in memory)");
  upd->add_option("--hours", hours, "batches to replay (default all)");
  upd->add_option("--verify-every", verify_every, "compare against a rebuild every k batches")
      ->capture_default_str();

  // oracle-check
  auto* orc = app.add_subcommand("oracle-check", "compare prao against exhaustive enumeration");
  int hop_limit = 12;
  add_network(orc, in);
  add_weather(orc, in);
  add_sidecars(orc, in);
  add_queries(orc, in);
  orc->add_option("--hop-limit", hop_limit, "maximum path length enumerated")->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  if (force_scalar) kernels::force_isa(kernels::Isa::Scalar);

  try {
    if (*gen) {
      gc.distribution = dist == "gaussian" ? Distribution::Gaussian : Distribution::Uniform;
      gc.horizon = g.horizon;
      gc.seed = g.seed;
      qc.seed = g.seed + 1;
      qc.keyword_max = gc.attrs.keyword_max;
      std::string header = cmdline(argc, argv) + "\n" + gc.describe();
      RoadNetwork net;
      if (!ca_nodes.empty() || !ca_edges.empty()) {
        if (ca_nodes.empty() || ca_edges.empty()) throw std::runtime_error("--ca-nodes and --ca-edges go together");
        net = load_ca_network(ca_nodes, ca_edges, {g.seed, gc.attrs}, &std::cerr);
      } else {
        net = gen_network(gc);
      }
      fs::create_directories(out_dir);
      const fs::path dir(out_dir);
      save_network((dir / "network.txt").string(), net, header);
      const auto records = gen_weather(net, gc);
      {
        std::ofstream w(dir / "weather.txt");
        write_weather(w, records, header);
      }
      WeatherData wd = load_weather((dir / "weather.txt").string(), net.vertex_count(), g.horizon);
      const auto gq = gen_queries(net, wd.store, qc);
      std::vector<PraoQuery> qs;
      for (const auto& x : gq) qs.push_back(x.query);
      {
        std::ofstream q(dir / "queries.txt");
        write_queries(q, qs, header + "\n" + qc.describe());
      }
      std::cout << "wrote " << (dir / "network.txt").string() << " (|V|=" << net.vertex_count()
                << " |E|=" << net.edge_count() << "), weather.txt (" << records.size() << " records), queries.txt ("
                << qs.size() << " queries)\n";
      return 0;
    }

    const RoadNetwork net = load_network(in.network);

    if (*piv) {
      pc.seed = g.seed;
      pc.d = g.d;
      if (d_max > 0) {
        const auto choice = choose_pivot_count(net, pc, d_max);
        pc.d = choice.d;
        std::cerr << "auto-d picked d=" << choice.d << "\n";
      }
      const auto res = obtain_pivots(net, pc);
      PivotTable table(net, res.pivots);
      const std::string out = or_default(in.pivots, in.network, ".pivots");
      save_pivots(out, net, table);
      std::cout << "pivots";
      for (VertexId p : res.pivots) std::cout << ' ' << p;
      std::cout << "\ncost " << std::setprecision(17) << res.cost << "\nwrote " << out << '\n';
      return 0;
    }

    WeatherData wd = load_weather(in.weather, net.vertex_count(), g.horizon);

    if (*idx) {
      const SpatialIndex index = SpatialIndex::build(net, wd.store, g.fanout);
      const std::string out = or_default(in.index, in.network, ".index");
      save_index(out, net, index);
      std::cout << "index height " << index.height() << ", " << index.node_count() << " nodes\nwrote " << out << '\n';
      return 0;
    }

    if (*upd) {
      SpatialIndex index = in.index.empty() ? SpatialIndex::build(net, wd.store, g.fanout)
                                            : load_index(in.index, net, wd.store, g.fanout);
      auto batches = wd.updates;
      if (hours > 0 && std::size_t(hours) < batches.size()) batches.resize(std::size_t(hours));
      if (batches.empty()) throw std::runtime_error("weather file has no hours past the window; use gen --extra-hours");
      const auto rep = run_update_bench(net, wd.store, index, batches, verify_every);
      for (const auto& b : rep.batches) std::cout << update_json(b) << '\n';
      std::cerr << "batches " << rep.batches.size() << "  median " << rep.median_ms << " ms  p95 " << rep.p95_ms
                << " ms  max " << rep.max_ms << " ms  rebuild check " << (rep.all_equal ? "ok" : "MISMATCH") << '\n';
      return rep.all_equal ? 0 : 1;
    }

    const PivotTable pivots = need_pivots(in, net);
    const SpatialIndex index = need_index(in, g, net, wd.store);
    const auto queries = load_queries(in.queries);

    if (*qry) {
      PraoOptions opts;
      opts.greedy_seed = greedy;
      for (std::size_t i = 0; i < queries.size(); ++i) {
        BenchRow row{algo, i, 0, {}};
        if (algo == "prao") {
          row.result = prao_qp(index, net, wd.store, pivots, queries[i], opts);
        } else if (algo == "astar") {
          row.result = astar_baseline(net, wd.store, pivots, queries[i]);
        } else {
          row.result = filterfirst_baseline(net, wd.store, pivots, queries[i]);
        }
        std::cout << row_json(row) << '\n';
      }
      return 0;
    }

    if (*bench) {
      std::ofstream file;
      std::ostream* json = &std::cout;
      if (!report_path.empty()) {
        file.open(report_path);
        if (!file) throw std::runtime_error("cannot write " + report_path);
        json = &file;
      }
      const auto rep = run_bench(index, net, wd.store, pivots, queries, bc, json);
      print_summary_table(report_path.empty() ? std::cerr : std::cout, rep.summary);
      return 0;
    }

    if (*orc) {
      std::size_t monotone = 0, agree = 0, skipped = 0;
      for (std::size_t i = 0; i < queries.size(); ++i) {
        const OracleResult o = brute_force_oracle(net, wd.store, queries[i], hop_limit);
        const QueryResult r = prao_qp(index, net, wd.store, pivots, queries[i]);
        std::string verdict;
        if (!o.prefix_monotone) {
          ++skipped;
          verdict = o.truncated ? "skip-truncated" : "skip-nonmonotone";
        } else {
          ++monotone;
          const bool ok = o.result.found == r.found &&
                          (!r.found || std::fabs(o.result.total_time - r.total_time) <= 1e-9);
          agree += ok ? 1 : 0;
          verdict = ok ? "agree" : "DISAGREE";
        }
        std::cout << std::setprecision(17) << "query " << i << ' ' << verdict << " oracle=" << o.result.found << '/'
                  << o.result.total_time << " prao=" << r.found << '/' << r.total_time << " enumerated "
                  << o.paths_enumerated << '\n';
      }
      std::cout << "monotone " << monotone << " agree " << agree << " skipped " << skipped << '\n';
      return agree == monotone ? 0 : 1;
    }
  } catch (const BenchMismatch& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
