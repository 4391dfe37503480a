#include "prao/pivots.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <random>
#include <stdexcept>

#include "prao/kernels/kernels.hpp"

namespace prao {

std::vector<double> sssp_lengths(const RoadNetwork& net, VertexId source) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(net.vertex_count(), inf);
  using Item = std::pair<double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[source] = 0;
  pq.push({0, source});
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    for (EdgeId e : net.incident(v)) {
      const VertexId w = net.other_end(e, v);
      const double nd = d + net.edge(e).len;
      if (nd < dist[w]) {
        dist[w] = nd;
        pq.push({nd, w});
      }
    }
  }
  return dist;
}

PivotTable::PivotTable(const RoadNetwork& net, std::vector<VertexId> pivots)
    : n_(net.vertex_count()), pivots_(std::move(pivots)) {
  columns_.reserve(pivots_.size());
  for (VertexId p : pivots_) columns_.push_back(sssp_lengths(net, p));
  fill_vertex_major();
}

PivotTable::PivotTable(std::vector<VertexId> pivots, std::vector<std::vector<double>> columns)
    : pivots_(std::move(pivots)), columns_(std::move(columns)) {
  if (columns_.size() != pivots_.size()) throw std::invalid_argument("pivot/column count mismatch");
  n_ = columns_.empty() ? 0 : columns_[0].size();
  fill_vertex_major();
}

void PivotTable::fill_vertex_major() {
  by_vertex_.assign(n_ * d(), 0.0);
  for (std::size_t j = 0; j < d(); ++j) {
    for (std::size_t v = 0; v < n_; ++v) by_vertex_[v * d() + j] = columns_[j][v];
  }
}

PairSample make_pair_sample(std::size_t n_vertices, std::size_t count, std::uint64_t seed) {
  PairSample s;
  if (n_vertices < 2) return s;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n_vertices - 1));
  s.a.reserve(count);
  s.b.reserve(count);
  while (s.a.size() < count) {
    const VertexId a = pick(rng);
    const VertexId b = pick(rng);
    if (a == b) continue;
    s.a.push_back(a);
    s.b.push_back(b);
  }
  return s;
}

PairSample all_pairs(std::size_t n_vertices) {
  PairSample s;
  for (VertexId a = 0; a < n_vertices; ++a) {
    for (VertexId b = 0; b < n_vertices; ++b) {
      if (a == b) continue;
      s.a.push_back(a);
      s.b.push_back(b);
    }
  }
  return s;
}

namespace {

// Per-pivot distances gathered at the sample endpoints, laid out for the
// pivot_pair_cost kernel: slot k of `a` holds dist(sample.a[p], pivot k).
struct Gathered {
  std::size_t n = 0;
  std::vector<double> a;
  std::vector<double> b;

  void set_column(std::size_t k, const std::vector<double>& col, const PairSample& s) {
    for (std::size_t p = 0; p < n; ++p) {
      a[k * n + p] = col[s.a[p]];
      b[k * n + p] = col[s.b[p]];
    }
  }
  double cost(std::size_t d) const { return kernels::pivot_pair_cost(a.data(), b.data(), n, d); }
};

Gathered gather(const std::vector<const std::vector<double>*>& cols, const PairSample& s) {
  Gathered g;
  g.n = s.size();
  g.a.assign(g.n * cols.size(), 0.0);
  g.b.assign(g.n * cols.size(), 0.0);
  for (std::size_t k = 0; k < cols.size(); ++k) g.set_column(k, *cols[k], s);
  return g;
}

}  // namespace

double cost_C(const PivotTable& table, const PairSample& sample) {
  std::vector<const std::vector<double>*> cols;
  for (std::size_t j = 0; j < table.d(); ++j) cols.push_back(&table.column(j));
  return gather(cols, sample).cost(table.d());
}

PivotSearchResult obtain_pivots(const RoadNetwork& net, const PivotSearchConfig& cfg) {
  return obtain_pivots(net, cfg, make_pair_sample(net.vertex_count(), cfg.sample_size, cfg.sample_seed));
}

PivotSearchResult obtain_pivots(const RoadNetwork& net, const PivotSearchConfig& cfg, const PairSample& sample) {
  const std::size_t n = net.vertex_count();
  const std::size_t d = cfg.d;
  if (d == 0 || d > n) throw std::invalid_argument("pivot count must be in [1, |V|]");
  if (cfg.global_iter < 1 || cfg.swap_iter < 1) throw std::invalid_argument("iteration counts must be >= 1");
  std::mt19937_64 rng(cfg.seed);
  PivotSearchResult best;
  best.cost = -std::numeric_limits<double>::infinity();

  for (int a = 0; a < cfg.global_iter; ++a) {
    std::vector<VertexId> all(n);
    for (VertexId v = 0; v < n; ++v) all[v] = v;
    // Partial Fisher-Yates: first d entries are the pivots, the rest non-pivots.
    for (std::size_t i = 0; i < d; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n - 1);
      std::swap(all[i], all[pick(rng)]);
    }
    std::vector<std::vector<double>> cols;
    std::vector<const std::vector<double>*> ptrs;
    for (std::size_t i = 0; i < d; ++i) cols.push_back(sssp_lengths(net, all[i]));
    for (auto& c : cols) ptrs.push_back(&c);
    Gathered g = gather(ptrs, sample);
    double local = g.cost(d);
    std::vector<double> trace;
    trace.reserve(cfg.swap_iter);
    if (d < n) {
      std::uniform_int_distribution<std::size_t> pick_piv(0, d - 1);
      std::uniform_int_distribution<std::size_t> pick_non(d, n - 1);
      for (int b = 0; b < cfg.swap_iter; ++b) {
        const std::size_t i = pick_piv(rng);
        const std::size_t j = pick_non(rng);
        std::vector<double> cand = sssp_lengths(net, all[j]);
        Gathered trial = g;
        trial.set_column(i, cand, sample);
        const double c = trial.cost(d);
        if (c > local) {
          local = c;
          g = std::move(trial);
          std::swap(all[i], all[j]);
        }
        trace.push_back(local);
      }
    }
    best.local_cost_trace.push_back(std::move(trace));
    if (local > best.cost) {
      best.cost = local;
      best.pivots.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(d));
    }
  }
  return best;
}

PivotCountChoice choose_pivot_count(const RoadNetwork& net, PivotSearchConfig cfg, std::size_t d_max,
                                    double threshold) {
  PivotCountChoice out;
  const PairSample sample = make_pair_sample(net.vertex_count(), cfg.sample_size, cfg.sample_seed);
  d_max = std::min(d_max, net.vertex_count());
  for (std::size_t d = 1; d <= d_max; ++d) {
    cfg.d = d;
    out.costs.push_back(obtain_pivots(net, cfg, sample).cost);
    out.d = d;
    if (d >= 2) {
      const double prev = out.costs[d - 2];
      const double gain = prev > 0 ? (out.costs[d - 1] - prev) / prev : 1.0;
      if (gain < threshold) {
        out.d = d - 1;
        break;
      }
    }
  }
  return out;
}

}  // namespace prao
