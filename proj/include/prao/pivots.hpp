#pragma once

#include <cstdint>
#include <vector>

#include "prao/network.hpp"

namespace prao {

/// Dijkstra over edge lengths (miles).
std::vector<double> sssp_lengths(const RoadNetwork& net, VertexId source);

/// Distances from every vertex to each of d pivots.
class PivotTable {
 public:
  PivotTable() = default;
  PivotTable(const RoadNetwork& net, std::vector<VertexId> pivots);
  // From precomputed pivot-major columns (sidecar load).
  PivotTable(std::vector<VertexId> pivots, std::vector<std::vector<double>> columns);

  std::size_t d() const { return pivots_.size(); }
  std::size_t vertex_count() const { return n_; }
  const std::vector<VertexId>& pivots() const { return pivots_; }
  double dist(VertexId v, std::size_t j) const { return by_vertex_[std::size_t(v) * d() + j]; }
  const std::vector<double>& column(std::size_t j) const { return columns_[j]; }

  /// max_j |dist(a, j) - dist(b, j)|, a lower bound on the network distance.
  double lb_dist(VertexId a, VertexId b) const {
    const double* x = by_vertex_.data() + std::size_t(a) * d();
    const double* y = by_vertex_.data() + std::size_t(b) * d();
    double m = 0;
    for (std::size_t j = 0; j < d(); ++j) {
      const double t = x[j] > y[j] ? x[j] - y[j] : y[j] - x[j];
      m = t > m ? t : m;
    }
    return m;
  }

  bool operator==(const PivotTable& o) const { return pivots_ == o.pivots_ && columns_ == o.columns_; }

 private:
  void fill_vertex_major();

  std::size_t n_ = 0;
  std::vector<VertexId> pivots_;
  std::vector<std::vector<double>> columns_;  // columns_[j][v]
  std::vector<double> by_vertex_;             // [v * d + j]
};

struct PairSample {
  std::vector<VertexId> a;
  std::vector<VertexId> b;
  std::size_t size() const { return a.size(); }
};

/// `count` random ordered pairs (a != b) from a fixed-seed generator.
PairSample make_pair_sample(std::size_t n_vertices, std::size_t count, std::uint64_t seed);
/// Every ordered pair (a, b) with a != b.
PairSample all_pairs(std::size_t n_vertices);

double cost_C(const PivotTable& table, const PairSample& sample);

struct PivotSearchConfig {
  std::size_t d = 5;
  int global_iter = 10;
  int swap_iter = 200;
  std::uint64_t seed = 1;
  std::size_t sample_size = 10000;
  std::uint64_t sample_seed = 7;
};

struct PivotSearchResult {
  std::vector<VertexId> pivots;
  double cost = 0;
  std::vector<std::vector<double>> local_cost_trace;  // per restart, cost after each swap attempt
};

/// Random-restart local search maximizing cost_C over pivot sets of size d.
PivotSearchResult obtain_pivots(const RoadNetwork& net, const PivotSearchConfig& cfg);
PivotSearchResult obtain_pivots(const RoadNetwork& net, const PivotSearchConfig& cfg, const PairSample& sample);

struct PivotCountChoice {
  std::size_t d = 1;
  std::vector<double> costs;  // best cost for d = 1, 2, ...
};

/// Smallest d whose relative gain in cost from d to d + 1 is below `threshold`.
PivotCountChoice choose_pivot_count(const RoadNetwork& net, PivotSearchConfig cfg, std::size_t d_max,
                                    double threshold = 0.01);

}  // namespace prao
