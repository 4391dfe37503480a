#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "prao/keywords.hpp"

namespace prao {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr VertexId kNoVertex = ~VertexId{0};
inline constexpr EdgeId kNoEdge = ~EdgeId{0};

// Planar coordinates are miles on the generator plane. LonLat coordinates are
// degrees and distances use an equirectangular projection.
enum class CoordKind { Planar, LonLat };

inline constexpr double kMilesPerDegree = 69.0;

struct Vertex {
  VertexId id = 0;
  double x = 0;  // lon for LonLat
  double y = 0;  // lat for LonLat
};

struct Edge {
  EdgeId id = 0;
  VertexId u = 0;
  VertexId v = 0;
  double len = 0;  // miles
  double w = 0;    // hours
  std::vector<KeywordId> keywords;  // sorted, distinct
};

double euclidean_dist(const Vertex& a, const Vertex& b, CoordKind kind = CoordKind::Planar);
double edge_velocity(const Edge& e);

/// Undirected road network. Immutable after construction.
class RoadNetwork {
 public:
  RoadNetwork() = default;
  // Validates ids (dense), endpoints, u != v, len > 0, w > 0, finite coordinates.
  RoadNetwork(std::vector<Vertex> vertices, std::vector<Edge> edges,
              CoordKind kind = CoordKind::Planar);

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Vertex& vertex(VertexId v) const { return vertices_[v]; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  CoordKind coord_kind() const { return kind_; }

  std::span<const EdgeId> incident(VertexId v) const {
    return {adj_.data() + adj_off_[v], adj_.data() + adj_off_[v + 1]};
  }
  VertexId other_end(EdgeId e, VertexId from) const {
    const Edge& ed = edges_[e];
    return ed.u == from ? ed.v : ed.u;
  }

  const KeywordDictionary& dictionary() const { return dict_; }
  const KeywordBitmap& edge_bitmap(EdgeId e) const { return bitmaps_[e]; }
  double max_velocity() const { return max_vel_; }
  double dist(VertexId a, VertexId b) const { return euclidean_dist(vertices_[a], vertices_[b], kind_); }

  bool is_connected() const;

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  CoordKind kind_ = CoordKind::Planar;
  std::vector<std::size_t> adj_off_{0};
  std::vector<EdgeId> adj_;
  KeywordDictionary dict_;
  std::vector<KeywordBitmap> bitmaps_;
  double max_vel_ = 0;
};

/// Canonical text format (see README).
RoadNetwork read_network(std::istream& in);
RoadNetwork load_network(const std::string& path);
void write_network(std::ostream& out, const RoadNetwork& net, const std::string& header = {});
void save_network(const std::string& path, const RoadNetwork& net, const std::string& header = {});

// Synthetic edge attributes: w = len / speed with speed uniform in
// [speed_min, speed_max] mph, and 0..max_keywords distinct ids in [0, keyword_max].
struct EdgeAttrConfig {
  double speed_min = 20;
  double speed_max = 70;
  KeywordId keyword_max = 15;
  int max_keywords = 2;
};

void synthesize_edge_attributes(Edge& e, std::mt19937_64& rng, const EdgeAttrConfig& cfg);

struct CaImportOptions {
  std::uint64_t seed = 1;
  EdgeAttrConfig attrs;
};

/// Two-file node/edge import (lon/lat degrees). Keeps the largest connected
/// component and synthesizes travel times and keywords. Warnings go to `log`.
RoadNetwork load_ca_network(const std::string& node_path, const std::string& edge_path,
                            const CaImportOptions& opts, std::ostream* log = nullptr);

/// Keep only the largest connected component, renumbering vertices and edges.
RoadNetwork largest_component(const RoadNetwork& net);

}  // namespace prao
