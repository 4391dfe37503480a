#include "prao/network.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "prao/error.hpp"

namespace prao {

double euclidean_dist(const Vertex& a, const Vertex& b, CoordKind kind) {
  if (kind == CoordKind::Planar) return std::hypot(a.x - b.x, a.y - b.y);
  const double mean_lat = 0.5 * (a.y + b.y) * std::numbers::pi / 180.0;
  const double dx = (a.x - b.x) * kMilesPerDegree * std::cos(mean_lat);
  const double dy = (a.y - b.y) * kMilesPerDegree;
  return std::hypot(dx, dy);
}

double edge_velocity(const Edge& e) { return e.len / e.w; }

RoadNetwork::RoadNetwork(std::vector<Vertex> vertices, std::vector<Edge> edges, CoordKind kind)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), kind_(kind) {
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (vertices_[i].id != i) throw std::invalid_argument("vertex ids must be dense and ordered");
    if (!std::isfinite(vertices_[i].x) || !std::isfinite(vertices_[i].y)) {
      throw std::invalid_argument("vertex " + std::to_string(i) + " has non-finite coordinates");
    }
  }
  std::vector<std::size_t> deg(n, 0);
  std::vector<KeywordId> all_kw;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    Edge& e = edges_[i];
    const std::string tag = "edge " + std::to_string(i);
    if (e.id != i) throw std::invalid_argument("edge ids must be dense and ordered");
    if (e.u >= n || e.v >= n) throw std::invalid_argument(tag + " references an unknown vertex");
    if (e.u == e.v) throw std::invalid_argument(tag + " is a self-loop");
    if (!(e.len > 0) || !std::isfinite(e.len)) throw std::invalid_argument(tag + " needs len > 0");
    if (!(e.w > 0) || !std::isfinite(e.w)) throw std::invalid_argument(tag + " needs w > 0");
    std::sort(e.keywords.begin(), e.keywords.end());
    e.keywords.erase(std::unique(e.keywords.begin(), e.keywords.end()), e.keywords.end());
    all_kw.insert(all_kw.end(), e.keywords.begin(), e.keywords.end());
    ++deg[e.u];
    ++deg[e.v];
    max_vel_ = std::max(max_vel_, edge_velocity(e));
  }
  adj_off_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) adj_off_[v + 1] = adj_off_[v] + deg[v];
  adj_.resize(adj_off_[n]);
  std::vector<std::size_t> fill(adj_off_.begin(), adj_off_.end() - 1);
  for (const Edge& e : edges_) {
    adj_[fill[e.u]++] = e.id;
    adj_[fill[e.v]++] = e.id;
  }
  dict_ = KeywordDictionary(all_kw);
  bitmaps_.reserve(edges_.size());
  for (const Edge& e : edges_) bitmaps_.push_back(bitmap_of(e.keywords, dict_));
}

bool RoadNetwork::is_connected() const {
  if (vertices_.empty()) return true;
  std::vector<char> seen(vertices_.size(), 0);
  std::vector<VertexId> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const VertexId v = stack.back();
    stack.pop_back();
    for (EdgeId e : incident(v)) {
      const VertexId w = other_end(e, v);
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == vertices_.size();
}

void synthesize_edge_attributes(Edge& e, std::mt19937_64& rng, const EdgeAttrConfig& cfg) {
  std::uniform_real_distribution<double> speed(cfg.speed_min, cfg.speed_max);
  e.w = e.len / speed(rng);
  std::uniform_int_distribution<int> count(0, cfg.max_keywords);
  std::uniform_int_distribution<KeywordId> kw(0, cfg.keyword_max);
  const int k = count(rng);
  e.keywords.clear();
  while (static_cast<int>(e.keywords.size()) < k) {
    const KeywordId id = kw(rng);
    if (std::find(e.keywords.begin(), e.keywords.end(), id) == e.keywords.end()) e.keywords.push_back(id);
  }
  std::sort(e.keywords.begin(), e.keywords.end());
}

namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class T>
T parse_num(std::string_view tok, std::size_t line, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError(line, std::string("bad ") + what + " '" + std::string(tok) + "'");
  }
  return value;
}

std::vector<KeywordId> parse_keywords(std::string_view tok, std::size_t line) {
  std::vector<KeywordId> out;
  if (tok == "-") return out;
  std::size_t i = 0;
  while (i <= tok.size()) {
    std::size_t j = tok.find(',', i);
    if (j == std::string_view::npos) j = tok.size();
    out.push_back(parse_num<KeywordId>(tok.substr(i, j - i), line, "keyword id"));
    i = j + 1;
  }
  return out;
}

}  // namespace

RoadNetwork read_network(std::istream& in) {
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  CoordKind kind = CoordKind::Planar;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = raw;
    if (s.starts_with("#")) {
      auto tok = split_ws(s.substr(1));
      if (tok.size() == 2 && tok[0] == "coords") {
        if (tok[1] == "lonlat") {
          kind = CoordKind::LonLat;
        } else if (tok[1] == "planar") {
          kind = CoordKind::Planar;
        }
      }
      continue;
    }
    auto tok = split_ws(s);
    if (tok.empty()) continue;
    if (tok[0] == "V") {
      if (tok.size() != 4) throw ParseError(line, "expected 'V <id> <x> <y>'");
      Vertex v;
      v.id = parse_num<VertexId>(tok[1], line, "vertex id");
      v.x = parse_num<double>(tok[2], line, "x");
      v.y = parse_num<double>(tok[3], line, "y");
      if (v.id != vertices.size()) throw ParseError(line, "vertex ids must be dense and in order");
      if (!std::isfinite(v.x) || !std::isfinite(v.y)) throw ParseError(line, "non-finite coordinate");
      vertices.push_back(v);
    } else if (tok[0] == "E") {
      if (tok.size() != 7) throw ParseError(line, "expected 'E <id> <u> <v> <len> <time> <keywords|->'");
      Edge e;
      e.id = parse_num<EdgeId>(tok[1], line, "edge id");
      e.u = parse_num<VertexId>(tok[2], line, "vertex id");
      e.v = parse_num<VertexId>(tok[3], line, "vertex id");
      e.len = parse_num<double>(tok[4], line, "length");
      e.w = parse_num<double>(tok[5], line, "travel time");
      e.keywords = parse_keywords(tok[6], line);
      if (e.id != edges.size()) throw ParseError(line, "edge ids must be dense and in order");
      if (e.u >= vertices.size() || e.v >= vertices.size()) {
        throw ParseError(line, "edge references unknown vertex");
      }
      if (e.u == e.v) throw ParseError(line, "self-loop edge");
      if (!(e.len > 0) || !std::isfinite(e.len)) throw ParseError(line, "edge length must be > 0");
      if (!(e.w > 0) || !std::isfinite(e.w)) throw ParseError(line, "travel time must be > 0");
      edges.push_back(std::move(e));
    } else {
      throw ParseError(line, "unknown record '" + std::string(tok[0]) + "'");
    }
  }
  return RoadNetwork(std::move(vertices), std::move(edges), kind);
}

RoadNetwork load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_network(in);
}

namespace {

void put_double(std::ostream& out, double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);  // shortest round-trip form
  out.write(buf, ptr - buf);
}

}  // namespace

void write_network(std::ostream& out, const RoadNetwork& net, const std::string& header) {
  if (!header.empty()) {
    std::istringstream h(header);
    std::string l;
    while (std::getline(h, l)) out << "# " << l << '\n';
  }
  if (net.coord_kind() == CoordKind::LonLat) out << "# coords lonlat\n";
  for (const Vertex& v : net.vertices()) {
    out << "V " << v.id << ' ';
    put_double(out, v.x);
    out << ' ';
    put_double(out, v.y);
    out << '\n';
  }
  for (const Edge& e : net.edges()) {
    out << "E " << e.id << ' ' << e.u << ' ' << e.v << ' ';
    put_double(out, e.len);
    out << ' ';
    put_double(out, e.w);
    out << ' ';
    if (e.keywords.empty()) {
      out << '-';
    } else {
      for (std::size_t i = 0; i < e.keywords.size(); ++i) out << (i ? "," : "") << e.keywords[i];
    }
    out << '\n';
  }
}

void save_network(const std::string& path, const RoadNetwork& net, const std::string& header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_network(out, net, header);
}

RoadNetwork largest_component(const RoadNetwork& net) {
  const std::size_t n = net.vertex_count();
  std::vector<std::uint32_t> comp(n, ~0u);
  std::vector<std::size_t> sizes;
  for (VertexId s = 0; s < n; ++s) {
    if (comp[s] != ~0u) continue;
    const auto c = static_cast<std::uint32_t>(sizes.size());
    sizes.push_back(0);
    std::vector<VertexId> stack{s};
    comp[s] = c;
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      ++sizes[c];
      for (EdgeId e : net.incident(v)) {
        const VertexId w = net.other_end(e, v);
        if (comp[w] == ~0u) {
          comp[w] = c;
          stack.push_back(w);
        }
      }
    }
  }
  if (sizes.size() <= 1) return net;
  const auto best = static_cast<std::uint32_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<VertexId> remap(n, kNoVertex);
  std::vector<Vertex> vs;
  for (VertexId v = 0; v < n; ++v) {
    if (comp[v] != best) continue;
    remap[v] = static_cast<VertexId>(vs.size());
    vs.push_back({remap[v], net.vertex(v).x, net.vertex(v).y});
  }
  std::vector<Edge> es;
  for (const Edge& e : net.edges()) {
    if (comp[e.u] != best) continue;
    Edge c = e;
    c.id = static_cast<EdgeId>(es.size());
    c.u = remap[e.u];
    c.v = remap[e.v];
    es.push_back(std::move(c));
  }
  return RoadNetwork(std::move(vs), std::move(es), net.coord_kind());
}

RoadNetwork load_ca_network(const std::string& node_path, const std::string& edge_path,
                            const CaImportOptions& opts, std::ostream* log) {
  std::ifstream nin(node_path);
  if (!nin) throw std::runtime_error("cannot open " + node_path);
  std::vector<Vertex> vertices;
  std::unordered_map<std::uint64_t, VertexId> id_of;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(nin, raw)) {
    ++line;
    auto tok = split_ws(raw);
    if (tok.empty() || tok[0].starts_with("#")) continue;
    if (tok.size() != 3) throw ParseError(line, "expected '<id> <x> <y>' in node file");
    const auto ext = parse_num<std::uint64_t>(tok[0], line, "node id");
    Vertex v;
    v.id = static_cast<VertexId>(vertices.size());
    v.x = parse_num<double>(tok[1], line, "x");
    v.y = parse_num<double>(tok[2], line, "y");
    if (!id_of.emplace(ext, v.id).second) throw ParseError(line, "duplicate node id");
    vertices.push_back(v);
  }

  std::ifstream ein(edge_path);
  if (!ein) throw std::runtime_error("cannot open " + edge_path);
  std::mt19937_64 rng(opts.seed);
  std::vector<Edge> edges;
  std::size_t skipped = 0;
  line = 0;
  while (std::getline(ein, raw)) {
    ++line;
    auto tok = split_ws(raw);
    if (tok.empty() || tok[0].starts_with("#")) continue;
    if (tok.size() != 4) throw ParseError(line, "expected '<id> <u> <v> <dist>' in edge file");
    const auto a = id_of.find(parse_num<std::uint64_t>(tok[1], line, "node id"));
    const auto b = id_of.find(parse_num<std::uint64_t>(tok[2], line, "node id"));
    parse_num<double>(tok[3], line, "distance");
    if (a == id_of.end() || b == id_of.end()) throw ParseError(line, "edge references unknown vertex");
    Edge e;
    e.id = static_cast<EdgeId>(edges.size());
    e.u = a->second;
    e.v = b->second;
    e.len = euclidean_dist(vertices[e.u], vertices[e.v], CoordKind::LonLat);
    if (e.u == e.v || !(e.len > 0)) {
      ++skipped;
      continue;
    }
    synthesize_edge_attributes(e, rng, opts.attrs);
    edges.push_back(std::move(e));
  }
  if (skipped > 0 && log) *log << "warning: skipped " << skipped << " zero-length edges\n";
  RoadNetwork net(std::move(vertices), std::move(edges), CoordKind::LonLat);
  if (!net.is_connected()) {
    RoadNetwork big = largest_component(net);
    if (log) {
      *log << "warning: network is disconnected; keeping largest component (" << big.vertex_count()
           << " of " << net.vertex_count() << " vertices)\n";
    }
    return big;
  }
  return net;
}

}  // namespace prao
