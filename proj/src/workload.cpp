#include "prao/workload.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "prao/error.hpp"
#include "prao/pruning.hpp"

namespace prao {

std::string GenConfig::describe() const {
  std::ostringstream o;
  o << "gen n=" << n_vertices << " dist=" << (distribution == Distribution::Uniform ? "uniform" : "gaussian")
    << " plane=" << plane << " degree=[" << degree_min << "," << degree_max << "] speed=[" << attrs.speed_min
    << "," << attrs.speed_max << "] keywords=[0," << attrs.keyword_max << "]x" << attrs.max_keywords
    << " values=[" << value_min << "," << value_max << "] step=" << value_step << " conf=(" << conf_min
    << ",1] horizon=" << horizon << " base=" << base_hour << " extra=" << extra_hours << " seed=" << seed;
  return o.str();
}

std::string QueryGenConfig::describe() const {
  std::ostringstream o;
  o << "queries count=" << count << " sigma=" << sigma << " s=" << s_size << " eps=" << epsilon
    << " alpha=" << alpha << " type=" << type << " seed=" << seed;
  return o.str();
}

namespace {

// Uniform grid over the plane for nearest-neighbour lookups.
class Grid {
 public:
  Grid(const std::vector<Vertex>& vs, double plane) : vs_(vs) {
    cells_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(vs.size() / 2.0)));
    size_ = plane / static_cast<double>(cells_);
    bucket_.resize(cells_ * cells_);
    for (const Vertex& v : vs) bucket_[cell(v.x) * cells_ + cell(v.y)].push_back(v.id);
  }

  // Up to k nearest vertices to v (excluding v), ascending by (distance, id).
  std::vector<VertexId> knn(VertexId v, std::size_t k) const {
    const Vertex& p = vs_[v];
    const auto cx = static_cast<long>(cell(p.x)), cy = static_cast<long>(cell(p.y));
    std::vector<std::pair<double, VertexId>> found;
    for (long r = 0;; ++r) {
      for (long i = cx - r; i <= cx + r; ++i) {
        for (long j = cy - r; j <= cy + r; ++j) {
          if (std::max(std::labs(i - cx), std::labs(j - cy)) != r) continue;
          if (i < 0 || j < 0 || i >= long(cells_) || j >= long(cells_)) continue;
          for (VertexId w : bucket_[std::size_t(i) * cells_ + std::size_t(j)]) {
            if (w != v) found.emplace_back(std::hypot(vs_[w].x - p.x, vs_[w].y - p.y), w);
          }
        }
      }
      // Everything within r * size_ of p has been seen once ring r is done.
      std::sort(found.begin(), found.end());
      const double safe = static_cast<double>(r) * size_;
      std::size_t ok = 0;
      while (ok < found.size() && found[ok].first <= safe) ++ok;
      if (ok >= k || r > long(cells_)) {
        std::vector<VertexId> out;
        for (std::size_t i = 0; i < std::min(k, found.size()); ++i) out.push_back(found[i].second);
        return out;
      }
    }
  }

 private:
  std::size_t cell(double x) const {
    const auto c = static_cast<long>(x / size_);
    return static_cast<std::size_t>(std::clamp<long>(c, 0, long(cells_) - 1));
  }

  const std::vector<Vertex>& vs_;
  std::size_t cells_;
  double size_;
  std::vector<std::vector<VertexId>> bucket_;
};

struct Dsu {
  std::vector<VertexId> p;
  explicit Dsu(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  VertexId find(VertexId x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  bool unite(VertexId a, VertexId b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    p[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

}  // namespace

RoadNetwork gen_network(const GenConfig& cfg) {
  if (cfg.n_vertices < 2) throw GenerationError("need at least 2 vertices");
  std::mt19937_64 rng(cfg.seed);
  std::vector<Vertex> vs(cfg.n_vertices);
  std::uniform_real_distribution<double> uni(0.0, cfg.plane);
  std::normal_distribution<double> gauss(cfg.plane / 2, cfg.plane / 6);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    vs[i].id = static_cast<VertexId>(i);
    if (cfg.distribution == Distribution::Uniform) {
      vs[i].x = uni(rng);
      vs[i].y = uni(rng);
    } else {
      vs[i].x = std::clamp(gauss(rng), 0.0, cfg.plane);
      vs[i].y = std::clamp(gauss(rng), 0.0, cfg.plane);
    }
  }

  const std::size_t n = vs.size();
  std::uniform_int_distribution<int> deg_pick(cfg.degree_min, cfg.degree_max);
  std::vector<int> target(n);
  for (auto& t : target) t = deg_pick(rng);
  std::vector<int> deg(n, 0);
  std::vector<std::pair<VertexId, VertexId>> links;
  std::vector<std::vector<VertexId>> nbrs(n);
  auto linked = [&](VertexId a, VertexId b) {
    return std::find(nbrs[a].begin(), nbrs[a].end(), b) != nbrs[a].end();
  };
  auto link = [&](VertexId a, VertexId b) {
    links.emplace_back(std::min(a, b), std::max(a, b));
    nbrs[a].push_back(b);
    nbrs[b].push_back(a);
    ++deg[a];
    ++deg[b];
  };

  Grid grid(vs, cfg.plane);
  const std::size_t k = std::min<std::size_t>(n - 1, 12);
  std::vector<std::vector<VertexId>> near(n);
  for (VertexId v = 0; v < n; ++v) near[v] = grid.knn(v, k);
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  // Join each vertex to its nearest neighbours that still want edges.
  for (VertexId v : order) {
    for (VertexId w : near[v]) {
      if (deg[v] >= target[v]) break;
      if (deg[w] >= target[w] || linked(v, w) || (vs[v].x == vs[w].x && vs[v].y == vs[w].y)) continue;
      link(v, w);
    }
  }
  // Vertices still left with no edge take their nearest neighbour regardless.
  for (VertexId v : order) {
    if (deg[v] > 0) continue;
    for (VertexId w : near[v]) {
      if (!linked(v, w) && (vs[v].x != vs[w].x || vs[v].y != vs[w].y)) {
        link(v, w);
        break;
      }
    }
  }

  // Spanning patch: join every smaller component to its nearest outside vertex.
  Dsu dsu(n);
  for (auto [a, b] : links) dsu.unite(a, b);
  while (true) {
    std::vector<std::vector<VertexId>> comps(n);
    for (VertexId v = 0; v < n; ++v) comps[dsu.find(v)].push_back(v);
    std::vector<VertexId> roots;
    for (VertexId r = 0; r < n; ++r) {
      if (!comps[r].empty()) roots.push_back(r);
    }
    if (roots.size() <= 1) break;
    for (VertexId r : roots) {
      if (r == 0) continue;  // component of vertex 0 is the anchor
      if (dsu.find(r) != r || comps[r].empty()) continue;
      double best = std::numeric_limits<double>::infinity();
      VertexId ba = kNoVertex, bb = kNoVertex;
      for (VertexId a : comps[r]) {
        for (VertexId b : near[a]) {
          if (dsu.find(b) == dsu.find(a)) continue;
          const double d = euclidean_dist(vs[a], vs[b]);
          if (d > 0 && d < best) {
            best = d;
            ba = a;
            bb = b;
          }
        }
      }
      if (ba == kNoVertex) {
        for (VertexId a : comps[r]) {
          for (VertexId b = 0; b < n; ++b) {
            if (dsu.find(b) == dsu.find(a)) continue;
            const double d = euclidean_dist(vs[a], vs[b]);
            if (d > 0 && d < best) {
              best = d;
              ba = a;
              bb = b;
            }
          }
        }
      }
      if (ba == kNoVertex) throw GenerationError("cannot connect coincident vertices");
      link(ba, bb);
      dsu.unite(ba, bb);
    }
  }

  std::vector<Edge> edges;
  edges.reserve(links.size());
  for (auto [a, b] : links) {
    Edge e;
    e.id = static_cast<EdgeId>(edges.size());
    e.u = a;
    e.v = b;
    e.len = euclidean_dist(vs[a], vs[b]);
    synthesize_edge_attributes(e, rng, cfg.attrs);
    edges.push_back(std::move(e));
  }
  return RoadNetwork(std::move(vs), std::move(edges), CoordKind::Planar);
}

std::vector<WeatherRecord> gen_weather(const RoadNetwork& net, const GenConfig& cfg) {
  std::mt19937_64 rng(cfg.seed ^ 0x5eed'0f'3ea7'4e12ull);
  std::uniform_real_distribution<double> start(cfg.value_min, cfg.value_max);
  std::uniform_real_distribution<double> step(-cfg.value_step, cfg.value_step);
  std::uniform_real_distribution<double> miss(0.0, 1.0 - cfg.conf_min);
  const std::size_t n = net.vertex_count();
  std::vector<double> val(n);
  const int hours = cfg.horizon + cfg.extra_hours;
  std::vector<WeatherRecord> out;
  out.reserve(n * static_cast<std::size_t>(hours));
  for (int h = 0; h < hours; ++h) {
    for (VertexId v = 0; v < n; ++v) {
      val[v] = h == 0 ? start(rng) : std::clamp(val[v] + step(rng), cfg.value_min, cfg.value_max);
      // 1 - [0, 1 - conf_min) lands in (conf_min, 1].
      out.push_back({v, cfg.base_hour + h, cfg.weather_type, val[v], 1.0 - miss(rng)});
    }
  }
  return out;
}

std::vector<GeneratedQuery> gen_queries(const RoadNetwork& net, const WeatherStore& store,
                                        const QueryGenConfig& cfg) {
  if (cfg.sigma < 1) throw GenerationError("sigma must be >= 1");
  if (cfg.s_size > std::size_t(cfg.keyword_max) + 1) throw GenerationError("obstacle set larger than keyword range");
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<VertexId> pick_v(0, static_cast<VertexId>(net.vertex_count() - 1));
  std::uniform_int_distribution<KeywordId> pick_k(0, cfg.keyword_max);
  std::uniform_real_distribution<double> pick_t(static_cast<double>(store.base_hour()),
                                                static_cast<double>(store.base_hour()) + store.horizon() / 2.0);
  std::vector<GeneratedQuery> out;
  std::vector<char> on_path(net.vertex_count(), 0);
  for (std::size_t qi = 0; qi < cfg.count; ++qi) {
    GeneratedQuery g;
    PraoQuery& q = g.query;
    q.type = cfg.type;
    q.epsilon = cfg.epsilon;
    q.alpha = cfg.alpha;
    while (q.obstacles.size() < cfg.s_size) {
      const KeywordId k = pick_k(rng);
      if (std::find(q.obstacles.begin(), q.obstacles.end(), k) == q.obstacles.end()) q.obstacles.push_back(k);
    }
    std::sort(q.obstacles.begin(), q.obstacles.end());
    q.depart = pick_t(rng);
    PraoQuery probe = q;
    probe.src = 0;
    probe.dst = 1;
    PruneContext ctx = make_context(net, store, nullptr, probe);

    bool done = false;
    for (int attempt = 0; attempt < cfg.max_restarts && !done; ++attempt) {
      const VertexId src = pick_v(rng);
      // Randomised depth-first walk: a blocked step resamples among the
      // remaining choices and backtracks when none is left.
      struct Frame {
        VertexId v;
        double t;
        std::vector<EdgeId> options;
      };
      std::vector<Frame> stack;
      std::vector<EdgeId> walk;
      auto open = [&](VertexId v, double t) {
        Frame f{v, t, {}};
        for (EdgeId e : net.incident(v)) f.options.push_back(e);
        std::shuffle(f.options.begin(), f.options.end(), rng);
        stack.push_back(std::move(f));
        on_path[v] = 1;
      };
      open(src, 0.0);
      int budget = 50 * cfg.sigma;
      while (!stack.empty() && budget-- > 0) {
        if (static_cast<int>(walk.size()) == cfg.sigma) {
          done = true;
          break;
        }
        Frame& f = stack.back();
        if (f.options.empty()) {
          on_path[f.v] = 0;
          stack.pop_back();
          if (!walk.empty()) walk.pop_back();
          continue;
        }
        const EdgeId e = f.options.back();
        f.options.pop_back();
        const VertexId w = net.other_end(e, f.v);
        if (on_path[w] || check_edge(ctx, e, f.t) != EdgeCheck::Ok) continue;
        walk.push_back(e);
        open(w, f.t + net.edge(e).w);
      }
      if (static_cast<int>(walk.size()) == cfg.sigma) done = true;
      for (const Frame& f : stack) on_path[f.v] = 0;
      if (done) {
        q.src = src;
        q.dst = stack[walk.size()].v;
        g.witness = walk;
      }
    }
    if (!done) {
      throw GenerationError("no valid " + std::to_string(cfg.sigma) + "-edge walk after " +
                            std::to_string(cfg.max_restarts) + " restarts");
    }
    out.push_back(std::move(g));
  }
  return out;
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

void put_double(std::ostream& out, double x) {
  char buf[64];
  auto p = std::to_chars(buf, buf + sizeof buf, x).ptr;
  out.write(buf, p - buf);
}

}  // namespace

std::vector<PraoQuery> read_queries(std::istream& in) {
  std::vector<PraoQuery> out;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (raw.starts_with("#")) continue;
    auto tok = split_ws(raw);
    if (tok.empty()) continue;
    if (tok[0] != "Q" || tok.size() != 8) {
      throw ParseError(line, "expected 'Q <src> <dst> <type> <eps> <alpha> <depart> <keywords|->'");
    }
    PraoQuery q;
    q.src = parse_num<VertexId>(tok[1], line, "src");
    q.dst = parse_num<VertexId>(tok[2], line, "dst");
    q.type = std::string(tok[3]);
    q.epsilon = parse_num<double>(tok[4], line, "epsilon");
    q.alpha = parse_num<double>(tok[5], line, "alpha");
    q.depart = parse_num<double>(tok[6], line, "depart");
    if (tok[7] != "-") {
      std::string_view ks = tok[7];
      std::size_t i = 0;
      while (i <= ks.size()) {
        std::size_t j = ks.find(',', i);
        if (j == std::string_view::npos) j = ks.size();
        q.obstacles.push_back(parse_num<KeywordId>(ks.substr(i, j - i), line, "keyword id"));
        i = j + 1;
      }
    }
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<PraoQuery> load_queries(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_queries(in);
}

void write_queries(std::ostream& out, const std::vector<PraoQuery>& qs, const std::string& header) {
  if (!header.empty()) {
    std::istringstream h(header);
    std::string l;
    while (std::getline(h, l)) out << "# " << l << '\n';
  }
  for (const PraoQuery& q : qs) {
    out << "Q " << q.src << ' ' << q.dst << ' ' << q.type << ' ';
    put_double(out, q.epsilon);
    out << ' ';
    put_double(out, q.alpha);
    out << ' ';
    put_double(out, q.depart);
    out << ' ';
    if (q.obstacles.empty()) {
      out << '-';
    } else {
      for (std::size_t i = 0; i < q.obstacles.size(); ++i) out << (i ? "," : "") << q.obstacles[i];
    }
    out << '\n';
  }
}

}  // namespace prao
