#include "prao/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "prao/error.hpp"
#include "prao/kernels/kernels.hpp"

namespace prao {

Rect Rect::of_edge(const RoadNetwork& net, const Edge& e) {
  const Vertex& a = net.vertex(e.u);
  const Vertex& b = net.vertex(e.v);
  return {std::min(a.x, b.x), std::min(a.y, b.y), std::max(a.x, b.x), std::max(a.y, b.y)};
}

void Rect::expand(const Rect& r) {
  x0 = std::min(x0, r.x0);
  y0 = std::min(y0, r.y0);
  x1 = std::max(x1, r.x1);
  y1 = std::max(y1, r.y1);
}

double node_ub_from_fields(double lb_w, double ub_w, double min_edge_ub, double min_conf, double max_conf,
                           double eps) {
  if (ub_w <= eps) return 1.0;
  if (lb_w > eps) {
    const double q = 1.0 - min_conf;
    return q * q;
  }
  // Mixed node. If some descendant edge has both endpoints <= eps its own
  // bound is 1, so only a node whose every edge has an endpoint above eps can
  // use the one-sided form.
  if (min_edge_ub > eps) return 1.0 - min_conf * (1.0 - max_conf);
  return 1.0;
}

bool ConnectionGraph::adjacent(NodeId a, NodeId b) const {
  if (a >= local_.size() || local_[a] == kNoNode) return false;
  auto n = neighbors(a);
  return std::binary_search(n.begin(), n.end(), b);
}

namespace {

// Sort-tile-recursive grouping of items into runs of at most `fanout`.
std::vector<std::vector<std::uint32_t>> str_pack(std::vector<std::uint32_t> items, const std::vector<Rect>& rect,
                                                 std::size_t fanout) {
  const std::size_t n = items.size();
  const std::size_t pages = (n + fanout - 1) / fanout;
  const auto slices = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(pages))));
  const std::size_t slice_len = slices * fanout;
  auto by_x = [&](std::uint32_t a, std::uint32_t b) {
    const double ax = rect[a].cx(), bx = rect[b].cx();
    return ax != bx ? ax < bx : a < b;
  };
  auto by_y = [&](std::uint32_t a, std::uint32_t b) {
    const double ay = rect[a].cy(), by = rect[b].cy();
    return ay != by ? ay < by : a < b;
  };
  std::sort(items.begin(), items.end(), by_x);
  std::vector<std::vector<std::uint32_t>> groups;
  for (std::size_t s = 0; s < n; s += slice_len) {
    const std::size_t e = std::min(n, s + slice_len);
    std::sort(items.begin() + static_cast<std::ptrdiff_t>(s), items.begin() + static_cast<std::ptrdiff_t>(e), by_y);
    for (std::size_t g = s; g < e; g += fanout) {
      groups.emplace_back(items.begin() + static_cast<std::ptrdiff_t>(g),
                          items.begin() + static_cast<std::ptrdiff_t>(std::min(e, g + fanout)));
    }
  }
  return groups;
}

}  // namespace

SpatialIndex SpatialIndex::build(const RoadNetwork& net, const WeatherStore& store, std::size_t fanout) {
  if (fanout < 2) throw std::invalid_argument("fanout must be >= 2");
  if (net.edge_count() == 0) throw std::invalid_argument("cannot index a network without edges");
  SpatialIndex idx;
  idx.fanout_ = fanout;

  std::vector<Rect> rect;
  rect.reserve(net.edge_count());
  for (const Edge& e : net.edges()) rect.push_back(Rect::of_edge(net, e));
  std::vector<std::uint32_t> items(net.edge_count());
  for (std::uint32_t i = 0; i < items.size(); ++i) items[i] = i;

  int level = 0;
  while (true) {
    auto groups = str_pack(std::move(items), rect, fanout);
    std::vector<Rect> next_rect;
    std::vector<NodeId> ids;
    for (auto& g : groups) {
      IndexNode node;
      node.id = static_cast<NodeId>(idx.nodes_.size());
      node.level = level;
      node.children = std::move(g);
      bool first = true;
      for (std::uint32_t c : node.children) {
        double lb, ub;
        const KeywordBitmap* kw;
        if (level == 0) {
          const Edge& e = net.edge(c);
          lb = ub = e.w;
          kw = &net.edge_bitmap(c);
        } else {
          IndexNode& child = idx.nodes_[c];
          child.parent = node.id;
          lb = child.lb_t;
          ub = child.ub_t;
          kw = &child.kw;
        }
        if (first) {
          node.mbr = rect[c];
          node.lb_t = lb;
          node.ub_t = ub;
          node.kw = *kw;
          first = false;
        } else {
          node.mbr.expand(rect[c]);
          node.lb_t = std::min(node.lb_t, lb);
          node.ub_t = std::max(node.ub_t, ub);
          node.kw = bitmap_and(node.kw, *kw);
        }
      }
      next_rect.resize(node.id + 1);
      next_rect[node.id] = node.mbr;
      ids.push_back(node.id);
      idx.nodes_.push_back(std::move(node));
    }
    idx.levels_.push_back(ids);
    if (ids.size() == 1) break;
    rect = std::move(next_rect);
    items.assign(ids.begin(), ids.end());
    ++level;
  }
  idx.height_ = level;
  idx.root_ = idx.levels_.back().front();

  const std::size_t depth = static_cast<std::size_t>(idx.height_) + 1;
  idx.locator_.assign(net.edge_count() * depth, kNoNode);
  for (NodeId leaf : idx.levels_[0]) {
    for (std::uint32_t e : idx.nodes_[leaf].children) {
      NodeId n = leaf;
      for (int l = 0; l <= idx.height_; ++l) {
        idx.locator_[std::size_t(e) * depth + (idx.height_ - l)] = n;
        n = idx.nodes_[n].parent;
      }
    }
  }
  idx.build_connections(net);
  idx.rebuild_weather(net, store);
  return idx;
}

void SpatialIndex::build_connections(const RoadNetwork& net) {
  conn_.clear();
  for (int l = 0; l <= height_; ++l) {
    std::vector<std::uint64_t> pairs;
    std::vector<NodeId> anc;
    for (VertexId v = 0; v < net.vertex_count(); ++v) {
      anc.clear();
      for (EdgeId e : net.incident(v)) anc.push_back(ancestor(e, l));
      std::sort(anc.begin(), anc.end());
      for (std::size_t i = 0; i < anc.size(); ++i) {
        for (std::size_t j = i + 1; j < anc.size(); ++j) {
          pairs.push_back((std::uint64_t(anc[i]) << 32) | anc[j]);
          pairs.push_back((std::uint64_t(anc[j]) << 32) | anc[i]);
        }
      }
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    const std::vector<NodeId>& lvl = levels_[l];
    std::vector<NodeId> local(nodes_.size(), kNoNode);
    for (std::size_t i = 0; i < lvl.size(); ++i) local[lvl[i]] = static_cast<NodeId>(i);
    std::vector<std::size_t> off(lvl.size() + 1, 0);
    for (std::uint64_t p : pairs) ++off[local[p >> 32] + 1];
    for (std::size_t i = 0; i < lvl.size(); ++i) off[i + 1] += off[i];
    std::vector<NodeId> nbr(pairs.size());
    std::vector<std::size_t> fill(off.begin(), off.end() - 1);
    // pairs are sorted by (a, b) and lvl is ascending, so each row comes out sorted
    for (std::uint64_t p : pairs) nbr[fill[local[p >> 32]]++] = static_cast<NodeId>(p & 0xffffffffu);
    conn_.emplace_back(std::move(off), std::move(nbr), std::move(local), lvl);
  }
}

bool SpatialIndex::same_structure(const SpatialIndex& o) const {
  return fanout_ == o.fanout_ && height_ == o.height_ && root_ == o.root_ && nodes_ == o.nodes_ &&
         levels_ == o.levels_ && conn_ == o.conn_ && locator_ == o.locator_;
}

double SpatialIndex::node_ub_pr_leq(const WeatherStore& store, NodeId n, std::int64_t hour, double eps,
                                    int type) const {
  if (!store.in_window(hour)) throw HorizonError("hour " + std::to_string(hour) + " outside weather window");
  const std::size_t p = store.phys(hour);
  return node_ub_from_fields(field(type, n, kLbW, p), field(type, n, kUbW, p), field(type, n, kMinEdgeUb, p),
                             field(type, n, kMinConf, p), field(type, n, kMaxConf, p), eps);
}

void SpatialIndex::rebuild_weather(const RoadNetwork& net, const WeatherStore& store) {
  horizon_ = store.horizon();
  const std::size_t h = static_cast<std::size_t>(horizon_);
  const std::size_t stride = kFieldCount * h;
  agg_.assign(store.types().size(), std::vector<double>(nodes_.size() * stride, 0.0));
  std::vector<double> lo(h), hi(h), clo(h), chi(h);
  for (std::size_t t = 0; t < agg_.size(); ++t) {
    const int type = static_cast<int>(t);
    std::vector<double>& a = agg_[t];
    for (NodeId leaf : levels_[0]) {
      double* out = a.data() + leaf * stride;
      bool first = true;
      for (std::uint32_t eid : nodes_[leaf].children) {
        const Edge& e = net.edge(eid);
        kernels::elementwise_min(store.value_row(type, e.u), store.value_row(type, e.v), lo.data(), h);
        kernels::elementwise_max(store.value_row(type, e.u), store.value_row(type, e.v), hi.data(), h);
        kernels::elementwise_min(store.conf_row(type, e.u), store.conf_row(type, e.v), clo.data(), h);
        kernels::elementwise_max(store.conf_row(type, e.u), store.conf_row(type, e.v), chi.data(), h);
        if (first) {
          std::copy(lo.begin(), lo.end(), out + kLbW * h);
          std::copy(hi.begin(), hi.end(), out + kUbW * h);
          std::copy(hi.begin(), hi.end(), out + kMinEdgeUb * h);
          std::copy(clo.begin(), clo.end(), out + kMinConf * h);
          std::copy(chi.begin(), chi.end(), out + kMaxConf * h);
          first = false;
        } else {
          kernels::elementwise_min(out + kLbW * h, lo.data(), out + kLbW * h, h);
          kernels::elementwise_max(out + kUbW * h, hi.data(), out + kUbW * h, h);
          kernels::elementwise_min(out + kMinEdgeUb * h, hi.data(), out + kMinEdgeUb * h, h);
          kernels::elementwise_min(out + kMinConf * h, clo.data(), out + kMinConf * h, h);
          kernels::elementwise_max(out + kMaxConf * h, chi.data(), out + kMaxConf * h, h);
        }
      }
    }
    for (int l = 1; l <= height_; ++l) {
      for (NodeId n : levels_[l]) {
        double* out = a.data() + n * stride;
        const auto& ch = nodes_[n].children;
        std::copy(a.data() + ch[0] * stride, a.data() + (ch[0] + 1) * stride, out);
        for (std::size_t i = 1; i < ch.size(); ++i) {
          const double* c = a.data() + ch[i] * stride;
          kernels::elementwise_min(out + kLbW * h, c + kLbW * h, out + kLbW * h, h);
          kernels::elementwise_max(out + kUbW * h, c + kUbW * h, out + kUbW * h, h);
          kernels::elementwise_min(out + kMinEdgeUb * h, c + kMinEdgeUb * h, out + kMinEdgeUb * h, h);
          kernels::elementwise_min(out + kMinConf * h, c + kMinConf * h, out + kMinConf * h, h);
          kernels::elementwise_max(out + kMaxConf * h, c + kMaxConf * h, out + kMaxConf * h, h);
        }
      }
    }
  }
}

void SpatialIndex::compute_node_slot(const RoadNetwork& net, const WeatherStore& store, int type, NodeId n,
                                     std::size_t p) {
  const std::size_t h = static_cast<std::size_t>(horizon_);
  double* out = agg_[type].data() + std::size_t(n) * kFieldCount * h;
  double f[kFieldCount];
  bool first = true;
  const IndexNode& node = nodes_[n];
  for (std::uint32_t c : node.children) {
    double g[kFieldCount];
    if (node.level == 0) {
      const Edge& e = net.edge(c);
      const double vu = store.value_row(type, e.u)[p], vv = store.value_row(type, e.v)[p];
      const double pu = store.conf_row(type, e.u)[p], pv = store.conf_row(type, e.v)[p];
      g[kLbW] = vu < vv ? vu : vv;
      g[kUbW] = vu > vv ? vu : vv;
      g[kMinEdgeUb] = g[kUbW];
      g[kMinConf] = pu < pv ? pu : pv;
      g[kMaxConf] = pu > pv ? pu : pv;
    } else {
      const double* cf = agg_[type].data() + std::size_t(c) * kFieldCount * h;
      for (int k = 0; k < kFieldCount; ++k) g[k] = cf[k * h + p];
    }
    if (first) {
      std::copy(g, g + kFieldCount, f);
      first = false;
    } else {
      f[kLbW] = f[kLbW] < g[kLbW] ? f[kLbW] : g[kLbW];
      f[kUbW] = f[kUbW] > g[kUbW] ? f[kUbW] : g[kUbW];
      f[kMinEdgeUb] = f[kMinEdgeUb] < g[kMinEdgeUb] ? f[kMinEdgeUb] : g[kMinEdgeUb];
      f[kMinConf] = f[kMinConf] < g[kMinConf] ? f[kMinConf] : g[kMinConf];
      f[kMaxConf] = f[kMaxConf] > g[kMaxConf] ? f[kMaxConf] : g[kMaxConf];
    }
  }
  for (int k = 0; k < kFieldCount; ++k) out[k * h + p] = f[k];
}

std::size_t SpatialIndex::propagate_weather_update(const RoadNetwork& net, const WeatherStore& store,
                                                   std::span<const ChangedSlot> changed) {
  if (store.horizon() != horizon_) throw std::invalid_argument("index horizon differs from weather store");
  const std::size_t h = static_cast<std::size_t>(horizon_);
  std::vector<std::uint64_t> dirty;  // node * h + phys
  for (const ChangedSlot& c : changed) {
    const std::size_t p = store.phys(c.hour);
    for (EdgeId e : net.incident(c.vertex)) dirty.push_back(std::uint64_t(leaf_of(e)) * h + p);
  }
  std::size_t touched = 0;
  std::vector<std::uint64_t> next;
  double before[kFieldCount];
  while (!dirty.empty()) {
    std::sort(dirty.begin(), dirty.end());
    dirty.erase(std::unique(dirty.begin(), dirty.end()), dirty.end());
    next.clear();
    for (std::uint64_t key : dirty) {
      const auto n = static_cast<NodeId>(key / h);
      const std::size_t p = key % h;
      bool diff = false;
      for (std::size_t t = 0; t < agg_.size(); ++t) {
        double* row = agg_[t].data() + std::size_t(n) * kFieldCount * h;
        for (int k = 0; k < kFieldCount; ++k) before[k] = row[k * h + p];
        compute_node_slot(net, store, static_cast<int>(t), n, p);
        for (int k = 0; k < kFieldCount; ++k) diff = diff || before[k] != row[k * h + p];
        ++touched;
      }
      if (diff && n != root_) next.push_back(std::uint64_t(nodes_[n].parent) * h + p);
    }
    dirty.swap(next);
  }
  return touched;
}

}  // namespace prao
