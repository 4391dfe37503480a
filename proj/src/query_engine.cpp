#include "prao/query_engine.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "search_detail.hpp"

namespace prao {

const char* to_string(PruneReason r) {
  switch (r) {
    case PruneReason::Keyword: return "keyword";
    case PruneReason::WeatherBound: return "weather_bound";
    case PruneReason::WeatherExact: return "weather_exact";
    case PruneReason::Time: return "time";
    case PruneReason::Horizon: return "horizon";
  }
  return "?";
}

namespace {

struct SeqHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint32_t x : v) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

struct NodePath {
  int level = 0;
  std::vector<NodeId> nodes;
};

struct EdgePath {
  std::vector<EdgeId> edges;
  std::vector<double> elapsed;  // hours since departure after each edge
  bool complete = false;
};

PruneReason reason_of(EdgeCheck c) {
  switch (c) {
    case EdgeCheck::Keyword: return PruneReason::Keyword;
    case EdgeCheck::WeatherBound: return PruneReason::WeatherBound;
    case EdgeCheck::WeatherExact: return PruneReason::WeatherExact;
    default: return PruneReason::Horizon;
  }
}

class PraoRun {
 public:
  PraoRun(const SpatialIndex& idx, const PruneContext& ctx, VertexId src, const PraoOptions& opts,
          QueryStats& st)
      : idx_(idx), net_(*ctx.net), ctx_(ctx), src_(src), opts_(opts), st_(st), seen_(idx.node_count(), 0) {}

  QueryResult run();

 private:
  void touch(NodeId n) {
    ++st_.node_accesses;
    if (!seen_[n]) {
      seen_[n] = 1;
      ++st_.distinct_nodes;
    }
  }
  std::vector<NodeId> ancestors_at(VertexId v, int level) const {
    std::vector<NodeId> out;
    for (EdgeId e : net_.incident(v)) out.push_back(idx_.ancestor(e, level));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  bool has_dst_edge(NodeId n, int level) const {
    const auto& d = dst_anc_[level];
    return std::binary_search(d.begin(), d.end(), n);
  }

  // Checks position i of `path` (prefix sums describe positions < i).
  bool node_ok(int level, std::vector<NodeId>& path, double lb_before, double lb_sum_after_first);
  void emit_node_path(int level, std::vector<NodeId> nodes);
  void substitute(const NodePath& p);
  void sub_dfs(const NodePath& p, std::vector<NodeId>& pre, double lb_before, double lb_rest);
  void expand_edges(const std::vector<NodeId>* leaves, std::size_t m);
  void edge_dfs(const std::vector<NodeId>* leaves, std::size_t m, EdgePath& cur, VertexId frontier);
  bool try_edge(EdgePath& cur, VertexId frontier, EdgeId e, VertexId& w, double& t);
  void emit_edge_path(const EdgePath& p);
  void note_queue() {
    st_.max_queue = std::max<std::uint64_t>(st_.max_queue, queue_.size() + edge_paths_.size());
  }
  void heap_phase();
  std::vector<EdgeId> chain(std::uint32_t idx) const;

  const SpatialIndex& idx_;
  const RoadNetwork& net_;
  const PruneContext& ctx_;
  VertexId src_;
  const PraoOptions& opts_;
  QueryStats& st_;
  std::vector<char> seen_;
  std::vector<std::vector<NodeId>> src_anc_, dst_anc_;
  std::vector<char> kw_cache_;  // 0 unknown, 1 clean, 2 pruned

  double lambda_ = kInf;
  std::deque<NodePath> queue_;
  std::unordered_set<std::vector<std::uint32_t>, SeqHash> seen_paths_[2];  // current / next level
  std::vector<EdgePath> edge_paths_;
  std::unordered_set<std::vector<std::uint32_t>, SeqHash> seen_edge_paths_;
  std::vector<char> on_path_;

  struct Entry {
    EdgeId edge;
    std::uint32_t parent;
    VertexId frontier;
    double elapsed;
  };
  std::vector<Entry> arena_;
  std::vector<std::uint32_t> cand_;  // arena indices of complete paths
};

bool PraoRun::node_ok(int level, std::vector<NodeId>& path, double lb_before, double lb_rest) {
  const std::size_t i = path.size() - 1;
  const NodeId n = path.back();
  touch(n);
  const IndexNode& node = idx_.node(n);
  auto prune = [&](PruneReason r, std::uint64_t& counter) {
    ++counter;
    if (opts_.observer) opts_.observer->node_pruned(level, path, r);
    return false;
  };
  char& kw = kw_cache_[n];
  if (kw == 0) kw = keyword_prune_node(idx_, n, ctx_.S) ? 2 : 1;
  if (kw == 2) return prune(PruneReason::Keyword, st_.node_keyword_prunes);
  const double lb_path = i == 0 ? 0.0 : lb_rest + node.lb_t;
  if (time_prune(lb_path, lambda_)) return prune(PruneReason::Time, st_.node_time_prunes);
  // The edge at position i starts after at least lb_before and ends before
  // the sum of ub_t through position i.
  double ub_through = 0;
  for (NodeId x : path) ub_through += idx_.node(x).ub_t;
  if (weather_prune_node(idx_, *ctx_.store, n, ctx_.depart + lb_before, ctx_.depart + ub_through, ctx_.eps,
                         ctx_.alpha, ctx_.type)) {
    return prune(PruneReason::WeatherBound, st_.node_weather_prunes);
  }
  return true;
}

void PraoRun::emit_node_path(int level, std::vector<NodeId> nodes) {
  if (!seen_paths_[level & 1].insert(nodes).second) return;
  queue_.push_back({level, std::move(nodes)});
  note_queue();
}

void PraoRun::substitute(const NodePath& p) {
  for (NodeId n : p.nodes) touch(n);
  std::vector<NodeId> pre;
  sub_dfs(p, pre, 0.0, 0.0);
}

void PraoRun::sub_dfs(const NodePath& p, std::vector<NodeId>& pre, double lb_before, double lb_rest) {
  const int child_level = p.level - 1;
  const std::size_t i = pre.size();
  const ConnectionGraph& cg = idx_.connections(child_level);
  auto descend = [&](NodeId c, bool last_extension) {
    pre.push_back(c);
    const double lb_c = idx_.node(c).lb_t;
    if (node_ok(child_level, pre, lb_before, lb_rest)) {
      if (last_extension) {
        emit_node_path(child_level, pre);
      } else {
        sub_dfs(p, pre, lb_before + lb_c, i == 0 ? 0.0 : lb_rest + lb_c);
      }
    }
    pre.pop_back();
  };
  if (i == p.nodes.size()) {
    const NodeId last = pre.back();
    if (has_dst_edge(last, child_level)) emit_node_path(child_level, pre);
    for (NodeId c : cg.neighbors(last)) descend(c, true);
    return;
  }
  if (i == 0) {
    for (NodeId c : src_anc_[child_level]) {
      if (idx_.node(c).parent == p.nodes[0]) descend(c, false);
    }
    return;
  }
  for (NodeId c : cg.neighbors(pre.back())) {
    if (idx_.node(c).parent == p.nodes[i]) descend(c, false);
  }
}

bool PraoRun::try_edge(EdgePath& cur, VertexId frontier, EdgeId e, VertexId& w, double& t) {
  w = net_.other_end(e, frontier);
  if (on_path_[w]) return false;
  ++st_.edge_expansions;
  const double before = cur.elapsed.empty() ? 0.0 : cur.elapsed.back();
  t = before + net_.edge(e).w;
  auto report = [&](PruneReason r) {
    if (opts_.observer) {
      cur.edges.push_back(e);
      opts_.observer->edge_pruned(cur.edges, r);
      cur.edges.pop_back();
    }
  };
  const EdgeCheck c = check_edge(ctx_, e, before);
  if (!detail::count_check(c, st_)) {
    report(reason_of(c));
    return false;
  }
  if (time_prune(t + ctx_.heuristic(w), lambda_)) {
    ++st_.edge_time_prunes;
    report(PruneReason::Time);
    return false;
  }
  return true;
}

void PraoRun::emit_edge_path(const EdgePath& p) {
  if (!seen_edge_paths_.insert(p.edges).second) return;
  edge_paths_.push_back(p);
  note_queue();
}

void PraoRun::edge_dfs(const std::vector<NodeId>* leaves, std::size_t m, EdgePath& cur, VertexId frontier) {
  const std::size_t i = cur.edges.size();
  if (i == m) {
    if (frontier == ctx_.dst) {
      cur.complete = true;
      emit_edge_path(cur);
      cur.complete = false;
      return;
    }
    for (EdgeId e : net_.incident(frontier)) {
      VertexId w;
      double t;
      if (!try_edge(cur, frontier, e, w, t)) continue;
      cur.edges.push_back(e);
      cur.elapsed.push_back(t);
      cur.complete = w == ctx_.dst;
      emit_edge_path(cur);
      cur.complete = false;
      cur.edges.pop_back();
      cur.elapsed.pop_back();
    }
    return;
  }
  if (frontier == ctx_.dst) return;  // reached dst early; the shorter node path covers it
  for (EdgeId e : net_.incident(frontier)) {
    if (leaves && idx_.leaf_of(e) != (*leaves)[i]) continue;
    VertexId w;
    double t;
    if (!try_edge(cur, frontier, e, w, t)) continue;
    cur.edges.push_back(e);
    cur.elapsed.push_back(t);
    on_path_[w] = 1;
    edge_dfs(leaves, m, cur, w);
    on_path_[w] = 0;
    cur.edges.pop_back();
    cur.elapsed.pop_back();
  }
}

void PraoRun::expand_edges(const std::vector<NodeId>* leaves, std::size_t m) {
  if (leaves) {
    for (NodeId n : *leaves) touch(n);
  }
  EdgePath cur;
  edge_dfs(leaves, m, cur, src_);
}

std::vector<EdgeId> PraoRun::chain(std::uint32_t i) const {
  std::vector<EdgeId> out;
  for (; arena_[i].edge != kNoEdge; i = arena_[i].parent) out.push_back(arena_[i].edge);
  std::reverse(out.begin(), out.end());
  return out;
}

void PraoRun::heap_phase() {
  struct Item {
    double key;
    std::uint64_t seq;
    std::uint32_t idx;
    bool operator>(const Item& o) const { return key != o.key ? key > o.key : seq > o.seq; }
  };
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  std::uint64_t seq = 0;
  auto push = [&](std::uint32_t i) {
    heap.push({arena_[i].elapsed + ctx_.heuristic(arena_[i].frontier), seq++, i});
    ++st_.heap_pushes;
    st_.max_heap = std::max<std::uint64_t>(st_.max_heap, heap.size());
  };
  arena_.push_back({kNoEdge, 0, src_, 0.0});
  push(0);

  // Seeds become arena chains; shared prefixes are stored once.
  std::unordered_map<std::uint64_t, std::uint32_t> child_of;
  for (const EdgePath& p : edge_paths_) {
    std::uint32_t at = 0;
    for (std::size_t k = 0; k < p.edges.size(); ++k) {
      const std::uint64_t key = (std::uint64_t(at) << 32) | p.edges[k];
      auto it = child_of.find(key);
      if (it == child_of.end()) {
        const VertexId f = net_.other_end(p.edges[k], arena_[at].frontier);
        arena_.push_back({p.edges[k], at, f, p.elapsed[k]});
        it = child_of.emplace(key, static_cast<std::uint32_t>(arena_.size() - 1)).first;
      }
      at = it->second;
    }
    if (p.complete) {
      ++st_.candidates;
      cand_.push_back(at);
      lambda_ = std::min(lambda_, p.elapsed.back());
    } else {
      ++st_.seeds;
      push(at);
    }
  }

  std::vector<char> closed(net_.vertex_count(), 0);
  std::vector<double> settled(net_.vertex_count(), kInf);
  std::vector<EdgeId> scratch;
  while (!heap.empty()) {
    const Item top = heap.top();
    heap.pop();
    ++st_.heap_pops;
    if (time_prune(top.key, lambda_)) break;
    const Entry ent = arena_[top.idx];
    if (closed[ent.frontier]) continue;
    if (top.idx != 0) {
      const Entry& par = arena_[ent.parent];
      if (!closed[par.frontier] || settled[par.frontier] != par.elapsed) {
        ++st_.inconsistent_discards;
        continue;
      }
    }
    closed[ent.frontier] = 1;
    settled[ent.frontier] = ent.elapsed;
    for (EdgeId e : net_.incident(ent.frontier)) {
      const VertexId w = net_.other_end(e, ent.frontier);
      if (closed[w]) continue;
      ++st_.edge_expansions;
      const double t = ent.elapsed + net_.edge(e).w;
      auto report = [&](PruneReason r) {
        if (!opts_.observer) return;
        scratch = chain(top.idx);
        scratch.push_back(e);
        opts_.observer->edge_pruned(scratch, r);
      };
      if (time_prune(t + ctx_.heuristic(w), lambda_)) {
        ++st_.edge_time_prunes;
        report(PruneReason::Time);
        continue;
      }
      const EdgeCheck c = check_edge(ctx_, e, ent.elapsed);
      if (!detail::count_check(c, st_)) {
        report(reason_of(c));
        continue;
      }
      arena_.push_back({e, top.idx, w, t});
      const auto child = static_cast<std::uint32_t>(arena_.size() - 1);
      if (w == ctx_.dst) {
        ++st_.candidates;
        cand_.push_back(child);
        lambda_ = std::min(lambda_, t);
      } else {
        push(child);
      }
    }
  }
}

QueryResult PraoRun::run() {
  const int H = idx_.height();
  src_anc_.resize(H + 1);
  dst_anc_.resize(H + 1);
  for (int l = 0; l <= H; ++l) {
    src_anc_[l] = ancestors_at(src_, l);
    dst_anc_[l] = ancestors_at(ctx_.dst, l);
  }
  kw_cache_.assign(idx_.node_count(), 0);
  on_path_.assign(net_.vertex_count(), 0);
  on_path_[src_] = 1;

  if (opts_.greedy_seed) {
    if (auto seed = greedy_ub_seed(ctx_, src_, opts_.greedy_budget)) lambda_ = seed->time;
  }

  if (H == 0) {
    expand_edges(nullptr, 1);
  } else {
    // Length-2 paths over the root's entries, starting at an entry that holds src.
    const int L = H - 1;
    touch(idx_.root());
    std::vector<NodeId> pre;
    for (NodeId n1 : src_anc_[L]) {
      pre.assign(1, n1);
      if (!node_ok(L, pre, 0.0, 0.0)) continue;
      if (has_dst_edge(n1, L)) emit_node_path(L, pre);
      for (NodeId n2 : idx_.connections(L).neighbors(n1)) {
        pre.push_back(n2);
        if (node_ok(L, pre, idx_.node(n1).lb_t, 0.0)) emit_node_path(L, pre);
        pre.pop_back();
      }
    }
    int current = L;
    while (!queue_.empty()) {
      NodePath p = std::move(queue_.front());
      queue_.pop_front();
      if (p.level != current) {
        seen_paths_[current & 1].clear();
        current = p.level;
      }
      if (p.level == 0) {
        expand_edges(&p.nodes, p.nodes.size());
      } else {
        substitute(p);
      }
    }
  }

  QueryResult res;
  if (edge_paths_.empty()) return res;
  heap_phase();

  // Refinement: exact re-validation of every candidate, fastest survivor wins.
  double best = kInf;
  for (std::uint32_t c : cand_) {
    std::vector<EdgeId> path = chain(c);
    bool ok = true;
    double t = 0;
    for (EdgeId e : path) {
      if (check_edge(ctx_, e, t) != EdgeCheck::Ok) {
        ok = false;
        break;
      }
      t += net_.edge(e).w;
    }
    if (!ok) {
      ++st_.refine_rejects;
      continue;
    }
    if (t < best) {
      best = t;
      res.found = true;
      res.path = std::move(path);
      res.total_time = t;
    }
  }
  return res;
}

}  // namespace

QueryResult prao_qp(const SpatialIndex& index, const RoadNetwork& net, const WeatherStore& store,
                    const PivotTable& pivots, const PraoQuery& q, const PraoOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const PruneContext ctx = make_context(net, store, &pivots, q);
  if (index.horizon() != store.horizon()) throw std::invalid_argument("index was built for another horizon");
  QueryStats st;
  PraoRun run(index, ctx, q.src, opts, st);
  QueryResult res = run.run();
  res.stats = st;
  res.stats.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

double path_time(const RoadNetwork& net, std::span<const EdgeId> path) {
  double t = 0;
  for (EdgeId e : path) t += net.edge(e).w;
  return t;
}

bool validate_path(const RoadNetwork& net, const WeatherStore& store, std::span<const EdgeId> path,
                   const PraoQuery& q) {
  const int type = store.require_type(q.type);
  const KeywordBitmap S = bitmap_of(q.obstacles, net.dictionary());
  VertexId at = q.src;
  double t = q.depart;
  for (EdgeId e : path) {
    if (e >= net.edge_count()) return false;
    const Edge& ed = net.edge(e);
    if (ed.u != at && ed.v != at) return false;
    if (keyword_prune_edge(net, e, S)) return false;
    if (!(exact_pr_violate(store, ed, t, t + ed.w, q.epsilon, type) < q.alpha)) return false;
    t += ed.w;
    at = net.other_end(e, at);
  }
  return !path.empty() && at == q.dst;
}

}  // namespace prao
