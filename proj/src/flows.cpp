#include "scaleperc/flows.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "scaleperc/error.hpp"
#include "scaleperc/metric.hpp"

namespace scaleperc {

const char* to_string(DisjointMode m) { return m == DisjointMode::edge ? "edge" : "vertex"; }

DisjointMode parse_disjoint_mode(const std::string& s) {
  if (s == "edge") return DisjointMode::edge;
  if (s == "vertex") return DisjointMode::vertex;
  throw Error(ErrorKind::invalid_argument, "unknown disjointness mode '" + s + "'");
}

namespace {

constexpr std::int32_t kInf = std::numeric_limits<std::int32_t>::max() / 4;

class Dinic {
 public:
  struct Arc {
    std::int32_t to, cap, rev;
  };
  explicit Dinic(std::int32_t n) : adj_(static_cast<std::size_t>(n)) {}

  // Returns the index of the forward arc in adj_[u].
  std::int32_t add(std::int32_t u, std::int32_t v, std::int32_t cap) {
    auto& au = adj_[static_cast<std::size_t>(u)];
    auto& av = adj_[static_cast<std::size_t>(v)];
    au.push_back({v, cap, static_cast<std::int32_t>(av.size())});
    av.push_back({u, 0, static_cast<std::int32_t>(au.size() - 1)});
    return static_cast<std::int32_t>(au.size() - 1);
  }

  std::int64_t run(std::int32_t s, std::int32_t t) {
    std::int64_t flow = 0;
    while (levels(s, t)) {
      it_.assign(adj_.size(), 0);
      while (auto f = push(s, t, kInf)) flow += f;
    }
    return flow;
  }

  // Source side of the final residual graph.
  std::vector<std::uint8_t> reachable(std::int32_t s) const {
    std::vector<std::uint8_t> seen(adj_.size(), 0);
    std::vector<std::int32_t> stack{s};
    seen[static_cast<std::size_t>(s)] = 1;
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      for (const auto& a : adj_[static_cast<std::size_t>(u)])
        if (a.cap > 0 && !seen[static_cast<std::size_t>(a.to)]) {
          seen[static_cast<std::size_t>(a.to)] = 1;
          stack.push_back(a.to);
        }
    }
    return seen;
  }

  std::vector<std::vector<Arc>> adj_;

 private:
  bool levels(std::int32_t s, std::int32_t t) {
    level_.assign(adj_.size(), -1);
    std::queue<std::int32_t> q;
    level_[static_cast<std::size_t>(s)] = 0;
    q.push(s);
    while (!q.empty()) {
      auto u = q.front();
      q.pop();
      for (const auto& a : adj_[static_cast<std::size_t>(u)])
        if (a.cap > 0 && level_[static_cast<std::size_t>(a.to)] < 0) {
          level_[static_cast<std::size_t>(a.to)] = level_[static_cast<std::size_t>(u)] + 1;
          q.push(a.to);
        }
    }
    return level_[static_cast<std::size_t>(t)] >= 0;
  }

  std::int32_t push(std::int32_t u, std::int32_t t, std::int32_t f) {
    if (u == t) return f;
    auto& i = it_[static_cast<std::size_t>(u)];
    auto& arcs = adj_[static_cast<std::size_t>(u)];
    for (; i < static_cast<std::int32_t>(arcs.size()); ++i) {
      auto& a = arcs[static_cast<std::size_t>(i)];
      if (a.cap <= 0 || level_[static_cast<std::size_t>(a.to)] != level_[static_cast<std::size_t>(u)] + 1) continue;
      if (auto d = push(a.to, t, std::min(f, a.cap))) {
        a.cap -= d;
        adj_[static_cast<std::size_t>(a.to)][static_cast<std::size_t>(a.rev)].cap += d;
        return d;
      }
    }
    return 0;
  }

  std::vector<std::int32_t> level_, it_;
};

std::vector<VertexId> sorted_unique(std::span<const VertexId> v) {
  std::vector<VertexId> out(v.begin(), v.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool contains(const std::vector<VertexId>& sorted, VertexId v) {
  return std::binary_search(sorted.begin(), sorted.end(), v);
}

// Walk with repeated vertices -> simple path by cutting out loops.
std::vector<VertexId> drop_loops(const std::vector<VertexId>& walk) {
  std::vector<VertexId> out;
  for (auto v : walk) {
    auto it = std::find(out.begin(), out.end(), v);
    if (it != out.end()) out.erase(it + 1, out.end());
    else out.push_back(v);
  }
  return out;
}

// Keep the segment from the last A vertex to the first B vertex after it.
std::vector<VertexId> trim(const std::vector<VertexId>& path, const std::vector<VertexId>& A,
                           const std::vector<VertexId>& B) {
  std::size_t end = 0;
  while (!contains(B, path[end])) ++end;
  std::size_t begin = end;
  while (!contains(A, path[begin])) --begin;
  return {path.begin() + static_cast<std::ptrdiff_t>(begin), path.begin() + static_cast<std::ptrdiff_t>(end) + 1};
}

}  // namespace

PathPacking max_disjoint_paths(const Graph& g, std::span<const VertexId> A_in, std::span<const VertexId> B_in,
                               std::span<const VertexId> region_in, DisjointMode mode) {
  PathPacking out;
  out.mode = mode;
  out.A = sorted_unique(A_in);
  out.B = sorted_unique(B_in);
  require(!out.A.empty() && !out.B.empty(), ErrorKind::invalid_argument, "A and B must be nonempty");
  const auto region = sorted_unique(region_in);
  LocalIndex idx(g.vertex_count());
  for (auto v : region) {
    g.check_vertex(v);
    idx.insert(v);
  }
  for (auto v : out.A) {
    require(idx.contains(v), ErrorKind::invalid_argument, "A must lie inside region");
    require(!contains(out.B, v), ErrorKind::invalid_argument, "A and B must be disjoint");
  }
  for (auto v : out.B) require(idx.contains(v), ErrorKind::invalid_argument, "B must lie inside region");

  const auto n = static_cast<std::int32_t>(region.size());
  const bool split = mode == DisjointMode::vertex;
  // Node layout: v (or v_in) = i, v_out = n + i, then source and sink.
  const std::int32_t s = split ? 2 * n : n, t = s + 1;
  Dinic net(t + 1);
  auto out_node = [&](std::int32_t i) { return split ? n + i : i; };
  std::vector<std::uint8_t> terminal(static_cast<std::size_t>(n), 0);
  for (auto v : out.A) terminal[static_cast<std::size_t>(idx.find(v))] = 1;
  for (auto v : out.B) terminal[static_cast<std::size_t>(idx.find(v))] = 2;

  if (split)
    for (std::int32_t i = 0; i < n; ++i) net.add(i, n + i, terminal[static_cast<std::size_t>(i)] ? kInf : 1);
  for (auto v : out.A) net.add(s, idx.find(v), kInf);
  for (auto v : out.B) net.add(out_node(idx.find(v)), t, kInf);

  // Undirected edges in id order for deterministic augmentation.
  struct EdgeArcs {
    std::int32_t u, v, fwd, bwd;
  };
  std::vector<EdgeArcs> edges;
  for (std::int32_t i = 0; i < n; ++i) {
    const VertexId gu = region[static_cast<std::size_t>(i)];
    g.for_each_neighbor(gu, [&](VertexId gw) {
      const auto j = idx.find(gw);
      if (j <= i) return;
      const bool direct = terminal[static_cast<std::size_t>(i)] && terminal[static_cast<std::size_t>(j)];
      const std::int32_t cap = (split && !direct) ? kInf : 1;
      const auto f = net.add(out_node(i), j, cap);
      const auto b = net.add(out_node(j), i, cap);
      edges.push_back({i, j, f, b});
    });
  }

  const auto flow = net.run(s, t);

  // Certificate from the residual source side.
  const auto S = net.reachable(s);
  if (!split) {
    for (const auto& e : edges)
      if (S[static_cast<std::size_t>(e.u)] != S[static_cast<std::size_t>(e.v)])
        out.cut.emplace_back(region[static_cast<std::size_t>(e.u)], region[static_cast<std::size_t>(e.v)]);
  } else {
    for (std::int32_t i = 0; i < n; ++i)
      if (!terminal[static_cast<std::size_t>(i)] && S[static_cast<std::size_t>(i)] &&
          !S[static_cast<std::size_t>(n + i)])
        out.cut_vertices.push_back(region[static_cast<std::size_t>(i)]);
    for (const auto& e : edges) {
      if (!(terminal[static_cast<std::size_t>(e.u)] && terminal[static_cast<std::size_t>(e.v)])) continue;
      const bool uv = S[static_cast<std::size_t>(out_node(e.u))] && !S[static_cast<std::size_t>(e.v)];
      const bool vu = S[static_cast<std::size_t>(out_node(e.v))] && !S[static_cast<std::size_t>(e.u)];
      if (uv || vu) out.cut.emplace_back(region[static_cast<std::size_t>(e.u)], region[static_cast<std::size_t>(e.v)]);
    }
  }

  // Flow per undirected edge, opposite units cancelled: +1 means u->v.
  std::vector<std::vector<std::pair<std::int32_t, std::size_t>>> succ(static_cast<std::size_t>(n));
  std::vector<std::int32_t> units(edges.size(), 0);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto& e = edges[k];
    const auto& fa = net.adj_[static_cast<std::size_t>(out_node(e.u))][static_cast<std::size_t>(e.fwd)];
    const auto& ba = net.adj_[static_cast<std::size_t>(out_node(e.v))][static_cast<std::size_t>(e.bwd)];
    const std::int32_t cap = (split && !(terminal[static_cast<std::size_t>(e.u)] && terminal[static_cast<std::size_t>(e.v)])) ? kInf : 1;
    const std::int32_t f = (cap - fa.cap) - (cap - ba.cap);
    if (f > 0) succ[static_cast<std::size_t>(e.u)].emplace_back(e.v, k);
    if (f < 0) succ[static_cast<std::size_t>(e.v)].emplace_back(e.u, k);
    units[k] = std::abs(f);
  }
  // Peel unit paths from A vertices with positive net outflow, in id order.
  // Conservation guarantees a walk from such a vertex reaches B.
  std::vector<std::int32_t> supply(static_cast<std::size_t>(n), 0);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (units[k] == 0) continue;
    const auto& e = edges[k];
    const bool forward = std::any_of(succ[static_cast<std::size_t>(e.u)].begin(),
                                     succ[static_cast<std::size_t>(e.u)].end(),
                                     [&](auto& p) { return p.second == k; });
    ++supply[static_cast<std::size_t>(forward ? e.u : e.v)];
    --supply[static_cast<std::size_t>(forward ? e.v : e.u)];
  }
  for (auto a : out.A) {
    const auto start = idx.find(a);
    for (; supply[static_cast<std::size_t>(start)] > 0; --supply[static_cast<std::size_t>(start)]) {
      std::vector<VertexId> walk{a};
      std::int32_t cur = start;
      while (terminal[static_cast<std::size_t>(cur)] != 2) {
        auto& next = succ[static_cast<std::size_t>(cur)];
        auto it = std::find_if(next.begin(), next.end(), [&](auto& p) { return units[p.second] > 0; });
        require(it != next.end(), ErrorKind::verification_failed, "flow decomposition got stuck");
        --units[it->second];
        cur = it->first;
        walk.push_back(region[static_cast<std::size_t>(cur)]);
      }
      out.paths.push_back(trim(drop_loops(walk), out.A, out.B));
    }
  }
  require(static_cast<std::int64_t>(out.paths.size()) == flow, ErrorKind::verification_failed,
          "flow decomposition lost paths");
  require(out.cut_size() == out.paths.size(), ErrorKind::verification_failed, "cut size differs from flow");
  return out;
}

bool verify_packing(const Graph& g, const PathPacking& p, std::span<const VertexId> region_in) {
  const auto region = sorted_unique(region_in);
  std::vector<Edge> used_edges;
  std::vector<VertexId> used_inner;
  for (const auto& path : p.paths) {
    if (path.empty() || !contains(p.A, path.front()) || !contains(p.B, path.back())) return false;
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (!contains(region, path[i])) return false;
      if (i > 0) {
        if (!g.adjacent(path[i - 1], path[i])) return false;
        used_edges.emplace_back(std::min(path[i - 1], path[i]), std::max(path[i - 1], path[i]));
      }
      if (i > 0 && i + 1 < path.size()) used_inner.push_back(path[i]);
    }
  }
  auto has_dup = [](auto v) {
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) != v.end();
  };
  if (has_dup(used_edges)) return false;
  if (p.mode == DisjointMode::vertex && has_dup(used_inner)) return false;
  if (p.cut_size() != p.paths.size()) return false;

  // Removing the certificate must separate A from B.
  std::vector<Edge> cut = p.cut;
  for (auto& e : cut)
    if (e.first > e.second) std::swap(e.first, e.second);
  std::sort(cut.begin(), cut.end());
  LocalIndex seen(g.vertex_count());
  std::queue<VertexId> q;
  for (auto a : p.A) {
    seen.insert(a);
    q.push(a);
  }
  while (!q.empty()) {
    const VertexId u = q.front();
    q.pop();
    if (contains(p.B, u)) return false;
    g.for_each_neighbor(u, [&](VertexId w) {
      if (!contains(region, w) || seen.contains(w)) return;
      if (std::binary_search(cut.begin(), cut.end(), Edge{std::min(u, w), std::max(u, w)})) return;
      if (contains(p.cut_vertices, w)) return;
      seen.insert(w);
      q.push(w);
    });
  }
  return true;
}

double required_path_count(std::int64_t size_A, double c_i, double d_i) {
  require(size_A >= 0, ErrorKind::invalid_argument, "|A| must be nonnegative");
  require(c_i > 0 && d_i > 0, ErrorKind::invalid_argument, "c_i and d_i must be positive");
  return c_i * std::pow(static_cast<double>(size_A), (d_i - 1) / d_i);
}

namespace {

std::vector<VertexId> ball_union(const Graph& g, std::span<const VertexId> centers, std::int64_t R,
                                 std::int64_t& summed) {
  require(R >= 0, ErrorKind::invalid_argument, "R must be nonnegative");
  std::vector<VertexId> out;
  summed = 0;
  for (auto z : centers) {
    auto b = ball(g, z, R);
    summed += static_cast<std::int64_t>(b.size());
    out.insert(out.end(), b.begin(), b.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

AvoidanceReport disjoint_paths_avoiding(const Graph& g, std::span<const VertexId> A, std::span<const VertexId> B,
                                        std::span<const VertexId> region, std::span<const VertexId> centers,
                                        std::int64_t R, DisjointMode mode) {
  AvoidanceReport rep;
  auto full = max_disjoint_paths(g, A, B, region, mode);
  std::int64_t summed = 0;
  const auto forbidden = ball_union(g, centers, R, summed);
  rep.packed = full.size();
  rep.centers = centers.size();
  rep.R = R;
  rep.forbidden_vertices = static_cast<std::int64_t>(forbidden.size());
  rep.capacity = summed * (mode == DisjointMode::vertex ? 1 : g.max_degree());
  rep.packing = full;
  rep.packing.paths.clear();
  for (auto& p : full.paths) {
    const bool hit = std::any_of(p.begin(), p.end(), [&](VertexId v) { return contains(forbidden, v); });
    if (hit) ++rep.discarded;
    else rep.packing.paths.push_back(p);
  }
  rep.filter_succeeded = !rep.packing.paths.empty();
  rep.counting_bound_ok = static_cast<std::int64_t>(rep.packed) > rep.capacity;
  return rep;
}

PathPacking disjoint_paths_resolved(const Graph& g, std::span<const VertexId> A, std::span<const VertexId> B,
                                    std::span<const VertexId> region, std::span<const VertexId> centers,
                                    std::int64_t R, DisjointMode mode) {
  std::int64_t summed = 0;
  const auto forbidden = ball_union(g, centers, R, summed);
  auto keep = [&](std::span<const VertexId> s) {
    std::vector<VertexId> out;
    for (auto v : s)
      if (!contains(forbidden, v)) out.push_back(v);
    return out;
  };
  const auto a = keep(A), b = keep(B), r = keep(region);
  if (a.empty() || b.empty()) {
    PathPacking empty;
    empty.mode = mode;
    empty.A = sorted_unique(a);
    empty.B = sorted_unique(b);
    return empty;
  }
  return max_disjoint_paths(g, a, b, r, mode);
}

}  // namespace scaleperc
