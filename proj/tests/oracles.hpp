#pragma once
// Slow independent reference implementations used only by tests.

#include <cstdint>
#include <algorithm>
#include <queue>
#include <stdexcept>
#include <vector>

#include "scaleperc/graph.hpp"

namespace oracle {

using scaleperc::Graph;
using scaleperc::Edge;
using scaleperc::VertexId;

inline std::vector<std::vector<VertexId>> adjacency(const Graph& g) {
  std::vector<std::vector<VertexId>> adj(static_cast<std::size_t>(g.vertex_count()));
  for (auto [u, v] : g.edge_list()) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  return adj;
}

inline std::vector<int> bfs(const std::vector<std::vector<VertexId>>& adj, VertexId s) {
  std::vector<int> d(adj.size(), -1);
  std::queue<VertexId> q;
  d[s] = 0;
  q.push(s);
  while (!q.empty()) {
    auto v = q.front();
    q.pop();
    for (auto w : adj[v])
      if (d[w] < 0) {
        d[w] = d[v] + 1;
        q.push(w);
      }
  }
  return d;
}

inline std::vector<std::vector<int>> all_pairs(const Graph& g) {
  auto adj = adjacency(g);
  std::vector<std::vector<int>> out;
  for (std::size_t s = 0; s < adj.size(); ++s) out.push_back(bfs(adj, static_cast<VertexId>(s)));
  return out;
}

// Connectivity of the subgraph induced by `mask` (bit i = vertex i).
inline bool induced_connected(const std::vector<std::vector<VertexId>>& adj, std::uint64_t mask) {
  if (mask == 0) return false;
  int start = __builtin_ctzll(mask);
  std::uint64_t seen = 1ULL << start;
  std::vector<int> stack{start};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (auto w : adj[v])
      if ((mask >> w & 1) && !(seen >> w & 1)) {
        seen |= 1ULL << w;
        stack.push_back(static_cast<int>(w));
      }
  }
  return seen == mask;
}

// Open path from B(x,3L) to distance exactly 3L^2 inside B(x,3L^2).
inline bool crossing(const std::vector<std::vector<VertexId>>& adj, const std::vector<char>& open, VertexId x,
                     std::int64_t L) {
  auto d = bfs(adj, x);
  const std::int64_t in = 3 * L, out = 3 * L * L;
  std::vector<char> seen(adj.size(), 0);
  std::queue<VertexId> q;
  for (std::size_t v = 0; v < adj.size(); ++v)
    if (open[v] && d[v] >= 0 && d[v] <= in) {
      seen[v] = 1;
      q.push(static_cast<VertexId>(v));
    }
  while (!q.empty()) {
    auto v = q.front();
    q.pop();
    if (d[v] == out) return true;
    for (auto w : adj[v])
      if (!seen[w] && open[w] && d[w] <= out) {
        seen[w] = 1;
        q.push(w);
      }
  }
  return false;
}

// Brute force over all pairs of connected subsets of B(x,3L) (at most ~20
// vertices): some pair at distance > 1 with diameter >= L/100 that no path
// with open interior inside B(x,3L^2) joins.
inline bool separation(const std::vector<std::vector<VertexId>>& adj, const std::vector<char>& open, VertexId x,
                       std::int64_t L) {
  auto d = bfs(adj, x);
  const std::int64_t out = 3 * L * L;
  std::vector<VertexId> inner;
  for (std::size_t v = 0; v < adj.size(); ++v)
    if (d[v] >= 0 && d[v] <= 3 * L) inner.push_back(static_cast<VertexId>(v));
  if (inner.size() > 20) throw std::runtime_error("oracle ball too large");
  std::vector<std::vector<int>> dist;
  for (auto v : inner) dist.push_back(bfs(adj, v));
  // Induced adjacency on inner positions.
  std::vector<std::vector<VertexId>> iadj(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i)
    for (std::size_t j = 0; j < inner.size(); ++j)
      if (dist[i][inner[j]] == 1) iadj[i].push_back(static_cast<VertexId>(j));
  const std::int64_t need = (L + 99) / 100;
  std::vector<std::uint64_t> cands;
  for (std::uint64_t m = 1; m < (1ULL << inner.size()); ++m) {
    if (!induced_connected(iadj, m)) continue;
    std::int64_t diam = 0;
    for (std::size_t i = 0; i < inner.size(); ++i)
      for (std::size_t j = 0; j < inner.size(); ++j)
        if ((m >> i & 1) && (m >> j & 1)) diam = std::max<std::int64_t>(diam, dist[i][inner[j]]);
    if (diam >= need) cands.push_back(m);
  }
  auto joined = [&](std::uint64_t a, std::uint64_t b) {
    std::vector<char> inA(adj.size(), 0), inB(adj.size(), 0), seen(adj.size(), 0);
    std::queue<VertexId> q;
    for (std::size_t i = 0; i < inner.size(); ++i) {
      if (a >> i & 1) {
        inA[inner[i]] = 1;
        seen[inner[i]] = 1;
        q.push(inner[i]);
      }
      if (b >> i & 1) inB[inner[i]] = 1;
    }
    while (!q.empty()) {
      auto v = q.front();
      q.pop();
      for (auto w : adj[v]) {
        if (d[w] < 0 || d[w] > out) continue;
        if (inB[w]) return true;
        if (!seen[w] && open[w]) {
          seen[w] = 1;
          q.push(w);
        }
      }
    }
    return false;
  };
  for (auto a : cands)
    for (auto b : cands) {
      if (a & b) continue;
      bool near = false;
      for (std::size_t i = 0; i < inner.size() && !near; ++i)
        for (std::size_t j = 0; j < inner.size() && !near; ++j)
          if ((a >> i & 1) && (b >> j & 1) && dist[i][inner[j]] <= 1) near = true;
      if (!near && !joined(a, b)) return true;
    }
  return false;
}

// Exhaustive maximum packing of A-B paths in the subgraph induced by
// `region` (bitmasks over at most 8 vertices). Edge mode: pairwise
// edge-disjoint. Vertex mode: interiors pairwise disjoint and no shared edge.
inline int max_packing(const Graph& g, std::uint32_t A, std::uint32_t B, std::uint32_t region, bool vertex_mode) {
  const int n = static_cast<int>(g.vertex_count());
  auto edges = g.edge_list();
  auto edge_bit = [&](int u, int v) {
    for (std::size_t k = 0; k < edges.size(); ++k)
      if (edges[k] == Edge{std::min<VertexId>(u, v), std::max<VertexId>(u, v)}) return std::uint64_t{1} << k;
    return std::uint64_t{0};
  };
  struct P {
    std::uint64_t e;
    std::uint32_t inner;
  };
  std::vector<P> paths;
  std::vector<int> stack;
  auto dfs = [&](auto&& self, int v, std::uint32_t visited, std::uint64_t e, std::uint32_t inner) -> void {
    if (B >> v & 1) {
      paths.push_back({e, inner});
      return;
    }
    for (int w = 0; w < n; ++w) {
      if (!(region >> w & 1) || (visited >> w & 1) || !g.adjacent(v, w)) continue;
      const bool interior = !(B >> w & 1);
      self(self, w, visited | (1u << w), e | edge_bit(v, w), inner | (interior ? 1u << w : 0u));
    }
  };
  for (int a = 0; a < n; ++a)
    if (A >> a & 1) dfs(dfs, a, 1u << a, 0, 0);
  int best = 0;
  auto search = [&](auto&& self, std::size_t from, std::uint64_t e, std::uint32_t inner, int count) -> void {
    best = std::max(best, count);
    for (std::size_t j = from; j < paths.size(); ++j) {
      if (paths[j].e & e) continue;
      if (vertex_mode && (paths[j].inner & inner)) continue;
      self(self, j + 1, e | paths[j].e, inner | paths[j].inner, count + 1);
    }
  };
  search(search, 0, 0, 0, 0);
  return best;
}

}  // namespace oracle
