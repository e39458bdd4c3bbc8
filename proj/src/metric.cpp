#include "scaleperc/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_set>

#include "scaleperc/rng.hpp"

namespace scaleperc {

namespace {
constexpr VertexId kFlatIndexLimit = VertexId{1} << 20;
}

LocalIndex::LocalIndex(VertexId graph_size) : dense_(graph_size <= kFlatIndexLimit) {
  if (dense_) table_.assign(static_cast<std::size_t>(graph_size), -1);
}

std::int32_t LocalIndex::find(VertexId v) const {
  if (dense_) {
    if (v < 0 || static_cast<std::size_t>(v) >= table_.size()) return -1;
    return table_[static_cast<std::size_t>(v)];
  }
  auto it = map_.find(v);
  return it == map_.end() ? -1 : it->second;
}

std::pair<std::int32_t, bool> LocalIndex::insert(VertexId v) {
  const auto next = static_cast<std::int32_t>(vertices_.size());
  if (dense_) {
    auto& slot = table_[static_cast<std::size_t>(v)];
    if (slot >= 0) return {slot, false};
    slot = next;
  } else {
    auto [it, fresh] = map_.emplace(v, next);
    if (!fresh) return {it->second, false};
  }
  vertices_.push_back(v);
  return {next, true};
}

LocalGraph LocalGraph::whole(const Graph& g) {
  g.require_dense("whole-graph local view");
  require(g.vertex_count() < std::numeric_limits<std::int32_t>::max(), ErrorKind::too_large,
          "graph too large for 32-bit local ids");
  LocalGraph lg;
  lg.offsets.reserve(static_cast<std::size_t>(g.vertex_count()) + 1);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    g.for_each_neighbor(v, [&](VertexId w) { lg.adj.push_back(static_cast<std::int32_t>(w)); });
    lg.offsets.push_back(static_cast<std::int32_t>(lg.adj.size()));
  }
  return lg;
}

LocalGraph LocalGraph::induced(const Graph& g, const LocalIndex& idx) {
  LocalGraph lg;
  lg.offsets.reserve(idx.size() + 1);
  std::vector<std::int32_t> row;
  for (const VertexId v : idx.vertices()) {
    row.clear();
    g.for_each_neighbor(v, [&](VertexId w) {
      const auto j = idx.find(w);
      if (j >= 0) row.push_back(j);
    });
    std::sort(row.begin(), row.end());
    lg.adj.insert(lg.adj.end(), row.begin(), row.end());
    lg.offsets.push_back(static_cast<std::int32_t>(lg.adj.size()));
  }
  return lg;
}

std::size_t Region::count_within(std::int64_t r) const {
  auto it = std::upper_bound(dist.begin(), dist.end(), r,
                             [](std::int64_t value, std::int32_t d) { return value < d; });
  return static_cast<std::size_t>(it - dist.begin());
}

Region bfs_region(const Graph& g, VertexId center, std::int64_t radius, bool with_adjacency) {
  g.check_vertex(center);
  require(radius >= 0, ErrorKind::invalid_argument, "negative radius");
  require(radius < std::numeric_limits<std::int32_t>::max(), ErrorKind::too_large, "radius too large");
  Region reg{center, radius, LocalIndex(g.vertex_count()), {}, std::nullopt};
  reg.index.insert(center);
  reg.dist.push_back(0);
  for (std::size_t head = 0; head < reg.index.size(); ++head) {
    const std::int32_t d = reg.dist[head];
    if (d == radius) break;  // BFS order: everything after is at distance >= d
    const VertexId v = reg.index.vertex(static_cast<std::int32_t>(head));
    g.for_each_neighbor(v, [&](VertexId w) {
      if (reg.index.insert(w).second) {
        require(reg.index.size() < static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max()),
                ErrorKind::too_large, "ball too large");
        reg.dist.push_back(d + 1);
      }
    });
  }
  if (with_adjacency) reg.local = LocalGraph::induced(g, reg.index);
  return reg;
}

std::vector<VertexId> ball(const Graph& g, VertexId x, std::int64_t r) {
  auto reg = bfs_region(g, x, r);
  std::vector<VertexId> out = reg.vertices();
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<VertexId> sphere(const Graph& g, VertexId x, std::int64_t r) {
  auto reg = bfs_region(g, x, r);
  std::vector<VertexId> out;
  for (std::size_t i = 0; i < reg.size(); ++i)
    if (reg.dist[i] == r) out.push_back(reg.vertices()[i]);
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t ball_size(const Graph& g, VertexId x, std::int64_t r) {
  return static_cast<std::int64_t>(bfs_region(g, x, r).size());
}

std::int64_t distance(const Graph& g, VertexId u, VertexId v) {
  g.check_vertex(u);
  g.check_vertex(v);
  if (auto d = g.closed_form_distance(u, v)) return *d;
  LocalIndex idx(g.vertex_count());
  std::vector<std::int64_t> dist;
  idx.insert(u);
  dist.push_back(0);
  for (std::size_t head = 0; head < idx.size(); ++head) {
    const VertexId w = idx.vertex(static_cast<std::int32_t>(head));
    if (w == v) return dist[head];
    g.for_each_neighbor(w, [&](VertexId z) {
      if (idx.insert(z).second) dist.push_back(dist[head] + 1);
    });
  }
  throw Error(ErrorKind::invalid_argument, "vertices not connected");
}

std::optional<std::int64_t> set_distance(const Graph& g, std::span<const VertexId> a,
                                         std::span<const VertexId> b, std::int64_t cap) {
  if (a.empty() || b.empty()) return std::nullopt;
  std::unordered_set<VertexId> targets(b.begin(), b.end());
  LocalIndex idx(g.vertex_count());
  std::vector<std::int64_t> dist;
  for (VertexId v : a) {
    if (idx.insert(v).second) dist.push_back(0);
  }
  for (std::size_t head = 0; head < idx.size(); ++head) {
    const VertexId v = idx.vertex(static_cast<std::int32_t>(head));
    if (targets.count(v)) return dist[head];
    if (dist[head] >= cap) break;
    g.for_each_neighbor(v, [&](VertexId w) {
      if (idx.insert(w).second) dist.push_back(dist[head] + 1);
    });
  }
  return std::nullopt;
}

std::vector<Edge> edge_boundary(const Graph& g, std::span<const VertexId> a) {
  std::unordered_set<VertexId> in(a.begin(), a.end());
  std::vector<Edge> out;
  for (VertexId v : in) {
    g.for_each_neighbor(v, [&](VertexId w) {
      if (!in.count(w)) out.emplace_back(v, w);
    });
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<VertexId> internal_vertex_boundary(const Graph& g, std::span<const VertexId> a) {
  std::unordered_set<VertexId> in(a.begin(), a.end());
  std::vector<VertexId> out;
  for (VertexId v : in) {
    bool touches = false;
    g.for_each_neighbor(v, [&](VertexId w) { touches = touches || !in.count(w); });
    if (touches) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Boundary boundary(const Graph& g, std::span<const VertexId> a, BoundaryMode mode) {
  for (VertexId v : a) g.check_vertex(v);
  Boundary b{mode, {}, {}};
  if (mode == BoundaryMode::edge) b.edges = edge_boundary(g, a);
  else b.vertices = internal_vertex_boundary(g, a);
  return b;
}

namespace {

bool has_closed_form(const Graph& g) { return g.closed_form_distance(0, 0).has_value(); }

// Truncated BFS from src; returns how many of `targets` were reached within radius
// and the max distance among them.
std::pair<std::size_t, std::int64_t> reach_targets(const Graph& g, VertexId src,
                                                   const std::unordered_set<VertexId>& targets,
                                                   std::int64_t radius) {
  auto reg = bfs_region(g, src, radius);
  std::size_t hit = 0;
  std::int64_t far = 0;
  for (std::size_t i = 0; i < reg.size(); ++i) {
    if (targets.count(reg.vertices()[i])) {
      ++hit;
      far = std::max<std::int64_t>(far, reg.dist[i]);
    }
  }
  return {hit, far};
}

}  // namespace

std::int64_t set_diameter(const Graph& g, std::span<const VertexId> a) {
  require(!a.empty(), ErrorKind::invalid_argument, "diameter of an empty set");
  for (VertexId v : a) g.check_vertex(v);
  std::int64_t best = 0;
  if (has_closed_form(g)) {
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = i + 1; j < a.size(); ++j)
        best = std::max(best, *g.closed_form_distance(a[i], a[j]));
    return best;
  }
  std::unordered_set<VertexId> targets(a.begin(), a.end());
  for (VertexId v : a) {
    // Unbounded BFS on the whole graph; the graph is finite and connected.
    auto reg = bfs_region(g, v, g.vertex_count());
    for (std::size_t i = 0; i < reg.size(); ++i)
      if (targets.count(reg.vertices()[i])) best = std::max<std::int64_t>(best, reg.dist[i]);
  }
  return best;
}

bool diameter_at_least(const Graph& g, std::span<const VertexId> a, std::int64_t t) {
  if (t <= 0) return !a.empty();
  if (a.size() < 2) return false;
  if (has_closed_form(g)) {
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = i + 1; j < a.size(); ++j)
        if (*g.closed_form_distance(a[i], a[j]) >= t) return true;
    return false;
  }
  std::unordered_set<VertexId> targets(a.begin(), a.end());
  for (VertexId v : a) {
    if (reach_targets(g, v, targets, t - 1).first < targets.size()) return true;
  }
  return false;
}

DistanceMatrix::DistanceMatrix(const Graph& g, std::int64_t budget_cells) : n_(g.vertex_count()) {
  require(n_ <= budget_cells / std::max<VertexId>(n_, 1), ErrorKind::budget_exceeded,
          "all-pairs table for " + std::to_string(n_) + " vertices exceeds budget");
  const auto n = static_cast<std::size_t>(n_);
  d_.assign(n * n, -1);
  std::vector<std::int32_t> queue(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::int32_t* row = d_.data() + s * n;
    std::size_t head = 0, tail = 0;
    row[s] = 0;
    queue[tail++] = static_cast<std::int32_t>(s);
    while (head < tail) {
      const auto v = queue[head++];
      g.for_each_neighbor(v, [&](VertexId w) {
        if (row[w] < 0) {
          row[w] = row[v] + 1;
          queue[tail++] = static_cast<std::int32_t>(w);
        }
      });
    }
    diameter_ = std::max(diameter_, row[queue[tail - 1]]);
  }
}

GrowthProfile growth_profile(const Graph& g, std::int64_t r_max, double d_u, double d_l,
                             const GrowthOptions& opts) {
  require(r_max >= 1, ErrorKind::invalid_argument, "r_max must be positive");
  require(d_u > 0 && d_l > 0, ErrorKind::invalid_argument, "growth exponents must be positive");

  GrowthProfile prof;
  prof.r_max = r_max;
  prof.d_u = d_u;
  prof.d_l = d_l;

  std::vector<VertexId> centers = opts.centers;
  if (centers.empty()) {
    if (g.is_vertex_transitive()) {
      centers = {0};
      prof.all_centers = true;  // every center sees the same ball sizes
    } else if (g.vertex_count() <= opts.max_auto_centers) {
      centers.resize(static_cast<std::size_t>(g.vertex_count()));
      for (VertexId v = 0; v < g.vertex_count(); ++v) centers[static_cast<std::size_t>(v)] = v;
      prof.all_centers = true;
    } else {
      Rng rng(opts.seed);
      std::uniform_int_distribution<VertexId> pick(0, g.vertex_count() - 1);
      for (std::int64_t i = 0; i < opts.max_auto_centers; ++i) centers.push_back(pick(rng));
      std::sort(centers.begin(), centers.end());
      centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
    }
  }
  for (VertexId c : centers) g.check_vertex(c);
  if (opts.interior_only) {
    std::erase_if(centers, [&](VertexId c) { return g.ball_truncated(c, r_max); });
    require(!centers.empty(), ErrorKind::ball_exceeds_graph,
            "no center has an untruncated ball of radius " + std::to_string(r_max));
  }

  const auto rows = static_cast<std::size_t>(r_max) + 1;
  prof.vbar.assign(rows, 0);
  prof.vmin.assign(rows, std::numeric_limits<std::int64_t>::max());
  bool reaches = false;
  for (VertexId c : centers) {
    auto reg = bfs_region(g, c, r_max);
    std::vector<std::int64_t> cum(rows, 0);
    for (auto d : reg.dist) ++cum[static_cast<std::size_t>(d)];
    reaches = reaches || cum.back() > 0;
    for (std::size_t r = 1; r < rows; ++r) cum[r] += cum[r - 1];
    for (std::size_t r = 0; r < rows; ++r) {
      prof.vbar[r] = std::max(prof.vbar[r], cum[r]);
      prof.vmin[r] = std::min(prof.vmin[r], cum[r]);
    }
  }
  require(reaches, ErrorKind::invalid_argument,
          "r_max " + std::to_string(r_max) + " exceeds the eccentricity of every center");
  prof.centers_used = centers.size();

  prof.c_u = 0;
  prof.c_l = std::numeric_limits<double>::infinity();
  for (std::size_t r = 1; r < rows; ++r) {
    const double rr = static_cast<double>(r);
    prof.c_u = std::max(prof.c_u, static_cast<double>(prof.vbar[r]) / std::pow(rr, d_u));
    prof.c_l = std::min(prof.c_l, static_cast<double>(prof.vmin[r]) / std::pow(rr, d_l));
  }
  return prof;
}

namespace {

struct SubsetEnumerator {
  const LocalGraph& lg;
  std::int32_t max_size;
  std::int64_t budget;
  const std::function<bool(std::span<const std::int32_t>)>& visit;
  std::int64_t produced = 0;
  bool stopped = false;
  std::int32_t root = 0;
  std::vector<std::int32_t> set;
  std::vector<std::int32_t> blocked;  // count of set members whose closed neighbourhood holds v

  void block(std::int32_t v, int delta) {
    blocked[static_cast<std::size_t>(v)] += delta;
    for (auto w : lg.neighbors(v)) blocked[static_cast<std::size_t>(w)] += delta;
  }

  void extend(std::vector<std::int32_t> ext) {
    if (++produced > budget)
      throw Error(ErrorKind::budget_exceeded,
                  "more than " + std::to_string(budget) + " connected subsets");
    if (!visit(set)) {
      stopped = true;
      return;
    }
    if (static_cast<std::int32_t>(set.size()) >= max_size) return;
    while (!ext.empty() && !stopped) {
      const std::int32_t w = ext.back();
      ext.pop_back();
      std::vector<std::int32_t> next = ext;
      // Exclusive neighbours of w: not in the set and not adjacent to it.
      for (auto u : lg.neighbors(w))
        if (u > root && blocked[static_cast<std::size_t>(u)] == 0) next.push_back(u);
      set.push_back(w);
      block(w, +1);
      extend(std::move(next));
      block(w, -1);
      set.pop_back();
    }
  }
};

}  // namespace

void enumerate_connected_subsets(const LocalGraph& lg, std::int32_t max_size, std::int64_t budget,
                                 const std::function<bool(std::span<const std::int32_t>)>& visit) {
  if (max_size <= 0) return;
  SubsetEnumerator e{lg, max_size, budget, visit, 0, false, 0, {}, {}};
  e.blocked.assign(static_cast<std::size_t>(lg.size()), 0);
  for (std::int32_t v = 0; v < lg.size() && !e.stopped; ++v) {
    e.root = v;
    e.set = {v};
    e.block(v, +1);
    std::vector<std::int32_t> ext;
    for (auto u : lg.neighbors(v))
      if (u > v) ext.push_back(u);
    e.extend(std::move(ext));
    e.block(v, -1);
  }
}

namespace {

std::int64_t boundary_edges(const LocalGraph& lg, std::span<const std::int32_t> set,
                            std::vector<char>& mark) {
  for (auto v : set) mark[static_cast<std::size_t>(v)] = 1;
  std::int64_t b = 0;
  for (auto v : set)
    for (auto w : lg.neighbors(v)) b += mark[static_cast<std::size_t>(w)] ? 0 : 1;
  for (auto v : set) mark[static_cast<std::size_t>(v)] = 0;
  return b;
}

}  // namespace

IsoReport check_isoperimetry(const Graph& g, double c_i, double d_i, std::int32_t s_max,
                             const IsoOptions& opts) {
  require(c_i > 0 && d_i > 0, ErrorKind::invalid_argument, "c_i and d_i must be positive");
  require(s_max >= 1, ErrorKind::invalid_argument, "s_max must be positive");
  const LocalGraph lg = LocalGraph::whole(g);
  const double expo = (d_i - 1.0) / d_i;
  // Ratios equal to c_i up to rounding count as holding.
  const double floor_ratio = c_i * (1.0 - 1e-12);

  IsoReport rep;
  rep.c_i = c_i;
  rep.d_i = d_i;
  rep.s_max = s_max;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  std::vector<char> mark(static_cast<std::size_t>(lg.size()), 0);

  // Disconnected sets never beat their worst component: the boundary adds up
  // while |A|^e is subadditive for e <= 1, so connected sets suffice.
  enumerate_connected_subsets(lg, s_max, opts.budget, [&](std::span<const std::int32_t> set) {
    ++rep.sets_checked;
    const auto b = boundary_edges(lg, set, mark);
    const double ratio = static_cast<double>(b) / std::pow(static_cast<double>(set.size()), expo);
    if (ratio < rep.min_ratio) {
      rep.min_ratio = ratio;
      rep.worst_boundary = b;
      rep.worst_set.assign(set.begin(), set.end());
    }
    return true;
  });
  std::sort(rep.worst_set.begin(), rep.worst_set.end());
  rep.holds = rep.min_ratio >= floor_ratio;

  if (opts.sampled_sets > 0 && opts.sample_size_max > s_max) {
    rep.sampled = true;
    rep.sampled_min_ratio = std::numeric_limits<double>::infinity();
    Rng rng(opts.seed);
    std::uniform_int_distribution<std::int32_t> pick_root(0, lg.size() - 1);
    std::uniform_int_distribution<std::int32_t> pick_size(s_max + 1, opts.sample_size_max);
    std::vector<char> in(static_cast<std::size_t>(lg.size()), 0);
    for (std::int64_t t = 0; t < opts.sampled_sets; ++t) {
      const std::int32_t target = pick_size(rng);
      std::vector<std::int32_t> set{pick_root(rng)};
      in[static_cast<std::size_t>(set[0])] = 1;
      std::vector<std::int32_t> frontier;
      auto push_frontier = [&](std::int32_t v) {
        for (auto w : lg.neighbors(v))
          if (!in[static_cast<std::size_t>(w)]) frontier.push_back(w);
      };
      push_frontier(set[0]);
      while (static_cast<std::int32_t>(set.size()) < target && !frontier.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, frontier.size() - 1);
        const std::size_t i = pick(rng);
        const std::int32_t w = frontier[i];
        frontier[i] = frontier.back();
        frontier.pop_back();
        if (in[static_cast<std::size_t>(w)]) continue;
        in[static_cast<std::size_t>(w)] = 1;
        set.push_back(w);
        push_frontier(w);
      }
      for (auto v : set) in[static_cast<std::size_t>(v)] = 0;
      ++rep.sampled_checked;
      const auto b = boundary_edges(lg, set, mark);
      const double ratio = static_cast<double>(b) / std::pow(static_cast<double>(set.size()), expo);
      if (ratio < rep.sampled_min_ratio) {
        rep.sampled_min_ratio = ratio;
        rep.sampled_worst_set.assign(set.begin(), set.end());
      }
    }
    std::sort(rep.sampled_worst_set.begin(), rep.sampled_worst_set.end());
    rep.sampled_holds = rep.sampled_min_ratio >= floor_ratio;
  }
  return rep;
}

bool is_geodesic(const Graph& g, std::span<const VertexId> path) {
  for (VertexId v : path)
    if (!g.valid_vertex(v)) return false;
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    if (!g.adjacent(path[i], path[i + 1])) return false;
  if (has_closed_form(g)) {
    for (std::size_t i = 0; i < path.size(); ++i)
      for (std::size_t j = i + 1; j < path.size(); ++j)
        if (*g.closed_form_distance(path[i], path[j]) != static_cast<std::int64_t>(j - i)) return false;
    return true;
  }
  const auto len = static_cast<std::int64_t>(path.size()) - 1;
  for (std::size_t i = 0; i < path.size(); ++i) {
    auto reg = bfs_region(g, path[i], len);
    for (std::size_t j = 0; j < path.size(); ++j) {
      const auto k = reg.local_id(path[j]);
      const auto want = static_cast<std::int64_t>(i > j ? i - j : j - i);
      if (k < 0 || reg.dist[static_cast<std::size_t>(k)] != want) return false;
    }
  }
  return true;
}

namespace {

std::vector<VertexId> lattice_geodesic(const Graph& g, std::int64_t length) {
  const auto& sides = g.sides();
  const bool wrap = g.kind() == GraphKind::torus || g.kind() == GraphKind::cycle;
  std::vector<std::int64_t> c(sides.size(), 0);
  std::vector<VertexId> path{g.vertex_at(c)};
  std::int64_t remaining = length;
  for (std::size_t i = 0; i < sides.size() && remaining > 0; ++i) {
    const std::int64_t room = wrap ? sides[i] / 2 : sides[i] - 1;
    const std::int64_t steps = std::min(remaining, room);
    for (std::int64_t s = 0; s < steps; ++s) {
      ++c[i];
      path.push_back(g.vertex_at(c));
    }
    remaining -= steps;
  }
  require(remaining == 0, ErrorKind::no_segment,
          "length " + std::to_string(length) + " exceeds the graph diameter " +
              std::to_string(length - remaining));
  return path;
}

// BFS from src over the whole graph; returns (order, parent, dist).
struct FullBfs {
  std::vector<std::int32_t> order, parent, dist;
};

FullBfs full_bfs(const Graph& g, VertexId src) {
  const auto n = static_cast<std::size_t>(g.vertex_count());
  FullBfs b;
  b.parent.assign(n, -1);
  b.dist.assign(n, -1);
  b.order.reserve(n);
  b.dist[static_cast<std::size_t>(src)] = 0;
  b.order.push_back(static_cast<std::int32_t>(src));
  for (std::size_t head = 0; head < b.order.size(); ++head) {
    const auto v = b.order[head];
    g.for_each_neighbor(v, [&](VertexId w) {
      if (b.dist[static_cast<std::size_t>(w)] < 0) {
        b.dist[static_cast<std::size_t>(w)] = b.dist[static_cast<std::size_t>(v)] + 1;
        b.parent[static_cast<std::size_t>(w)] = v;
        b.order.push_back(static_cast<std::int32_t>(w));
      }
    });
  }
  return b;
}

}  // namespace

std::vector<VertexId> find_geodesic_segment(const Graph& g, std::int64_t length) {
  require(length >= 0, ErrorKind::invalid_argument, "negative segment length");
  std::vector<VertexId> path;
  if (g.is_implicit()) {
    path = lattice_geodesic(g, length);
  } else {
    g.require_dense("geodesic search");
    // Double sweep: farthest from 0, then farthest from there.
    const auto first = full_bfs(g, 0);
    VertexId a = first.order.back();
    auto sweep = full_bfs(g, a);
    VertexId b = sweep.order.back();
    if (sweep.dist[static_cast<std::size_t>(b)] < length) {
      require(g.vertex_count() <= 4096, ErrorKind::no_segment,
              "double sweep found diameter " + std::to_string(sweep.dist[static_cast<std::size_t>(b)]) +
                  " < " + std::to_string(length) + " (heuristic; graph too large for exact check)");
      const DistanceMatrix dm(g);
      require(dm.diameter() >= length, ErrorKind::no_segment,
              "graph diameter " + std::to_string(dm.diameter()) + " < " + std::to_string(length));
      bool found = false;
      for (VertexId u = 0; u < dm.size() && !found; ++u)
        for (VertexId v = 0; v < dm.size() && !found; ++v)
          if (dm(u, v) == dm.diameter()) {
            a = u;
            b = v;
            found = true;
          }
      sweep = full_bfs(g, a);
    }
    std::vector<VertexId> rev;
    for (VertexId v = b; v != -1; v = sweep.parent[static_cast<std::size_t>(v)]) rev.push_back(v);
    path.assign(rev.rbegin(), rev.rend());
    path.resize(static_cast<std::size_t>(length) + 1);
  }
  require(is_geodesic(g, path), ErrorKind::verification_failed,
          "constructed segment failed the pairwise distance check");
  return path;
}

}  // namespace scaleperc
