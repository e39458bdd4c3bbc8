#include "scaleperc/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>

#include "scaleperc/error.hpp"

namespace scaleperc {

namespace {

bool wraps(const Graph& g) { return g.kind() == GraphKind::torus || g.kind() == GraphKind::cycle; }

bool lattice_kind(const Graph& g) { return g.is_implicit(); }

// Largest distance from x, closed form on lattices.
std::int64_t lattice_eccentricity(const Graph& g, VertexId x) {
  const auto c = g.coords(x);
  std::int64_t e = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto side = g.sides()[i];
    e += wraps(g) ? side / 2 : std::max(c[i], side - 1 - c[i]);
  }
  return e;
}

void check_truncation(const Graph& g, VertexId x, std::int64_t r, bool allow, const char* what) {
  if (allow) return;
  require(!g.ball_truncated(x, r), ErrorKind::ball_exceeds_graph,
          std::string(what) + ": ball of radius " + std::to_string(r) + " around " + std::to_string(x) +
              " exceeds the graph");
}

void check_scale(std::int64_t L) {
  require(L >= 1, ErrorKind::invalid_argument, "L must be positive");
  require(L <= 1'000'000'000, ErrorKind::numeric_overflow, "L too large");
}

struct UnionFind {
  std::vector<std::int32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::int32_t find(std::int32_t v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      auto& p = parent[static_cast<std::size_t>(v)];
      p = parent[static_cast<std::size_t>(p)];
      v = p;
    }
    return v;
  }
  void unite(std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent[static_cast<std::size_t>(b)] = a;
  }
};

std::string join_ids(const std::vector<VertexId>& v, std::size_t max_items = 8) {
  std::string out;
  for (std::size_t i = 0; i < v.size() && i < max_items; ++i) {
    if (i) out += ' ';
    out += std::to_string(v[i]);
  }
  if (v.size() > max_items) out += " ...";
  return out;
}

}  // namespace

// ---- paving ----

Paving build_paving(const Graph& g, VertexId x, std::int64_t r, std::int64_t s, const PavingOptions& opts) {
  g.check_vertex(x);
  require(r >= 1 && r <= 1'000'000'000, ErrorKind::invalid_argument, "r must be in [1, 1e9]");
  const std::int64_t R = 2 * r * r;
  require(s >= 2 && s <= R, ErrorKind::invalid_argument, "s must lie in [2, 2r^2]");
  check_truncation(g, x, R + s, false, "paving");

  auto region = bfs_region(g, x, R);
  std::vector<VertexId> order = region.vertices();
  std::sort(order.begin(), order.end());
  std::vector<std::uint8_t> blocked(region.size(), 0);

  Paving p{x, r, s, {}, 0};
  for (VertexId y : order) {
    if (blocked[static_cast<std::size_t>(region.local_id(y))]) continue;
    p.K.push_back(y);
    // Everything within s-1 of y is now too close.
    auto near = bfs_region(g, y, s - 1);
    for (VertexId w : near.vertices()) {
      const auto id = region.local_id(w);
      if (id >= 0) blocked[static_cast<std::size_t>(id)] = 1;
    }
  }
  p.achieved_c2 = static_cast<double>(p.K.size()) * std::pow(static_cast<double>(s), opts.d_l) /
                  std::pow(static_cast<double>(r), 2 * opts.d_u);
  return p;
}

PavingCheck check_paving(const Graph& g, const Paving& p, const PavingOptions& opts) {
  PavingCheck c;
  const std::int64_t R = 2 * p.r * p.r;
  auto big = bfs_region(g, p.x, R);
  c.subset_ok = std::all_of(p.K.begin(), p.K.end(), [&](VertexId y) { return big.local_id(y) >= 0; });

  c.separated_ok = true;
  for (std::size_t i = 0; i < p.K.size() && c.separated_ok; ++i) {
    auto near = bfs_region(g, p.K[i], p.s - 1);
    for (std::size_t j = i + 1; j < p.K.size(); ++j)
      if (near.local_id(p.K[j]) >= 0) {
        c.separated_ok = false;
        break;
      }
  }

  // Multi-source BFS from K to depth s.
  LocalIndex seen(g.vertex_count());
  std::vector<std::int64_t> depth;
  std::queue<VertexId> q;
  for (VertexId y : p.K)
    if (seen.insert(y).second) {
      depth.push_back(0);
      q.push(y);
    }
  while (!q.empty()) {
    const VertexId u = q.front();
    q.pop();
    const auto du = depth[static_cast<std::size_t>(seen.find(u))];
    if (du == p.s) continue;
    g.for_each_neighbor(u, [&](VertexId w) {
      if (seen.insert(w).second) {
        depth.push_back(du + 1);
        q.push(w);
      }
    });
  }
  c.covers_ok = true;
  for (std::size_t i = 0; i < big.count_within(p.r * p.r); ++i)
    if (!seen.contains(big.vertices()[i])) {
      c.covers_ok = false;
      break;
    }

  const double want = static_cast<double>(p.K.size()) * std::pow(static_cast<double>(p.s), opts.d_l) /
                      std::pow(static_cast<double>(p.r), 2 * opts.d_u);
  c.c2_ok = std::fabs(want - p.achieved_c2) <= 1e-12 * std::max(1.0, want);
  return c;
}

PavingNet PavingNet::explicit_points(const Graph& g, std::vector<VertexId> points) {
  require(!points.empty(), ErrorKind::invalid_argument, "net must have at least one point");
  for (auto v : points) g.check_vertex(v);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  PavingNet n(g);
  n.points_ = std::move(points);
  return n;
}

PavingNet PavingNet::lattice(const Graph& g, std::int64_t spacing) {
  require(wraps(g), ErrorKind::invalid_argument, "lattice nets need a torus or cycle");
  require(spacing >= 1, ErrorKind::invalid_argument, "spacing must be positive");
  for (auto side : g.sides())
    require(side % spacing == 0, ErrorKind::invalid_argument,
            "spacing " + std::to_string(spacing) + " does not divide side " + std::to_string(side));
  PavingNet n(g);
  n.spacing_ = spacing;
  return n;
}

bool PavingNet::contains(VertexId v) const {
  if (!is_lattice()) return std::binary_search(points_.begin(), points_.end(), v);
  for (auto c : g_->coords(v))
    if (c % spacing_ != 0) return false;
  return true;
}

std::optional<std::int64_t> PavingNet::covering_radius() const {
  if (!is_lattice()) return std::nullopt;
  return static_cast<std::int64_t>(g_->sides().size()) * (spacing_ / 2);
}

std::optional<VertexId> PavingNet::cover_point(VertexId v, std::int64_t radius) const {
  g_->check_vertex(v);
  if (is_lattice()) {
    auto c = g_->coords(v);
    for (std::size_t i = 0; i < c.size(); ++i) {
      const auto side = g_->sides()[i];
      const auto lo = c[i] / spacing_ * spacing_;
      const auto down = c[i] - lo;
      c[i] = down <= spacing_ - down ? lo : (lo + spacing_) % side;
    }
    const VertexId y = g_->vertex_at(c);
    if (*g_->closed_form_distance(v, y) > radius) return std::nullopt;
    return y;
  }
  auto reg = bfs_region(*g_, v, radius);
  std::optional<VertexId> best;
  std::int32_t best_d = 0;
  for (std::size_t i = 0; i < reg.size(); ++i) {
    if (best && reg.dist[i] > best_d) break;
    const VertexId w = reg.vertices()[i];
    if (std::binary_search(points_.begin(), points_.end(), w) && (!best || w < *best)) {
      best = w;
      best_d = reg.dist[i];
    }
  }
  return best;
}

std::vector<VertexId> PavingNet::points_within(VertexId x, std::int64_t R) const {
  g_->check_vertex(x);
  std::vector<VertexId> out;
  if (!is_lattice()) {
    if (g_->closed_form_distance(x, x)) {
      for (auto p : points_)
        if (*g_->closed_form_distance(x, p) <= R) out.push_back(p);
    } else {
      auto reg = bfs_region(*g_, x, R);
      for (auto p : points_)
        if (reg.local_id(p) >= 0) out.push_back(p);
    }
    return out;
  }
  const auto xc = g_->coords(x);
  const std::size_t dim = xc.size();
  // Per coordinate: candidate multiples with their wrapped offset.
  std::vector<std::vector<std::pair<std::int64_t, std::int64_t>>> cand(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const auto side = g_->sides()[i];
    for (std::int64_t c = 0; c < side; c += spacing_) {
      const auto diff = std::llabs(c - xc[i]);
      const auto off = std::min(diff, side - diff);
      if (off <= R) cand[i].emplace_back(c, off);
    }
  }
  std::vector<std::int64_t> cur(dim);
  const std::size_t cap = 10'000'000;
  auto rec = [&](auto&& self, std::size_t i, std::int64_t used) -> void {
    if (i == dim) {
      require(out.size() < cap, ErrorKind::too_large, "too many net points in range");
      out.push_back(g_->vertex_at(cur));
      return;
    }
    for (auto [c, off] : cand[i]) {
      if (used + off > R) continue;
      cur[i] = c;
      self(self, i + 1, used + off);
    }
  };
  rec(rec, 0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

bool net_covers(const Graph& g, const PavingNet& net, VertexId x, std::int64_t R, std::int64_t radius) {
  if (auto cr = net.covering_radius()) return *cr <= radius;
  LocalIndex seen(g.vertex_count());
  std::vector<std::int64_t> depth;
  std::queue<VertexId> q;
  for (VertexId y : net.points_within(x, R + radius))
    if (seen.insert(y).second) {
      depth.push_back(0);
      q.push(y);
    }
  while (!q.empty()) {
    const VertexId u = q.front();
    q.pop();
    const auto du = depth[static_cast<std::size_t>(seen.find(u))];
    if (du == radius) continue;
    g.for_each_neighbor(u, [&](VertexId w) {
      if (seen.insert(w).second) {
        depth.push_back(du + 1);
        q.push(w);
      }
    });
  }
  for (VertexId v : ball(g, x, R))
    if (!seen.contains(v)) return false;
  return true;
}

// ---- event reports ----

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::crossing: return "crossing";
    case EventKind::separation_open: return "sep-open";
    case EventKind::separation_exact: return "sep-exact";
    case EventKind::g0: return "g0";
  }
  return "?";
}

const char* to_string(EventMode m) { return m == EventMode::exact ? "exact" : "sound-subevent"; }

EventKind parse_event_kind(const std::string& s) {
  if (s == "crossing") return EventKind::crossing;
  if (s == "sep-open" || s == "separation_open" || s == "separation") return EventKind::separation_open;
  if (s == "sep-exact" || s == "separation_exact") return EventKind::separation_exact;
  if (s == "g0" || s == "G0") return EventKind::g0;
  throw Error(ErrorKind::invalid_argument, "unknown event kind '" + s + "'");
}

std::string EventReport::witness_summary() const {
  std::string out;
  if (kind == EventKind::g0) {
    if (vacuous) return "vacuous";
    if (occurred) return "holds";
    out = "k=" + std::to_string(k) + " i=" + std::to_string(i) + " ";
  }
  if (witnesses.empty()) return out.empty() ? "-" : out + "-";
  if (kind == EventKind::crossing) {
    const auto& p = witnesses.front();
    return out + "path len=" + std::to_string(p.size() - 1) + " from=" + std::to_string(p.front()) +
           " to=" + std::to_string(p.back());
  }
  for (std::size_t w = 0; w < witnesses.size(); ++w) {
    if (w) out += ' ';
    out += (w == 0 ? "A={" : "B={") + join_ids(witnesses[w]) + "}";
  }
  return out;
}

std::string EventReport::csv_header() { return "kind,center,L,occurred,mode,witness_summary"; }

std::string EventReport::csv_row() const {
  std::ostringstream os;
  os << to_string(kind) << ',' << center << ',' << L << ',' << (occurred ? 1 : 0) << ',' << to_string(mode)
     << ',' << witness_summary();
  return os.str();
}

// ---- crossing ----

EventReport detect_crossing(const Graph& g, const SiteConfig& cfg, VertexId x, std::int64_t L,
                            const EventOptions& opts) {
  g.check_vertex(x);
  check_scale(L);
  require(&cfg.graph() == &g, ErrorKind::invalid_argument, "configuration belongs to another graph");
  const std::int64_t inner = 3 * L;
  const std::int64_t outer = 3 * L * L;
  check_truncation(g, x, outer, opts.allow_truncated, "crossing");

  EventReport rep;
  rep.kind = EventKind::crossing;
  rep.center = x;
  rep.L = L;
  rep.mode = EventMode::exact;

  // Distance from x: closed form on lattices, a BFS table otherwise.
  std::optional<Region> table;
  if (lattice_kind(g)) {
    require(lattice_eccentricity(g, x) >= outer, ErrorKind::empty_sphere,
            "sphere of radius " + std::to_string(outer) + " around " + std::to_string(x) + " is empty");
  } else {
    table = bfs_region(g, x, outer);
    require(table->dist.back() == outer, ErrorKind::empty_sphere,
            "sphere of radius " + std::to_string(outer) + " around " + std::to_string(x) + " is empty");
  }
  auto dx = [&](VertexId v) -> std::int64_t {
    if (table) {
      const auto id = table->local_id(v);
      return id < 0 ? outer + 1 : table->dist[static_cast<std::size_t>(id)];
    }
    return *g.closed_form_distance(x, v);
  };

  // Any such path has a suffix that starts on the sphere of radius 3L and
  // then stays strictly outside B(x,3L), so the search runs in that shell.
  // Farthest-first order reaches the outer sphere quickly when it can.
  using Item = std::pair<std::int64_t, VertexId>;  // (-distance, id)
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  LocalIndex seen(g.vertex_count());
  std::vector<VertexId> parent;
  auto visit = [&](VertexId v, VertexId from) {
    if (seen.insert(v).second) {
      parent.push_back(from);
      heap.emplace(-dx(v), v);
    }
  };
  for (VertexId v : sphere(g, x, inner))
    if (cfg.open(v)) visit(v, -1);

  while (!heap.empty()) {
    const auto [nd, u] = heap.top();
    heap.pop();
    if (-nd == outer) {
      std::vector<VertexId> path;
      for (VertexId v = u; v >= 0; v = parent[static_cast<std::size_t>(seen.find(v))]) path.push_back(v);
      std::reverse(path.begin(), path.end());
      rep.occurred = true;
      rep.witnesses.push_back(std::move(path));
      return rep;
    }
    g.for_each_neighbor(u, [&](VertexId w) {
      if (seen.contains(w) || !cfg.open(w)) return;
      const auto d = dx(w);
      if (d > inner && d <= outer) visit(w, u);
    });
  }
  return rep;
}

// ---- separation ----

std::int64_t separation_threshold(std::int64_t L) { return (L + 99) / 100; }

SeparationWindow::SeparationWindow(const Graph& g, VertexId x, std::int64_t L, const EventOptions& opts)
    : g_(&g), x_(x), L_(L), t_(separation_threshold(L)) {
  g.check_vertex(x);
  check_scale(L);
  const std::int64_t outer = 3 * L * L;
  check_truncation(g, x, outer, opts.allow_truncated, "separation");
  region_ = bfs_region(g, x, outer, true);
  inner_ = region_.count_within(3 * L);
  const auto& lg = *region_.local;
  const auto in_inner = [&](std::int32_t v) { return static_cast<std::size_t>(v) < inner_; };

  auto add = [&](const std::vector<std::int32_t>& member) {
    require(static_cast<std::int64_t>(family_size()) < opts.max_family, ErrorKind::too_large,
            "separation witness family exceeds the configured cap");
    fam_.insert(fam_.end(), member.begin(), member.end());
    fam_offsets_.push_back(static_cast<std::int32_t>(fam_.size()));
  };

  if (t_ == 1) {
    for (std::int32_t u = 0; in_inner(u); ++u)
      for (auto w : lg.neighbors(u))
        if (w > u && in_inner(w)) add({u, w});
    return;
  }

  // Canonical geodesic paths of length t: BFS inside B(x,3L) from u, first
  // discoverer as parent, keeping endpoints whose ambient distance is t.
  std::vector<std::int32_t> depth(inner_, -1), par(inner_, -1), touched;
  for (std::int32_t u = 0; in_inner(u); ++u) {
    const VertexId gu = region_.vertices()[static_cast<std::size_t>(u)];
    auto ambient = bfs_region(g, gu, t_);
    touched.assign(1, u);
    depth[static_cast<std::size_t>(u)] = 0;
    for (std::size_t head = 0; head < touched.size(); ++head) {
      const auto v = touched[head];
      const auto dv = depth[static_cast<std::size_t>(v)];
      if (dv == t_) {
        const VertexId gv = region_.vertices()[static_cast<std::size_t>(v)];
        const auto aid = ambient.local_id(gv);
        if (gv > gu && aid >= 0 && ambient.dist[static_cast<std::size_t>(aid)] == t_) {
          std::vector<std::int32_t> path;
          for (auto w = v; w >= 0; w = par[static_cast<std::size_t>(w)]) path.push_back(w);
          add(path);
        }
        continue;
      }
      for (auto w : lg.neighbors(v))
        if (in_inner(w) && depth[static_cast<std::size_t>(w)] < 0) {
          depth[static_cast<std::size_t>(w)] = dv + 1;
          par[static_cast<std::size_t>(w)] = v;
          touched.push_back(w);
        }
    }
    for (auto v : touched) {
      depth[static_cast<std::size_t>(v)] = -1;
      par[static_cast<std::size_t>(v)] = -1;
    }
  }
}

EventReport SeparationWindow::detect(const SiteConfig& cfg) const {
  require(&cfg.graph() == g_, ErrorKind::invalid_argument, "configuration belongs to another graph");
  EventReport rep;
  rep.kind = EventKind::separation_open;
  rep.center = x_;
  rep.L = L_;
  rep.mode = t_ == 1 ? EventMode::exact : EventMode::sound_subevent;

  const auto& lg = *region_.local;
  const auto n = region_.size();
  std::vector<std::uint8_t> open(n);
  for (std::size_t i = 0; i < n; ++i) open[i] = cfg.open(region_.vertices()[i]) ? 1 : 0;
  UnionFind uf(n);
  for (std::int32_t u = 0; u < static_cast<std::int32_t>(n); ++u) {
    if (!open[static_cast<std::size_t>(u)]) continue;
    for (auto w : lg.neighbors(u))
      if (w > u && open[static_cast<std::size_t>(w)]) uf.unite(u, w);
  }

  // Label sets T(A), flattened.
  const std::size_t m = family_size();
  std::vector<std::int32_t> t_off{0}, t_lab;
  std::vector<std::int32_t> scratch;
  std::map<std::int32_t, std::int64_t> freq;
  for (std::size_t a = 0; a < m; ++a) {
    scratch.clear();
    for (auto i = fam_offsets_[a]; i < fam_offsets_[a + 1]; ++i) {
      const auto v = fam_[static_cast<std::size_t>(i)];
      if (open[static_cast<std::size_t>(v)]) scratch.push_back(uf.find(v));
      for (auto w : lg.neighbors(v))
        if (open[static_cast<std::size_t>(w)]) scratch.push_back(uf.find(w));
    }
    std::sort(scratch.begin(), scratch.end());
    scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
    for (auto l : scratch) ++freq[l];
    t_lab.insert(t_lab.end(), scratch.begin(), scratch.end());
    t_off.push_back(static_cast<std::int32_t>(t_lab.size()));
  }
  auto labels = [&](std::size_t a) {
    return std::span<const std::int32_t>(t_lab.data() + t_off[a], static_cast<std::size_t>(t_off[a + 1] - t_off[a]));
  };

  // A disjoint pair has a member missing the most common label, so only
  // those members need a partner search.
  std::int32_t common = -1;
  std::int64_t best = 0;
  for (auto [l, c] : freq)
    if (c > best) {
      best = c;
      common = l;
    }

  std::vector<std::int32_t> stamp(n, -1);
  for (std::size_t a = 0; a < m; ++a) {
    auto ta = labels(a);
    if (common >= 0 && std::binary_search(ta.begin(), ta.end(), common)) continue;
    for (auto i = fam_offsets_[a]; i < fam_offsets_[a + 1]; ++i) {
      const auto v = fam_[static_cast<std::size_t>(i)];
      stamp[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(a);
      for (auto w : lg.neighbors(v)) stamp[static_cast<std::size_t>(w)] = static_cast<std::int32_t>(a);
    }
    for (std::size_t b = 0; b < m; ++b) {
      bool close = false;
      for (auto i = fam_offsets_[b]; i < fam_offsets_[b + 1] && !close; ++i)
        close = stamp[static_cast<std::size_t>(fam_[static_cast<std::size_t>(i)])] == static_cast<std::int32_t>(a);
      if (close) continue;
      auto tb = labels(b);
      bool shared = false;
      for (std::size_t p = 0, q = 0; p < ta.size() && q < tb.size();) {
        if (ta[p] == tb[q]) {
          shared = true;
          break;
        }
        ta[p] < tb[q] ? ++p : ++q;
      }
      if (shared) continue;
      rep.occurred = true;
      for (auto s : {a, b}) {
        std::vector<VertexId> w;
        for (auto i = fam_offsets_[s]; i < fam_offsets_[s + 1]; ++i)
          w.push_back(region_.vertices()[static_cast<std::size_t>(fam_[static_cast<std::size_t>(i)])]);
        rep.witnesses.push_back(std::move(w));
      }
      rep.note = "label sets of sizes " + std::to_string(ta.size()) + " and " + std::to_string(tb.size());
      return rep;
    }
  }
  return rep;
}

EventReport detect_separation_open(const Graph& g, const SiteConfig& cfg, VertexId x, std::int64_t L,
                                   const EventOptions& opts) {
  return SeparationWindow(g, x, L, opts).detect(cfg);
}

namespace {

struct Bits {
  std::vector<std::uint64_t> w;
  explicit Bits(std::size_t n = 0) : w((n + 63) / 64, 0) {}
  void set(std::size_t i) { w[i >> 6] |= std::uint64_t{1} << (i & 63); }
  bool test(std::size_t i) const { return (w[i >> 6] >> (i & 63)) & 1; }
  bool intersects(const Bits& o) const {
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i] & o.w[i]) return true;
    return false;
  }
};

}  // namespace

EventReport detect_separation_exact(const Graph& g, const SiteConfig& cfg, VertexId x, std::int64_t L,
                                    std::int64_t budget, const EventOptions& opts) {
  g.check_vertex(x);
  check_scale(L);
  require(&cfg.graph() == &g, ErrorKind::invalid_argument, "configuration belongs to another graph");
  const std::int64_t outer = 3 * L * L;
  check_truncation(g, x, outer, opts.allow_truncated, "separation");
  const std::int64_t t = separation_threshold(L);

  EventReport rep;
  rep.kind = EventKind::separation_exact;
  rep.center = x;
  rep.L = L;
  rep.mode = EventMode::exact;

  auto region = bfs_region(g, x, outer, true);
  const auto& lg = *region.local;
  const std::size_t n = region.size();
  const std::size_t inner = region.count_within(3 * L);
  LocalIndex inner_idx(g.vertex_count());
  for (std::size_t i = 0; i < inner; ++i) inner_idx.insert(region.vertices()[i]);
  const auto inner_graph = LocalGraph::induced(g, inner_idx);  // same local ids as region

  struct Witness {
    std::vector<std::int32_t> set;
    Bits members, closed_nbhd, reach;
  };
  std::vector<Witness> sets;
  std::vector<VertexId> gl;
  enumerate_connected_subsets(inner_graph, static_cast<std::int32_t>(inner), budget,
                              [&](std::span<const std::int32_t> s) {
                                if (static_cast<std::int64_t>(s.size()) < 2) return true;
                                if (t > 1) {
                                  gl.clear();
                                  for (auto v : s) gl.push_back(region.vertices()[static_cast<std::size_t>(v)]);
                                  if (!diameter_at_least(g, gl, t)) return true;
                                }
                                sets.push_back({{s.begin(), s.end()}, Bits(n), Bits(n), Bits(n)});
                                return true;
                              });

  std::vector<std::uint8_t> open(n);
  for (std::size_t i = 0; i < n; ++i) open[i] = cfg.open(region.vertices()[i]) ? 1 : 0;
  std::vector<std::int32_t> queue;
  std::vector<std::uint8_t> seen(n);
  for (auto& s : sets) {
    for (auto v : s.set) {
      s.members.set(static_cast<std::size_t>(v));
      s.closed_nbhd.set(static_cast<std::size_t>(v));
      for (auto w : lg.neighbors(v)) s.closed_nbhd.set(static_cast<std::size_t>(w));
    }
    // Vertices at the end of a path from the set whose interior is open.
    std::fill(seen.begin(), seen.end(), 0);
    queue.assign(s.set.begin(), s.set.end());
    for (auto v : s.set) seen[static_cast<std::size_t>(v)] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const auto u = queue[head];
      for (auto w : lg.neighbors(u)) {
        if (seen[static_cast<std::size_t>(w)]) continue;
        seen[static_cast<std::size_t>(w)] = 1;
        s.reach.set(static_cast<std::size_t>(w));
        if (open[static_cast<std::size_t>(w)]) queue.push_back(w);
      }
    }
  }

  for (std::size_t a = 0; a < sets.size(); ++a)
    for (std::size_t b = a + 1; b < sets.size(); ++b) {
      if (sets[a].closed_nbhd.intersects(sets[b].members)) continue;
      if (sets[a].reach.intersects(sets[b].members)) continue;
      rep.occurred = true;
      for (auto s : {a, b}) {
        std::vector<VertexId> w;
        for (auto v : sets[s].set) w.push_back(region.vertices()[static_cast<std::size_t>(v)]);
        std::sort(w.begin(), w.end());
        rep.witnesses.push_back(std::move(w));
      }
      return rep;
    }
  return rep;
}

// ---- cascading ----

CascadeReport verify_cascading(const Graph& g, const SiteConfig& cfg, EventKind kind, VertexId x,
                               const ScaleSequence& scales, int k, int J, const PavingNet& net,
                               const EventOptions& opts) {
  require(kind == EventKind::crossing || kind == EventKind::separation_open, ErrorKind::invalid_argument,
          "cascading is checked for crossing and sep-open events");
  require(J >= 1, ErrorKind::invalid_argument, "J must be at least 1");
  require(k >= 0 && k + 1 <= scales.k_max(), ErrorKind::invalid_argument, "scale k+1 missing");
  const std::int64_t Lk = scales.L(k), Lk1 = scales.L(k + 1);
  check_scale(Lk1);
  const std::int64_t sep = 9 * Lk * Lk;

  CascadeReport rep;
  rep.kind = kind;
  rep.k = k;
  rep.J = J;

  if (kind == EventKind::crossing) {
    const std::int64_t need = 3 * Lk1 + 30 * static_cast<std::int64_t>(J) * Lk * Lk;
    require(need <= Lk1 * Lk1, ErrorKind::precondition_violated,
            "3 L_{k+1} + 30 J L_k^2 = " + std::to_string(need) + " exceeds L_{k+1}^2 = " +
                std::to_string(Lk1 * Lk1));
  }
  require(net_covers(g, net, x, Lk1 * Lk1, Lk), ErrorKind::precondition_violated,
          "net does not cover B(x, L_{k+1}^2) within L_k");

  auto close_to_chosen = [&](VertexId y) {
    for (auto z : rep.y)
      if (distance(g, y, z) < sep) return true;
    return false;
  };

  if (kind == EventKind::crossing) {
    rep.top = detect_crossing(g, cfg, x, Lk1, opts);
    if (!rep.top.occurred) {
      rep.vacuous = true;
      rep.note = "crossing at scale k+1 did not occur";
      return rep;
    }
    const auto& sigma = rep.top.witnesses.front();
    bool located = true;
    for (int j = 1; j <= J; ++j) {
      const std::int64_t rho = 3 * Lk1 + 30 * static_cast<std::int64_t>(j) * Lk * Lk;
      auto it = std::find_if(sigma.begin(), sigma.end(), [&](VertexId v) { return distance(g, x, v) == rho; });
      if (it == sigma.end()) {
        located = false;
        rep.note = "path misses sphere " + std::to_string(j);
        break;
      }
      auto y = net.cover_point(*it, Lk);
      if (!y) {
        located = false;
        rep.note = "no net point within L_k of x_" + std::to_string(j);
        break;
      }
      rep.radii.push_back(rho);
      rep.hits.push_back(*it);
      rep.y.push_back(*y);
    }
    rep.found_all = located && static_cast<int>(rep.y.size()) == J;
  } else {
    rep.top = detect_separation_open(g, cfg, x, Lk1, opts);
    if (!rep.top.occurred) {
      rep.vacuous = true;
      rep.note = "separation at scale k+1 did not occur";
      return rep;
    }
    for (VertexId y : net.points_within(x, 2 * Lk1 * Lk1)) {
      if (static_cast<int>(rep.y.size()) == J) break;
      if (close_to_chosen(y)) continue;
      auto ev = detect_separation_open(g, cfg, y, Lk, opts);
      if (ev.occurred) rep.y.push_back(y);
    }
    rep.found_all = static_cast<int>(rep.y.size()) == J;
    if (!rep.found_all) rep.note = "found " + std::to_string(rep.y.size()) + " of " + std::to_string(J);
  }

  rep.pairwise_ok = true;
  for (std::size_t a = 0; a < rep.y.size(); ++a)
    for (std::size_t b = a + 1; b < rep.y.size(); ++b)
      if (distance(g, rep.y[a], rep.y[b]) < sep) rep.pairwise_ok = false;
  rep.events_ok = true;
  for (VertexId y : rep.y) {
    rep.events.push_back(kind == EventKind::crossing ? detect_crossing(g, cfg, y, Lk, opts)
                                                     : detect_separation_open(g, cfg, y, Lk, opts));
    rep.events_ok = rep.events_ok && rep.events.back().occurred;
  }
  return rep;
}

// ---- G0 ----

G0Evaluator::G0Evaluator(const Graph& g, std::vector<VertexId> sigma, const ScaleSequence& scales, int k0,
                         int k_top, const EventOptions& opts) {
  require(!sigma.empty(), ErrorKind::invalid_argument, "empty geodesic segment");
  require(k0 >= 0, ErrorKind::invalid_argument, "k0 must be nonnegative");
  origin_ = sigma.front();
  L0_ = scales.L(std::min(k0, scales.k_max()));
  if (k0 > k_top) {
    vacuous_ = true;
    return;
  }
  require(k_top + 1 <= scales.k_max(), ErrorKind::invalid_argument, "scale sequence needs level k_top+1");
  std::map<std::pair<VertexId, std::int64_t>, std::size_t> index;
  for (int k = k0; k <= k_top; ++k) {
    const std::int64_t Lk = scales.L(k), Lk1 = scales.L(k + 1);
    check_scale(Lk1);
    if (Lk > 100) exact_ = false;
    const std::int64_t imax = (Lk1 * Lk1) / (Lk * Lk);
    const std::int64_t last = static_cast<std::int64_t>(static_cast<__int128>(imax) * Lk * Lk / 10);
    require(last < static_cast<std::int64_t>(sigma.size()), ErrorKind::invalid_argument,
            "geodesic segment too short: need index " + std::to_string(last) + " at k=" + std::to_string(k));
    for (std::int64_t i = 0; i <= imax; ++i) {
      const auto pos = static_cast<std::int64_t>(static_cast<__int128>(i) * Lk * Lk / 10);
      const VertexId c = sigma[static_cast<std::size_t>(pos)];
      auto [it, fresh] = index.try_emplace({c, Lk}, windows_.size());
      if (fresh) windows_.emplace_back(g, c, Lk, opts);
      cells_.push_back({k, i, it->second});
    }
  }
}

EventReport G0Evaluator::evaluate(const SiteConfig& cfg) const {
  EventReport rep;
  rep.kind = EventKind::g0;
  rep.center = origin_;
  rep.L = L0_;
  rep.mode = exact_ ? EventMode::exact : EventMode::sound_subevent;
  if (vacuous_) {
    rep.vacuous = true;
    rep.occurred = true;
    rep.note = "empty index grid";
    return rep;
  }
  for (const auto& c : cells_) {
    auto ev = windows_[c.window].detect(cfg);
    if (ev.occurred) {
      rep.occurred = false;
      rep.k = c.k;
      rep.i = c.i;
      rep.center = ev.center;
      rep.L = ev.L;
      rep.witnesses = std::move(ev.witnesses);
      return rep;
    }
  }
  rep.occurred = true;
  return rep;
}

EventReport event_G0(const Graph& g, const SiteConfig& cfg, const std::vector<VertexId>& sigma,
                     const ScaleSequence& scales, int k0, int k_top, const EventOptions& opts) {
  return G0Evaluator(g, sigma, scales, k0, k_top, opts).evaluate(cfg);
}

}  // namespace scaleperc
