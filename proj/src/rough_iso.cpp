#include "scaleperc/rough_iso.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "scaleperc/metric.hpp"
#include "scaleperc/rng.hpp"

namespace scaleperc {

namespace {

// Distance lookup: closed form, a cached table, or BFS per query.
class Metric {
 public:
  Metric(const Graph& g, std::int64_t budget) : g_(g) {
    if (!g.closed_form_distance(0, 0) && g.vertex_count() <= budget / std::max<VertexId>(g.vertex_count(), 1))
      table_.emplace(g, budget);
  }
  std::int64_t operator()(VertexId u, VertexId v) const {
    if (auto d = g_.closed_form_distance(u, v)) return *d;
    if (table_) return (*table_)(u, v);
    return distance(g_, u, v);
  }

 private:
  const Graph& g_;
  std::optional<DistanceMatrix> table_;
};

// Multi-source BFS from the image of phi. label[v] = smallest source vertex
// whose image is nearest to v.
struct NearestPreimage {
  std::vector<std::int64_t> dist;
  std::vector<VertexId> label;
};

NearestPreimage nearest_preimage(const Graph& target, std::span<const VertexId> phi) {
  target.require_dense("rough-map coverage");
  const auto n = static_cast<std::size_t>(target.vertex_count());
  NearestPreimage r{std::vector<std::int64_t>(n, -1), std::vector<VertexId>(n, -1)};
  std::vector<VertexId> frontier;
  for (std::size_t x = 0; x < phi.size(); ++x) {
    const auto y = static_cast<std::size_t>(phi[x]);
    if (r.dist[y] < 0) {
      r.dist[y] = 0;
      r.label[y] = static_cast<VertexId>(x);
      frontier.push_back(phi[x]);
    }
  }
  std::int64_t level = 0;
  while (!frontier.empty()) {
    std::vector<VertexId> next;
    for (VertexId v : frontier) {
      target.for_each_neighbor(v, [&](VertexId w) {
        auto& dw = r.dist[static_cast<std::size_t>(w)];
        auto& lw = r.label[static_cast<std::size_t>(w)];
        if (dw < 0) {
          dw = level + 1;
          lw = r.label[static_cast<std::size_t>(v)];
          next.push_back(w);
        } else if (dw == level + 1) {
          lw = std::min(lw, r.label[static_cast<std::size_t>(v)]);
        }
      });
    }
    frontier = std::move(next);
    ++level;
  }
  return r;
}

}  // namespace

RoughMap make_rough_map(const Graph& source, const Graph& target, std::vector<VertexId> map, double C) {
  require(C >= 1.0, ErrorKind::invalid_argument, "rough-isometry constant must be at least 1");
  require(static_cast<VertexId>(map.size()) == source.vertex_count(), ErrorKind::invalid_argument,
          "map must be total on the source");
  for (VertexId y : map) target.check_vertex(y);
  return RoughMap{&source, &target, std::move(map), C};
}

RoughCheckReport check_rough_isometry(const RoughMap& m, const RoughCheckOptions& opts) {
  require(m.source && m.target, ErrorKind::invalid_argument, "rough map without graphs");
  require(m.C >= 1.0, ErrorKind::invalid_argument, "rough-isometry constant must be at least 1");
  const Graph& src = *m.source;
  const Graph& tgt = *m.target;
  const VertexId n = src.vertex_count();
  require(static_cast<VertexId>(m.map.size()) == n, ErrorKind::invalid_argument, "map not total");

  RoughCheckReport rep;
  const double C = m.C;
  const std::int64_t all_pairs = n * (n - 1) / 2;
  rep.exhaustive = all_pairs <= opts.budget_pairs;
  require(rep.exhaustive || opts.allow_sampling, ErrorKind::budget_exceeded,
          std::to_string(all_pairs) + " pairs exceed the exhaustive budget");

  const Metric ds(src, opts.budget_pairs * 2);
  const Metric dt(tgt, opts.budget_pairs * 2);

  double worst_slack = std::numeric_limits<double>::infinity();
  double need = 1.0;
  auto visit = [&](VertexId x, VertexId y) {
    const std::int64_t d = ds(x, y);
    const std::int64_t dp = dt(m.map[static_cast<std::size_t>(x)], m.map[static_cast<std::size_t>(y)]);
    ++rep.pairs_checked;
    // Integer distances: lower is d < C (d' + 1), upper is d' <= C d.
    const bool lower = static_cast<double>(d) < C * static_cast<double>(dp + 1);
    const bool upper = static_cast<double>(dp) <= C * static_cast<double>(d);
    rep.lower_ok = rep.lower_ok && lower;
    rep.upper_ok = rep.upper_ok && upper;
    const double slack = std::min(static_cast<double>(dp + 1) - static_cast<double>(d) / C,
                                  static_cast<double>(d) - static_cast<double>(dp) / C);
    if (slack < worst_slack) {
      worst_slack = slack;
      rep.worst_x = x;
      rep.worst_y = y;
      rep.worst_d_source = d;
      rep.worst_d_target = dp;
    }
    if (d > 0) need = std::max(need, static_cast<double>(dp) / static_cast<double>(d));
    need = std::max(need, static_cast<double>(d) / static_cast<double>(dp + 1));
  };

  if (rep.exhaustive) {
    for (VertexId x = 0; x < n; ++x)
      for (VertexId y = x + 1; y < n; ++y) visit(x, y);
  } else {
    Rng rng(opts.seed);
    std::uniform_int_distribution<VertexId> pick(0, n - 1);
    for (std::int64_t i = 0; i < opts.sampled_pairs; ++i) {
      const VertexId x = pick(rng), y = pick(rng);
      if (x != y) visit(std::min(x, y), std::max(x, y));
    }
  }

  const auto near = nearest_preimage(tgt, m.map);
  for (VertexId y = 0; y < tgt.vertex_count(); ++y) {
    const auto d = near.dist[static_cast<std::size_t>(y)];
    if (d > rep.cover_radius) {
      rep.cover_radius = d;
      rep.worst_uncovered = y;
    }
  }
  rep.cover_ok = static_cast<double>(rep.cover_radius) <= C;
  rep.min_constant = std::max(need, static_cast<double>(rep.cover_radius));
  rep.holds = rep.lower_ok && rep.upper_ok && rep.cover_ok;
  return rep;
}

RoughMap rough_inverse(const RoughMap& m, const RoughCheckOptions& opts) {
  const auto rep = check_rough_isometry(m, opts);
  require(rep.holds, ErrorKind::verification_failed,
          "input map is not a " + std::to_string(m.C) + "-rough isometry");
  const auto near = nearest_preimage(*m.target, m.map);
  return RoughMap{m.target, m.source, near.label, 4.0 * m.C * m.C};
}

std::int64_t inverse_closeness(const RoughMap& m, const RoughMap& inverse) {
  const Metric dt(*m.target, std::int64_t{1} << 27);
  std::int64_t worst = 0;
  for (VertexId x = 0; x < m.target->vertex_count(); ++x) {
    const VertexId back = m.map[static_cast<std::size_t>(inverse.map[static_cast<std::size_t>(x)])];
    worst = std::max(worst, dt(x, back));
  }
  return worst;
}

ImageBound image_size_lower_bound(const RoughMap& m, std::span<const VertexId> a) {
  ImageBound out;
  if (a.empty()) return out;
  std::vector<VertexId> img;
  img.reserve(a.size());
  for (VertexId x : a) {
    m.source->check_vertex(x);
    img.push_back(m.map[static_cast<std::size_t>(x)]);
  }
  std::sort(img.begin(), img.end());
  img.erase(std::unique(img.begin(), img.end()), img.end());
  out.image_size = static_cast<std::int64_t>(img.size());
  const auto r = static_cast<std::int64_t>(std::floor(m.C));
  out.vbar_c = growth_profile(*m.source, r, 1.0, 1.0).vbar.back();
  out.bound = static_cast<double>(a.size()) / static_cast<double>(out.vbar_c);
  out.holds = static_cast<double>(out.image_size) >= out.bound;
  return out;
}

RoughMap compose(const RoughMap& first, const RoughMap& second) {
  require(first.target == second.source, ErrorKind::invalid_argument, "maps do not compose");
  std::vector<VertexId> map(first.map.size());
  for (std::size_t x = 0; x < map.size(); ++x)
    map[x] = second.map[static_cast<std::size_t>(first.map[x])];
  return RoughMap{first.source, second.target, std::move(map), first.C * second.C + first.C};
}

std::vector<VertexId> torus_translation(const Graph& torus, std::span<const std::int64_t> shift) {
  require(torus.kind() == GraphKind::torus || torus.kind() == GraphKind::cycle,
          ErrorKind::invalid_argument, "translations need a torus or cycle");
  require(shift.size() == torus.sides().size(), ErrorKind::invalid_argument, "shift arity mismatch");
  torus.require_dense("translation map");
  std::vector<VertexId> map(static_cast<std::size_t>(torus.vertex_count()));
  std::vector<std::int64_t> c;
  for (VertexId v = 0; v < torus.vertex_count(); ++v) {
    c = torus.coords(v);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += shift[i];
    map[static_cast<std::size_t>(v)] = torus.vertex_at(c);
  }
  return map;
}

std::vector<VertexId> cycle_rotation(const Graph& cycle, std::int64_t k) {
  require(cycle.kind() == GraphKind::cycle, ErrorKind::invalid_argument, "rotation needs a cycle");
  const std::int64_t s[1] = {k};
  return torus_translation(cycle, s);
}

std::vector<VertexId> read_map(std::istream& in, VertexId source_size) {
  std::vector<VertexId> map(static_cast<std::size_t>(source_size), -1);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    VertexId x = 0, y = 0;
    require(static_cast<bool>(ls >> x >> y), ErrorKind::parse_error,
            "line " + std::to_string(line_no) + ": expected 'src dst'");
    require(x >= 0 && x < source_size, ErrorKind::parse_error,
            "line " + std::to_string(line_no) + ": source vertex out of range");
    require(map[static_cast<std::size_t>(x)] < 0, ErrorKind::parse_error,
            "line " + std::to_string(line_no) + ": vertex " + std::to_string(x) + " mapped twice");
    map[static_cast<std::size_t>(x)] = y;
  }
  for (std::size_t x = 0; x < map.size(); ++x)
    require(map[x] >= 0, ErrorKind::parse_error, "source vertex " + std::to_string(x) + " unmapped");
  return map;
}

void write_map(std::ostream& out, std::span<const VertexId> map) {
  for (std::size_t x = 0; x < map.size(); ++x) out << x << ' ' << map[x] << '\n';
}

}  // namespace scaleperc
