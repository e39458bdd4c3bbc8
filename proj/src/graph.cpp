#include "scaleperc/graph.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>

namespace scaleperc {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid argument";
    case ErrorKind::budget_exceeded: return "budget exceeded";
    case ErrorKind::empty_sphere: return "empty sphere";
    case ErrorKind::ball_exceeds_graph: return "ball exceeds graph";
    case ErrorKind::no_segment: return "no segment";
    case ErrorKind::verification_failed: return "verification failed";
    case ErrorKind::not_regular: return "graph not regular";
    case ErrorKind::numeric_overflow: return "numeric overflow";
    case ErrorKind::precondition_violated: return "precondition violated";
    case ErrorKind::too_large: return "graph too large";
    case ErrorKind::parse_error: return "parse error";
  }
  return "error";
}

const char* to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::torus: return "torus";
    case GraphKind::box: return "box";
    case GraphKind::cycle: return "cycle";
    case GraphKind::ladder: return "ladder";
    case GraphKind::complete: return "complete";
    case GraphKind::custom: return "custom";
  }
  return "custom";
}

GraphKind parse_graph_kind(const std::string& name) {
  for (auto k : {GraphKind::torus, GraphKind::box, GraphKind::cycle, GraphKind::ladder,
                 GraphKind::complete, GraphKind::custom}) {
    if (name == to_string(k)) return k;
  }
  throw Error(ErrorKind::invalid_argument, "unknown graph kind '" + name + "'");
}

namespace {

std::int64_t checked_volume(const std::vector<std::int64_t>& sides) {
  std::int64_t n = 1;
  for (auto s : sides) {
    require(s <= std::numeric_limits<std::int64_t>::max() / 4 / n, ErrorKind::numeric_overflow,
            "lattice vertex count overflows 64 bits");
    n *= s;
  }
  return n;
}

}  // namespace

void Graph::init_lattice(GraphKind kind, std::vector<std::int64_t> sides, bool wrap,
                         std::vector<bool> open_ends) {
  kind_ = kind;
  lattice_ = true;
  wrap_ = wrap;
  sides_ = std::move(sides);
  open_ends_ = std::move(open_ends);
  n_ = checked_volume(sides_);
  strides_.assign(sides_.size(), 1);
  for (std::size_t i = 1; i < sides_.size(); ++i) strides_[i] = strides_[i - 1] * sides_[i - 1];

  m_ = 0;
  max_degree_ = 0;
  min_degree_ = 0;
  for (std::size_t i = 0; i < sides_.size(); ++i) {
    const std::int64_t s = sides_[i];
    const std::int64_t per_line = wrap_ ? s : s - 1;
    m_ += per_line * (n_ / s);
    const int contribution = wrap_ ? 2 : (s >= 3 ? 2 : (s == 2 ? 1 : 0));
    max_degree_ += contribution;
    min_degree_ += wrap_ ? 2 : (s >= 2 ? 1 : 0);
  }
}

void Graph::init_csr(std::int64_t n, const std::vector<Edge>& sorted_edges) {
  lattice_ = false;
  n_ = n;
  m_ = static_cast<std::int64_t>(sorted_edges.size());
  std::vector<std::int64_t> deg(static_cast<std::size_t>(n), 0);
  for (const auto& [u, v] : sorted_edges) {
    ++deg[static_cast<std::size_t>(u)];
    ++deg[static_cast<std::size_t>(v)];
  }
  offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (std::int64_t v = 0; v < n; ++v)
    offsets_[static_cast<std::size_t>(v) + 1] = offsets_[static_cast<std::size_t>(v)] + deg[static_cast<std::size_t>(v)];
  adjacency_.assign(static_cast<std::size_t>(offsets_.back()), 0);
  std::vector<std::int64_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [u, v] : sorted_edges) {
    adjacency_[static_cast<std::size_t>(fill[static_cast<std::size_t>(u)]++)] = v;
    adjacency_[static_cast<std::size_t>(fill[static_cast<std::size_t>(v)]++)] = u;
  }
  for (std::int64_t v = 0; v < n; ++v) {
    std::sort(adjacency_.begin() + offsets_[static_cast<std::size_t>(v)],
              adjacency_.begin() + offsets_[static_cast<std::size_t>(v) + 1]);
  }
  auto [lo, hi] = std::minmax_element(deg.begin(), deg.end());
  min_degree_ = deg.empty() ? 0 : static_cast<int>(*lo);
  max_degree_ = deg.empty() ? 0 : static_cast<int>(*hi);
}

Graph Graph::torus(int dim, std::int64_t side) {
  require(dim >= 1 && dim <= kMaxLatticeDim, ErrorKind::invalid_argument,
          "torus dimension must be in [1, " + std::to_string(kMaxLatticeDim) + "]");
  require(side >= 3, ErrorKind::invalid_argument, "torus side must be at least 3");
  Graph g;
  g.init_lattice(GraphKind::torus, std::vector<std::int64_t>(static_cast<std::size_t>(dim), side), true,
                 std::vector<bool>(static_cast<std::size_t>(dim), true));
  g.params_ = {dim, side, g.n_};
  return g;
}

Graph Graph::box(int dim, std::int64_t side) {
  require(dim >= 1 && dim <= kMaxLatticeDim, ErrorKind::invalid_argument,
          "box dimension must be in [1, " + std::to_string(kMaxLatticeDim) + "]");
  require(side >= 2, ErrorKind::invalid_argument, "box side must be at least 2");
  Graph g;
  g.init_lattice(GraphKind::box, std::vector<std::int64_t>(static_cast<std::size_t>(dim), side), false,
                 std::vector<bool>(static_cast<std::size_t>(dim), true));
  g.params_ = {dim, side, g.n_};
  return g;
}

Graph Graph::cycle(std::int64_t n) {
  require(n >= 3, ErrorKind::invalid_argument, "cycle needs at least 3 vertices");
  Graph g;
  g.init_lattice(GraphKind::cycle, {n}, true, {true});
  g.params_ = {1, n, n};
  return g;
}

Graph Graph::ladder(std::int64_t n) {
  require(n >= 2, ErrorKind::invalid_argument, "ladder needs at least 2 rungs");
  Graph g;
  // Infinite analogue is Z x {0,1}: only the long direction can be truncated.
  g.init_lattice(GraphKind::ladder, {n, 2}, false, {true, false});
  g.params_ = {2, 0, n};
  return g;
}

Graph Graph::complete(std::int64_t n) {
  require(n >= 2, ErrorKind::invalid_argument, "complete graph needs at least 2 vertices");
  require(n <= 4096, ErrorKind::too_large, "complete graph limited to 4096 vertices");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  Graph g;
  g.kind_ = GraphKind::complete;
  g.init_csr(n, edges);
  g.params_ = {1, 0, n};
  return g;
}

Graph Graph::from_edges(std::int64_t n, std::vector<Edge> edges) {
  require(n >= 1, ErrorKind::invalid_argument, "graph needs at least one vertex");
  require(n <= kDenseVertexLimit, ErrorKind::too_large, "custom graph too large");
  for (auto& [u, v] : edges) {
    require(u >= 0 && u < n && v >= 0 && v < n, ErrorKind::invalid_argument,
            "edge endpoint out of range: " + std::to_string(u) + " " + std::to_string(v));
    require(u != v, ErrorKind::invalid_argument, "self-edge at vertex " + std::to_string(u));
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  auto dup = std::adjacent_find(edges.begin(), edges.end());
  require(dup == edges.end(), ErrorKind::invalid_argument,
          dup == edges.end() ? "" : "duplicate edge " + std::to_string(dup->first) + " " + std::to_string(dup->second));

  Graph g;
  g.kind_ = GraphKind::custom;
  g.init_csr(n, edges);
  g.params_ = {1, 0, n};

  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<VertexId> stack{0};
  seen[0] = 1;
  std::int64_t reached = 1;
  while (!stack.empty()) {
    const VertexId v = stack.back();
    stack.pop_back();
    g.for_each_neighbor(v, [&](VertexId w) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        ++reached;
        stack.push_back(w);
      }
    });
  }
  require(reached == n, ErrorKind::invalid_argument,
          "graph is disconnected (" + std::to_string(reached) + " of " + std::to_string(n) +
              " vertices reachable from 0)");
  return g;
}

Graph Graph::generate(GraphKind kind, const GeneratorParams& p) {
  switch (kind) {
    case GraphKind::torus: return torus(p.dim, p.side);
    case GraphKind::box: return box(p.dim, p.side);
    case GraphKind::cycle: return cycle(p.n);
    case GraphKind::ladder: return ladder(p.n);
    case GraphKind::complete: return complete(p.n);
    case GraphKind::custom: break;
  }
  throw Error(ErrorKind::invalid_argument, "custom graphs are read from a file, not generated");
}

Graph Graph::read_adjacency_text(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      return true;
    }
    return false;
  };
  require(next_line(), ErrorKind::parse_error, "missing 'n m' header");
  std::int64_t n = 0, m = 0;
  {
    std::istringstream hs(line);
    require(static_cast<bool>(hs >> n >> m) && n >= 1 && m >= 0, ErrorKind::parse_error,
            "line " + std::to_string(line_no) + ": expected 'n m'");
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (std::int64_t i = 0; i < m; ++i) {
    require(next_line(), ErrorKind::parse_error,
            "expected " + std::to_string(m) + " edges, found " + std::to_string(i));
    std::istringstream es(line);
    VertexId u = 0, v = 0;
    require(static_cast<bool>(es >> u >> v), ErrorKind::parse_error,
            "line " + std::to_string(line_no) + ": expected 'u v'");
    edges.emplace_back(u, v);
  }
  return from_edges(n, std::move(edges));
}

void Graph::write_adjacency_text(std::ostream& out) const {
  require_dense("adjacency export");
  out << n_ << ' ' << m_ << '\n';
  for_each_edge([&](VertexId u, VertexId v, std::int64_t) { out << u << ' ' << v << '\n'; });
}

std::string Graph::describe() const {
  std::ostringstream os;
  os << to_string(kind_);
  switch (kind_) {
    case GraphKind::torus:
    case GraphKind::box: os << "(dim=" << params_.dim << ",side=" << params_.side << ")"; break;
    default: os << "(n=" << params_.n << ")"; break;
  }
  return os.str();
}

void Graph::require_dense(const char* what) const {
  require(fits_dense(), ErrorKind::too_large,
          std::string(what) + " needs a materialisable graph (" + std::to_string(n_) + " vertices)");
}

void Graph::check_vertex(VertexId v) const {
  require(valid_vertex(v), ErrorKind::invalid_argument,
          "vertex " + std::to_string(v) + " out of range [0, " + std::to_string(n_) + ")");
}

int Graph::lattice_neighbors(VertexId v, std::array<VertexId, 2 * kMaxLatticeDim>& out) const {
  int k = 0;
  VertexId rest = v;
  for (std::size_t i = 0; i < sides_.size(); ++i) {
    const std::int64_t s = sides_[i];
    const std::int64_t c = rest % s;
    rest /= s;
    const std::int64_t st = strides_[i];
    if (c > 0) out[k++] = v - st;
    else if (wrap_) out[k++] = v + (s - 1) * st;
    if (c + 1 < s) out[k++] = v + st;
    else if (wrap_) out[k++] = v - (s - 1) * st;
  }
  // Insertion sort: k <= 16.
  for (int i = 1; i < k; ++i) {
    const VertexId x = out[i];
    int j = i - 1;
    while (j >= 0 && out[j] > x) {
      out[j + 1] = out[j];
      --j;
    }
    out[j + 1] = x;
  }
  return k;
}

int Graph::degree(VertexId v) const {
  if (lattice_) {
    std::array<VertexId, 2 * kMaxLatticeDim> buf;
    return lattice_neighbors(v, buf);
  }
  return static_cast<int>(offsets_[static_cast<std::size_t>(v) + 1] - offsets_[static_cast<std::size_t>(v)]);
}

std::vector<VertexId> Graph::neighbors(VertexId v) const {
  std::vector<VertexId> out;
  for_each_neighbor(v, [&](VertexId w) { out.push_back(w); });
  return out;
}

bool Graph::adjacent(VertexId u, VertexId v) const {
  if (lattice_) {
    bool found = false;
    for_each_neighbor(u, [&](VertexId w) { found = found || w == v; });
    return found;
  }
  auto begin = adjacency_.begin() + offsets_[static_cast<std::size_t>(u)];
  auto end = adjacency_.begin() + offsets_[static_cast<std::size_t>(u) + 1];
  return std::binary_search(begin, end, v);
}

std::vector<std::int64_t> Graph::coords(VertexId v) const {
  require(lattice_, ErrorKind::invalid_argument, "coordinates only exist on lattice generators");
  std::vector<std::int64_t> c(sides_.size());
  for (std::size_t i = 0; i < sides_.size(); ++i) {
    c[i] = v % sides_[i];
    v /= sides_[i];
  }
  return c;
}

VertexId Graph::vertex_at(std::span<const std::int64_t> c) const {
  require(lattice_ && c.size() == sides_.size(), ErrorKind::invalid_argument,
          "coordinate arity does not match lattice");
  VertexId v = 0;
  for (std::size_t i = 0; i < sides_.size(); ++i) {
    std::int64_t ci = c[i];
    if (wrap_) ci = ((ci % sides_[i]) + sides_[i]) % sides_[i];
    require(ci >= 0 && ci < sides_[i], ErrorKind::invalid_argument, "coordinate outside box");
    v += ci * strides_[i];
  }
  return v;
}

std::optional<std::int64_t> Graph::closed_form_distance(VertexId u, VertexId v) const {
  if (lattice_) {
    std::int64_t d = 0;
    for (std::size_t i = 0; i < sides_.size(); ++i) {
      const std::int64_t s = sides_[i];
      std::int64_t delta = (u % s) - (v % s);
      if (delta < 0) delta = -delta;
      if (wrap_) delta = std::min(delta, s - delta);
      d += delta;
      u /= s;
      v /= s;
    }
    return d;
  }
  if (kind_ == GraphKind::complete) return u == v ? 0 : 1;
  return std::nullopt;
}

bool Graph::ball_truncated(VertexId x, std::int64_t r) const {
  if (!lattice_ || wrap_) return false;
  for (std::size_t i = 0; i < sides_.size(); ++i) {
    const std::int64_t c = x % sides_[i];
    x /= sides_[i];
    if (!open_ends_[i]) continue;
    if (c - r < 0 || c + r > sides_[i] - 1) return true;
  }
  return false;
}

std::vector<Edge> Graph::edge_list() const {
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(m_));
  for_each_edge([&](VertexId u, VertexId v, std::int64_t) { out.emplace_back(u, v); });
  return out;
}

}  // namespace scaleperc
