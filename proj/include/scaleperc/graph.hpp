#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scaleperc/error.hpp"

namespace scaleperc {

using VertexId = std::int64_t;
using Edge = std::pair<VertexId, VertexId>;

enum class GraphKind { torus, box, cycle, ladder, complete, custom };

const char* to_string(GraphKind kind);
GraphKind parse_graph_kind(const std::string& name);

struct GeneratorParams {
  int dim = 1;
  std::int64_t side = 0;  // torus, box
  std::int64_t n = 0;     // cycle, ladder (rungs), complete, custom
};

// Global algorithms (whole-graph labelings, all-pairs tables) refuse graphs
// above this size; ball-local algorithms work on any size.
inline constexpr VertexId kDenseVertexLimit = VertexId{1} << 27;
inline constexpr int kMaxLatticeDim = 8;

// Immutable finite simple connected graph.
//
// Lattice generators (torus, box, cycle, ladder) are implicit: adjacency is
// computed from coordinates, so very large lattices cost no memory until an
// algorithm touches them. Complete and custom graphs store sorted adjacency.
class Graph {
 public:
  static Graph torus(int dim, std::int64_t side);
  static Graph box(int dim, std::int64_t side);
  static Graph cycle(std::int64_t n);
  static Graph ladder(std::int64_t n);
  static Graph complete(std::int64_t n);
  // Validates ids, simplicity and connectivity.
  static Graph from_edges(std::int64_t n, std::vector<Edge> edges);
  static Graph generate(GraphKind kind, const GeneratorParams& params);

  // "n m" header followed by m lines "u v".
  static Graph read_adjacency_text(std::istream& in);
  void write_adjacency_text(std::ostream& out) const;

  GraphKind kind() const noexcept { return kind_; }
  const GeneratorParams& params() const noexcept { return params_; }
  std::string describe() const;

  VertexId vertex_count() const noexcept { return n_; }
  std::int64_t edge_count() const noexcept { return m_; }
  bool is_implicit() const noexcept { return lattice_; }
  bool fits_dense() const noexcept { return n_ <= kDenseVertexLimit; }
  void require_dense(const char* what) const;

  int degree(VertexId v) const;
  int max_degree() const noexcept { return max_degree_; }
  int min_degree() const noexcept { return min_degree_; }
  std::optional<int> regular_degree() const {
    if (max_degree_ == min_degree_) return max_degree_;
    return std::nullopt;
  }
  bool is_vertex_transitive() const noexcept {
    return kind_ == GraphKind::torus || kind_ == GraphKind::cycle ||
           kind_ == GraphKind::complete;
  }

  // Calls f(w) for each neighbour w of v in increasing id order.
  template <class F>
  void for_each_neighbor(VertexId v, F&& f) const {
    if (lattice_) {
      std::array<VertexId, 2 * kMaxLatticeDim> buf;
      const int k = lattice_neighbors(v, buf);
      for (int i = 0; i < k; ++i) f(buf[i]);
    } else {
      const auto begin = offsets_[static_cast<std::size_t>(v)];
      const auto end = offsets_[static_cast<std::size_t>(v) + 1];
      for (auto i = begin; i < end; ++i) f(adjacency_[i]);
    }
  }
  std::vector<VertexId> neighbors(VertexId v) const;
  bool adjacent(VertexId u, VertexId v) const;

  // Lattice coordinates (torus, box, cycle, ladder only).
  std::vector<std::int64_t> coords(VertexId v) const;
  VertexId vertex_at(std::span<const std::int64_t> coords) const;
  const std::vector<std::int64_t>& sides() const noexcept { return sides_; }

  // Exact graph distance when the generator has a closed form.
  std::optional<std::int64_t> closed_form_distance(VertexId u, VertexId v) const;

  // True when B(x, r) would differ from the ball of the infinite graph the
  // generator approximates (boxes and ladders near their ends). Wrapping
  // generators are never flagged.
  bool ball_truncated(VertexId x, std::int64_t r) const;

  // Edges {u < v}, lexicographically sorted; the position is the edge id.
  std::vector<Edge> edge_list() const;

  // Calls f(u, v, id) over edge_list() order without materialising it.
  template <class F>
  void for_each_edge(F&& f) const {
    require_dense("edge enumeration");
    std::int64_t id = 0;
    for (VertexId u = 0; u < n_; ++u) {
      for_each_neighbor(u, [&](VertexId w) {
        if (w > u) f(u, w, id++);
      });
    }
  }

  bool valid_vertex(VertexId v) const noexcept { return v >= 0 && v < n_; }
  void check_vertex(VertexId v) const;

 private:
  Graph() = default;
  void init_lattice(GraphKind kind, std::vector<std::int64_t> sides, bool wrap,
                    std::vector<bool> open_ends);
  void init_csr(std::int64_t n, const std::vector<Edge>& sorted_edges);
  int lattice_neighbors(VertexId v, std::array<VertexId, 2 * kMaxLatticeDim>& out) const;

  GraphKind kind_ = GraphKind::custom;
  GeneratorParams params_;
  VertexId n_ = 0;
  std::int64_t m_ = 0;
  int max_degree_ = 0;
  int min_degree_ = 0;

  bool lattice_ = false;
  bool wrap_ = false;
  std::vector<std::int64_t> sides_;
  std::vector<std::int64_t> strides_;
  std::vector<bool> open_ends_;

  std::vector<std::int64_t> offsets_;
  std::vector<VertexId> adjacency_;
};

}  // namespace scaleperc
