#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "scaleperc/graph.hpp"

namespace scaleperc {

// Maps global vertex ids to compact local indices 0..size-1. Small graphs use
// a flat table, large ones a hash map, so a ball in a huge lattice costs
// memory proportional to the ball.
class LocalIndex {
 public:
  explicit LocalIndex(VertexId graph_size = 0);

  std::int32_t find(VertexId v) const;
  // Returns (index, inserted).
  std::pair<std::int32_t, bool> insert(VertexId v);
  bool contains(VertexId v) const { return find(v) >= 0; }
  std::size_t size() const noexcept { return vertices_.size(); }
  const std::vector<VertexId>& vertices() const noexcept { return vertices_; }
  VertexId vertex(std::int32_t i) const { return vertices_[static_cast<std::size_t>(i)]; }

 private:
  bool dense_ = true;
  std::vector<std::int32_t> table_;
  std::unordered_map<VertexId, std::int32_t> map_;
  std::vector<VertexId> vertices_;
};

// Small graph on local indices with sorted adjacency.
struct LocalGraph {
  std::vector<std::int32_t> offsets{0};
  std::vector<std::int32_t> adj;

  std::int32_t size() const noexcept { return static_cast<std::int32_t>(offsets.size()) - 1; }
  std::span<const std::int32_t> neighbors(std::int32_t v) const {
    return {adj.data() + offsets[static_cast<std::size_t>(v)],
            static_cast<std::size_t>(offsets[static_cast<std::size_t>(v) + 1] -
                                     offsets[static_cast<std::size_t>(v)])};
  }
  static LocalGraph whole(const Graph& g);
  // Subgraph induced by the vertices of idx (local numbering of idx).
  static LocalGraph induced(const Graph& g, const LocalIndex& idx);
};

// B(center, radius) with exact distances from the center, in BFS order
// (nondecreasing distance, ties by discovery from sorted neighbour lists).
struct Region {
  VertexId center = 0;
  std::int64_t radius = 0;
  LocalIndex index;
  std::vector<std::int32_t> dist;
  std::optional<LocalGraph> local;  // induced adjacency if requested

  const std::vector<VertexId>& vertices() const noexcept { return index.vertices(); }
  std::size_t size() const noexcept { return index.size(); }
  std::int32_t local_id(VertexId v) const { return index.find(v); }
  // Number of leading vertices (in BFS order) within distance r.
  std::size_t count_within(std::int64_t r) const;
};

Region bfs_region(const Graph& g, VertexId center, std::int64_t radius, bool with_adjacency = false);

std::vector<VertexId> ball(const Graph& g, VertexId x, std::int64_t r);
std::vector<VertexId> sphere(const Graph& g, VertexId x, std::int64_t r);
std::int64_t ball_size(const Graph& g, VertexId x, std::int64_t r);

std::int64_t distance(const Graph& g, VertexId u, VertexId v);
// min over a in A, b in B of d(a, b); nullopt once it exceeds `cap`.
std::optional<std::int64_t> set_distance(const Graph& g, std::span<const VertexId> a,
                                         std::span<const VertexId> b, std::int64_t cap);

enum class BoundaryMode { edge, internal_vertex };

// Oriented (inside, outside), sorted.
std::vector<Edge> edge_boundary(const Graph& g, std::span<const VertexId> a);
std::vector<VertexId> internal_vertex_boundary(const Graph& g, std::span<const VertexId> a);

struct Boundary {
  BoundaryMode mode;
  std::vector<Edge> edges;
  std::vector<VertexId> vertices;
  std::size_t size() const { return mode == BoundaryMode::edge ? edges.size() : vertices.size(); }
};
Boundary boundary(const Graph& g, std::span<const VertexId> a, BoundaryMode mode);

// Diameter in the ambient metric of g.
std::int64_t set_diameter(const Graph& g, std::span<const VertexId> a);
bool diameter_at_least(const Graph& g, std::span<const VertexId> a, std::int64_t t);

// All-pairs distances for small graphs.
class DistanceMatrix {
 public:
  DistanceMatrix(const Graph& g, std::int64_t budget_cells = std::int64_t{1} << 26);
  std::int32_t operator()(VertexId u, VertexId v) const {
    return d_[static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v)];
  }
  VertexId size() const noexcept { return n_; }
  std::int32_t diameter() const noexcept { return diameter_; }

 private:
  VertexId n_;
  std::int32_t diameter_ = 0;
  std::vector<std::int32_t> d_;
};

struct GrowthOptions {
  std::vector<VertexId> centers;  // empty: automatic
  bool interior_only = false;     // drop centers whose r_max-ball is truncated
  std::int64_t max_auto_centers = 4096;
  std::uint64_t seed = 1;
};

struct GrowthProfile {
  std::int64_t r_max = 0;
  double d_u = 0, d_l = 0;
  std::vector<std::int64_t> vbar;  // index r = 0..r_max, max over centers
  std::vector<std::int64_t> vmin;  // min over centers
  double c_u = 0;                  // minimal with vbar(r) <= c_u r^d_u, r >= 1
  double c_l = 0;                  // maximal with vmin(r) >= c_l r^d_l, r >= 1
  std::size_t centers_used = 0;
  bool all_centers = false;        // true when every (allowed) vertex was a center
};

GrowthProfile growth_profile(const Graph& g, std::int64_t r_max, double d_u, double d_l,
                             const GrowthOptions& opts = {});

// Calls visit(set) for every connected vertex set of lg with at most max_size
// vertices, each exactly once; sets are rooted at their smallest local id and
// roots are visited in increasing order. Returning false from visit stops.
// Throws budget_exceeded once more than `budget` sets have been produced.
void enumerate_connected_subsets(const LocalGraph& lg, std::int32_t max_size, std::int64_t budget,
                                 const std::function<bool(std::span<const std::int32_t>)>& visit);

struct IsoOptions {
  std::int64_t budget = 5'000'000;
  // Sampled (non-exhaustive) mode for sizes in (s_max, sample_size_max].
  std::int64_t sampled_sets = 0;
  std::int32_t sample_size_max = 0;
  std::uint64_t seed = 1;
};

struct IsoReport {
  double c_i = 0, d_i = 0;
  std::int32_t s_max = 0;
  bool holds = true;  // exhaustive part
  std::int64_t sets_checked = 0;
  double min_ratio = 0;  // min |dA| / |A|^((d_i-1)/d_i)
  std::vector<VertexId> worst_set;
  std::int64_t worst_boundary = 0;

  bool sampled = false;  // sampled part is not exhaustive
  bool sampled_holds = true;
  std::int64_t sampled_checked = 0;
  double sampled_min_ratio = 0;
  std::vector<VertexId> sampled_worst_set;
};

IsoReport check_isoperimetry(const Graph& g, double c_i, double d_i, std::int32_t s_max,
                             const IsoOptions& opts = {});

// sigma(0..length) with d(sigma(i), sigma(j)) = |i - j|, verified.
std::vector<VertexId> find_geodesic_segment(const Graph& g, std::int64_t length);
bool is_geodesic(const Graph& g, std::span<const VertexId> path);

}  // namespace scaleperc
