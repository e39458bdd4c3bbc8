#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "scaleperc/graph.hpp"

namespace scaleperc {

enum class DisjointMode { edge, vertex };

const char* to_string(DisjointMode m);
DisjointMode parse_disjoint_mode(const std::string& s);

struct PathPacking {
  std::vector<VertexId> A, B;  // sorted
  DisjointMode mode = DisjointMode::edge;
  std::vector<std::vector<VertexId>> paths;
  // Min-cut certificate. Edge mode: cut edges. Vertex mode: cut vertices
  // outside A and B, plus direct A-B edges in `cut`.
  std::vector<Edge> cut;
  std::vector<VertexId> cut_vertices;

  std::size_t size() const noexcept { return paths.size(); }
  std::size_t cut_size() const noexcept { return cut.size() + cut_vertices.size(); }
};

// Maximum packing of A-B paths inside the subgraph induced by `region`, using
// unit-capacity max-flow (Dinic). Paths start in A, end in B and have no other
// vertex of A or B. Vertex mode splits every vertex outside A and B.
// A and B must be nonempty, disjoint and contained in region.
PathPacking max_disjoint_paths(const Graph& g, std::span<const VertexId> A, std::span<const VertexId> B,
                               std::span<const VertexId> region, DisjointMode mode = DisjointMode::edge);

// Structural check: path validity, disjointness, |paths| == |cut| and the cut
// separating A from B inside region.
bool verify_packing(const Graph& g, const PathPacking& p, std::span<const VertexId> region);

// c_i |A|^((d_i - 1)/d_i)
double required_path_count(std::int64_t size_A, double c_i, double d_i);

struct AvoidanceReport {
  PathPacking packing;                // surviving paths; cut is the full packing's certificate
  std::size_t packed = 0;             // size of the maximum packing before filtering
  std::size_t discarded = 0;
  std::size_t centers = 0;
  std::int64_t R = 0;
  std::int64_t forbidden_vertices = 0;  // |union of balls|
  // Paths one forbidden vertex can touch (1 in vertex mode, max degree in
  // edge mode) times the summed ball sizes.
  std::int64_t capacity = 0;
  bool filter_succeeded = false;      // at least one path survived
  bool counting_bound_ok = false;     // packed > capacity, so survival is forced
};

AvoidanceReport disjoint_paths_avoiding(const Graph& g, std::span<const VertexId> A, std::span<const VertexId> B,
                                        std::span<const VertexId> region, std::span<const VertexId> centers,
                                        std::int64_t R, DisjointMode mode = DisjointMode::edge);

// Comparison: max-flow again on region minus the balls. Never smaller than
// the surviving count of the filter.
PathPacking disjoint_paths_resolved(const Graph& g, std::span<const VertexId> A, std::span<const VertexId> B,
                                    std::span<const VertexId> region, std::span<const VertexId> centers,
                                    std::int64_t R, DisjointMode mode = DisjointMode::edge);

}  // namespace scaleperc
