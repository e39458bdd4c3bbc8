#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "scaleperc/graph.hpp"

namespace scaleperc {

// phi : source -> target with claimed constant C. Graphs are borrowed.
struct RoughMap {
  const Graph* source = nullptr;
  const Graph* target = nullptr;
  std::vector<VertexId> map;
  double C = 1.0;
};

RoughMap make_rough_map(const Graph& source, const Graph& target, std::vector<VertexId> map, double C);

struct RoughCheckOptions {
  bool allow_sampling = false;  // when false, too-large inputs throw budget_exceeded
  std::int64_t budget_pairs = std::int64_t{1} << 26;
  std::int64_t sampled_pairs = 200'000;
  std::uint64_t seed = 1;
};

struct RoughCheckReport {
  bool holds = false;
  bool lower_ok = true;   // d/C - 1 < d'
  bool upper_ok = true;   // d' <= C d
  bool cover_ok = true;   // every target vertex within C of the image
  bool exhaustive = true;
  std::int64_t pairs_checked = 0;

  // Pair with the least slack (normalised by C), violating if !lower_ok/!upper_ok.
  VertexId worst_x = 0, worst_y = 0;
  std::int64_t worst_d_source = 0, worst_d_target = 0;

  VertexId worst_uncovered = 0;  // target vertex farthest from the image
  std::int64_t cover_radius = 0;

  // Smallest constant the data supports (recorded only; the lower
  // inequality is strict so this is an infimum).
  double min_constant = 1.0;
};

RoughCheckReport check_rough_isometry(const RoughMap& m, const RoughCheckOptions& opts = {});

// psi(x') = argmin_x d(x', phi(x)), ties to the smallest x; constant 4C^2.
// Throws verification_failed if m does not pass the check.
RoughMap rough_inverse(const RoughMap& m, const RoughCheckOptions& opts = {});

// max over target x of d(x, phi(psi(x))).
std::int64_t inverse_closeness(const RoughMap& m, const RoughMap& inverse);

struct ImageBound {
  std::int64_t image_size = 0;
  double bound = 0;  // |A| / vbar_source(C)
  std::int64_t vbar_c = 0;
  bool holds = true;
};

ImageBound image_size_lower_bound(const RoughMap& m, std::span<const VertexId> a);

// phi2 after phi1, with constant C1*C2 + C1 (only the upper inequality is implied).
RoughMap compose(const RoughMap& first, const RoughMap& second);

// Families with known constants.
std::vector<VertexId> torus_translation(const Graph& torus, std::span<const std::int64_t> shift);
std::vector<VertexId> cycle_rotation(const Graph& cycle, std::int64_t k);

// "src dst" per line, one line per source vertex (any order).
std::vector<VertexId> read_map(std::istream& in, VertexId source_size);
void write_map(std::ostream& out, std::span<const VertexId> map);

}  // namespace scaleperc
