#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scaleperc/graph.hpp"
#include "scaleperc/metric.hpp"
#include "scaleperc/percolation.hpp"
#include "scaleperc/scales.hpp"

namespace scaleperc {

// ---- paving ----

struct PavingOptions {
  double d_u = 2, d_l = 1;  // only used for achieved_c2
};

struct Paving {
  VertexId x = 0;
  std::int64_t r = 0, s = 0;
  std::vector<VertexId> K;  // sorted
  double achieved_c2 = 0;   // |K| s^d_l / r^(2 d_u)
};

// Greedy maximal s-separated subset of B(x, 2r^2), scanned in increasing id.
Paving build_paving(const Graph& g, VertexId x, std::int64_t r, std::int64_t s, const PavingOptions& opts = {});

struct PavingCheck {
  bool subset_ok = false, separated_ok = false, covers_ok = false, c2_ok = false;
  bool all() const { return subset_ok && separated_ok && covers_ok && c2_ok; }
};
PavingCheck check_paving(const Graph& g, const Paving& p, const PavingOptions& opts = {});

// A set of net points. Explicit nets hold their points; lattice nets are all
// torus vertices whose coordinates are multiples of `spacing`, so they work on
// tori far too large to enumerate.
class PavingNet {
 public:
  static PavingNet explicit_points(const Graph& g, std::vector<VertexId> points);
  static PavingNet from_paving(const Graph& g, const Paving& p) { return explicit_points(g, p.K); }
  static PavingNet lattice(const Graph& g, std::int64_t spacing);

  bool is_lattice() const noexcept { return spacing_ > 0; }
  std::int64_t spacing() const noexcept { return spacing_; }
  bool contains(VertexId v) const;
  // Nearest net point within `radius` of v (ties to the smaller id).
  std::optional<VertexId> cover_point(VertexId v, std::int64_t radius) const;
  // Net points within distance R of x, sorted.
  std::vector<VertexId> points_within(VertexId x, std::int64_t R) const;
  // Every vertex is within this distance of the net (lattice nets only).
  std::optional<std::int64_t> covering_radius() const;
  const std::vector<VertexId>& points() const noexcept { return points_; }

 private:
  explicit PavingNet(const Graph& g) : g_(&g) {}
  const Graph* g_;
  std::int64_t spacing_ = 0;
  std::vector<VertexId> points_;
};

// True when every vertex of B(x, R) lies within `radius` of the net.
bool net_covers(const Graph& g, const PavingNet& net, VertexId x, std::int64_t R, std::int64_t radius);

// ---- events ----

enum class EventKind { crossing, separation_open, separation_exact, g0 };
enum class EventMode { exact, sound_subevent };

const char* to_string(EventKind k);
const char* to_string(EventMode m);
// "crossing", "sep-open", "sep-exact", "g0" (underscore spellings accepted)
EventKind parse_event_kind(const std::string& s);

struct EventReport {
  EventKind kind = EventKind::crossing;
  VertexId center = 0;
  std::int64_t L = 0;
  bool occurred = false;
  EventMode mode = EventMode::exact;
  // Crossing: one open path. Separation: the two witness sets.
  std::vector<std::vector<VertexId>> witnesses;
  bool vacuous = false;    // G0 with an empty index grid
  int k = -1;              // G0: failing scale index
  std::int64_t i = -1;     // G0: failing grid index
  std::string note;

  std::string witness_summary() const;
  static std::string csv_header();
  std::string csv_row() const;
};

struct EventOptions {
  // Boxes and ladders: allow balls that hit the boundary.
  bool allow_truncated = false;
  // Separation: cap on the witness family size.
  std::int64_t max_family = std::int64_t{1} << 24;
};

// Open path from B(x,3L) to the sphere of radius 3L^2, within B(x,3L^2).
EventReport detect_crossing(const Graph& g, const SiteConfig& cfg, VertexId x, std::int64_t L,
                            const EventOptions& opts = {});

// Diameter threshold ceil(L/100) for the separation witnesses.
std::int64_t separation_threshold(std::int64_t L);

// Geometry of one separation window, reusable across configurations.
//
// The witness family F is fixed: adjacent pairs in B(x,3L) when the diameter
// threshold is 1, otherwise canonical geodesic paths of that length inside
// B(x,3L). Each A in F gets the set T(A) of open clusters of B(x,3L^2) that
// meet A or its neighbours; A and A' are joined by an interior-open path iff
// T(A) and T(A') intersect. The detector fires when some pair at distance > 1
// has disjoint label sets. That is always a genuine separation, opening a
// vertex can only merge or add labels so the event is decreasing, and at
// threshold 1 every connected witness contains a member of F, so the
// detector then agrees with the exhaustive search over connected witnesses.
class SeparationWindow {
 public:
  SeparationWindow(const Graph& g, VertexId x, std::int64_t L, const EventOptions& opts = {});
  EventReport detect(const SiteConfig& cfg) const;

  VertexId center() const noexcept { return x_; }
  std::int64_t L() const noexcept { return L_; }
  std::size_t family_size() const noexcept { return fam_offsets_.size() - 1; }
  std::size_t region_size() const noexcept { return region_.size(); }

 private:
  const Graph* g_;
  VertexId x_;
  std::int64_t L_;
  std::int64_t t_;
  Region region_;
  std::size_t inner_ = 0;
  std::vector<std::int32_t> fam_offsets_{0};
  std::vector<std::int32_t> fam_;
};

EventReport detect_separation_open(const Graph& g, const SiteConfig& cfg, VertexId x, std::int64_t L,
                                   const EventOptions& opts = {});

// Exhaustive search over pairs of connected subsets of B(x,3L). Throws
// budget_exceeded once more than `budget` subsets are enumerated.
EventReport detect_separation_exact(const Graph& g, const SiteConfig& cfg, VertexId x, std::int64_t L,
                                    std::int64_t budget = 200000, const EventOptions& opts = {});

// ---- cascading ----

struct CascadeReport {
  EventKind kind = EventKind::crossing;
  int k = 0;
  int J = 0;
  bool vacuous = false;     // the scale k+1 event did not occur
  bool found_all = false;   // J witnesses located
  bool pairwise_ok = false; // d(y_j, y_l) >= 9 L_k^2
  bool events_ok = false;   // every E(y_j, L_k) occurs
  std::vector<VertexId> y;
  std::vector<VertexId> hits;            // crossing: x_j on the spheres
  std::vector<std::int64_t> radii;       // crossing: sphere radii
  std::vector<EventReport> events;
  EventReport top;
  std::string note;

  bool passed() const { return vacuous || (found_all && pairwise_ok && events_ok); }
};

CascadeReport verify_cascading(const Graph& g, const SiteConfig& cfg, EventKind kind, VertexId x,
                               const ScaleSequence& scales, int k, int J, const PavingNet& net,
                               const EventOptions& opts = {});

// ---- G0 ----

// Complements of the separation detector on x_{k,i} = sigma(floor(i L_k^2/10)),
// i = 0..floor(L_{k+1}^2 / L_k^2), k = k0..k_top. Windows are built once.
class G0Evaluator {
 public:
  G0Evaluator(const Graph& g, std::vector<VertexId> sigma, const ScaleSequence& scales, int k0, int k_top,
              const EventOptions& opts = {});
  // occurred == G0 holds on the truncated grid.
  EventReport evaluate(const SiteConfig& cfg) const;
  std::size_t window_count() const noexcept { return windows_.size(); }

 private:
  struct Cell {
    int k;
    std::int64_t i;
    std::size_t window;
  };
  std::vector<SeparationWindow> windows_;
  std::vector<Cell> cells_;
  bool vacuous_ = false;
  bool exact_ = true;
  VertexId origin_ = 0;
  std::int64_t L0_ = 0;
};

EventReport event_G0(const Graph& g, const SiteConfig& cfg, const std::vector<VertexId>& sigma,
                     const ScaleSequence& scales, int k0, int k_top, const EventOptions& opts = {});

}  // namespace scaleperc
