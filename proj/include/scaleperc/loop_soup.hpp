#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "scaleperc/graph.hpp"
#include "scaleperc/metric.hpp"
#include "scaleperc/percolation.hpp"
#include "scaleperc/rng.hpp"

namespace scaleperc {

// Closed walk (x_0, ..., x_{k-1}) of k >= 2 edges, x_{k-1} ~ x_0, stored as
// its lexicographically smallest rotation.
struct Loop {
  std::vector<VertexId> vertices;
  int length() const noexcept { return static_cast<int>(vertices.size()); }
};

Loop canonical_loop(std::span<const VertexId> walk);
bool is_valid_loop(const Graph& g, const Loop& loop);

// Total mu-mass of rooted loops of length k:
// trace(A^k) / (k (Delta (1 + kappa))^k). Regular graphs only.
double loop_length_intensity(const Graph& g, double kappa, int k);

// trace(A^k) in exact integer arithmetic (|V| <= 64, k <= 20).
unsigned __int128 closed_walk_trace_exact(const Graph& g, int k);
double loop_length_intensity_exact(const Graph& g, double kappa, int k);

// Expected count bound of loops longer than k_max:
// beta |V| sum_{k > k_max} (1 + kappa)^{-k} / k  (infinite when kappa = 0).
double loop_tail_bound(VertexId n, double beta, double kappa, int k_max);
// Smallest k_max >= 2 with loop_tail_bound < eps.
int loop_soup_k_max(VertexId n, double beta, double kappa, double eps, int limit = 512);

struct LoopSoupOptions {
  // Fixed maximal length instead of the eps rule (needed for kappa = 0).
  std::optional<int> max_length;
  int k_max_limit = 512;
};

struct LoopSoupRealization {
  std::vector<Loop> loops;
  double beta = 0, kappa = 0, eps = 0;
  int k_max = 2;
  double truncation_mass = 0;  // expected number of discarded loops (bound)
  bool eps_met = true;         // truncation_mass < eps
  std::vector<std::int64_t> counts;  // index k
  Provenance provenance;

  std::int64_t count(int k) const {
    return k >= 0 && k < static_cast<int>(counts.size()) ? counts[static_cast<std::size_t>(k)] : 0;
  }
};

// Precomputes intensities and walk-count tables so repeated realizations on
// the same graph are cheap.
class LoopSoupSampler {
 public:
  LoopSoupSampler(const Graph& g, double beta, double kappa, double eps, LoopSoupOptions opts = {});

  LoopSoupRealization sample(SeedSpec seed);
  int k_max() const noexcept { return k_max_; }
  double intensity(int k) const { return mu_[static_cast<std::size_t>(k)]; }
  double truncation_mass() const noexcept { return truncation_mass_; }

 private:
  struct Bridge {
    Region region;                       // B(root, k/2)
    std::vector<std::vector<double>> h;  // h[j][local] = P_local(X_j = root)
  };
  const Bridge& bridge(VertexId root, int k);
  VertexId sample_root(int k, Rng& rng);

  const Graph* g_;
  int delta_;
  double beta_, kappa_, eps_;
  int k_max_;
  double truncation_mass_;
  bool eps_met_;
  std::vector<double> mu_;
  // Non-transitive graphs: cumulative root weights per k.
  std::vector<std::vector<double>> root_cdf_;
  std::map<std::pair<VertexId, int>, Bridge> bridges_;
};

LoopSoupRealization sample_loop_soup(const Graph& g, double beta, double kappa, double eps, SeedSpec seed,
                                     LoopSoupOptions opts = {});

struct OccupiedVacant {
  std::vector<VertexId> occupied;
  std::vector<VertexId> vacant;
};
OccupiedVacant occupied_vacant(const Graph& g, const LoopSoupRealization& r);
SiteConfig vacant_config(const Graph& g, const LoopSoupRealization& r);

}  // namespace scaleperc
