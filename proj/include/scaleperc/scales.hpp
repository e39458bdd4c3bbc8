#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace scaleperc {

// L_0, L_{k+1} = ceil(L_k^gamma), exact integers.
struct ScaleSequence {
  std::int64_t L0 = 2;
  double gamma = 2;
  std::vector<std::int64_t> levels;

  std::int64_t L(int k) const { return levels.at(static_cast<std::size_t>(k)); }
  int k_max() const { return static_cast<int>(levels.size()) - 1; }
};

ScaleSequence make_scales(std::int64_t L0, double gamma, int k_max);

// Natural logs of L_k = L0^(gamma^k) for scales far beyond 64-bit range.
// Rounding up is ignored here; it only matters for tiny L.
struct LogScales {
  double L0 = 2;
  double gamma = 2;
  std::vector<double> log_levels;
};

LogScales make_log_scales(double L0, double gamma, int k_max);
LogScales to_log_scales(const ScaleSequence& s);

struct ParamSet {
  double d_u = 2, c_u = 1;
  double d_l = 1, c_l = 1;
  double d_i = 2, c_i = 1;
  double alpha = 8, c_alpha = 1;
  double gamma = 2;
  int J = 1;
  int J_prime = 2;
  double beta = 1;
  double beta_prime = 2;
  double c2 = 1;  // paving constant
};

struct ParamReport {
  double alpha_star = 0;         // 2 (2 d_u d_i / (d_i - 1)) d_u - d_l
  double alpha_double_star = 0;  // 4 d_u - d_l
  double min_gamma = 0;          // 2 d_u d_i / (d_i - 1)
  double decay_threshold = 0;    // 2 gamma d_u - d_l
  double j_prime_required = 0;   // max{2, gamma beta' / (alpha - decay_threshold)}

  bool d_i_above_one = false;
  bool gamma_condition = false;  // gamma (d_i - 1) / d_i > 2 d_u
  bool alpha_above_decay = false;
  bool alpha_above_star = false;
  bool alpha_above_double_star = false;
  bool j_prime_ok = false;
  bool beta_prime_ok = false;    // beta' > max(alpha, beta)
  bool positive_constants = false;

  bool decay_hypothesis() const { return alpha_above_decay && j_prime_ok && beta_prime_ok; }
  std::vector<std::string> lines() const;
};

ParamReport check_parameters(const ParamSet& p);

struct BoundStep {
  int k = 0;
  double log_L = 0;
  double log_p = 0;           // -inf for an exact zero
  double log10_p = 0;
  bool maintained = false;    // p_k <= L_k^{-beta'}
};

struct RecursionResult {
  std::vector<BoundStep> steps;  // k_start .. k_end
  bool hypothesis_ok = false;
  std::vector<std::string> warnings;
  bool all_maintained() const;
};

// Iterates p_{k+1} = (c2 L_k^{2 gamma d_u - d_l})^{J'} (p_k + c_alpha L_k^{-alpha})^{J'}
// in log space.
RecursionResult recursion_bound_iterate(double p_start, int k_start, int k_end, const ParamSet& params,
                                        const LogScales& scales);

}  // namespace scaleperc
