#include "scaleperc/scales.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "scaleperc/error.hpp"

namespace scaleperc {

namespace {

std::string fmt(const char* pattern, double a) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

// ceil(b^g) for integers, guarding against float error at exact powers.
std::int64_t ceil_pow(std::int64_t b, double g) {
  const long double v = std::pow(static_cast<long double>(b), static_cast<long double>(g));
  require(v < 9.0e18L, ErrorKind::numeric_overflow,
          "scale " + std::to_string(b) + "^" + fmt("%g", g) + " overflows 64 bits");
  auto c = static_cast<std::int64_t>(std::ceil(v));
  // Integer gamma: compute exactly.
  if (g == std::floor(g)) {
    std::int64_t r = 1;
    for (int i = 0; i < static_cast<int>(g); ++i) r *= b;
    return r;
  }
  // Nudge when v sits within float error of an integer.
  const long double near = std::round(v);
  if (std::fabs(v - near) < 1e-9L * v) c = static_cast<std::int64_t>(near);
  return c;
}

}  // namespace

ScaleSequence make_scales(std::int64_t L0, double gamma, int k_max) {
  require(L0 >= 2, ErrorKind::invalid_argument, "L0 must be at least 2");
  require(gamma >= 2 && std::isfinite(gamma), ErrorKind::invalid_argument, "gamma must be at least 2");
  require(k_max >= 0, ErrorKind::invalid_argument, "k_max must be nonnegative");
  ScaleSequence s{L0, gamma, {L0}};
  for (int k = 0; k < k_max; ++k) s.levels.push_back(ceil_pow(s.levels.back(), gamma));
  return s;
}

LogScales make_log_scales(double L0, double gamma, int k_max) {
  require(L0 >= 2, ErrorKind::invalid_argument, "L0 must be at least 2");
  require(gamma >= 2, ErrorKind::invalid_argument, "gamma must be at least 2");
  LogScales s{L0, gamma, {}};
  for (int k = 0; k <= k_max; ++k) s.log_levels.push_back(std::pow(gamma, k) * std::log(L0));
  return s;
}

LogScales to_log_scales(const ScaleSequence& s) {
  LogScales out{static_cast<double>(s.L0), s.gamma, {}};
  for (auto L : s.levels) out.log_levels.push_back(std::log(static_cast<double>(L)));
  return out;
}

ParamReport check_parameters(const ParamSet& p) {
  ParamReport r;
  const double inf = std::numeric_limits<double>::infinity();
  r.d_i_above_one = p.d_i > 1;
  r.alpha_double_star = 4 * p.d_u - p.d_l;
  r.min_gamma = r.d_i_above_one ? 2 * p.d_u * p.d_i / (p.d_i - 1) : inf;
  r.alpha_star = r.d_i_above_one ? 2 * r.min_gamma * p.d_u - p.d_l : inf;
  r.gamma_condition = r.d_i_above_one && p.gamma * (p.d_i - 1) / p.d_i > 2 * p.d_u;
  r.decay_threshold = 2 * p.gamma * p.d_u - p.d_l;
  r.alpha_above_decay = p.alpha > r.decay_threshold;
  r.alpha_above_star = p.alpha > r.alpha_star;
  r.alpha_above_double_star = p.alpha > r.alpha_double_star;
  r.j_prime_required = r.alpha_above_decay
                           ? std::max(2.0, p.gamma * p.beta_prime / (p.alpha - r.decay_threshold))
                           : inf;
  r.j_prime_ok = p.J_prime >= r.j_prime_required;
  r.beta_prime_ok = p.beta_prime > std::max(p.alpha, p.beta);
  r.positive_constants = p.c_u > 0 && p.c_l > 0 && p.c_i > 0 && p.d_u > 0 && p.d_l > 0 && p.d_i > 0;
  return r;
}

std::vector<std::string> ParamReport::lines() const {
  auto yn = [](bool b) { return b ? "yes" : "no"; };
  std::vector<std::string> out;
  out.push_back(fmt("alpha_star=%g", alpha_star));
  out.push_back(fmt("alpha_double_star=%g", alpha_double_star));
  out.push_back(fmt("min_gamma=%g", min_gamma));
  out.push_back(fmt("decay_threshold=%g", decay_threshold));
  out.push_back(fmt("j_prime_required=%g", j_prime_required));
  out.push_back(std::string("d_i_above_one=") + yn(d_i_above_one));
  out.push_back(std::string("gamma_condition=") + yn(gamma_condition));
  out.push_back(std::string("alpha_above_decay=") + yn(alpha_above_decay));
  out.push_back(std::string("alpha_above_star=") + yn(alpha_above_star));
  out.push_back(std::string("alpha_above_double_star=") + yn(alpha_above_double_star));
  out.push_back(std::string("j_prime_ok=") + yn(j_prime_ok));
  out.push_back(std::string("beta_prime_ok=") + yn(beta_prime_ok));
  out.push_back(std::string("positive_constants=") + yn(positive_constants));
  return out;
}

bool RecursionResult::all_maintained() const {
  return std::all_of(steps.begin(), steps.end(), [](const BoundStep& s) { return s.maintained; });
}

namespace {

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

double safe_log(double x) { return x > 0 ? std::log(x) : -std::numeric_limits<double>::infinity(); }

}  // namespace

RecursionResult recursion_bound_iterate(double p_start, int k_start, int k_end, const ParamSet& params,
                                        const LogScales& scales) {
  require(p_start >= 0 && p_start <= 1, ErrorKind::invalid_argument, "p_start must lie in [0, 1]");
  require(k_start >= 0 && k_end >= k_start, ErrorKind::invalid_argument, "need 0 <= k_start <= k_end");
  require(k_end < static_cast<int>(scales.log_levels.size()), ErrorKind::invalid_argument,
          "scale sequence shorter than k_end");
  require(params.J_prime >= 1, ErrorKind::invalid_argument, "J' must be positive");
  require(params.c2 >= 0 && params.c_alpha >= 0, ErrorKind::invalid_argument, "constants must be nonnegative");

  RecursionResult res;
  const auto rep = check_parameters(params);
  res.hypothesis_ok = rep.decay_hypothesis();
  if (!rep.alpha_above_decay) res.warnings.push_back(fmt("alpha <= 2 gamma d_u - d_l = %g", rep.decay_threshold));
  if (!rep.j_prime_ok) res.warnings.push_back(fmt("J' below the required %g", rep.j_prime_required));
  if (!rep.beta_prime_ok) res.warnings.push_back("beta' <= max(alpha, beta)");
  if (params.gamma != scales.gamma) res.warnings.push_back("parameter gamma differs from the scale sequence");

  const double expo = 2 * params.gamma * params.d_u - params.d_l;
  const double jp = params.J_prime;
  double log_p = safe_log(p_start);
  for (int k = k_start; k <= k_end; ++k) {
    const double log_L = scales.log_levels[static_cast<std::size_t>(k)];
    BoundStep st;
    st.k = k;
    st.log_L = log_L;
    st.log_p = log_p;
    st.log10_p = log_p / std::log(10.0);
    // Relative slack absorbs rounding when p_k sits exactly on the bound.
    const double target = -params.beta_prime * log_L;
    st.maintained = log_p <= target + 1e-12 * std::fabs(target);
    res.steps.push_back(st);
    if (k == k_end) break;
    const double decoup = safe_log(params.c_alpha) - params.alpha * log_L;
    const double inner = log_add(log_p, decoup);
    const double count = safe_log(params.c2) + expo * log_L;
    log_p = (inner == -std::numeric_limits<double>::infinity() || params.c2 == 0)
                ? -std::numeric_limits<double>::infinity()
                : jp * (count + inner);
    log_p = std::min(log_p, 0.0);  // a probability bound never needs to exceed 1
  }
  return res;
}

}  // namespace scaleperc
