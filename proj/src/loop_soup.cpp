#include "scaleperc/loop_soup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace scaleperc {

namespace {

int require_regular(const Graph& g) {
  auto d = g.regular_degree();
  require(d.has_value(), ErrorKind::not_regular, "loop soup needs a regular graph, got " + g.describe());
  return *d;
}

void check_kappa(double kappa) {
  require(kappa >= 0.0 && std::isfinite(kappa), ErrorKind::invalid_argument, "kappa must be >= 0");
}

// Normalised step h_j(w) = (1/Delta) sum_{u ~ w} h_{j-1}(u) on a region.
std::vector<double> walk_step(const LocalGraph& lg, const std::vector<double>& cur, int delta) {
  std::vector<double> nxt(cur.size(), 0.0);
  for (std::int32_t w = 0; w < lg.size(); ++w) {
    double s = 0;
    for (auto u : lg.neighbors(w)) s += cur[static_cast<std::size_t>(u)];
    nxt[static_cast<std::size_t>(w)] = s / delta;
  }
  return nxt;
}

// P_root(X_j = root), j = 0..K, for simple random walk. A walk that returns
// by time K never leaves B(root, K/2), so the region suffices.
std::vector<double> return_profile(const Graph& g, VertexId root, int K, int delta) {
  const auto reg = bfs_region(g, root, K / 2, true);
  std::vector<double> cur(reg.size(), 0.0);
  cur[0] = 1.0;
  std::vector<double> out{1.0};
  for (int j = 1; j <= K; ++j) {
    cur = walk_step(*reg.local, cur, delta);
    out.push_back(cur[0]);
  }
  return out;
}

}  // namespace

Loop canonical_loop(std::span<const VertexId> walk) {
  const std::size_t k = walk.size();
  std::size_t best = 0;
  for (std::size_t s = 1; s < k; ++s) {
    for (std::size_t i = 0; i < k; ++i) {
      const VertexId a = walk[(s + i) % k], b = walk[(best + i) % k];
      if (a != b) {
        if (a < b) best = s;
        break;
      }
    }
  }
  Loop out;
  out.vertices.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.vertices.push_back(walk[(best + i) % k]);
  return out;
}

bool is_valid_loop(const Graph& g, const Loop& loop) {
  const auto k = loop.vertices.size();
  if (k < 2) return false;
  for (auto v : loop.vertices)
    if (!g.valid_vertex(v)) return false;
  for (std::size_t i = 0; i < k; ++i)
    if (!g.adjacent(loop.vertices[i], loop.vertices[(i + 1) % k])) return false;
  return canonical_loop(loop.vertices).vertices == loop.vertices;
}

double loop_length_intensity(const Graph& g, double kappa, int k) {
  const int delta = require_regular(g);
  check_kappa(kappa);
  require(k >= 2, ErrorKind::invalid_argument, "loop length must be at least 2");
  double mass = 0;
  if (g.is_vertex_transitive()) {
    mass = static_cast<double>(g.vertex_count()) * return_profile(g, 0, k, delta)[static_cast<std::size_t>(k)];
  } else {
    require(g.vertex_count() <= 4096, ErrorKind::too_large, "per-root walk counts limited to 4096 vertices");
    for (VertexId x = 0; x < g.vertex_count(); ++x) mass += return_profile(g, x, k, delta)[static_cast<std::size_t>(k)];
  }
  return mass / (k * std::pow(1.0 + kappa, k));
}

unsigned __int128 closed_walk_trace_exact(const Graph& g, int k) {
  const auto n = static_cast<std::size_t>(g.vertex_count());
  require(n <= 64 && k >= 0 && k <= 20, ErrorKind::numeric_overflow,
          "exact walk counts limited to 64 vertices and length 20");
  using U = unsigned __int128;
  std::vector<U> a(n * n, 0), p(n * n, 0), t(n * n, 0);
  for (auto [u, v] : g.edge_list()) {
    a[static_cast<std::size_t>(u) * n + static_cast<std::size_t>(v)] = 1;
    a[static_cast<std::size_t>(v) * n + static_cast<std::size_t>(u)] = 1;
  }
  for (std::size_t i = 0; i < n; ++i) p[i * n + i] = 1;
  for (int s = 0; s < k; ++s) {
    std::fill(t.begin(), t.end(), U{0});
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) {
        if (!p[i * n + l]) continue;
        for (std::size_t j = 0; j < n; ++j) t[i * n + j] += p[i * n + l] * a[l * n + j];
      }
    std::swap(p, t);
  }
  U tr = 0;
  for (std::size_t i = 0; i < n; ++i) tr += p[i * n + i];
  return tr;
}

double loop_length_intensity_exact(const Graph& g, double kappa, int k) {
  const int delta = require_regular(g);
  check_kappa(kappa);
  require(k >= 2, ErrorKind::invalid_argument, "loop length must be at least 2");
  const auto tr = static_cast<long double>(closed_walk_trace_exact(g, k));
  const long double denom = k * std::pow(static_cast<long double>(delta) * (1.0L + kappa), k);
  return static_cast<double>(tr / denom);
}

double loop_tail_bound(VertexId n, double beta, double kappa, int k_max) {
  if (kappa <= 0.0) return std::numeric_limits<double>::infinity();
  const double x = 1.0 / (1.0 + kappa);
  double term = std::pow(x, k_max + 1);
  double sum = 0;
  for (int k = k_max + 1; term > 0; ++k) {
    const double t = term / k;
    sum += t;
    if (t < sum * 1e-17) break;
    term *= x;
  }
  return beta * static_cast<double>(n) * sum;
}

int loop_soup_k_max(VertexId n, double beta, double kappa, double eps, int limit) {
  require(beta > 0 && eps > 0, ErrorKind::invalid_argument, "beta and eps must be positive");
  require(kappa > 0, ErrorKind::invalid_argument,
          "kappa = 0 has infinite total mass; give an explicit maximal loop length");
  for (int k = 2; k <= limit; ++k)
    if (loop_tail_bound(n, beta, kappa, k) < eps) return k;
  throw Error(ErrorKind::numeric_overflow,
              "eps rule needs loops longer than the walk-table limit " + std::to_string(limit));
}

LoopSoupSampler::LoopSoupSampler(const Graph& g, double beta, double kappa, double eps, LoopSoupOptions opts)
    : g_(&g), delta_(require_regular(g)), beta_(beta), kappa_(kappa), eps_(eps) {
  require(beta > 0 && std::isfinite(beta), ErrorKind::invalid_argument, "beta must be positive");
  require(eps > 0, ErrorKind::invalid_argument, "eps must be positive");
  check_kappa(kappa);
  if (opts.max_length) {
    require(*opts.max_length >= 2, ErrorKind::invalid_argument, "maximal loop length must be at least 2");
    require(*opts.max_length <= opts.k_max_limit, ErrorKind::numeric_overflow,
            "maximal loop length exceeds the walk-table limit");
    k_max_ = *opts.max_length;
  } else {
    k_max_ = loop_soup_k_max(g.vertex_count(), beta, kappa, eps, opts.k_max_limit);
  }
  truncation_mass_ = loop_tail_bound(g.vertex_count(), beta, kappa, k_max_);
  eps_met_ = truncation_mass_ < eps;

  mu_.assign(static_cast<std::size_t>(k_max_) + 1, 0.0);
  const auto n = static_cast<double>(g.vertex_count());
  if (g.is_vertex_transitive()) {
    const auto prof = return_profile(g, 0, k_max_, delta_);
    for (int k = 2; k <= k_max_; ++k)
      mu_[static_cast<std::size_t>(k)] = n * prof[static_cast<std::size_t>(k)] / (k * std::pow(1.0 + kappa, k));
  } else {
    require(g.vertex_count() <= 4096, ErrorKind::too_large, "per-root walk counts limited to 4096 vertices");
    root_cdf_.assign(static_cast<std::size_t>(k_max_) + 1, {});
    for (VertexId x = 0; x < g.vertex_count(); ++x) {
      const auto prof = return_profile(g, x, k_max_, delta_);
      for (int k = 2; k <= k_max_; ++k) {
        auto& cdf = root_cdf_[static_cast<std::size_t>(k)];
        cdf.push_back((cdf.empty() ? 0.0 : cdf.back()) + prof[static_cast<std::size_t>(k)]);
      }
    }
    for (int k = 2; k <= k_max_; ++k)
      mu_[static_cast<std::size_t>(k)] = root_cdf_[static_cast<std::size_t>(k)].back() / (k * std::pow(1.0 + kappa, k));
  }
}

const LoopSoupSampler::Bridge& LoopSoupSampler::bridge(VertexId root, int k) {
  auto key = std::make_pair(root, k);
  auto it = bridges_.find(key);
  if (it != bridges_.end()) return it->second;
  if (bridges_.size() > 4096) bridges_.clear();
  Bridge b{bfs_region(*g_, root, k / 2, true), {}};
  std::vector<double> cur(b.region.size(), 0.0);
  cur[0] = 1.0;
  b.h.push_back(cur);
  for (int j = 1; j < k; ++j) {
    cur = walk_step(*b.region.local, cur, delta_);
    b.h.push_back(cur);
  }
  return bridges_.emplace(key, std::move(b)).first->second;
}

VertexId LoopSoupSampler::sample_root(int k, Rng& rng) {
  if (root_cdf_.empty()) {
    std::uniform_int_distribution<VertexId> pick(0, g_->vertex_count() - 1);
    return pick(rng);
  }
  const auto& cdf = root_cdf_[static_cast<std::size_t>(k)];
  std::uniform_real_distribution<double> u(0.0, cdf.back());
  const double t = u(rng);
  auto pos = std::upper_bound(cdf.begin(), cdf.end(), t) - cdf.begin();
  return static_cast<VertexId>(std::min<std::ptrdiff_t>(pos, static_cast<std::ptrdiff_t>(cdf.size()) - 1));
}

LoopSoupRealization LoopSoupSampler::sample(SeedSpec seed) {
  LoopSoupRealization out;
  out.beta = beta_;
  out.kappa = kappa_;
  out.eps = eps_;
  out.k_max = k_max_;
  out.truncation_mass = truncation_mass_;
  out.eps_met = eps_met_;
  out.counts.assign(static_cast<std::size_t>(k_max_) + 1, 0);
  out.provenance = {"loopsoup", beta_, kappa_, seed};

  Rng rng(seed.derive());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<VertexId> walk;
  for (int k = 2; k <= k_max_; ++k) {
    const double mean = beta_ * mu_[static_cast<std::size_t>(k)];
    if (mean <= 0) continue;
    std::poisson_distribution<std::int64_t> pois(mean);
    const std::int64_t count = pois(rng);
    out.counts[static_cast<std::size_t>(k)] = count;
    for (std::int64_t c = 0; c < count; ++c) {
      const VertexId root = sample_root(k, rng);
      const Bridge& b = bridge(root, k);
      const LocalGraph& lg = *b.region.local;
      walk.assign(1, root);
      std::int32_t cur = 0;
      // Step i leaves m = k - i steps; the next vertex w is weighted by the
      // number of (k - i - 1)-step walks from w back to the root.
      for (int i = 0; i + 1 < k; ++i) {
        const auto& h = b.h[static_cast<std::size_t>(k - i - 1)];
        double total = 0;
        for (auto w : lg.neighbors(cur)) total += h[static_cast<std::size_t>(w)];
        double t = unit(rng) * total;
        std::int32_t next = -1;
        for (auto w : lg.neighbors(cur)) {
          const double hw = h[static_cast<std::size_t>(w)];
          if (hw <= 0) continue;
          next = w;
          if (t < hw) break;
          t -= hw;
        }
        require(next >= 0, ErrorKind::numeric_overflow, "walk-count table underflow");
        cur = next;
        walk.push_back(b.region.vertices()[static_cast<std::size_t>(cur)]);
      }
      out.loops.push_back(canonical_loop(walk));
    }
  }
  return out;
}

LoopSoupRealization sample_loop_soup(const Graph& g, double beta, double kappa, double eps, SeedSpec seed,
                                     LoopSoupOptions opts) {
  LoopSoupSampler s(g, beta, kappa, eps, opts);
  return s.sample(seed);
}

OccupiedVacant occupied_vacant(const Graph& g, const LoopSoupRealization& r) {
  g.require_dense("occupied/vacant sets");
  std::vector<std::uint8_t> occ(static_cast<std::size_t>(g.vertex_count()), 0);
  for (const auto& loop : r.loops)
    for (auto v : loop.vertices) occ[static_cast<std::size_t>(v)] = 1;
  OccupiedVacant out;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    (occ[static_cast<std::size_t>(v)] ? out.occupied : out.vacant).push_back(v);
  return out;
}

SiteConfig vacant_config(const Graph& g, const LoopSoupRealization& r) {
  g.require_dense("vacant configuration");
  std::vector<std::uint8_t> open(static_cast<std::size_t>(g.vertex_count()), 1);
  for (const auto& loop : r.loops)
    for (auto v : loop.vertices) open[static_cast<std::size_t>(v)] = 0;
  return SiteConfig::from_states(g, std::move(open), r.provenance);
}

}  // namespace scaleperc
