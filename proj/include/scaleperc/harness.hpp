#pragma once

#include <atomic>
#include <exception>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "scaleperc/graph.hpp"
#include "scaleperc/loop_soup.hpp"
#include "scaleperc/percolation.hpp"
#include "scaleperc/renorm.hpp"
#include "scaleperc/rng.hpp"

namespace scaleperc {

// ---- sampling models ----

struct ModelSpec {
  // bernoulli-site, dac, loop-soup-vacant, loop-soup-occupied
  std::string kind = "bernoulli-site";
  double p = 0.5, q = 0.5;
  double beta = 1, kappa = 0, eps = 1e-6;
  std::optional<int> max_length;
  std::string describe() const;
};

void validate(const ModelSpec& m);

// Not thread-safe (loop soups cache bridge tables); use one per worker.
class ModelSampler {
 public:
  ModelSampler(const Graph& g, const ModelSpec& m);
  SiteConfig sample(SeedSpec seed);

 private:
  const Graph* g_;
  ModelSpec m_;
  std::optional<LoopSoupSampler> soup_;
};

// ---- statistics ----

struct Interval {
  double lo = 0, hi = 1;
};
Interval wilson_interval(std::int64_t hits, std::int64_t n, double z = 1.959963984540054);

// Runs f(i, worker) for i in [0, n). Work is handed out dynamically, so callers
// must write results into per-index slots and aggregate in index order.
template <class F>
void parallel_for(std::size_t n, int workers, F&& f) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i, 0);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i; !failed && (i = next++) < n;) f(i, w);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// Per-sample seed: hash of (master seed, estimator id, sample index).
inline SeedSpec sample_seed(std::uint64_t master, const std::string& estimator, std::uint64_t index) {
  return SeedSpec{master, stream_id(estimator.c_str()), index};
}

struct RunOptions {
  std::int64_t n = 1000;
  std::uint64_t master_seed = 1;
  std::string estimator = "estimate";
  int workers = 1;
};

// ---- event probability ----

struct EventSpec {
  std::string kind = "crossing";  // crossing, sep-open, sep-exact, vertex-open
  std::int64_t L = 1;
  std::int64_t exact_budget = 200000;
};

struct EstimateRow {
  std::string label;
  std::int64_t n = 0, hits = 0;
  double p_hat = 0, lo = 0, hi = 0;
};

EstimateRow make_row(std::string label, std::int64_t hits, std::int64_t n);

EstimateRow estimate_event_probability(const Graph& g, const ModelSpec& model, const EventSpec& event, VertexId x,
                                       const RunOptions& run);

// ---- p_k curves ----

struct CenterSpec {
  std::vector<VertexId> centers;  // explicit list wins
  std::int64_t count = 0;         // 0: one center on transitive graphs, 16 otherwise
  std::uint64_t seed = 1;
};

std::vector<VertexId> choose_centers(const Graph& g, const CenterSpec& spec);

struct PkRow {
  int k = 0;
  std::int64_t L = 0;
  std::string center;  // vertex id, or "max"
  std::string kind, mode;
  std::int64_t n = 0, hits = 0;
  double p_hat = 0, lo = 0, hi = 0;
};

struct PkOptions {
  std::string kind = "sep-open";  // crossing, sep-open, sep-exact
  std::vector<int> ks;
  CenterSpec centers;
  // With sep-open: also run the exhaustive oracle and emit a divergence row.
  bool compare_exact = false;
  std::int64_t exact_budget = 200000;
};

struct PkCurve {
  std::vector<PkRow> rows;
  std::vector<std::string> warnings;
  std::map<std::string, std::string> metadata;
  static std::string csv_header();
  std::string csv() const;
  // The per-k "max" row.
  const PkRow& max_row(int k) const;
};

PkCurve estimate_pk_curve(const Graph& g, const ModelSpec& model, const ScaleSequence& scales, const PkOptions& opts,
                          const RunOptions& run);

// ---- decoupling ----

struct DecouplingOptions {
  VertexId x = 0;
  VertexId y = 0;                 // far event centre
  std::vector<std::int64_t> radii;
  double alpha = 2;
  std::string near = "all-open";  // all-open or any-open on B(x, r)
  std::int64_t far_radius = 0;    // far event: all of B(y, far_radius) open
};

struct DecouplingRow {
  std::int64_t r = 0;
  double alpha = 0;
  double pG = 0, pGp = 0, pJoint = 0;
  double defect = 0, sigma = 0;
  std::optional<double> c_alpha_implied;  // undefined when pGp == 0
};

struct DecouplingReport {
  std::vector<DecouplingRow> rows;
  std::map<std::string, std::string> metadata;
  static std::string csv_header();
  std::string csv() const;
};

DecouplingReport estimate_decoupling_defect(const Graph& g, const ModelSpec& model, const DecouplingOptions& opts,
                                            const RunOptions& run);

// ---- cluster tails ----

enum class TailMode { diameter, volume };
enum class InfiniteProxy { boundary, largest };

struct TailOptions {
  VertexId x = 0;
  std::vector<std::int64_t> thresholds;
  double theta = 1;
  TailMode mode = TailMode::diameter;
  std::optional<InfiniteProxy> proxy;  // default: boundary on boxes, largest otherwise
};

struct TailRow {
  std::int64_t threshold = 0;
  std::int64_t n = 0, hits = 0;
  double tail_hat = 0;
  double v_theta_product = 0;
};

struct TailReport {
  std::vector<TailRow> rows;
  double theta = 0;
  std::optional<double> fitted_slope;  // log-log slope over positive estimates
  std::map<std::string, std::string> metadata;
  static std::string csv_header();
  std::string csv() const;
};

TailReport estimate_cluster_tails(const Graph& g, const ModelSpec& model, const TailOptions& opts,
                                  const RunOptions& run);

// Shared number formatting for CSV output.
std::string fmt_num(double v);

}  // namespace scaleperc
