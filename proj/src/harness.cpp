#include "scaleperc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "scaleperc/error.hpp"
#include "scaleperc/metric.hpp"

namespace scaleperc {

std::string fmt_num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// ---- models ----

std::string ModelSpec::describe() const {
  std::ostringstream os;
  os << kind;
  if (kind == "bernoulli-site") os << " p=" << fmt_num(p);
  else if (kind == "dac") os << " p=" << fmt_num(p) << " q=" << fmt_num(q);
  else {
    os << " beta=" << fmt_num(beta) << " kappa=" << fmt_num(kappa) << " eps=" << fmt_num(eps);
    if (max_length) os << " max_length=" << *max_length;
  }
  return os.str();
}

void validate(const ModelSpec& m) {
  static const std::set<std::string> kinds{"bernoulli-site", "dac", "loop-soup-vacant", "loop-soup-occupied"};
  require(kinds.count(m.kind) > 0, ErrorKind::invalid_argument, "unknown model '" + m.kind + "'");
  require(m.p >= 0 && m.p <= 1, ErrorKind::invalid_argument, "model p must lie in [0, 1]");
  require(m.q >= 0 && m.q <= 1, ErrorKind::invalid_argument, "model q must lie in [0, 1]");
  require(m.beta >= 0 && m.kappa >= 0 && m.eps > 0, ErrorKind::invalid_argument,
          "loop soup needs beta >= 0, kappa >= 0, eps > 0");
}

ModelSampler::ModelSampler(const Graph& g, const ModelSpec& m) : g_(&g), m_(m) {
  validate(m);
  if (m.kind.rfind("loop-soup", 0) == 0) {
    LoopSoupOptions o;
    o.max_length = m.max_length;
    soup_.emplace(g, m.beta, m.kappa, m.eps, o);
  }
}

SiteConfig ModelSampler::sample(SeedSpec seed) {
  if (m_.kind == "bernoulli-site") return SiteConfig::bernoulli(*g_, m_.p, seed, false);
  if (m_.kind == "dac") return divide_and_color(*g_, m_.p, m_.q, seed);
  auto r = soup_->sample(seed);
  if (m_.kind == "loop-soup-vacant") return vacant_config(*g_, r);
  auto ov = occupied_vacant(*g_, r);
  std::vector<std::uint8_t> s(static_cast<std::size_t>(g_->vertex_count()), 0);
  for (auto v : ov.occupied) s[static_cast<std::size_t>(v)] = 1;
  return SiteConfig::from_states(*g_, std::move(s), {"loop-soup-occupied", 0, 0, seed});
}

// ---- statistics ----

Interval wilson_interval(std::int64_t hits, std::int64_t n, double z) {
  require(n >= 1, ErrorKind::invalid_argument, "Wilson interval needs n >= 1");
  require(hits >= 0 && hits <= n, ErrorKind::invalid_argument, "hits must lie in [0, n]");
  const double nn = static_cast<double>(n);
  const double ph = static_cast<double>(hits) / nn;
  const double z2 = z * z;
  const double denom = 1 + z2 / nn;
  const double centre = (ph + z2 / (2 * nn)) / denom;
  const double half = z * std::sqrt(ph * (1 - ph) / nn + z2 / (4 * nn * nn)) / denom;
  // Clamp so the point estimate is always inside despite rounding.
  return {std::min(ph, std::max(0.0, centre - half)), std::max(ph, std::min(1.0, centre + half))};
}

EstimateRow make_row(std::string label, std::int64_t hits, std::int64_t n) {
  const auto iv = wilson_interval(hits, n);
  return {std::move(label), n, hits, static_cast<double>(hits) / static_cast<double>(n), iv.lo, iv.hi};
}

namespace {

void check_run(const RunOptions& run) {
  require(run.n >= 1, ErrorKind::invalid_argument, "number of samples must be at least 1");
  require(run.workers >= 1, ErrorKind::invalid_argument, "workers must be at least 1");
}

// Per-worker samplers, created lazily inside the worker.
class SamplerPool {
 public:
  SamplerPool(const Graph& g, const ModelSpec& m, int workers) : g_(g), m_(m), pool_(static_cast<std::size_t>(workers)) {
    validate(m);
  }
  ModelSampler& get(int w) {
    auto& s = pool_[static_cast<std::size_t>(w)];
    if (!s) s.emplace(g_, m_);
    return *s;
  }

 private:
  const Graph& g_;
  const ModelSpec& m_;
  std::vector<std::optional<ModelSampler>> pool_;
};

}  // namespace

// ---- event probability ----

EstimateRow estimate_event_probability(const Graph& g, const ModelSpec& model, const EventSpec& event, VertexId x,
                                       const RunOptions& run) {
  check_run(run);
  g.check_vertex(x);
  std::optional<SeparationWindow> window;
  if (event.kind == "sep-open") window.emplace(g, x, event.L);
  else if (event.kind != "crossing" && event.kind != "sep-exact" && event.kind != "vertex-open")
    throw Error(ErrorKind::invalid_argument, "unknown event '" + event.kind + "'");
  if (event.kind == "crossing") {
    // Surface geometry errors before sampling.
    detect_crossing(g, SiteConfig::constant(g, false), x, event.L);
  }

  SamplerPool pool(g, model, run.workers);
  std::vector<std::uint8_t> hit(static_cast<std::size_t>(run.n));
  parallel_for(hit.size(), run.workers, [&](std::size_t i, int w) {
    auto cfg = pool.get(w).sample(sample_seed(run.master_seed, run.estimator, i));
    bool h = false;
    if (event.kind == "vertex-open") h = cfg.open(x);
    else if (event.kind == "crossing") h = detect_crossing(g, cfg, x, event.L).occurred;
    else if (event.kind == "sep-open") h = window->detect(cfg).occurred;
    else h = detect_separation_exact(g, cfg, x, event.L, event.exact_budget).occurred;
    hit[i] = h;
  });
  const auto hits = std::count(hit.begin(), hit.end(), 1);
  return make_row(event.kind + "@" + std::to_string(x) + ",L=" + std::to_string(event.L), hits, run.n);
}

// ---- p_k curves ----

std::vector<VertexId> choose_centers(const Graph& g, const CenterSpec& spec) {
  if (!spec.centers.empty()) {
    for (auto c : spec.centers) g.check_vertex(c);
    return spec.centers;
  }
  if (spec.count == 0 && g.is_vertex_transitive()) return {0};
  const std::int64_t want = std::min<std::int64_t>(spec.count == 0 ? 16 : spec.count, g.vertex_count());
  Rng rng(spec.seed);
  std::set<VertexId> picked;
  std::uniform_int_distribution<VertexId> pick(0, g.vertex_count() - 1);
  while (static_cast<std::int64_t>(picked.size()) < want) picked.insert(pick(rng));
  return {picked.begin(), picked.end()};
}

std::string PkCurve::csv_header() { return "k,L_k,center,kind,mode,n,hits,p_hat,lo,hi"; }

std::string PkCurve::csv() const {
  std::ostringstream os;
  os << csv_header() << '\n';
  for (const auto& r : rows)
    os << r.k << ',' << r.L << ',' << r.center << ',' << r.kind << ',' << r.mode << ',' << r.n << ',' << r.hits
       << ',' << fmt_num(r.p_hat) << ',' << fmt_num(r.lo) << ',' << fmt_num(r.hi) << '\n';
  return os.str();
}

const PkRow& PkCurve::max_row(int k) const {
  for (const auto& r : rows)
    if (r.k == k && r.center == "max") return r;
  throw Error(ErrorKind::invalid_argument, "no max row for k=" + std::to_string(k));
}

PkCurve estimate_pk_curve(const Graph& g, const ModelSpec& model, const ScaleSequence& scales, const PkOptions& opts,
                          const RunOptions& run) {
  check_run(run);
  require(!opts.ks.empty(), ErrorKind::invalid_argument, "p_k curve needs at least one k");
  require(opts.kind == "crossing" || opts.kind == "sep-open" || opts.kind == "sep-exact",
          ErrorKind::invalid_argument, "p_k curve event must be crossing, sep-open or sep-exact");
  const auto centers = choose_centers(g, opts.centers);

  struct Cell {
    int k;
    std::int64_t L;
    VertexId x;
    std::optional<SeparationWindow> window;
  };
  std::vector<Cell> cells;
  for (int k : opts.ks) {
    require(k >= 0 && k <= scales.k_max(), ErrorKind::invalid_argument, "k outside the scale sequence");
    for (VertexId x : centers) {
      Cell c{k, scales.L(k), x, std::nullopt};
      // Building the geometry validates the cell before any sampling.
      if (opts.kind == "sep-open") c.window.emplace(g, x, c.L);
      else if (opts.kind == "crossing") detect_crossing(g, SiteConfig::constant(g, false), x, c.L);
      else detect_separation_exact(g, SiteConfig::constant(g, true), x, c.L, opts.exact_budget);
      cells.push_back(std::move(c));
    }
  }
  const bool compare = opts.compare_exact && opts.kind == "sep-open";
  const std::size_t width = cells.size() * (compare ? 2 : 1);

  SamplerPool pool(g, model, run.workers);
  std::vector<std::uint8_t> hit(static_cast<std::size_t>(run.n) * width);
  parallel_for(static_cast<std::size_t>(run.n), run.workers, [&](std::size_t i, int w) {
    auto cfg = pool.get(w).sample(sample_seed(run.master_seed, run.estimator, i));
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto& cell = cells[c];
      bool h;
      if (opts.kind == "sep-open") h = cell.window->detect(cfg).occurred;
      else if (opts.kind == "crossing") h = detect_crossing(g, cfg, cell.x, cell.L).occurred;
      else h = detect_separation_exact(g, cfg, cell.x, cell.L, opts.exact_budget).occurred;
      hit[i * width + c] = h;
      if (compare)
        hit[i * width + cells.size() + c] = detect_separation_exact(g, cfg, cell.x, cell.L, opts.exact_budget).occurred;
    }
  });

  PkCurve out;
  out.metadata["model"] = model.describe();
  out.metadata["graph"] = g.describe();
  out.metadata["master_seed"] = std::to_string(run.master_seed);
  out.metadata["center_aggregate"] = "max over sampled centers (sup convention)";
  out.metadata["centers"] = std::to_string(centers.size());
  auto count = [&](std::size_t col) {
    std::int64_t h = 0;
    for (std::int64_t i = 0; i < run.n; ++i) h += hit[static_cast<std::size_t>(i) * width + col];
    return h;
  };
  auto emit = [&](int k, std::int64_t L, std::string center, std::string kind, std::string mode, std::int64_t h) {
    auto r = make_row("", h, run.n);
    out.rows.push_back({k, L, std::move(center), std::move(kind), std::move(mode), r.n, r.hits, r.p_hat, r.lo, r.hi});
  };
  for (int k : opts.ks) {
    const std::int64_t L = scales.L(k);
    const std::string mode = opts.kind == "sep-open" && separation_threshold(L) > 1 ? "sound-subevent" : "exact";
    std::int64_t best = -1;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c].k != k) continue;
      const auto h = count(c);
      best = std::max(best, h);
      emit(k, L, std::to_string(cells[c].x), opts.kind, mode, h);
      if (compare) {
        const auto he = count(cells.size() + c);
        emit(k, L, std::to_string(cells[c].x), "sep-exact", "exact-oracle", he);
        std::int64_t differ = 0;
        for (std::int64_t i = 0; i < run.n; ++i)
          differ += hit[static_cast<std::size_t>(i) * width + c] != hit[static_cast<std::size_t>(i) * width + cells.size() + c];
        emit(k, L, std::to_string(cells[c].x), "sep-open-vs-exact", "divergence", differ);
        if (differ > 0)
          out.warnings.push_back("k=" + std::to_string(k) + " center " + std::to_string(cells[c].x) + ": detectors disagree on " +
                                 std::to_string(differ) + " samples");
      }
    }
    emit(k, L, "max", opts.kind, mode, best);
  }
  return out;
}

// ---- decoupling ----

std::string DecouplingReport::csv_header() { return "r,alpha,pG,pGp,pJoint,defect,c_alpha_implied"; }

std::string DecouplingReport::csv() const {
  std::ostringstream os;
  os << csv_header() << '\n';
  for (const auto& r : rows)
    os << r.r << ',' << fmt_num(r.alpha) << ',' << fmt_num(r.pG) << ',' << fmt_num(r.pGp) << ',' << fmt_num(r.pJoint)
       << ',' << fmt_num(r.defect) << ',' << (r.c_alpha_implied ? fmt_num(*r.c_alpha_implied) : "undefined") << '\n';
  return os.str();
}

DecouplingReport estimate_decoupling_defect(const Graph& g, const ModelSpec& model, const DecouplingOptions& opts,
                                            const RunOptions& run) {
  check_run(run);
  require(!opts.radii.empty(), ErrorKind::invalid_argument, "decoupling needs at least one radius");
  require(opts.alpha > 0, ErrorKind::invalid_argument, "alpha must be positive");
  require(opts.near == "all-open" || opts.near == "any-open", ErrorKind::invalid_argument,
          "near event must be all-open or any-open");
  const auto dxy = distance(g, opts.x, opts.y);
  std::vector<std::vector<VertexId>> near_balls;
  for (auto r : opts.radii) {
    require(r >= 1, ErrorKind::invalid_argument, "radii must be positive");
    // The far event must live outside B(x, 2r).
    require(dxy - opts.far_radius > 2 * r, ErrorKind::invalid_argument,
            "far event at distance " + std::to_string(dxy) + " is not outside B(x, 2r) for r=" + std::to_string(r));
    near_balls.push_back(ball(g, opts.x, r));
  }
  const auto far_ball = ball(g, opts.y, opts.far_radius);

  const std::size_t m = opts.radii.size();
  SamplerPool pool(g, model, run.workers);
  // Per sample: near outcome per radius, then the far outcome.
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(run.n) * (m + 1));
  parallel_for(static_cast<std::size_t>(run.n), run.workers, [&](std::size_t i, int w) {
    auto cfg = pool.get(w).sample(sample_seed(run.master_seed, run.estimator, i));
    for (std::size_t j = 0; j < m; ++j) {
      const auto& b = near_balls[j];
      const bool all = opts.near == "all-open";
      bool h = all;
      for (auto v : b)
        if (cfg.open(v) != all) {
          h = !all;
          break;
        }
      bits[i * (m + 1) + j] = h;
    }
    bits[i * (m + 1) + m] = std::all_of(far_ball.begin(), far_ball.end(), [&](VertexId v) { return cfg.open(v); });
  });

  DecouplingReport rep;
  rep.metadata["model"] = model.describe();
  rep.metadata["graph"] = g.describe();
  rep.metadata["near"] = opts.near;
  rep.metadata["far"] = "all of B(" + std::to_string(opts.y) + "," + std::to_string(opts.far_radius) + ") open";
  const double n = static_cast<double>(run.n);
  for (std::size_t j = 0; j < m; ++j) {
    double sg = 0, sf = 0, sj = 0;
    for (std::int64_t i = 0; i < run.n; ++i) {
      const double a = bits[static_cast<std::size_t>(i) * (m + 1) + j];
      const double b = bits[static_cast<std::size_t>(i) * (m + 1) + m];
      sg += a;
      sf += b;
      sj += a * b;
    }
    DecouplingRow row;
    row.r = opts.radii[j];
    row.alpha = opts.alpha;
    row.pG = sg / n;
    row.pGp = sf / n;
    row.pJoint = sj / n;
    row.defect = row.pJoint - row.pG * row.pGp;
    // Delta-method standard error of the sample covariance.
    double var = 0;
    for (std::int64_t i = 0; i < run.n; ++i) {
      const double a = bits[static_cast<std::size_t>(i) * (m + 1) + j];
      const double b = bits[static_cast<std::size_t>(i) * (m + 1) + m];
      const double d = (a - row.pG) * (b - row.pGp) - row.defect;
      var += d * d;
    }
    row.sigma = std::sqrt(var / n / n);
    if (row.pGp > 0)
      row.c_alpha_implied = std::max(0.0, row.defect / row.pGp) * std::pow(static_cast<double>(row.r), opts.alpha);
    rep.rows.push_back(row);
  }
  return rep;
}

// ---- cluster tails ----

std::string TailReport::csv_header() { return "threshold,n,hits,tail_hat,v_theta_product"; }

std::string TailReport::csv() const {
  std::ostringstream os;
  os << csv_header() << '\n';
  for (const auto& r : rows)
    os << r.threshold << ',' << r.n << ',' << r.hits << ',' << fmt_num(r.tail_hat) << ',' << fmt_num(r.v_theta_product)
       << '\n';
  return os.str();
}

TailReport estimate_cluster_tails(const Graph& g, const ModelSpec& model, const TailOptions& opts,
                                  const RunOptions& run) {
  check_run(run);
  g.check_vertex(opts.x);
  g.require_dense("cluster tail estimation");
  require(!opts.thresholds.empty(), ErrorKind::invalid_argument, "need at least one threshold");
  require(std::is_sorted(opts.thresholds.begin(), opts.thresholds.end()), ErrorKind::invalid_argument,
          "thresholds must be sorted ascending");
  const auto proxy = opts.proxy.value_or(
      g.kind() == GraphKind::box || g.kind() == GraphKind::ladder ? InfiniteProxy::boundary : InfiniteProxy::largest);
  if (proxy == InfiniteProxy::boundary)
    require(g.is_implicit() && g.kind() != GraphKind::torus && g.kind() != GraphKind::cycle,
            ErrorKind::invalid_argument, "boundary proxy needs a box or ladder");

  auto on_boundary = [&](VertexId v) {
    auto c = g.coords(v);
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c[i] == 0 || c[i] == g.sides()[i] - 1) return true;
    return false;
  };

  SamplerPool pool(g, model, run.workers);
  // Per sample: size-or-diameter statistic of C_x, or -1 when C_x is empty
  // or counts as infinite.
  std::vector<std::int64_t> stat(static_cast<std::size_t>(run.n), -1);
  parallel_for(stat.size(), run.workers, [&](std::size_t i, int w) {
    auto cfg = pool.get(w).sample(sample_seed(run.master_seed, run.estimator, i));
    if (!cfg.open(opts.x)) return;
    std::vector<VertexId> members;
    if (proxy == InfiniteProxy::largest) {
      auto lab = clusters(g, cfg);
      const auto id = lab.label[static_cast<std::size_t>(opts.x)];
      if (id == lab.largest()) return;
      members = lab.members(id);
    } else {
      LocalIndex seen(g.vertex_count());
      std::queue<VertexId> q;
      seen.insert(opts.x);
      q.push(opts.x);
      while (!q.empty()) {
        const VertexId u = q.front();
        q.pop();
        if (on_boundary(u)) return;
        members.push_back(u);
        g.for_each_neighbor(u, [&](VertexId v) {
          if (cfg.open(v) && seen.insert(v).second) q.push(v);
        });
      }
    }
    stat[i] = opts.mode == TailMode::volume ? static_cast<std::int64_t>(members.size()) : set_diameter(g, members);
  });

  TailReport rep;
  rep.theta = opts.theta;
  rep.metadata["model"] = model.describe();
  rep.metadata["graph"] = g.describe();
  rep.metadata["mode"] = opts.mode == TailMode::volume ? "volume" : "diameter";
  rep.metadata["infinite_proxy"] = proxy == InfiniteProxy::boundary ? "boundary-touching" : "largest-cluster";
  std::vector<double> lx, ly;
  for (auto t : opts.thresholds) {
    const auto hits = std::count_if(stat.begin(), stat.end(), [&](std::int64_t s) { return s > t; });
    TailRow row{t, run.n, hits, static_cast<double>(hits) / static_cast<double>(run.n), 0};
    row.v_theta_product = std::pow(static_cast<double>(t), opts.theta) * row.tail_hat;
    if (row.tail_hat > 0 && t > 0) {
      lx.push_back(std::log(static_cast<double>(t)));
      ly.push_back(std::log(row.tail_hat));
    }
    rep.rows.push_back(row);
  }
  if (lx.size() >= 2) {
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(lx.size());
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(ly.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    if (sxx > 0) rep.fitted_slope = sxy / sxx;
  }
  return rep;
}

}  // namespace scaleperc
