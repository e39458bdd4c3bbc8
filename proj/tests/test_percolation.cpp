#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "scaleperc/loop_soup.hpp"
#include "scaleperc/percolation.hpp"

using namespace scaleperc;

TEST_CASE("bernoulli site extremes and marginal") {
  auto t = Graph::torus(2, 20);
  SeedSpec s{42, stream_id("test"), 0};
  CHECK(sample_bernoulli_site(t, 1.0, s).open_count() == 400);
  CHECK(sample_bernoulli_site(t, 0.0, s).open_count() == 0);

  auto big = Graph::torus(2, 317);
  const double n = static_cast<double>(big.vertex_count());
  auto cfg = sample_bernoulli_site(big, 0.5, s);
  const double frac = cfg.open_count() / n;
  CHECK(std::abs(frac - 0.5) <= 3 * std::sqrt(0.25 / n));
  CHECK_THROWS_AS(sample_bernoulli_site(t, 1.5, s), Error);
}

TEST_CASE("site configs are reproducible and storage independent") {
  auto t = Graph::torus(2, 30);
  SeedSpec s{7, 3, 11};
  auto a = SiteConfig::bernoulli(t, 0.4, s, true);
  auto b = SiteConfig::bernoulli(t, 0.4, s, false);
  auto c = SiteConfig::bernoulli(t, 0.4, s.with_index(12), true);
  int diff = 0;
  for (VertexId v = 0; v < t.vertex_count(); ++v) {
    CHECK(a.open(v) == b.open(v));
    diff += a.open(v) != c.open(v);
  }
  CHECK(diff > 0);
  CHECK(a.provenance().seed.sample_index == 11);

  // Procedural configs on lattices far beyond memory.
  auto huge = Graph::torus(2, 1 << 22);
  auto p = sample_bernoulli_site(huge, 0.3, s);
  CHECK_FALSE(p.materialized());
  CHECK_THROWS_AS(p.set(0, true), Error);
  auto m = a;
  m.set(0, !a.open(0));
  CHECK(m.open(0) != a.open(0));
}

TEST_CASE("bond clusters at the extremes") {
  auto t = Graph::torus(2, 8);
  SeedSpec s{1, 2, 3};
  auto all = clusters(t, sample_bernoulli_bond(t, 1.0, s));
  CHECK(all.count == 1);
  CHECK(all.size[0] == 64);
  auto none = clusters(t, sample_bernoulli_bond(t, 0.0, s));
  CHECK(none.count == 64);
}

namespace {

// Same-label relation equals connectivity through open vertices.
void check_partition(const Graph& g, const SiteConfig& cfg, const ClusterLabeling& lab) {
  auto adj = oracle::adjacency(g);
  std::vector<int> comp(g.vertex_count(), -1);
  int next = 0;
  for (VertexId s = 0; s < g.vertex_count(); ++s) {
    if (!cfg.open(s) || comp[s] >= 0) continue;
    std::vector<VertexId> stack{s};
    comp[s] = next;
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (auto w : adj[v])
        if (cfg.open(w) && comp[w] < 0) {
          comp[w] = next;
          stack.push_back(w);
        }
    }
    ++next;
  }
  CHECK(lab.count == next);
  std::map<int, int> to_oracle;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (!cfg.open(v)) {
      CHECK(lab.label[v] == ClusterLabeling::kClosed);
      continue;
    }
    auto [it, fresh] = to_oracle.emplace(lab.label[v], comp[v]);
    CHECK(it->second == comp[v]);
  }
  std::int64_t total = 0;
  for (auto sz : lab.size) total += sz;
  CHECK(total == cfg.open_count());
}

}  // namespace

TEST_CASE("site clusters match an independent search") {
  for (auto g : {Graph::torus(2, 25), Graph::box(2, 17), Graph::ladder(30), Graph::complete(9)}) {
    for (double p : {0.3, 0.55, 0.8}) {
      auto cfg = sample_bernoulli_site(g, p, SeedSpec{5, 9, static_cast<std::uint64_t>(p * 100)});
      auto lab = clusters(g, cfg);
      check_partition(g, cfg, lab);
      if (lab.count > 0) {
        const auto id = lab.largest();
        CHECK(lab.diameter(g, id) == lab.diameter(g, id));
        CHECK(static_cast<std::int64_t>(lab.members(id).size()) == lab.size[id]);
      }
    }
  }
}

TEST_CASE("divide and color") {
  auto t = Graph::torus(2, 12);
  SeedSpec s{3, 4, 0};
  // p = 1: one cluster, monochrome.
  for (int i = 0; i < 20; ++i) {
    auto c = divide_and_color(t, 1.0, 0.5, s.with_index(i));
    const auto k = c.open_count();
    CHECK((k == 0 || k == 144));
  }
  // Within-sample consistency.
  for (int i = 0; i < 20; ++i) {
    auto d = divide_and_color_detailed(t, 0.4, 0.5, s.with_index(i));
    for (VertexId v = 0; v < t.vertex_count(); ++v)
      for (VertexId w : t.neighbors(v))
        if (d.bond_clusters.label[v] == d.bond_clusters.label[w]) CHECK(d.colors.open(v) == d.colors.open(w));
  }
  // Two vertices, one edge: P(both black) = p q + (1 - p) q^2.
  auto k2 = Graph::from_edges(2, {{0, 1}});
  const int N = 100000;
  int both = 0;
  for (int i = 0; i < N; ++i) {
    auto c = divide_and_color(k2, 0.5, 0.5, s.with_index(i));
    both += c.open(0) && c.open(1);
  }
  const double want = 0.375;
  CHECK(std::abs(both / double(N) - want) <= 3 * std::sqrt(want * (1 - want) / N));
  // p = 0 behaves as i.i.d. sites.
  int black = 0;
  for (int i = 0; i < 500; ++i) black += divide_and_color(t, 0.0, 0.2, s.with_index(i)).open_count();
  const double M = 500.0 * 144;
  CHECK(std::abs(black / M - 0.2) <= 3 * std::sqrt(0.16 / M));
}

TEST_CASE("loop length intensity") {
  auto k3 = Graph::complete(3);
  auto c4 = Graph::cycle(4);
  CHECK(loop_length_intensity(k3, 1.0, 2) == doctest::Approx(0.1875));
  CHECK(loop_length_intensity(c4, 0.0, 2) == doctest::Approx(1.0));
  CHECK(loop_length_intensity(c4, 0.0, 3) == 0.0);
  CHECK(loop_length_intensity(Graph::torus(2, 4), 0.5, 5) == 0.0);
  CHECK(closed_walk_trace_exact(k3, 2) == 6);
  CHECK(closed_walk_trace_exact(c4, 2) == 8);
  for (auto g : {Graph::complete(5), Graph::cycle(7), Graph::torus(2, 3), Graph::torus(3, 3)})
    for (int k = 2; k <= 12; ++k)
      CHECK(loop_length_intensity(g, 0.3, k) == doctest::Approx(loop_length_intensity_exact(g, 0.3, k)).epsilon(1e-9));
  CHECK_THROWS_AS(loop_length_intensity(Graph::box(2, 3), 1.0, 2), Error);
  CHECK_THROWS_AS(loop_length_intensity(k3, 1.0, 1), Error);
}

TEST_CASE("k_max rule") {
  for (double kappa : {0.5, 1.0, 3.0}) {
    const int k = loop_soup_k_max(16, 1.0, kappa, 1e-6);
    CHECK(loop_tail_bound(16, 1.0, kappa, k) < 1e-6);
    if (k > 2) CHECK(loop_tail_bound(16, 1.0, kappa, k - 1) >= 1e-6);
  }
  CHECK_THROWS_AS(loop_soup_k_max(16, 1.0, 0.0, 1e-6), Error);
  CHECK_THROWS_AS(loop_soup_k_max(16, 1.0, 1e-4, 1e-6, 50), Error);
}

TEST_CASE("loop soup realizations") {
  auto k3 = Graph::complete(3);
  CHECK_THROWS_AS(sample_loop_soup(k3, 0.0, 1.0, 1e-6, {}), Error);
  int empty = 0;
  for (int i = 0; i < 200; ++i) empty += sample_loop_soup(k3, 1e-9, 1.0, 1e-6, SeedSpec{1, 1, std::uint64_t(i)}).loops.empty();
  CHECK(empty == 200);

  auto t = Graph::torus(2, 5);
  LoopSoupSampler s(t, 2.0, 0.5, 1e-4);
  for (int i = 0; i < 50; ++i) {
    auto r = s.sample(SeedSpec{2, 3, std::uint64_t(i)});
    CHECK(r.eps_met);
    CHECK(r.truncation_mass < 1e-4);
    for (const auto& l : r.loops) {
      CHECK(l.length() <= r.k_max);
      CHECK(is_valid_loop(t, l));
    }
  }
  auto r = LoopSoupSampler(t, 2.0, 0.5, 1e-4).sample(SeedSpec{2, 3, 7});
  auto ov = occupied_vacant(t, r);
  std::set<VertexId> occ;
  for (const auto& l : r.loops) occ.insert(l.vertices.begin(), l.vertices.end());
  CHECK(std::vector<VertexId>(occ.begin(), occ.end()) == ov.occupied);
  CHECK(ov.occupied.size() + ov.vacant.size() == 25);

  auto none = occupied_vacant(t, LoopSoupRealization{});
  CHECK(none.occupied.empty());
  CHECK(none.vacant.size() == 25);
}

TEST_CASE("loop soup length-2 counts on C4 are Poisson with the analytic mean") {
  auto c4 = Graph::cycle(4);
  LoopSoupOptions o;
  o.max_length = 8;
  LoopSoupSampler s(c4, 1.0, 0.0, 1e-6, o);
  CHECK_FALSE(s.sample({}).eps_met);
  const int N = 10000;
  double sum = 0, sq = 0;
  for (int i = 0; i < N; ++i) {
    const double c = static_cast<double>(s.sample(SeedSpec{9, 1, std::uint64_t(i)}).count(2));
    sum += c;
    sq += c * c;
  }
  const double mean = sum / N;
  const double var = sq / N - mean * mean;
  CHECK(std::abs(mean - 1.0) <= 3 * std::sqrt(1.0 / N));
  CHECK(var / mean >= 0.9);
  CHECK(var / mean <= 1.1);
}

TEST_CASE("loop orientation on K3 is balanced") {
  auto k3 = Graph::complete(3);
  LoopSoupOptions o;
  o.max_length = 3;
  LoopSoupSampler s(k3, 50.0, 0.0, 1e-6, o);
  int fwd = 0, bwd = 0;
  for (int i = 0; i < 400; ++i) {
    for (const auto& l : s.sample(SeedSpec{4, 4, std::uint64_t(i)}).loops) {
      if (l.length() != 3) continue;
      CHECK(l.vertices[0] == 0);
      (l.vertices[1] == 1 ? fwd : bwd)++;
    }
  }
  const double n = fwd + bwd, chi = (fwd - n / 2) * (fwd - n / 2) / (n / 4);
  CHECK(n > 100);
  CHECK(chi < 10.83);  // 1 dof, p = 0.001
}

TEST_CASE("canonical rotation") {
  std::vector<VertexId> w{3, 1, 2, 1};
  CHECK(canonical_loop(w).vertices == std::vector<VertexId>{1, 2, 1, 3});
  std::vector<VertexId> w2{2, 0, 1, 0};
  CHECK(canonical_loop(w2).vertices == std::vector<VertexId>{0, 1, 0, 2});
}
