#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "scaleperc/flows.hpp"
#include "scaleperc/metric.hpp"

using namespace scaleperc;

namespace {

std::vector<VertexId> all_vertices(const Graph& g) {
  std::vector<VertexId> v(static_cast<std::size_t>(g.vertex_count()));
  for (VertexId i = 0; i < g.vertex_count(); ++i) v[static_cast<std::size_t>(i)] = i;
  return v;
}

Graph random_connected(int n, double extra, std::mt19937_64& rng) {
  std::vector<Edge> e;
  for (int v = 1; v < n; ++v) e.emplace_back(static_cast<VertexId>(rng() % v), v);
  std::bernoulli_distribution coin(extra);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin(rng) && std::find(e.begin(), e.end(), Edge{u, v}) == e.end()) e.emplace_back(u, v);
  return Graph::from_edges(n, e);
}

std::vector<VertexId> from_mask(std::uint32_t m) {
  std::vector<VertexId> out;
  for (int i = 0; i < 32; ++i)
    if (m >> i & 1) out.push_back(i);
  return out;
}

}  // namespace

TEST_CASE("flow examples") {
  auto c = Graph::cycle(10);
  auto all = all_vertices(c);
  std::vector<VertexId> a{0}, b{5};
  auto p = max_disjoint_paths(c, a, b, all);
  CHECK(p.size() == 2);
  CHECK(p.cut.size() == 2);
  CHECK(verify_packing(c, p, all));

  auto k4 = Graph::complete(4);
  std::vector<VertexId> u{0}, v{3};
  auto q = max_disjoint_paths(k4, u, v, all_vertices(k4));
  CHECK(q.size() == 3);
  CHECK(verify_packing(k4, q, all_vertices(k4)));

  std::vector<VertexId> split{0, 1, 2, 6, 7, 8};  // {0,1,2} and {6,7,8} not joined
  std::vector<VertexId> a1{1}, b1{7};
  auto r = max_disjoint_paths(c, a1, b1, split);
  CHECK(r.size() == 0);
  CHECK(r.cut.empty());

  CHECK_THROWS_AS(max_disjoint_paths(c, std::vector<VertexId>{}, b, all), Error);
  CHECK_THROWS_AS(max_disjoint_paths(c, a, a, all), Error);
  CHECK_THROWS_AS(max_disjoint_paths(c, a, b, split), Error);
  CHECK(parse_disjoint_mode("vertex") == DisjointMode::vertex);
}

TEST_CASE("vertex mode") {
  // Two triangles glued at vertex 2: every 0-4 path passes through 2.
  auto g = Graph::from_edges(5, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {2, 4}, {3, 4}});
  auto all = all_vertices(g);
  std::vector<VertexId> a{0}, b{4};
  auto e = max_disjoint_paths(g, a, b, all, DisjointMode::edge);
  auto v = max_disjoint_paths(g, a, b, all, DisjointMode::vertex);
  CHECK(e.size() == 2);
  CHECK(v.size() == 1);
  CHECK(v.cut_vertices == std::vector<VertexId>{2});
  CHECK(verify_packing(g, v, all));

  // Direct A-B edges count once each.
  auto k3 = Graph::complete(3);
  std::vector<VertexId> a2{0}, b2{1, 2};
  auto d = max_disjoint_paths(k3, a2, b2, all_vertices(k3), DisjointMode::vertex);
  CHECK(d.size() == 2);
  CHECK(d.cut.size() == 2);
  CHECK(verify_packing(k3, d, all_vertices(k3)));
}

TEST_CASE("packing matches exhaustive search on small graphs") {
  std::mt19937_64 rng(17);
  int instances = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 6);
    auto g = random_connected(n, 0.35, rng);
    const std::uint32_t full = (1u << n) - 1;
    std::uint32_t A = 0, B = 0;
    while (!A || !B || (A & B)) {
      A = static_cast<std::uint32_t>(rng()) & full & (static_cast<std::uint32_t>(rng()) | 1);
      B = static_cast<std::uint32_t>(rng()) & full & ~A;
    }
    std::uint32_t region = (static_cast<std::uint32_t>(rng()) & full) | A | B;
    if (trial % 3 == 0) region = full;
    for (bool vm : {false, true}) {
      auto p = max_disjoint_paths(g, from_mask(A), from_mask(B), from_mask(region),
                                  vm ? DisjointMode::vertex : DisjointMode::edge);
      CHECK(static_cast<int>(p.size()) == oracle::max_packing(g, A, B, region, vm));
      CHECK(p.cut_size() == p.size());
      CHECK(verify_packing(g, p, from_mask(region)));
      ++instances;
    }
  }
  CHECK(instances == 300);
}

TEST_CASE("required path count") {
  CHECK(required_path_count(100, 1, 2) == doctest::Approx(10));
  CHECK(required_path_count(1, 2.5, 3) == doctest::Approx(2.5));
  CHECK(required_path_count(77, 1.5, 1) == doctest::Approx(1.5));
  CHECK_THROWS_AS(required_path_count(4, 0, 2), Error);
}

TEST_CASE("avoiding forbidden balls") {
  auto box = Graph::box(2, 20);
  auto all = all_vertices(box);
  std::vector<VertexId> A;
  for (int i = 7; i < 12; ++i) A.push_back(box.vertex_at(std::vector<std::int64_t>{i, 10}));
  std::vector<VertexId> B;
  for (VertexId v : all) {
    auto c = box.coords(v);
    if (c[0] == 0 || c[1] == 0 || c[0] == 19 || c[1] == 19) B.push_back(v);
  }
  std::vector<VertexId> none;
  auto base = disjoint_paths_avoiding(box, A, B, all, none, 2);
  auto plain = max_disjoint_paths(box, A, B, all);
  CHECK(base.packing.paths == plain.paths);
  CHECK(base.discarded == 0);
  CHECK(base.packed == 12);  // perimeter of the segment

  std::vector<VertexId> centers{box.vertex_at(std::vector<std::int64_t>{9, 14})};
  auto rep = disjoint_paths_avoiding(box, A, B, all, centers, 2);
  auto forbidden = ball(box, centers[0], 2);
  std::size_t expect = 0;
  for (const auto& p : plain.paths) {
    bool hit = false;
    for (auto v : p) hit = hit || std::find(forbidden.begin(), forbidden.end(), v) != forbidden.end();
    expect += !hit;
  }
  CHECK(rep.packing.size() == expect);
  CHECK(rep.packing.size() + rep.discarded == rep.packed);
  CHECK(rep.capacity == static_cast<std::int64_t>(forbidden.size()) * 4);
  for (const auto& p : rep.packing.paths)
    for (auto v : p) CHECK(std::find(forbidden.begin(), forbidden.end(), v) == forbidden.end());
  auto resolved = disjoint_paths_resolved(box, A, B, all, centers, 2);
  CHECK(resolved.size() >= rep.packing.size());

  // Cover everything but A and B.
  std::vector<VertexId> everywhere;
  for (VertexId v : all)
    if (std::find(A.begin(), A.end(), v) == A.end() && std::find(B.begin(), B.end(), v) == B.end())
      everywhere.push_back(v);
  auto dead = disjoint_paths_avoiding(box, A, B, all, everywhere, 0);
  CHECK(dead.packing.size() == 0);
  CHECK_FALSE(dead.filter_succeeded);
}

TEST_CASE("packing shrinks with the region") {
  std::mt19937_64 rng(23);
  auto t = Graph::torus(2, 9);
  std::vector<VertexId> A{0, 1}, B{40, 41, 50};
  std::vector<VertexId> region = all_vertices(t);
  std::size_t last = max_disjoint_paths(t, A, B, region).size();
  while (region.size() > 10) {
    auto victim = region.begin() + static_cast<std::ptrdiff_t>(rng() % region.size());
    if (std::find(A.begin(), A.end(), *victim) != A.end() || std::find(B.begin(), B.end(), *victim) != B.end())
      continue;
    region.erase(victim);
    const auto now = max_disjoint_paths(t, A, B, region).size();
    CHECK(now <= last);
    last = now;
  }
}
