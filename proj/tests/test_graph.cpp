#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "scaleperc/metric.hpp"

using namespace scaleperc;

TEST_CASE("generators") {
  auto t = Graph::torus(2, 4);
  CHECK(t.vertex_count() == 16);
  CHECK(t.edge_count() == 32);
  CHECK(t.regular_degree() == 4);
  CHECK(t.edge_list().size() == 32);

  auto c = Graph::cycle(5);
  CHECK(c.vertex_count() == 5);
  for (VertexId v = 0; v < 5; ++v) CHECK(c.degree(v) == 2);

  auto b = Graph::box(2, 3);
  CHECK(b.vertex_count() == 9);
  CHECK(b.degree(0) == 2);
  CHECK(b.degree(4) == 4);
  CHECK_FALSE(b.regular_degree().has_value());
  CHECK(b.edge_count() == static_cast<std::int64_t>(b.edge_list().size()));

  auto l = Graph::ladder(5);
  CHECK(l.vertex_count() == 10);
  CHECK(l.edge_count() == 13);
  CHECK(l.edge_count() == static_cast<std::int64_t>(l.edge_list().size()));

  auto k = Graph::complete(4);
  CHECK(k.edge_count() == 6);
  CHECK(k.regular_degree() == 3);

  CHECK_THROWS_AS(Graph::torus(2, 2), Error);
  CHECK_THROWS_AS(Graph::torus(0, 5), Error);
  CHECK_THROWS_AS(Graph::cycle(2), Error);
}

TEST_CASE("adjacency is symmetric, sorted and simple on every generator") {
  for (auto g : {Graph::torus(2, 5), Graph::torus(3, 3), Graph::box(2, 4), Graph::cycle(7),
                 Graph::ladder(4), Graph::complete(5)}) {
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      auto nb = g.neighbors(v);
      CHECK(std::is_sorted(nb.begin(), nb.end()));
      CHECK(std::adjacent_find(nb.begin(), nb.end()) == nb.end());
      for (auto w : nb) {
        CHECK(w != v);
        auto back = g.neighbors(w);
        CHECK(std::binary_search(back.begin(), back.end(), v));
      }
    }
  }
}

TEST_CASE("custom graph ingestion validates input") {
  std::istringstream ok("4 3\n0 1\n1 2\n# comment\n2 3\n");
  auto g = Graph::read_adjacency_text(ok);
  CHECK(g.vertex_count() == 4);
  CHECK(g.kind() == GraphKind::custom);
  std::ostringstream out;
  g.write_adjacency_text(out);
  CHECK(out.str() == "4 3\n0 1\n1 2\n2 3\n");

  CHECK_THROWS_AS(Graph::from_edges(4, {{0, 1}, {2, 3}}), Error);  // disconnected
  CHECK_THROWS_AS(Graph::from_edges(3, {{0, 1}, {1, 0}, {1, 2}}), Error);
  CHECK_THROWS_AS(Graph::from_edges(3, {{0, 0}, {1, 2}}), Error);
  CHECK_THROWS_AS(Graph::from_edges(3, {{0, 5}}), Error);
  std::istringstream bad("3 2\n0 1\n");
  CHECK_THROWS_AS(Graph::read_adjacency_text(bad), Error);
}

TEST_CASE("closed-form distance matches BFS") {
  for (auto g : {Graph::torus(2, 6), Graph::box(3, 3), Graph::cycle(9), Graph::ladder(5),
                 Graph::complete(5)}) {
    auto ap = oracle::all_pairs(g);
    for (VertexId u = 0; u < g.vertex_count(); ++u)
      for (VertexId v = 0; v < g.vertex_count(); ++v)
        CHECK(*g.closed_form_distance(u, v) == ap[u][v]);
  }
}

TEST_CASE("balls and spheres") {
  auto b = Graph::box(2, 11);
  const VertexId mid = b.vertex_at(std::vector<std::int64_t>{5, 5});
  CHECK(ball(b, mid, 1).size() == 5);
  CHECK(ball(b, mid, 0) == std::vector<VertexId>{mid});
  CHECK(sphere(b, mid, 1) == b.neighbors(mid));
  CHECK(sphere(b, mid, 0) == std::vector<VertexId>{mid});

  auto c = Graph::cycle(10);
  CHECK(ball(c, 3, 3).size() == 7);
  CHECK(sphere(c, 3, 6).empty());
  CHECK(sphere(c, 3, 5).size() == 1);

  auto t = Graph::torus(2, 9);
  auto ap = oracle::all_pairs(t);
  for (std::int64_t r = 0; r <= 8; ++r) {
    auto bl = ball(t, 10, r);
    std::vector<VertexId> want;
    for (VertexId v = 0; v < t.vertex_count(); ++v)
      if (ap[10][v] <= r) want.push_back(v);
    CHECK(bl == want);
    if (r > 0) {
      auto inner = ball(t, 10, r - 1);
      auto sp = sphere(t, 10, r);
      std::vector<VertexId> uni;
      std::set_union(inner.begin(), inner.end(), sp.begin(), sp.end(), std::back_inserter(uni));
      CHECK(uni == bl);
      CHECK(inner.size() + sp.size() == bl.size());
    }
  }
}

TEST_CASE("huge implicit lattice balls stay local") {
  auto t = Graph::torus(2, 1 << 20);
  CHECK_FALSE(t.fits_dense());
  CHECK(ball_size(t, 12345, 10) == 2 * 100 + 2 * 10 + 1);
  CHECK(distance(t, 0, t.vertex_at(std::vector<std::int64_t>{-3, 4})) == 7);
}

TEST_CASE("boundaries") {
  auto b = Graph::box(2, 15);
  std::vector<VertexId> sq;
  for (int i = 5; i < 10; ++i)
    for (int j = 5; j < 10; ++j) sq.push_back(b.vertex_at(std::vector<std::int64_t>{i, j}));
  // Direct enumeration over the edge list.
  std::set<VertexId> in(sq.begin(), sq.end());
  std::size_t want = 0;
  for (auto [u, v] : b.edge_list()) want += (in.count(u) + in.count(v)) == 1;
  CHECK(want == 20);
  auto eb = boundary(b, sq, BoundaryMode::edge);
  CHECK(eb.size() == want);
  for (auto [x, y] : eb.edges) {
    CHECK(in.count(x) == 1);
    CHECK(in.count(y) == 0);
  }
  auto ib = boundary(b, sq, BoundaryMode::internal_vertex);
  CHECK(ib.size() == 16);
  for (auto v : ib.vertices) CHECK(in.count(v) == 1);

  const VertexId one = b.vertex_at(std::vector<std::int64_t>{7, 7});
  std::vector<VertexId> single{one};
  CHECK(edge_boundary(b, single).size() == 4);
  CHECK(internal_vertex_boundary(b, single) == single);

  auto t = Graph::torus(2, 4);
  std::vector<VertexId> all(16);
  for (int i = 0; i < 16; ++i) all[i] = i;
  CHECK(edge_boundary(t, all).empty());
  CHECK(internal_vertex_boundary(t, all).empty());
}

TEST_CASE("set diameter") {
  auto b = Graph::box(2, 6);
  std::vector<VertexId> sq;
  for (int i = 1; i < 4; ++i)
    for (int j = 1; j < 4; ++j) sq.push_back(b.vertex_at(std::vector<std::int64_t>{i, j}));
  auto ap = oracle::all_pairs(b);
  int want = 0;
  for (auto u : sq)
    for (auto v : sq) want = std::max(want, ap[u][v]);
  CHECK(want == 4);
  CHECK(set_diameter(b, sq) == 4);
  CHECK(diameter_at_least(b, sq, 4));
  CHECK_FALSE(diameter_at_least(b, sq, 5));
  std::vector<VertexId> one{3};
  CHECK(set_diameter(b, one) == 0);
  CHECK_THROWS_AS(set_diameter(b, std::vector<VertexId>{}), Error);

  // CSR path (no closed form) agrees with the oracle.
  auto petersen = Graph::from_edges(10, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {0, 5}, {1, 6},
                                         {2, 7}, {3, 8}, {4, 9}, {5, 7}, {7, 9}, {9, 6}, {6, 8}, {8, 5}});
  std::vector<VertexId> s{0, 2, 8};
  auto pp = oracle::all_pairs(petersen);
  int pw = std::max({pp[0][2], pp[0][8], pp[2][8]});
  CHECK(set_diameter(petersen, s) == pw);
  CHECK(diameter_at_least(petersen, s, pw));
  CHECK_FALSE(diameter_at_least(petersen, s, pw + 1));
}

TEST_CASE("growth profile") {
  auto b = Graph::box(2, 41);
  GrowthOptions o;
  o.interior_only = true;
  auto p = growth_profile(b, 10, 2.0, 2.0, o);
  CHECK(p.vbar[0] == 1);
  CHECK(p.vbar[1] == 5);
  for (std::int64_t r = 1; r <= 10; ++r) CHECK(p.vbar[r] == 2 * r * r + 2 * r + 1);
  CHECK(p.c_u == doctest::Approx(5.0));

  auto all = growth_profile(b, 3, 2.0, 1.0);
  CHECK(all.vbar[1] == 1 + b.max_degree());
  CHECK(std::is_sorted(all.vbar.begin(), all.vbar.end()));

  auto c = Graph::cycle(50);
  auto pc = growth_profile(c, 20, 1.0, 1.0);
  CHECK(pc.c_l >= 2.0);
  CHECK(pc.c_l == doctest::Approx(2.0 + 1.0 / 20));

  CHECK_THROWS_AS(growth_profile(c, 0, 1.0, 1.0), Error);
  CHECK_THROWS_AS(growth_profile(c, 40, 1.0, 1.0), Error);
}

namespace {

// Brute force over all vertex subsets of a small graph.
std::pair<std::int64_t, double> brute_iso(const Graph& g, int s_max, double d_i) {
  auto adj = oracle::adjacency(g);
  const int n = static_cast<int>(g.vertex_count());
  std::int64_t count = 0;
  double best = 1e300;
  for (std::uint64_t mask = 1; mask < (1ULL << n); ++mask) {
    if (__builtin_popcountll(mask) > s_max || !oracle::induced_connected(adj, mask)) continue;
    ++count;
    int b = 0;
    for (int v = 0; v < n; ++v)
      if (mask >> v & 1)
        for (auto w : adj[v]) b += !(mask >> w & 1);
    best = std::min(best, b / std::pow(__builtin_popcountll(mask), (d_i - 1) / d_i));
  }
  return {count, best};
}

}  // namespace

TEST_CASE("isoperimetry") {
  auto c = Graph::cycle(20);
  auto rep = check_isoperimetry(c, 1.0, 2.0, 10);
  CHECK_FALSE(rep.holds);
  CHECK(rep.min_ratio == doctest::Approx(2.0 / std::sqrt(10.0)));
  CHECK(rep.worst_set.size() == 10);
  CHECK(rep.worst_boundary == 2);

  auto single = check_isoperimetry(Graph::box(2, 5), 2.0, 2.0, 1);
  CHECK(single.holds);

  auto b = Graph::box(2, 8);
  auto zb = check_isoperimetry(b, 1.0, 2.0, 6);
  CHECK(zb.holds);

  // Exhaustive mode equals brute force on small graphs.
  for (auto g : {Graph::box(2, 3), Graph::torus(2, 3), Graph::cycle(12), Graph::ladder(6),
                 Graph::complete(6), Graph::box(3, 2)}) {
    for (int s = 1; s <= static_cast<int>(g.vertex_count()); s += 3) {
      auto [cnt, best] = brute_iso(g, s, 2.0);
      auto r = check_isoperimetry(g, 1.0, 2.0, s);
      CHECK(r.sets_checked == cnt);
      CHECK(r.min_ratio == doctest::Approx(best));
    }
  }

  CHECK_THROWS_AS(check_isoperimetry(Graph::torus(2, 20), 1.0, 2.0, 12, IsoOptions{1000}), Error);

  IsoOptions so;
  so.sampled_sets = 50;
  so.sample_size_max = 30;
  auto sr = check_isoperimetry(b, 1.0, 2.0, 3, so);
  CHECK(sr.sampled);
  CHECK(sr.sampled_checked == 50);
}

TEST_CASE("geodesic segments") {
  auto path = Graph::box(1, 8);
  auto s = find_geodesic_segment(path, 7);
  CHECK(s.size() == 8);
  CHECK(is_geodesic(path, s));
  CHECK_THROWS_AS(find_geodesic_segment(path, 8), Error);

  auto c = Graph::cycle(10);
  CHECK(find_geodesic_segment(c, 5).size() == 6);
  CHECK_THROWS_AS(find_geodesic_segment(c, 6), Error);

  auto t = Graph::torus(2, 12);
  auto ts = find_geodesic_segment(t, 6);
  auto ap = oracle::all_pairs(t);
  for (std::size_t i = 0; i < ts.size(); ++i)
    for (std::size_t j = 0; j < ts.size(); ++j)
      CHECK(ap[ts[i]][ts[j]] == static_cast<int>(i > j ? i - j : j - i));
  CHECK(find_geodesic_segment(t, 12).size() == 13);

  auto petersen = Graph::from_edges(10, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {0, 5}, {1, 6},
                                         {2, 7}, {3, 8}, {4, 9}, {5, 7}, {7, 9}, {9, 6}, {6, 8}, {8, 5}});
  CHECK(is_geodesic(petersen, find_geodesic_segment(petersen, 2)));
  try {
    find_geodesic_segment(petersen, 3);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::no_segment);
  }
  std::vector<VertexId> bad{0, 1, 2, 3, 4, 0};
  CHECK_FALSE(is_geodesic(petersen, bad));
}
