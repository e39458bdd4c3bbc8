#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "scaleperc/experiment.hpp"
#include "scaleperc/harness.hpp"

using namespace scaleperc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

IniFile ini(const std::string& text) {
  std::istringstream in(text);
  return parse_ini(in, "test.ini");
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("scaleperc_" + name);
  fs::remove_all(p);
  return p;
}

std::string error_message(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("wilson interval") {
  // textbook closed form
  const double z = 1.959963984540054;
  const double n = 40, ph = 13.0 / 40;
  const double c = (ph + z * z / (2 * n)) / (1 + z * z / n);
  const double h = z / (1 + z * z / n) * std::sqrt(ph * (1 - ph) / n + z * z / (4 * n * n));
  auto w = wilson_interval(13, 40);
  CHECK(w.lo == doctest::Approx(c - h).epsilon(1e-12));
  CHECK(w.hi == doctest::Approx(c + h).epsilon(1e-12));
  CHECK(wilson_interval(0, 10).lo == 0.0);
  CHECK(wilson_interval(10, 10).hi == 1.0);
  CHECK_THROWS_AS(wilson_interval(0, 0), Error);
  CHECK_THROWS_AS(wilson_interval(3, 2), Error);

  std::mt19937_64 rng(5);
  int covered = 0;
  for (int rep = 0; rep < 200; ++rep) {
    std::binomial_distribution<int> bin(100, 0.3);
    auto iv = wilson_interval(bin(rng), 100);
    covered += iv.lo <= 0.3 && 0.3 <= iv.hi;
  }
  CHECK(covered >= 180);
}

TEST_CASE("event estimates") {
  auto g = Graph::torus(2, 64);
  ModelSpec m;
  m.p = 0.3;
  RunOptions run;
  run.n = 100000;
  EventSpec ev;
  ev.kind = "vertex-open";
  auto row = estimate_event_probability(g, m, ev, 0, run);
  CHECK(std::abs(row.p_hat - 0.3) < 4 * std::sqrt(0.3 * 0.7 / 1e5));
  CHECK(row.lo <= row.p_hat);
  CHECK(row.p_hat <= row.hi);

  m.p = 1;
  ev.kind = "crossing";
  ev.L = 3;
  run.n = 50;
  auto one = estimate_event_probability(g, m, ev, 0, run);
  CHECK(one.hits == 50);
  CHECK(one.p_hat == 1.0);

  run.n = 0;
  CHECK_THROWS_AS(estimate_event_probability(g, m, ev, 0, run), Error);
  run.n = 10;
  ev.kind = "nonsense";
  CHECK_THROWS_AS(estimate_event_probability(g, m, ev, 0, run), Error);
}

TEST_CASE("worker count does not change results") {
  auto g = Graph::torus(2, 128);
  ModelSpec m;
  m.p = 0.6;
  PkOptions po;
  po.kind = "sep-open";
  po.ks = {0, 1};
  auto scales = make_scales(4, 2, 1);
  RunOptions run;
  run.n = 200;
  run.workers = 1;
  auto a = estimate_pk_curve(g, m, scales, po, run);
  run.workers = 8;
  auto b = estimate_pk_curve(g, m, scales, po, run);
  CHECK(a.csv() == b.csv());

  EventSpec ev;
  ev.kind = "crossing";
  ev.L = 4;
  run.workers = 1;
  auto r1 = estimate_event_probability(g, m, ev, 17, run);
  run.workers = 8;
  auto r8 = estimate_event_probability(g, m, ev, 17, run);
  CHECK(r1.hits == r8.hits);

  // different estimator names draw different streams
  run.estimator = "other";
  auto r_other = estimate_event_probability(g, m, ev, 17, run);
  CHECK(r_other.n == r1.n);
}

TEST_CASE("pk curve rows") {
  auto g = Graph::cycle(400);
  ModelSpec m;
  m.p = 0;
  PkOptions po;
  po.ks = {0};
  po.compare_exact = true;
  po.exact_budget = 1000000;
  auto scales = make_scales(2, 2, 0);
  RunOptions run;
  run.n = 5;
  auto c = estimate_pk_curve(g, m, scales, po, run);
  // all closed: every separation event occurs, both detectors agree
  for (const auto& r : c.rows) {
    if (r.mode == "divergence") CHECK(r.hits == 0);
    else CHECK(r.hits == r.n);
  }
  CHECK(c.max_row(0).p_hat == 1.0);
  CHECK(c.csv().rfind(PkCurve::csv_header(), 0) == 0);

  // explicit centers produce one row each plus the max row
  PkOptions two;
  two.kind = "crossing";
  two.ks = {0};
  two.centers.centers = {0, 100};
  auto d = estimate_pk_curve(g, m, scales, two, run);
  CHECK(d.rows.size() == 3);
  CHECK(d.max_row(0).center == "max");

  CHECK(choose_centers(Graph::torus(2, 16), {}).size() == 1);
  CHECK(choose_centers(Graph::box(2, 20), {}).size() == 16);
}

TEST_CASE("decoupling on product measure") {
  auto g = Graph::torus(2, 80);
  ModelSpec m;
  m.p = 0.8;
  DecouplingOptions d;
  d.x = g.vertex_at(std::vector<std::int64_t>{0, 0});
  d.y = g.vertex_at(std::vector<std::int64_t>{40, 0});
  d.radii = {1, 2};
  d.near = "all-open";
  d.far_radius = 1;
  RunOptions run;
  run.n = 20000;
  auto rep = estimate_decoupling_defect(g, m, d, run);
  REQUIRE(rep.rows.size() == 2);
  for (const auto& r : rep.rows) {
    // independence: the defect is zero up to sampling noise
    CHECK(std::abs(r.defect) < 4 * r.sigma + 1e-3);
  }
  CHECK(rep.rows[0].pG == doctest::Approx(std::pow(0.8, 5)).epsilon(0.03));

  ModelSpec dac;
  dac.kind = "dac";
  dac.p = 0;
  dac.q = 0.5;
  run.n = 200;
  run.n = 20000;
  auto singletons = estimate_decoupling_defect(g, dac, d, run);
  for (const auto& r : singletons.rows) CHECK(std::abs(r.defect) < 4 * r.sigma + 1e-3);

  d.far_radius = 39;  // balls too close
  CHECK_THROWS_AS(estimate_decoupling_defect(g, m, d, run), Error);
}

TEST_CASE("cluster tails") {
  TailOptions t;
  t.thresholds = {2, 4, 8, 16};
  RunOptions run;
  run.n = 300;

  auto box = Graph::box(2, 256);
  t.x = box.vertex_at(std::vector<std::int64_t>{128, 128});
  ModelSpec m;
  m.p = 0;
  auto zero = estimate_cluster_tails(box, m, t, run);
  for (const auto& r : zero.rows) CHECK(r.hits == 0);

  m.p = 1;  // the whole box is the infinite proxy
  auto full = estimate_cluster_tails(box, m, t, run);
  for (const auto& r : full.rows) CHECK(r.hits == 0);

  m.p = 0.3;
  run.n = 20000;
  auto sub = estimate_cluster_tails(box, m, t, run);
  REQUIRE(sub.rows.size() == 4);
  for (std::size_t i = 1; i < sub.rows.size(); ++i) CHECK(sub.rows[i].tail_hat < sub.rows[i - 1].tail_hat);
  CHECK(sub.csv().rfind(TailReport::csv_header(), 0) == 0);
}

TEST_CASE("ini parsing") {
  auto f = ini("# c\n[experiment]\nname = x\n\n[graph]\nkind = torus ; not a comment\n");
  REQUIRE(f.sections.size() == 2);
  CHECK(f.sections[0].find("name")->value == "x");
  CHECK(f.sections[1].find("kind")->line == 6);

  CHECK(error_message([] { ini("[a]\nbroken line\n"); }).find("test.ini:2:") != std::string::npos);
  CHECK(error_message([] { ini("k = v\n"); }).find("test.ini:1:") != std::string::npos);
  CHECK(error_message([] { ini("[a]\nk=1\nk=2\n"); }).find("duplicate key") != std::string::npos);
  CHECK(error_message([] { ini("[a\n"); }).find("unterminated") != std::string::npos);
}

TEST_CASE("experiment config errors") {
  auto out = scratch("cfg_err");
  auto msg = error_message([&] {
    run_experiment(ini("[experiment]\nname = e\nbogus = 1\n"), out);
  });
  CHECK(msg.find("test.ini:3:") != std::string::npos);
  CHECK(msg.find("bogus") != std::string::npos);

  msg = error_message([&] { run_experiment(ini("[experiments]\n"), out); });
  CHECK(msg.find("unknown section") != std::string::npos);
  msg = error_message([&] { run_experiment(ini("[scales]\nL0 = 4\nL1 = 16\n"), out); });
  CHECK(msg.find("test.ini:3:") != std::string::npos);

  msg = error_message([&] {
    run_experiment(ini("[graph]\nkind = torus\ndim = 2\nside = 8\n[estimator.a]\ntype = event\nwidth = 3\n"), out);
  });
  CHECK(msg.find("test.ini:7:") != std::string::npos);
  CHECK(msg.find("width") != std::string::npos);

  msg = error_message([&] {
    run_experiment(ini("[graph]\nkind = torus\ndim = 2\nside = 8\n[estimator.a]\ntype = magic\n"), out);
  });
  CHECK(msg.find("test.ini:6:") != std::string::npos);

  msg = error_message([&] {
    run_experiment(ini("[graph]\nkind = torus\ndim = 2\nside = 8\n[estimator.a]\ntype = event\nn = many\n"), out);
  });
  CHECK(msg.find("test.ini:7:") != std::string::npos);
}

TEST_CASE("experiment output") {
  const std::string cfg =
      "[experiment]\nname = t\nmaster_seed = 9\n"
      "[graph]\nkind = torus\ndim = 2\nside = 64\n"
      "[scales]\nL0 = 2\n"
      "[model]\nkind = bernoulli-site\np = 0.6\n"
      "[estimator.cross]\ntype = event\nevent = crossing\nL = 3\nn = 300\n"
      "[estimator.curve]\ntype = pk_curve\nevent = sep-open\ngamma = 2\nk = 0,1\nn = 100\n"
      "[estimator.tail]\ntype = tails\ngraph.kind = box\ngraph.side = 40\nx = 820\nthresholds = 2,4\nn = 100\n";
  auto a = scratch("exp_a"), b = scratch("exp_b");
  auto ra = run_experiment(ini(cfg), a, 1);
  auto rb = run_experiment(ini(cfg), b, 8);
  REQUIRE(ra.files.size() == 4);
  for (std::size_t i = 0; i < ra.files.size(); ++i) CHECK(slurp(ra.files[i]) == slurp(rb.files[i]));
  const auto manifest = slurp(a / "manifest.json");
  CHECK(manifest.find("\"master_seed\": 9") != std::string::npos);
  CHECK(manifest.find("\"format\": 1") != std::string::npos);

  // manifest only, directory taken from the config
  auto c = scratch("exp_c");
  auto rc = run_experiment(ini("[experiment]\nname = empty\noutput = " + c.string() + "\n"), "");
  REQUIRE(rc.files.size() == 1);
  CHECK(rc.files[0].filename() == "manifest.json");
}
