#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "scaleperc/experiment.hpp"
#include "scaleperc/flows.hpp"
#include "scaleperc/harness.hpp"
#include "scaleperc/loop_soup.hpp"
#include "scaleperc/metric.hpp"
#include "scaleperc/percolation.hpp"
#include "scaleperc/renorm.hpp"
#include "scaleperc/rough_iso.hpp"
#include "scaleperc/scales.hpp"

using namespace scaleperc;

namespace {

struct GraphArgs {
  std::string kind = "torus";
  int dim = 2;
  std::int64_t side = 0, n = 0;
  std::string file;

  void add(CLI::App* app, const std::string& prefix = "") {
    app->add_option("--" + prefix + "kind", kind, "torus, box, cycle, ladder, complete or file");
    app->add_option("--" + prefix + "dim", dim);
    app->add_option("--" + prefix + "side", side);
    app->add_option("--" + prefix + "n", n);
    app->add_option("--" + prefix + "file", file, "adjacency list (with kind=file)");
  }
  Graph build() const {
    if (kind == "file") {
      std::ifstream in(file);
      require(static_cast<bool>(in), ErrorKind::invalid_argument, "cannot open graph file " + file);
      return Graph::read_adjacency_text(in);
    }
    GeneratorParams p;
    p.dim = dim;
    p.side = side;
    p.n = n;
    return Graph::generate(parse_graph_kind(kind), p);
  }
};

struct ModelArgs {
  ModelSpec spec;
  std::uint64_t seed = 1;
  int max_length = 0;
  void add(CLI::App* app) {
    app->add_option("--model", spec.kind, "bernoulli-site, dac, loop-soup-vacant, loop-soup-occupied");
    app->add_option("--p", spec.p);
    app->add_option("--q", spec.q);
    app->add_option("--beta", spec.beta);
    app->add_option("--kappa", spec.kappa);
    app->add_option("--eps", spec.eps);
    app->add_option("--max-length", max_length);
    app->add_option("--seed", seed);
  }
  SiteConfig sample(const Graph& g) {
    if (max_length > 0) spec.max_length = max_length;
    ModelSampler s(g, spec);
    return s.sample(SeedSpec{seed, stream_id("cli"), 0});
  }
};

std::vector<VertexId> read_ids(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::invalid_argument, "cannot open " + path);
  std::vector<VertexId> out;
  std::string tok;
  while (in >> tok) {
    std::stringstream ss(tok);
    std::string part;
    while (std::getline(ss, part, ','))
      if (!part.empty()) {
        try {
          out.push_back(std::stoll(part));
        } catch (const std::exception&) {
          throw Error(ErrorKind::parse_error, path + ": bad vertex id '" + part + "'");
        }
      }
  }
  return out;
}

std::vector<VertexId> all_vertices(const Graph& g) {
  g.require_dense("whole-graph region");
  std::vector<VertexId> v(static_cast<std::size_t>(g.vertex_count()));
  for (VertexId i = 0; i < g.vertex_count(); ++i) v[static_cast<std::size_t>(i)] = i;
  return v;
}

void print_path(const std::vector<VertexId>& p) {
  for (std::size_t i = 0; i < p.size(); ++i) std::cout << (i ? " " : "") << p[i];
  std::cout << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scaleperc: percolation and multi-scale renormalization toolkit"};
  app.require_subcommand(1);

  // ---- graph ----
  auto* graph = app.add_subcommand("graph", "graph generation and geometry");
  graph->require_subcommand(1);
  GraphArgs ga;
  auto* gen = graph->add_subcommand("gen", "write the adjacency list");
  ga.add(gen);
  std::int64_t rmax = 10;
  double du = 2, dl = 1;
  auto* profile = graph->add_subcommand("profile", "volume growth profile");
  ga.add(profile);
  profile->add_option("--rmax", rmax);
  profile->add_option("--du", du);
  profile->add_option("--dl", dl);
  double ci = 1, di = 2;
  int smax = 6;
  std::int64_t iso_budget = 5'000'000;
  auto* iso = graph->add_subcommand("iso-check", "exhaustive isoperimetric check");
  ga.add(iso);
  iso->add_option("--ci", ci);
  iso->add_option("--di", di);
  iso->add_option("--smax", smax);
  iso->add_option("--budget", iso_budget);

  // ---- rough ----
  auto* rough = app.add_subcommand("rough", "rough isometries between graphs");
  rough->require_subcommand(1);
  GraphArgs src, dst;
  std::string map_file;
  double C = 1;
  auto* rcheck = rough->add_subcommand("check", "verify a map");
  auto* rinv = rough->add_subcommand("invert", "write a rough inverse");
  for (auto* c : {rcheck, rinv}) {
    src.add(c);
    dst.add(c, "target-");
    c->add_option("--map", map_file)->required();
    c->add_option("--C", C);
  }

  // ---- perco ----
  auto* perco = app.add_subcommand("perco", "percolation samplers");
  perco->require_subcommand(1);
  auto* psample = perco->add_subcommand("sample", "draw one configuration");
  ga.add(psample);
  std::string pmodel = "bernoulli-site";
  double pp = 0.5, pq = 0.5, pbeta = 1, pkappa = 0, peps = 1e-6;
  int pmax_length = 0;
  std::uint64_t pseed = 1;
  psample->add_option("--model", pmodel, "bernoulli-site, bernoulli-bond, dac or loopsoup");
  psample->add_option("--p", pp);
  psample->add_option("--q", pq);
  psample->add_option("--beta", pbeta);
  psample->add_option("--kappa", pkappa);
  psample->add_option("--eps", peps);
  psample->add_option("--max-length", pmax_length);
  psample->add_option("--seed", pseed);

  // ---- renorm ----
  auto* renorm = app.add_subcommand("renorm", "scales, pavings, events and the recursion bound");
  renorm->require_subcommand(1);
  std::int64_t L0 = 4;
  double gamma = 2;
  int kmax = 3;
  auto* rscales = renorm->add_subcommand("scales", "print L_k");
  rscales->add_option("--L0", L0);
  rscales->add_option("--gamma", gamma);
  rscales->add_option("--kmax", kmax);

  VertexId x = 0;
  std::int64_t r = 2, s = 2, L = 2;
  auto* rpaving = renorm->add_subcommand("paving", "greedy paving of B(x, 2r^2)");
  ga.add(rpaving);
  rpaving->add_option("--x", x);
  rpaving->add_option("--r", r);
  rpaving->add_option("--s", s);

  std::string ev_kind = "crossing";
  std::int64_t exact_budget = 200000;
  bool allow_truncated = false;
  ModelArgs ma;
  auto* rdetect = renorm->add_subcommand("detect", "evaluate one event on a sampled configuration");
  ga.add(rdetect, "graph-");
  ma.add(rdetect);
  rdetect->add_option("--kind", ev_kind, "crossing, sep-open or sep-exact");
  rdetect->add_option("--x", x);
  rdetect->add_option("--L", L);
  rdetect->add_option("--budget", exact_budget);
  rdetect->add_flag("--allow-truncated", allow_truncated);

  int k = 0, J = 2;
  std::int64_t spacing = 0;
  auto* rcascade = renorm->add_subcommand("cascade", "check the cascading property at one scale");
  ga.add(rcascade, "graph-");
  ma.add(rcascade);
  rcascade->add_option("--kind", ev_kind, "crossing or sep-open");
  rcascade->add_option("--x", x);
  rcascade->add_option("--L0", L0);
  rcascade->add_option("--gamma", gamma);
  rcascade->add_option("--k", k);
  rcascade->add_option("--J", J);
  rcascade->add_option("--spacing", spacing, "lattice net spacing (default: paving net)");

  ParamSet params;
  double pstart = 0.01;
  int kstart = 0, kend = 5;
  auto* rbound = renorm->add_subcommand("bound", "iterate the recursion bound");
  rbound->add_option("--pstart", pstart);
  rbound->add_option("--kstart", kstart);
  rbound->add_option("--kend", kend);
  rbound->add_option("--L0", L0);
  rbound->add_option("--gamma", params.gamma);
  rbound->add_option("--du", params.d_u);
  rbound->add_option("--dl", params.d_l);
  rbound->add_option("--cu", params.c_u);
  rbound->add_option("--cl", params.c_l);
  rbound->add_option("--di", params.d_i);
  rbound->add_option("--ci", params.c_i);
  rbound->add_option("--alpha", params.alpha);
  rbound->add_option("--calpha", params.c_alpha);
  rbound->add_option("--J", params.J);
  rbound->add_option("--Jprime", params.J_prime);
  rbound->add_option("--beta", params.beta);
  rbound->add_option("--betaprime", params.beta_prime);
  rbound->add_option("--c2", params.c2);

  // ---- flows ----
  auto* flows = app.add_subcommand("flows", "disjoint path packings");
  flows->require_subcommand(1);
  auto* fpaths = flows->add_subcommand("paths", "maximum disjoint A-B paths");
  ga.add(fpaths);
  std::string a_file, b_file, avoid_file, mode = "edge";
  std::int64_t R = 0;
  fpaths->add_option("--A", a_file)->required();
  fpaths->add_option("--B", b_file)->required();
  fpaths->add_option("--mode", mode, "edge or vertex");
  fpaths->add_option("--avoid", avoid_file, "centers to avoid");
  fpaths->add_option("--R", R, "avoidance radius");

  // ---- harness ----
  auto* harness = app.add_subcommand("harness", "Monte Carlo experiments");
  harness->require_subcommand(1);
  auto* hrun = harness->add_subcommand("run", "run a config file");
  std::string config, out_dir;
  int workers = 0;
  hrun->add_option("--config", config)->required();
  hrun->add_option("--out", out_dir, "output directory (default: [experiment] output)");
  hrun->add_option("--workers", workers, "override [experiment] workers");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      ga.build().write_adjacency_text(std::cout);
    } else if (profile->parsed()) {
      auto g = ga.build();
      auto p = growth_profile(g, rmax, du, dl);
      std::cout << "# c_u=" << fmt_num(p.c_u) << " c_l=" << fmt_num(p.c_l) << " centers=" << p.centers_used
                << (p.all_centers ? " (all)" : "") << '\n';
      std::cout << "r,vbar,vmin\n";
      for (std::size_t i = 0; i < p.vbar.size(); ++i) std::cout << i << ',' << p.vbar[i] << ',' << p.vmin[i] << '\n';
    } else if (iso->parsed()) {
      auto g = ga.build();
      IsoOptions o;
      o.budget = iso_budget;
      auto rep = check_isoperimetry(g, ci, di, smax, o);
      std::cout << "holds=" << (rep.holds ? "true" : "false") << " sets=" << rep.sets_checked
                << " min_ratio=" << fmt_num(rep.min_ratio) << " worst_boundary=" << rep.worst_boundary
                << "\nworst_set=";
      print_path(rep.worst_set);
      return rep.holds ? 0 : 2;
    } else if (rcheck->parsed() || rinv->parsed()) {
      auto gs = src.build(), gt = dst.build();
      std::ifstream in(map_file);
      require(static_cast<bool>(in), ErrorKind::invalid_argument, "cannot open map " + map_file);
      auto m = make_rough_map(gs, gt, read_map(in, gs.vertex_count()), C);
      if (rcheck->parsed()) {
        auto rep = check_rough_isometry(m);
        std::cout << "holds=" << (rep.holds ? "true" : "false") << " lower_ok=" << rep.lower_ok
                  << " upper_ok=" << rep.upper_ok << " cover_ok=" << rep.cover_ok
                  << " pairs=" << rep.pairs_checked << " min_constant=" << fmt_num(rep.min_constant)
                  << " worst=(" << rep.worst_x << ',' << rep.worst_y << ") cover_radius=" << rep.cover_radius
                  << '\n';
        return rep.holds ? 0 : 2;
      }
      auto inv = rough_inverse(m);
      std::cerr << "constant " << fmt_num(inv.C) << ", closeness " << inverse_closeness(m, inv) << '\n';
      write_map(std::cout, inv.map);
    } else if (psample->parsed()) {
      auto g = ga.build();
      const SeedSpec seed{pseed, stream_id("cli"), 0};
      if (pmodel == "bernoulli-bond") {
        auto b = sample_bernoulli_bond(g, pp, seed);
        std::cout << "u,v,state\n";
        g.for_each_edge([&](VertexId u, VertexId v, std::int64_t id) {
          std::cout << u << ',' << v << ',' << (b.open(id) ? 1 : 0) << '\n';
        });
      } else if (pmodel == "loopsoup") {
        LoopSoupOptions o;
        if (pmax_length > 0) o.max_length = pmax_length;
        auto soup = sample_loop_soup(g, pbeta, pkappa, peps, seed, o);
        std::cout << "length,vertices\n";
        for (const auto& l : soup.loops) {
          std::cout << l.length();
          for (auto v : l.vertices) std::cout << ',' << v;
          std::cout << '\n';
        }
      } else {
        require(pmodel == "bernoulli-site" || pmodel == "dac", ErrorKind::invalid_argument,
                "unknown model '" + pmodel + "'");
        g.require_dense("state output");
        auto cfg = pmodel == "dac" ? divide_and_color(g, pp, pq, seed) : sample_bernoulli_site(g, pp, seed);
        std::cout << "vertex,state\n";
        for (VertexId v = 0; v < g.vertex_count(); ++v) std::cout << v << ',' << (cfg.open(v) ? 1 : 0) << '\n';
      }
    } else if (rscales->parsed()) {
      auto sc = make_scales(L0, gamma, kmax);
      std::cout << "k,L_k\n";
      for (int i = 0; i <= sc.k_max(); ++i) std::cout << i << ',' << sc.L(i) << '\n';
    } else if (rpaving->parsed()) {
      auto g = ga.build();
      auto p = build_paving(g, x, r, s);
      auto chk = check_paving(g, p);
      std::cout << "# size=" << p.K.size() << " achieved_c2=" << fmt_num(p.achieved_c2)
                << " checks=" << (chk.all() ? "ok" : "failed") << '\n';
      std::cout << "vertex\n";
      for (auto v : p.K) std::cout << v << '\n';
    } else if (rdetect->parsed()) {
      auto g = ga.build();
      auto cfg = ma.sample(g);
      EventOptions o;
      o.allow_truncated = allow_truncated;
      const auto kind = parse_event_kind(ev_kind);
      EventReport rep;
      if (kind == EventKind::crossing) rep = detect_crossing(g, cfg, x, L, o);
      else if (kind == EventKind::separation_open) rep = detect_separation_open(g, cfg, x, L, o);
      else if (kind == EventKind::separation_exact) rep = detect_separation_exact(g, cfg, x, L, exact_budget, o);
      else throw Error(ErrorKind::invalid_argument, "detect supports crossing, sep-open, sep-exact");
      std::cout << EventReport::csv_header() << '\n' << rep.csv_row() << '\n';
    } else if (rcascade->parsed()) {
      auto g = ga.build();
      auto cfg = ma.sample(g);
      auto sc = make_scales(L0, gamma, k + 1);
      const auto kind = parse_event_kind(ev_kind);
      auto net = spacing > 0 ? PavingNet::lattice(g, spacing)
                             : PavingNet::from_paving(g, build_paving(g, x, sc.L(k + 1), 9 * sc.L(k) * sc.L(k)));
      auto rep = verify_cascading(g, cfg, kind, x, sc, k, J, net);
      std::cout << "passed=" << (rep.passed() ? "true" : "false") << " vacuous=" << rep.vacuous
                << " found_all=" << rep.found_all << " pairwise_ok=" << rep.pairwise_ok
                << " events_ok=" << rep.events_ok << (rep.note.empty() ? "" : " note=" + rep.note) << '\n';
      std::cout << EventReport::csv_header() << '\n' << rep.top.csv_row() << '\n';
      for (const auto& e : rep.events) std::cout << e.csv_row() << '\n';
      return rep.passed() ? 0 : 2;
    } else if (rbound->parsed()) {
      for (const auto& line : check_parameters(params).lines()) std::cout << "# " << line << '\n';
      auto res = recursion_bound_iterate(pstart, kstart, kend, params,
                                         make_log_scales(static_cast<double>(L0), params.gamma, kend));
      for (const auto& w : res.warnings) std::cout << "# warning: " << w << '\n';
      std::cout << "k,log_L,log10_p,maintained\n";
      for (const auto& st : res.steps)
        std::cout << st.k << ',' << fmt_num(st.log_L) << ',' << fmt_num(st.log10_p) << ','
                  << (st.maintained ? 1 : 0) << '\n';
    } else if (fpaths->parsed()) {
      auto g = ga.build();
      auto A = read_ids(a_file), B = read_ids(b_file);
      auto region = all_vertices(g);
      const auto m = parse_disjoint_mode(mode);
      PathPacking pk;
      if (!avoid_file.empty()) {
        auto centers = read_ids(avoid_file);
        auto rep = disjoint_paths_avoiding(g, A, B, region, centers, R, m);
        std::cerr << "packed " << rep.packed << ", discarded " << rep.discarded << ", capacity " << rep.capacity
                  << (rep.counting_bound_ok ? " (survival forced)" : "") << '\n';
        pk = std::move(rep.packing);
      } else {
        pk = max_disjoint_paths(g, A, B, region, m);
        std::cerr << pk.size() << " paths, cut " << pk.cut_size() << '\n';
      }
      for (const auto& p : pk.paths) print_path(p);
    } else if (hrun->parsed()) {
      auto res = run_experiment(read_ini(config), out_dir, workers > 0 ? std::optional<int>(workers) : std::nullopt);
      for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
      for (const auto& f : res.files) std::cout << f.string() << '\n';
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
