#include "scaleperc/experiment.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "scaleperc/error.hpp"
#include "scaleperc/harness.hpp"

namespace scaleperc {

namespace fs = std::filesystem;

const IniEntry* IniSection::find(const std::string& key) const {
  for (const auto& e : entries)
    if (e.key == key) return &e;
  return nullptr;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail_at(const std::string& source, int line, const std::string& msg) {
  throw Error(ErrorKind::parse_error, source + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

IniFile parse_ini(std::istream& in, const std::string& source) {
  IniFile f;
  f.source = source;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    f.text += line;
    f.text += '\n';
    auto s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s[0] == '[') {
      if (s.back() != ']') fail_at(source, no, "unterminated section header");
      auto name = trim(s.substr(1, s.size() - 2));
      if (name.empty()) fail_at(source, no, "empty section name");
      for (const auto& sec : f.sections)
        if (sec.name == name) fail_at(source, no, "duplicate section [" + name + "]");
      f.sections.push_back({name, no, {}});
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail_at(source, no, "expected key = value");
    if (f.sections.empty()) fail_at(source, no, "key outside any section");
    auto key = trim(s.substr(0, eq));
    auto value = trim(s.substr(eq + 1));
    if (key.empty()) fail_at(source, no, "empty key");
    auto& sec = f.sections.back();
    if (sec.find(key)) fail_at(source, no, "duplicate key '" + key + "'");
    sec.entries.push_back({key, value, no});
  }
  return f;
}

IniFile read_ini(const fs::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::invalid_argument, "cannot open config " + path.string());
  return parse_ini(in, path.string());
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

// Typed access to one section with line-numbered errors and tracking of
// consumed keys, so leftovers can be reported as unknown.
class Reader {
 public:
  Reader(const IniFile& f, const IniSection* sec) : f_(f), sec_(sec) {}

  bool has(const std::string& key) const { return sec_ && sec_->find(key); }

  std::string str(const std::string& key, const std::string& def) {
    if (auto e = get(key)) return e->value;
    return def;
  }
  std::string str(const std::string& key) {
    if (auto e = get(key)) return e->value;
    fail(sec_ ? sec_->line : 0, "missing key '" + key + "'");
  }
  std::int64_t integer(const std::string& key, std::optional<std::int64_t> def = std::nullopt) {
    auto e = get(key);
    if (!e) {
      if (def) return *def;
      fail(sec_ ? sec_->line : 0, "missing key '" + key + "'");
    }
    return parse_int(*e, e->value);
  }
  double real(const std::string& key, std::optional<double> def = std::nullopt) {
    auto e = get(key);
    if (!e) {
      if (def) return *def;
      fail(sec_ ? sec_->line : 0, "missing key '" + key + "'");
    }
    try {
      std::size_t used = 0;
      double v = std::stod(e->value, &used);
      if (used != e->value.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      fail(e->line, "'" + key + "' expects a number, got '" + e->value + "'");
    }
  }
  bool boolean(const std::string& key, bool def) {
    auto e = get(key);
    if (!e) return def;
    if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
    if (e->value == "false" || e->value == "0" || e->value == "no") return false;
    fail(e->line, "'" + key + "' expects true or false");
  }
  std::vector<std::int64_t> int_list(const std::string& key, std::vector<std::int64_t> def = {}) {
    auto e = get(key);
    if (!e) return def;
    std::vector<std::int64_t> out;
    std::stringstream ss(e->value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_int(*e, trim(item)));
    if (out.empty()) fail(e->line, "'" + key + "' expects a comma separated list");
    return out;
  }

  // Every key not consumed is an error naming that key.
  void finish() const {
    if (!sec_) return;
    for (const auto& e : sec_->entries)
      if (!used_.count(e.key)) fail(e.line, "unknown key '" + e.key + "' in [" + sec_->name + "]");
  }

  [[noreturn]] void fail(int line, const std::string& msg) const {
    throw Error(ErrorKind::parse_error, f_.source + ":" + std::to_string(line) + ": " + msg);
  }

 private:
  const IniEntry* get(const std::string& key) {
    if (!sec_) return nullptr;
    auto e = sec_->find(key);
    if (e) used_.insert(key);
    return e;
  }
  std::int64_t parse_int(const IniEntry& e, const std::string& s) const {
    try {
      std::size_t used = 0;
      auto v = std::stoll(s, &used);
      if (used != s.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      fail(e.line, "'" + e.key + "' expects an integer, got '" + s + "'");
    }
  }

  const IniFile& f_;
  const IniSection* sec_;
  std::set<std::string> used_;
};

const IniSection* section(const IniFile& f, const std::string& name) {
  for (const auto& s : f.sections)
    if (s.name == name) return &s;
  return nullptr;
}

// Graph and model keys may be overridden inside an estimator section as
// graph.<key> / model.<key>.
struct Layered {
  Reader& local;
  Reader& global;
  std::string prefix;
  template <class F>
  auto pick(const std::string& key, F&& read) {
    return local.has(prefix + key) ? read(local, prefix + key) : read(global, key);
  }
};

Graph load_graph(Reader& local, Reader& global) {
  Layered l{local, global, "graph."};
  const auto kind = l.pick("kind", [](Reader& r, const std::string& k) { return r.str(k, "torus"); });
  if (kind == "file") {
    const auto path = l.pick("file", [](Reader& r, const std::string& k) { return r.str(k); });
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorKind::invalid_argument, "cannot open graph file " + path);
    return Graph::read_adjacency_text(in);
  }
  GeneratorParams p;
  p.dim = static_cast<int>(l.pick("dim", [](Reader& r, const std::string& k) { return r.integer(k, 2); }));
  p.side = l.pick("side", [](Reader& r, const std::string& k) { return r.integer(k, 0); });
  p.n = l.pick("n", [](Reader& r, const std::string& k) { return r.integer(k, 0); });
  return Graph::generate(parse_graph_kind(kind), p);
}

ModelSpec load_model(Reader& local, Reader& global) {
  Layered l{local, global, "model."};
  ModelSpec m;
  m.kind = l.pick("kind", [](Reader& r, const std::string& k) { return r.str(k, "bernoulli-site"); });
  m.p = l.pick("p", [](Reader& r, const std::string& k) { return r.real(k, 0.5); });
  m.q = l.pick("q", [](Reader& r, const std::string& k) { return r.real(k, 0.5); });
  m.beta = l.pick("beta", [](Reader& r, const std::string& k) { return r.real(k, 1.0); });
  m.kappa = l.pick("kappa", [](Reader& r, const std::string& k) { return r.real(k, 0.0); });
  m.eps = l.pick("eps", [](Reader& r, const std::string& k) { return r.real(k, 1e-6); });
  const auto ml = l.pick("max_length", [](Reader& r, const std::string& k) { return r.integer(k, 0); });
  if (ml > 0) m.max_length = static_cast<int>(ml);
  validate(m);
  return m;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::invalid_argument, "cannot write " + p.string());
  out << content;
}

struct Job {
  std::string name, type;
  std::function<std::pair<std::string, nlohmann::ordered_json>(int)> run;  // (csv, metadata)
};

}  // namespace

ExperimentResult run_experiment(const IniFile& config, const fs::path& out_dir, std::optional<int> workers) {
  static const std::set<std::string> fixed{"experiment", "graph", "model", "scales"};
  for (const auto& s : config.sections)
    if (!fixed.count(s.name) && s.name.rfind("estimator.", 0) != 0)
      throw Error(ErrorKind::parse_error,
                  config.source + ":" + std::to_string(s.line) + ": unknown section [" + s.name + "]");

  Reader exp(config, section(config, "experiment"));
  const auto name = exp.str("name", "experiment");
  const auto master = static_cast<std::uint64_t>(exp.integer("master_seed", 1));
  const int nworkers = workers.value_or(static_cast<int>(exp.integer("workers", 1)));
  const auto configured = exp.str("output", "out");
  const fs::path out = out_dir.empty() ? fs::path(configured) : out_dir;
  exp.finish();
  require(nworkers >= 1, ErrorKind::invalid_argument, "workers must be at least 1");

  // Parse and validate everything before running anything.
  std::vector<Job> jobs;
  for (const auto& s : config.sections) {
    if (s.name.rfind("estimator.", 0) != 0) continue;
    const auto est = s.name.substr(10);
    auto local = std::make_shared<Reader>(config, &s);
    auto global_graph = std::make_shared<Reader>(config, section(config, "graph"));
    auto global_model = std::make_shared<Reader>(config, section(config, "model"));
    auto g = std::make_shared<Graph>(load_graph(*local, *global_graph));
    const auto model = load_model(*local, *global_model);
    const auto type = local->str("type");
    RunOptions run;
    run.n = local->integer("n", 1000);
    run.master_seed = master;
    run.estimator = est;
    run.workers = nworkers;
    if (run.n < 1) local->fail(s.line, "n must be at least 1");

    auto meta = [g, model, type, master](nlohmann::ordered_json extra) {
      nlohmann::ordered_json m;
      m["type"] = type;
      m["graph"] = g->describe();
      m["model"] = model.describe();
      m["master_seed"] = master;
      for (auto& [k, v] : extra.items()) m[k] = v;
      return m;
    };

    Job job{est, type, {}};
    if (type == "event") {
      EventSpec ev;
      ev.kind = local->str("event", "crossing");
      ev.L = local->integer("L", 1);
      ev.exact_budget = local->integer("exact_budget", 200000);
      const VertexId x = local->integer("x", 0);
      g->check_vertex(x);
      job.run = [=](int) {
        auto row = estimate_event_probability(*g, model, ev, x, run);
        std::string csv = "label,n,hits,p_hat,lo,hi\n" + row.label + "," + std::to_string(row.n) + "," +
                          std::to_string(row.hits) + "," + fmt_num(row.p_hat) + "," + fmt_num(row.lo) + "," +
                          fmt_num(row.hi) + "\n";
        return std::make_pair(csv, meta({{"event", ev.kind}, {"L", ev.L}, {"x", x}}));
      };
    } else if (type == "pk_curve") {
      PkOptions po;
      po.kind = local->str("event", "sep-open");
      Reader sc(config, section(config, "scales"));
      Layered l{*local, sc, ""};
      const auto L0 = l.pick("L0", [](Reader& r, const std::string& k) { return r.integer(k, 4); });
      const double gamma = l.pick("gamma", [](Reader& r, const std::string& k) { return r.real(k, 2.0); });
      for (auto k : local->int_list("k", {0})) po.ks.push_back(static_cast<int>(k));
      const auto kmax = *std::max_element(po.ks.begin(), po.ks.end());
      const auto scales = make_scales(L0, gamma, static_cast<int>(kmax));
      const auto centers = local->str("centers", "auto");
      if (centers != "auto")
        for (auto c : local->int_list("centers")) po.centers.centers.push_back(c);
      po.centers.count = local->integer("center_count", 0);
      po.centers.seed = static_cast<std::uint64_t>(local->integer("center_seed", 1));
      po.compare_exact = local->boolean("compare_exact", false);
      po.exact_budget = local->integer("exact_budget", 200000);
      job.run = [=](int) {
        auto curve = estimate_pk_curve(*g, model, scales, po, run);
        nlohmann::ordered_json extra{{"event", po.kind},
                                     {"L0", L0},
                                     {"gamma", gamma},
                                     {"center_aggregate", curve.metadata.at("center_aggregate")},
                                     {"centers", curve.metadata.at("centers")},
                                     {"warnings", curve.warnings}};
        return std::make_pair(curve.csv(), meta(extra));
      };
    } else if (type == "decoupling") {
      DecouplingOptions d;
      d.x = local->integer("x", 0);
      d.y = local->integer("y");
      for (auto r : local->int_list("radii")) d.radii.push_back(r);
      d.alpha = local->real("alpha", 2.0);
      d.near = local->str("near", "all-open");
      d.far_radius = local->integer("far_radius", 0);
      job.run = [=](int) {
        auto rep = estimate_decoupling_defect(*g, model, d, run);
        return std::make_pair(rep.csv(), meta({{"near", rep.metadata.at("near")}, {"far", rep.metadata.at("far")}}));
      };
    } else if (type == "tails") {
      TailOptions t;
      t.x = local->integer("x", 0);
      for (auto v : local->int_list("thresholds")) t.thresholds.push_back(v);
      t.theta = local->real("theta", 1.0);
      const auto mode = local->str("mode", "diameter");
      if (mode != "diameter" && mode != "volume") local->fail(s.line, "mode must be diameter or volume");
      t.mode = mode == "volume" ? TailMode::volume : TailMode::diameter;
      const auto proxy = local->str("proxy", "auto");
      if (proxy == "boundary") t.proxy = InfiniteProxy::boundary;
      else if (proxy == "largest") t.proxy = InfiniteProxy::largest;
      else if (proxy != "auto") local->fail(s.line, "proxy must be auto, boundary or largest");
      job.run = [=](int) {
        auto rep = estimate_cluster_tails(*g, model, t, run);
        nlohmann::ordered_json extra{{"mode", rep.metadata.at("mode")},
                                     {"infinite_proxy", rep.metadata.at("infinite_proxy")},
                                     {"theta", rep.theta}};
        if (rep.fitted_slope) extra["fitted_slope"] = *rep.fitted_slope;
        return std::make_pair(rep.csv(), meta(extra));
      };
    } else {
      local->fail(local->has("type") ? s.find("type")->line : s.line, "unknown estimator type '" + type + "'");
    }
    local->finish();
    jobs.push_back(std::move(job));
  }
  // Global sections: fixed key sets, and values must parse even when every
  // estimator overrides them.
  {
    Reader gg(config, section(config, "graph")), gm(config, section(config, "model"));
    Reader none(config, nullptr);
    if (section(config, "graph") && section(config, "graph")->find("kind")) load_graph(none, gg);
    load_model(none, gm);
    Reader sc(config, section(config, "scales"));
    sc.integer("L0", 4);
    sc.real("gamma", 2.0);
    sc.finish();
    for (auto key : {"kind", "dim", "side", "n", "file"})
      if (gg.has(key)) gg.str(key);
    gg.finish();
    gm.finish();
  }

  fs::create_directories(out);
  ExperimentResult res;
  nlohmann::ordered_json manifest;
  manifest["name"] = name;
  manifest["format"] = kCsvFormat;
  manifest["config_hash"] = hex64(fnv1a(config.text));
  manifest["master_seed"] = master;
  manifest["version"] = "scaleperc 1.0.0";
  manifest["schemas"] = {{"event", "label,n,hits,p_hat,lo,hi"},
                         {"pk_curve", PkCurve::csv_header()},
                         {"decoupling", DecouplingReport::csv_header()},
                         {"tails", TailReport::csv_header()}};
  manifest["estimators"] = nlohmann::ordered_json::array();
  for (auto& job : jobs) {
    auto [csv, meta] = job.run(nworkers);
    const auto file = out / (job.name + ".csv");
    write_file(file, csv);
    res.files.push_back(file);
    meta["name"] = job.name;
    meta["file"] = file.filename().string();
    meta["csv_hash"] = hex64(fnv1a(csv));
    if (meta.contains("warnings"))
      for (auto& w : meta["warnings"]) res.warnings.push_back(job.name + ": " + w.get<std::string>());
    manifest["estimators"].push_back(meta);
  }
  const auto mpath = out / "manifest.json";
  write_file(mpath, manifest.dump(2) + "\n");
  res.files.push_back(mpath);
  return res;
}

}  // namespace scaleperc
