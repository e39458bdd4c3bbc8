#include "scaleperc/percolation.hpp"

#include <algorithm>
#include <numeric>

#include "scaleperc/metric.hpp"

namespace scaleperc {

namespace {

void check_probability(double p, const char* name) {
  require(p >= 0.0 && p <= 1.0, ErrorKind::invalid_argument,
          std::string(name) + " must lie in [0, 1], got " + std::to_string(p));
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::uint8_t> rank_;
};

// Turns union-find roots into ids numbered by smallest member.
ClusterLabeling finish_labels(UnionFind& uf, const std::vector<std::uint8_t>& active) {
  const std::size_t n = active.size();
  ClusterLabeling lab;
  lab.label.assign(n, ClusterLabeling::kClosed);
  std::vector<std::int32_t> root_id(n, -1);
  for (std::size_t v = 0; v < n; ++v) {
    if (!active[v]) continue;
    const std::size_t r = uf.find(v);
    if (root_id[r] < 0) {
      root_id[r] = lab.count++;
      lab.size.push_back(0);
      lab.min_vertex.push_back(static_cast<VertexId>(v));
    }
    lab.label[v] = root_id[r];
    ++lab.size[static_cast<std::size_t>(root_id[r])];
  }
  lab.diameter_cache.assign(static_cast<std::size_t>(lab.count), -1);
  return lab;
}

}  // namespace

SiteConfig SiteConfig::constant(const Graph& g, bool open) {
  SiteConfig c(g);
  c.constant_ = true;
  c.constant_open_ = open;
  c.prov_.model = "fixed";
  c.prov_.p = open ? 1.0 : 0.0;
  return c;
}

SiteConfig SiteConfig::from_states(const Graph& g, std::vector<std::uint8_t> open, Provenance prov) {
  require(static_cast<VertexId>(open.size()) == g.vertex_count(), ErrorKind::invalid_argument,
          "site state vector has wrong length");
  require(!open.empty(), ErrorKind::invalid_argument, "empty site configuration");
  SiteConfig c(g);
  for (auto& s : open) s = s ? 1 : 0;
  c.states_ = std::move(open);
  c.prov_ = std::move(prov);
  return c;
}

SiteConfig SiteConfig::bernoulli(const Graph& g, double p, SeedSpec seed, bool materialize) {
  check_probability(p, "p");
  SiteConfig c(g);
  c.coin_ = CoinThreshold(p);
  c.word_seed_ = seed.derive();
  c.prov_ = {"bernoulli-site", p, 0.0, seed};
  if (materialize) c = c.materialize();
  return c;
}

SiteConfig SiteConfig::materialize() const {
  if (materialized()) return *this;
  g_->require_dense("materialising a site configuration");
  SiteConfig c(*g_);
  c.prov_ = prov_;
  c.states_.resize(static_cast<std::size_t>(g_->vertex_count()));
  for (VertexId v = 0; v < g_->vertex_count(); ++v) c.states_[static_cast<std::size_t>(v)] = open(v) ? 1 : 0;
  return c;
}

void SiteConfig::set(VertexId v, bool open) {
  require(materialized(), ErrorKind::invalid_argument, "cannot modify a procedural configuration");
  g_->check_vertex(v);
  states_[static_cast<std::size_t>(v)] = open ? 1 : 0;
}

std::int64_t SiteConfig::open_count() const {
  g_->require_dense("counting open sites");
  std::int64_t k = 0;
  for (VertexId v = 0; v < g_->vertex_count(); ++v) k += open(v);
  return k;
}

BondConfig BondConfig::bernoulli(const Graph& g, double p, SeedSpec seed) {
  check_probability(p, "p");
  g.require_dense("bond configuration");
  BondConfig c(g);
  const CoinThreshold coin(p);
  const std::uint64_t s = seed.derive();
  c.states_.resize(static_cast<std::size_t>(g.edge_count()));
  for (std::int64_t e = 0; e < g.edge_count(); ++e)
    c.states_[static_cast<std::size_t>(e)] = coin.hit(counter_word(s, static_cast<std::uint64_t>(e))) ? 1 : 0;
  c.prov_ = {"bernoulli-bond", p, 0.0, seed};
  return c;
}

BondConfig BondConfig::from_states(const Graph& g, std::vector<std::uint8_t> open) {
  require(static_cast<std::int64_t>(open.size()) == g.edge_count(), ErrorKind::invalid_argument,
          "bond state vector has wrong length");
  BondConfig c(g);
  for (auto& s : open) s = s ? 1 : 0;
  c.states_ = std::move(open);
  c.prov_.model = "fixed";
  return c;
}

SiteConfig sample_bernoulli_site(const Graph& g, double p, SeedSpec seed) {
  return SiteConfig::bernoulli(g, p, seed, g.fits_dense());
}

BondConfig sample_bernoulli_bond(const Graph& g, double p, SeedSpec seed) {
  return BondConfig::bernoulli(g, p, seed);
}

std::vector<VertexId> ClusterLabeling::members(std::int32_t id) const {
  std::vector<VertexId> out;
  out.reserve(static_cast<std::size_t>(size[static_cast<std::size_t>(id)]));
  for (std::size_t v = static_cast<std::size_t>(min_vertex[static_cast<std::size_t>(id)]); v < label.size(); ++v)
    if (label[v] == id) out.push_back(static_cast<VertexId>(v));
  return out;
}

std::int64_t ClusterLabeling::diameter(const Graph& g, std::int32_t id) {
  auto& d = diameter_cache[static_cast<std::size_t>(id)];
  if (d < 0) d = set_diameter(g, members(id));
  return d;
}

std::int32_t ClusterLabeling::largest() const {
  if (count == 0) return -1;
  return static_cast<std::int32_t>(std::max_element(size.begin(), size.end()) - size.begin());
}

ClusterLabeling clusters(const Graph& g, const SiteConfig& cfg) {
  g.require_dense("cluster labelling");
  const auto n = static_cast<std::size_t>(g.vertex_count());
  std::vector<std::uint8_t> active(n);
  for (std::size_t v = 0; v < n; ++v) active[v] = cfg.open(static_cast<VertexId>(v)) ? 1 : 0;
  UnionFind uf(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (!active[v]) continue;
    g.for_each_neighbor(static_cast<VertexId>(v), [&](VertexId w) {
      if (static_cast<std::size_t>(w) > v && active[static_cast<std::size_t>(w)]) uf.unite(v, static_cast<std::size_t>(w));
    });
  }
  return finish_labels(uf, active);
}

ClusterLabeling clusters(const Graph& g, const BondConfig& cfg) {
  g.require_dense("cluster labelling");
  const auto n = static_cast<std::size_t>(g.vertex_count());
  UnionFind uf(n);
  g.for_each_edge([&](VertexId u, VertexId v, std::int64_t id) {
    if (cfg.open(id)) uf.unite(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
  });
  return finish_labels(uf, std::vector<std::uint8_t>(n, 1));
}

DacSample divide_and_color_detailed(const Graph& g, double p, double q, SeedSpec seed) {
  check_probability(p, "p");
  check_probability(q, "q");
  const std::uint64_t base = seed.derive();
  auto bonds = BondConfig::bernoulli(g, p, SeedSpec{base, stream_id("dac-bond"), 0});
  auto lab = clusters(g, bonds);
  // A cluster's colour depends only on the sample and its smallest vertex.
  const std::uint64_t color_seed = hash_combine(base, stream_id("dac-color"));
  const CoinThreshold coin(q);
  std::vector<std::uint8_t> black_of(static_cast<std::size_t>(lab.count));
  for (std::int32_t c = 0; c < lab.count; ++c)
    black_of[static_cast<std::size_t>(c)] =
        coin.hit(counter_word(color_seed, static_cast<std::uint64_t>(lab.min_vertex[static_cast<std::size_t>(c)])));
  std::vector<std::uint8_t> states(static_cast<std::size_t>(g.vertex_count()));
  for (std::size_t v = 0; v < states.size(); ++v) states[v] = black_of[static_cast<std::size_t>(lab.label[v])];
  auto colors = SiteConfig::from_states(g, std::move(states), Provenance{"dac", p, q, seed});
  DacSample out{std::move(bonds), std::move(lab), std::move(colors)};
  return out;
}

SiteConfig divide_and_color(const Graph& g, double p, double q, SeedSpec seed) {
  auto s = divide_and_color_detailed(g, p, q, seed);
  return s.colors;
}

}  // namespace scaleperc
