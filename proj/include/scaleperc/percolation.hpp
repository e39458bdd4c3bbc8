#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scaleperc/graph.hpp"
#include "scaleperc/rng.hpp"

namespace scaleperc {

struct Provenance {
  std::string model;  // "bernoulli-site", "bernoulli-bond", "dac", "fixed", ...
  double p = 0, q = 0;
  SeedSpec seed;
};

// Open/closed state per vertex. Either stored explicitly or generated on
// demand from counter-based coins; both give the same bit for every vertex,
// so a procedural config on a 10^11-vertex torus behaves exactly like a
// stored one would.
class SiteConfig {
 public:
  static SiteConfig constant(const Graph& g, bool open);
  static SiteConfig from_states(const Graph& g, std::vector<std::uint8_t> open,
                                Provenance prov = {"fixed"});
  static SiteConfig bernoulli(const Graph& g, double p, SeedSpec seed, bool materialize);

  bool open(VertexId v) const {
    if (!states_.empty()) return states_[static_cast<std::size_t>(v)] != 0;
    if (constant_) return constant_open_;
    return coin_.hit(counter_word(word_seed_, static_cast<std::uint64_t>(v)));
  }
  bool materialized() const noexcept { return !states_.empty(); }
  SiteConfig materialize() const;
  // Only on materialized configs.
  void set(VertexId v, bool open);

  const Graph& graph() const noexcept { return *g_; }
  const Provenance& provenance() const noexcept { return prov_; }
  std::int64_t open_count() const;

 private:
  SiteConfig(const Graph& g) : g_(&g), coin_(0.0) {}
  const Graph* g_;
  std::vector<std::uint8_t> states_;
  bool constant_ = false;
  bool constant_open_ = false;
  CoinThreshold coin_;
  std::uint64_t word_seed_ = 0;
  Provenance prov_;
};

// Open/closed state per edge, indexed by edge id (see Graph::edge_list).
class BondConfig {
 public:
  static BondConfig bernoulli(const Graph& g, double p, SeedSpec seed);
  static BondConfig from_states(const Graph& g, std::vector<std::uint8_t> open);

  bool open(std::int64_t edge_id) const { return states_[static_cast<std::size_t>(edge_id)] != 0; }
  std::int64_t size() const noexcept { return static_cast<std::int64_t>(states_.size()); }
  const Graph& graph() const noexcept { return *g_; }
  const Provenance& provenance() const noexcept { return prov_; }

 private:
  explicit BondConfig(const Graph& g) : g_(&g) {}
  const Graph* g_;
  std::vector<std::uint8_t> states_;
  Provenance prov_;
};

SiteConfig sample_bernoulli_site(const Graph& g, double p, SeedSpec seed);
BondConfig sample_bernoulli_bond(const Graph& g, double p, SeedSpec seed);

struct ClusterLabeling {
  static constexpr std::int32_t kClosed = -1;

  std::vector<std::int32_t> label;  // per vertex; kClosed for closed sites
  std::int32_t count = 0;
  std::vector<std::int64_t> size;       // per cluster
  std::vector<VertexId> min_vertex;     // per cluster; ids follow min_vertex order
  std::vector<std::int64_t> diameter_cache;  // -1 until computed

  std::vector<VertexId> members(std::int32_t id) const;
  std::int64_t diameter(const Graph& g, std::int32_t id);
  std::int32_t largest() const;
};

ClusterLabeling clusters(const Graph& g, const SiteConfig& cfg);
ClusterLabeling clusters(const Graph& g, const BondConfig& cfg);

struct DacSample {
  BondConfig bonds;
  ClusterLabeling bond_clusters;
  SiteConfig colors;  // black = open
};

DacSample divide_and_color_detailed(const Graph& g, double p, double q, SeedSpec seed);
SiteConfig divide_and_color(const Graph& g, double p, double q, SeedSpec seed);

}  // namespace scaleperc
