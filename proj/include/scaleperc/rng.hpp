#pragma once

#include <cstdint>
#include <random>

namespace scaleperc {

// Stateless 64-bit mixer (splitmix64 finalizer).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) noexcept {
  return mix64(a ^ mix64(b + 0x632be59bd9b4e019ULL));
}

// Seeds are derived, never drawn: the seed of sample i of stream s is a pure
// function of (master, s, i), so results do not depend on scheduling.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream = 0;
  std::uint64_t sample_index = 0;

  std::uint64_t derive() const noexcept {
    return hash_combine(hash_combine(master_seed, stream), sample_index);
  }
  SeedSpec with_index(std::uint64_t i) const noexcept {
    return {master_seed, stream, i};
  }
};

// Stable 64-bit id for a textual stream label (FNV-1a).
constexpr std::uint64_t stream_id(const char* label) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (; *label; ++label) {
    h ^= static_cast<unsigned char>(*label);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Probability p as an integer threshold on uniform 64-bit words:
// a word w means "success" iff w < threshold, or always when p == 1.
class CoinThreshold {
 public:
  explicit CoinThreshold(double p);
  bool hit(std::uint64_t word) const noexcept { return always_ || word < threshold_; }
  double p() const noexcept { return p_; }

 private:
  double p_;
  std::uint64_t threshold_;
  bool always_;
};

// Counter-based coin: outcome for item `index` under `seed`.
inline std::uint64_t counter_word(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(seed ^ mix64(index * 0xd6e8feb86659fd93ULL + 0x2545f4914f6cdd1dULL));
}

using Rng = std::mt19937_64;

}  // namespace scaleperc
