#include "scaleperc/rng.hpp"

#include <cmath>

#include "scaleperc/error.hpp"

namespace scaleperc {

CoinThreshold::CoinThreshold(double p) : p_(p), threshold_(0), always_(false) {
  require(p >= 0.0 && p <= 1.0, ErrorKind::invalid_argument,
          "probability must lie in [0, 1], got " + std::to_string(p));
  if (p >= 1.0) {
    always_ = true;
    return;
  }
  const long double scaled = std::ldexp(static_cast<long double>(p), 64);
  // p < 1 so scaled < 2^64 up to rounding at the very top.
  threshold_ = scaled >= 18446744073709551615.0L ? ~std::uint64_t{0}
                                                 : static_cast<std::uint64_t>(scaled);
}

}  // namespace scaleperc
