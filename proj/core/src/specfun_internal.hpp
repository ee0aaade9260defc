#pragma once

#include <cmath>

namespace maternlab::specfun::detail {

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

/// log|Gamma(x)| with the sign of Gamma(x) written to `sign`; x must not be a pole.
inline double lgamma_signed(double x, int& sign) {
  if (x > 0.0) {
    sign = 1;
  } else {
    const auto f = static_cast<long long>(std::floor(x));
    sign = (f % 2 == 0) ? 1 : -1;
  }
  return std::lgamma(x);
}

}  // namespace maternlab::specfun::detail
