#pragma once

// Scalar test functions on the annulus, addressable by short names:
//   id            z
//   moebius:a     (z - a) / (1 - conj(a) z), |a| < 1, a real or "re,im"
//   sym           z + delta / z
//   half-sym      (z + delta / z) / 2
//   gn:n          delta^n / z^n + z^n
//   poly:c0,c1,.. c0 + c1 z + c2 z^2 + ... (real coefficients)

#include <functional>
#include <string>

#include "dpick/linalg.hpp"

namespace dpick {

using ScalarFunction = std::function<cplx(cplx)>;

struct CatalogFunction {
  std::string spec;
  ScalarFunction f;
  /// True when f is analytic on the whole unit disc.
  bool disc_analytic = false;
};

/// Throws InvalidInput for unknown names or malformed parameters.
CatalogFunction parse_function(const std::string& spec, double delta);

}  // namespace dpick
