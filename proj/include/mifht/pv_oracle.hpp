#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "mifht/error.hpp"
#include "mifht/interval.hpp"

namespace mifht {

/// Principal value (1/pi) PV int_a^b f(t)/(t-z) dt by symmetric excision.
///
/// I(r) = int over [a, z-r] and [z+r, b] has the expansion PV + r + r^3 + ...
/// (odd powers only) for f smooth near z, so halving r and eliminating the
/// odd powers by Richardson extrapolation converges to PV. The two outer
/// pieces use tanh-sinh, which tolerates sqrt-type behaviour at a and b.
/// This path shares no code with the spectral transforms and serves as their
/// independent reference.
template <class F>
[[nodiscard]] double pv_oracle(F&& f, const Interval& iv, double z, double tol = 1e-11) {
  if (!iv.contains_open(z)) throw Error(ErrorKind::domain, "pv_oracle: point is not inside the interval");
  boost::math::quadrature::tanh_sinh<double> integrator(12);
  auto excised = [&](double r) {
    auto g = [&](double t) { return f(t) / (t - z); };
    const double left = integrator.integrate(g, iv.a, z - r);
    const double right = integrator.integrate(g, z + r, iv.b);
    return left + right;
  };
  constexpr int levels = 7;
  std::array<std::array<double, levels>, levels> table{};
  const double r0 = 0.25 * std::min(z - iv.a, iv.b - z);
  double r = r0;
  double best = std::numeric_limits<double>::quiet_NaN();
  double best_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < levels; ++i, r *= 0.5) {
    table[i][0] = excised(r);
    for (int k = 1; k <= i; ++k) {
      const double factor = std::pow(2.0, 2 * k - 1);  // eliminates r^(2k-1)
      table[i][k] = (factor * table[i][k - 1] - table[i - 1][k - 1]) / (factor - 1.0);
    }
    if (i > 0) {
      const double gap = std::abs(table[i][i] - table[i - 1][i - 1]);
      if (gap < best_gap) {
        best_gap = gap;
        best = table[i][i];
      }
    }
  }
  if (!(best_gap <= tol * std::max(1.0, std::abs(best))))
    throw Error(ErrorKind::convergence, "pv_oracle: Richardson extrapolation stalled, gap " + std::to_string(best_gap));
  return best / std::numbers::pi;
}

}  // namespace mifht
