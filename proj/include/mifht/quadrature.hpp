#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace mifht {

enum class QuadratureFamily { chebyshev_first, chebyshev_second, legendre };

/// Nodes and weights on the reference interval [-1, 1]. For the Chebyshev
/// families the weight function (1-s^2)^(-1/2) resp. (1-s^2)^(1/2) is absorbed
/// into the weights, so sum w_i g(s_i) approximates the weighted integral of g.
struct ReferenceRule {
  QuadratureFamily family;
  std::vector<double> nodes;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }
};

/// Gauss-Chebyshev of the first kind, nodes cos((2i+1)pi/(2n)), descending.
[[nodiscard]] inline ReferenceRule gauss_chebyshev_first(std::size_t n) {
  ReferenceRule rule{QuadratureFamily::chebyshev_first, std::vector<double>(n),
                     std::vector<double>(n, std::numbers::pi / static_cast<double>(n))};
  for (std::size_t i = 0; i < n; ++i)
    rule.nodes[i] = std::cos(std::numbers::pi * (2.0 * static_cast<double>(i) + 1.0) /
                             (2.0 * static_cast<double>(n)));
  return rule;
}

/// Gauss-Chebyshev of the second kind, nodes cos(i pi/(n+1)), i = 1..n.
[[nodiscard]] inline ReferenceRule gauss_chebyshev_second(std::size_t n) {
  ReferenceRule rule{QuadratureFamily::chebyshev_second, std::vector<double>(n),
                     std::vector<double>(n)};
  const double step = std::numbers::pi / static_cast<double>(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double angle = step * static_cast<double>(i + 1);
    const double s = std::sin(angle);
    rule.nodes[i] = std::cos(angle);
    rule.weights[i] = step * s * s;
  }
  return rule;
}

/// Gauss-Legendre by Newton iteration on P_n from the Chebyshev initial guess.
[[nodiscard]] inline ReferenceRule gauss_legendre(std::size_t n) {
  ReferenceRule rule{QuadratureFamily::legendre, std::vector<double>(n), std::vector<double>(n)};
  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (dn + 0.5));
    double derivative = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double dk = static_cast<double>(k);
        const double p2 = ((2.0 * dk - 1.0) * x * p1 - (dk - 1.0) * p0) / dk;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      derivative = dn * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / derivative;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double dk = static_cast<double>(k);
        const double p2 = ((2.0 * dk - 1.0) * x * p1 - (dk - 1.0) * p0) / dk;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      derivative = dn * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * derivative * derivative);
    rule.nodes[i] = x;
    rule.nodes[n - 1 - i] = -x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

[[nodiscard]] inline ReferenceRule make_rule(QuadratureFamily family, std::size_t n) {
  switch (family) {
    case QuadratureFamily::chebyshev_first: return gauss_chebyshev_first(n);
    case QuadratureFamily::chebyshev_second: return gauss_chebyshev_second(n);
    case QuadratureFamily::legendre: return gauss_legendre(n);
  }
  return gauss_legendre(n);
}

}  // namespace mifht
