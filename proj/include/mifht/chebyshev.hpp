#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace mifht::cheb {

using cplx = std::complex<double>;
using Coeffs = Eigen::VectorXcd;

/// sum_k c_k T_k(t) by Clenshaw.
template <class Scalar>
[[nodiscard]] cplx eval_t(const Coeffs& c, Scalar t) {
  const Eigen::Index n = c.size();
  if (n == 0) return 0.0;
  cplx b1 = 0.0;
  cplx b2 = 0.0;
  for (Eigen::Index k = n - 1; k >= 1; --k) {
    const cplx b0 = c[k] + 2.0 * cplx(t) * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return c[0] + cplx(t) * b1 - b2;
}

/// sum_k d_k U_k(t) by Clenshaw.
template <class Scalar>
[[nodiscard]] cplx eval_u(const Coeffs& d, Scalar t) {
  cplx b1 = 0.0;
  cplx b2 = 0.0;
  for (Eigen::Index k = d.size() - 1; k >= 0; --k) {
    const cplx b0 = d[k] + 2.0 * cplx(t) * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return b1;
}

/// sum_k d_k w^(k+1) by Horner.
[[nodiscard]] inline cplx eval_shifted_power(const Coeffs& d, cplx w) {
  cplx acc = 0.0;
  for (Eigen::Index k = d.size() - 1; k >= 0; --k) acc = (acc + d[k]) * w;
  return acc;
}

/// sum_k d_k T_{k+1}(t).
[[nodiscard]] inline cplx eval_shifted_t(const Coeffs& d, double t) {
  Coeffs c = Coeffs::Zero(d.size() + 1);
  c.tail(d.size()) = d;
  return eval_t(c, t);
}

/// Coefficients in the U basis of sum_k c_k T_k.
[[nodiscard]] inline Coeffs t_to_u(const Coeffs& c) {
  const Eigen::Index n = c.size();
  Coeffs d = Coeffs::Zero(n);
  auto at = [&](Eigen::Index k) { return k < n ? c[k] : cplx(0.0); };
  for (Eigen::Index m = 0; m < n; ++m) d[m] = (m == 0 ? at(0) : 0.5 * at(m)) - 0.5 * at(m + 2);
  return d;
}

/// Coefficients in the T basis of sum_k d_k U_k.
[[nodiscard]] inline Coeffs u_to_t(const Coeffs& d) {
  const Eigen::Index n = d.size();
  Coeffs c = Coeffs::Zero(n);
  // Suffix sums over indices of equal parity.
  cplx tail[2] = {0.0, 0.0};
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    tail[k % 2] += d[k];
    c[k] = 2.0 * tail[k % 2];
  }
  if (n > 0) c[0] = tail[0];
  return c;
}

/// int_{-1}^{1} T_k(s) ds.
[[nodiscard]] inline double integral_t(std::size_t k) {
  if (k == 1) return 0.0;
  if (k % 2 == 1) return 0.0;
  const double dk = static_cast<double>(k);
  return 2.0 / (1.0 - dk * dk);
}

/// int_{-1}^{1} U_k(s) ds.
[[nodiscard]] inline double integral_u(std::size_t k) {
  return k % 2 == 0 ? 2.0 / static_cast<double>(k + 1) : 0.0;
}

/// Angles of the n first-kind nodes, s_i = cos(angle_i).
[[nodiscard]] inline std::vector<double> first_kind_angles(std::size_t n) {
  std::vector<double> a(n);
  for (std::size_t i = 0; i < n; ++i)
    a[i] = std::numbers::pi * (2.0 * static_cast<double>(i) + 1.0) / (2.0 * static_cast<double>(n));
  return a;
}

/// T coefficients of the degree n-1 interpolant through values at the n
/// first-kind nodes (discrete cosine transform by direct summation).
[[nodiscard]] inline Coeffs interpolate_first_kind(std::span<const cplx> values) {
  const std::size_t n = values.size();
  Coeffs c = Coeffs::Zero(static_cast<Eigen::Index>(n));
  const double dn = static_cast<double>(n);
  // cos(k (2i+1) pi / (2n)) depends on k(2i+1) mod 4n only.
  std::vector<double> table(4 * n);
  for (std::size_t m = 0; m < 4 * n; ++m) table[m] = std::cos(std::numbers::pi * static_cast<double>(m) / (2.0 * dn));
  for (std::size_t k = 0; k < n; ++k) {
    cplx sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += values[i] * table[(k * (2 * i + 1)) % (4 * n)];
    c[static_cast<Eigen::Index>(k)] = (k == 0 ? 1.0 : 2.0) * sum / dn;
  }
  return c;
}

/// U coefficients of the degree n-1 interpolant through values at the n
/// second-kind nodes cos(i pi/(n+1)), i = 1..n.
[[nodiscard]] inline Coeffs interpolate_second_kind(std::span<const cplx> values) {
  const std::size_t n = values.size();
  Coeffs d = Coeffs::Zero(static_cast<Eigen::Index>(n));
  const double step = std::numbers::pi / static_cast<double>(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double angle = step * static_cast<double>(i + 1);
    const double s = std::sin(angle);
    // U_k(cos a) sin a = sin((k+1) a); discrete orthogonality with weight sin^2.
    for (std::size_t k = 0; k < n; ++k)
      d[static_cast<Eigen::Index>(k)] += values[i] * s * std::sin(static_cast<double>(k + 1) * angle);
  }
  return d * (2.0 / static_cast<double>(n + 1));
}

}  // namespace mifht::cheb
