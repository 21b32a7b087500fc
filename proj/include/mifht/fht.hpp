#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "mifht/chebyshev.hpp"
#include "mifht/error.hpp"
#include "mifht/function.hpp"
#include "mifht/interval.hpp"

namespace mifht {

// Single-interval finite Hilbert transform H_j f = (1/pi) int_{I_j} f(t)/(t-z) dt.
//
// With x = c + h s and w = h sqrt(1-s^2):
//   H[w sum d_k U_k]     = -h sum d_k T_{k+1}(s)   on the interval (PV),
//                        = -h sum d_k W^{k+1}      off it, W = 1/(t + sqrt(t^2-1)),
// and H^{-1} of a plain series sum c_k T_k is w sum_{k>=1} (-c_k/h) U_{k-1}
// on the interval and -i sum c_k W^k off it (c_0 must vanish for range data).

namespace detail {

/// PV int_{-1}^{1} T_k(s)/(s-t) ds for k < n, t in (-1, 1).
[[nodiscard]] inline std::vector<double> pv_chebyshev_moments(std::size_t n, double t) {
  std::vector<double> q(std::max<std::size_t>(n, 2));
  q[0] = std::log((1.0 - t) / (1.0 + t));
  q[1] = 2.0 + t * q[0];
  for (std::size_t k = 1; k + 1 < q.size(); ++k) q[k + 1] = 2.0 * t * q[k] - q[k - 1] + 2.0 * cheb::integral_t(k);
  q.resize(n);
  return q;
}

/// (1/pi) PV int T-series(s)/(s-t) ds on the reference interval.
[[nodiscard]] inline cplx pv_plain_reference(const cheb::Coeffs& c, double t) {
  const std::vector<double> q = pv_chebyshev_moments(static_cast<std::size_t>(c.size()), t);
  cplx sum = 0.0;
  for (Eigen::Index k = 0; k < c.size(); ++k) sum += c[k] * q[static_cast<std::size_t>(k)];
  return sum / std::numbers::pi;
}

/// (1/pi) int T-series(s)/(s-t) ds for t off [-1, 1], by adaptive Gauss-Kronrod.
[[nodiscard]] inline cplx cauchy_plain_reference(const cheb::Coeffs& c, cplx t) {
  using boost::math::quadrature::gauss_kronrod;
  auto re = [&](double s) { return (cheb::eval_t(c, s) / (s - t)).real(); };
  auto im = [&](double s) { return (cheb::eval_t(c, s) / (s - t)).imag(); };
  const double r = gauss_kronrod<double, 61>::integrate(re, -1.0, 1.0, 20, 1e-14);
  const double i = gauss_kronrod<double, 61>::integrate(im, -1.0, 1.0, 20, 1e-14);
  return cplx(r, i) / std::numbers::pi;
}

}  // namespace detail

/// Cauchy transform (1/pi) int_{I} p(t)/(t-z) dt of one piece living on iv.
/// On the cut, Side::off_cut gives the principal value and above/below add
/// +-i p(x) (Plemelj).
[[nodiscard]] inline cplx cauchy_piece(const Piece& p, const Interval& iv, cplx z, Side side = Side::off_cut) {
  const double h = iv.half_length();
  const cplx t = iv.to_reference(z);
  if (z.imag() == 0.0 && (z.real() == iv.a || z.real() == iv.b))
    throw Error(ErrorKind::domain, "Hilbert transform evaluated exactly at an endpoint");
  const bool on_cut = z.imag() == 0.0 && iv.contains_open(z.real());
  if (!on_cut) {
    if (p.weight == Weight::sqrt_vanishing) return -h * cheb::eval_shifted_power(p.coeffs, joukowski_root(t));
    return detail::cauchy_plain_reference(p.coeffs, t);
  }
  const double s = t.real();
  cplx pv;
  cplx value;
  if (p.weight == Weight::sqrt_vanishing) {
    pv = -h * cheb::eval_shifted_t(p.coeffs, s);
    value = h * std::sqrt((1.0 - s) * (1.0 + s)) * cheb::eval_u(p.coeffs, s);
  } else {
    pv = detail::pv_plain_reference(p.coeffs, s);
    value = cheb::eval_t(p.coeffs, s);
  }
  switch (side) {
    case Side::above: return pv + cplx(0.0, 1.0) * value;
    case Side::below: return pv - cplx(0.0, 1.0) * value;
    case Side::off_cut: break;
  }
  return pv;
}

/// H_j f_j at z (principal value when z lies inside I_j).
[[nodiscard]] inline cplx fht_forward(const PiecewiseFunction& f, std::size_t j, cplx z) {
  return cauchy_piece(f.piece(j), f.system().at(j), z);
}

[[nodiscard]] inline std::vector<cplx> fht_forward(const PiecewiseFunction& f, std::size_t j,
                                                   std::span<const cplx> points) {
  std::vector<cplx> out;
  out.reserve(points.size());
  for (cplx z : points) out.push_back(fht_forward(f, j, z));
  return out;
}

/// T coefficients of (H_j f_j) restricted to I_j. Exact for sqrt-vanishing
/// pieces; plain pieces are resampled at modes+1 first-kind nodes.
[[nodiscard]] inline Piece hilbert_on_interval(const Piece& p, const Interval& iv) {
  const Eigen::Index n = p.coeffs.size();
  if (p.weight == Weight::sqrt_vanishing) {
    cheb::Coeffs c = cheb::Coeffs::Zero(n + 1);
    c.tail(n) = -iv.half_length() * p.coeffs;
    return {Weight::plain, std::move(c)};
  }
  const std::size_t m = static_cast<std::size_t>(n) + 1;
  std::vector<cplx> vals;
  vals.reserve(m);
  for (double angle : cheb::first_kind_angles(m)) vals.push_back(detail::pv_plain_reference(p.coeffs, std::cos(angle)));
  return {Weight::plain, cheb::interpolate_first_kind(vals)};
}

/// Range constants of one piece: m0 = int f/R_+, c = i m0/pi (so that
/// int (f-c)/R_+ = 0), and kappa = -(1/pi) int t (f-c)/R_+ dt.
struct RangeData {
  std::size_t interval = 0;
  cplx m0;
  cplx c;
  cplx kappa;
};

[[nodiscard]] inline RangeData range_scan(const PiecewiseFunction& f, std::size_t j) {
  const Piece& p = f.piece(j);
  const double h = f.system().at(j).half_length();
  const Eigen::Index n = p.coeffs.size();
  auto coef = [&](Eigen::Index k) { return k < n ? p.coeffs[k] : cplx(0.0); };
  RangeData r{j, 0.0, 0.0, 0.0};
  const cplx i(0.0, 1.0);
  if (p.weight == Weight::plain) {
    r.c = coef(0);
    r.kappa = 0.5 * i * h * coef(1);
  } else {
    cplx mean = 0.0;
    cplx first = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      mean += p.coeffs[k] * cheb::integral_u(uk);
      // s U_k = (U_{k+1} + U_{k-1}) / 2
      first += p.coeffs[k] * 0.5 * (cheb::integral_u(uk + 1) + (k > 0 ? cheb::integral_u(uk - 1) : 0.0));
    }
    r.c = h * mean / std::numbers::pi;
    r.kappa = i * h * h * first / std::numbers::pi;
  }
  r.m0 = -i * std::numbers::pi * r.c;
  return r;
}

/// Default range tolerance 1e-8 (1 + ||g||) for piece j.
[[nodiscard]] inline double default_range_tolerance(const PiecewiseFunction& g, std::size_t j) {
  const Piece& p = g.piece(j);
  const PiecewiseFunction single(IntervalSystem({g.system()[j]}), {p}, g.field());
  return 1e-8 * (1.0 + l2_norm(single));
}

namespace detail {

/// Inverse of one piece with its T_0 (resp. range moment) part discarded.
[[nodiscard]] inline Piece invert_piece(const Piece& p, const Interval& iv) {
  const double h = iv.half_length();
  const Eigen::Index n = p.coeffs.size();
  if (p.weight == Weight::plain) {
    cheb::Coeffs d = cheb::Coeffs::Zero(std::max<Eigen::Index>(n - 1, 1));
    for (Eigen::Index k = 1; k < n; ++k) d[k - 1] = -p.coeffs[k] / h;
    return {Weight::sqrt_vanishing, std::move(d)};
  }
  // Data that vanishes like w: -(w(x)/pi) PV int u(t)/(t-x) dt, resampled.
  const cheb::Coeffs c = cheb::u_to_t(p.coeffs);
  const std::size_t m = static_cast<std::size_t>(n) + 8;
  std::vector<cplx> vals;
  vals.reserve(m);
  for (double angle : cheb::first_kind_angles(m)) vals.push_back(-pv_plain_reference(c, std::cos(angle)));
  return {Weight::sqrt_vanishing, cheb::t_to_u(cheb::interpolate_first_kind(vals))};
}

}  // namespace detail

/// H^{-1} applied interval by interval. Throws RangeError when some piece has
/// a range moment |m0| above its tolerance (tol < 0 selects the default).
[[nodiscard]] inline PiecewiseFunction fht_invert(const PiecewiseFunction& g, double tol = -1.0) {
  std::vector<Piece> pieces(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const RangeData r = range_scan(g, j);
    const double limit = tol < 0.0 ? default_range_tolerance(g, j) : tol;
    if (std::abs(r.m0) > limit)
      throw Error(ErrorKind::range, "interval " + std::to_string(j) + ": range moment " +
                                        std::to_string(std::abs(r.m0)) + " exceeds " + std::to_string(limit));
    pieces[j] = detail::invert_piece(g.piece(j), g.system()[j]);
  }
  return {g.system(), std::move(pieces), g.field()};
}

/// The inversion expression -(R(z)/pi) int g/(R_+ (t-z)) dt for piece j,
/// at any z not an endpoint; on the cut this is the value of H^{-1} g.
[[nodiscard]] inline cplx fht_invert_at(const PiecewiseFunction& g, std::size_t j, cplx z) {
  const Interval& iv = g.system().at(j);
  const Piece& p = g.piece(j);
  if (z.imag() == 0.0 && (z.real() == iv.a || z.real() == iv.b))
    throw Error(ErrorKind::domain, "inverse evaluated exactly at an endpoint");
  const bool on_cut = z.imag() == 0.0 && iv.contains_open(z.real());
  if (on_cut) {
    const Piece inv = detail::invert_piece(p, iv);
    return PiecewiseFunction(IntervalSystem({iv}), {inv}, Field::complex).value(0, z.real());
  }
  if (p.weight != Weight::plain) throw Error(ErrorKind::domain, "off-cut inverse needs a plain piece");
  const cplx w = joukowski_root(iv.to_reference(z));
  cplx acc = 0.0;
  for (Eigen::Index k = p.coeffs.size() - 1; k >= 0; --k) acc = acc * w + p.coeffs[k];
  return cplx(0.0, -1.0) * acc;
}

/// The general inversion expression -(1/(pi R_+(x))) PV int R_+ g/(t-x) dt - kappa/R_+(x)
/// on the cut, for a plain piece g.
[[nodiscard]] inline cplx fht_invert_general(const PiecewiseFunction& g, std::size_t j, double x, cplx kappa) {
  const Interval& iv = g.system().at(j);
  const Piece& p = g.piece(j);
  if (p.weight != Weight::plain) throw Error(ErrorKind::domain, "general inversion expects a plain piece");
  const IntervalPoint pt = g.system().point(j, x);
  const Piece weighted{Weight::sqrt_vanishing, cheb::t_to_u(p.coeffs)};
  const cplx hw = cauchy_piece(weighted, iv, x);  // (1/pi) PV int w g/(t-x)
  const cplx r_plus(0.0, pt.weight());
  return -(cplx(0.0, 1.0) * hw + kappa) / r_plus;
}

}  // namespace mifht
