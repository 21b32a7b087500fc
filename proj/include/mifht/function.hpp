#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "mifht/chebyshev.hpp"
#include "mifht/error.hpp"
#include "mifht/interval.hpp"
#include "mifht/quadrature.hpp"

namespace mifht {

inline constexpr std::size_t default_modes = 128;

enum class Field { real, complex };

/// plain: value = sum c_k T_k(s).
/// sqrt_vanishing: value = w(x) sum d_k U_k(s) with w = sqrt((x-a)(b-x)).
enum class Weight { plain, sqrt_vanishing };

struct Piece {
  Weight weight = Weight::plain;
  cheb::Coeffs coeffs;  ///< T basis when plain, U basis of value/w otherwise
};

/// Points at the n first-kind Chebyshev nodes of interval j, in descending x.
[[nodiscard]] inline std::vector<IntervalPoint> first_kind_points(const IntervalSystem& sys, std::size_t j,
                                                                  std::size_t n) {
  std::vector<IntervalPoint> pts;
  pts.reserve(n);
  for (double angle : cheb::first_kind_angles(n)) pts.push_back(sys.point_from_angle(j, angle));
  return pts;
}

/// Coefficients of a piece from its values at first_kind_points(n). For a
/// sqrt-vanishing piece the values are those of the smooth factor value/w.
[[nodiscard]] inline cheb::Coeffs coeffs_from_nodes(std::span<const cplx> node_values, Weight weight) {
  cheb::Coeffs c = cheb::interpolate_first_kind(node_values);
  return weight == Weight::plain ? c : cheb::t_to_u(c);
}

/// Chebyshev projection of f (or of f/w for the sqrt-vanishing tag) on iv.
/// F is invoked as f(x) with x real and may return a real or complex value.
template <class F>
[[nodiscard]] cheb::Coeffs cheb_project(F&& f, const Interval& iv, std::size_t n, Weight weight) {
  if (n < 2) throw Error(ErrorKind::domain, "cheb_project needs at least two modes");
  IntervalSystem single({iv});
  std::vector<cplx> vals;
  vals.reserve(n);
  for (const IntervalPoint& p : first_kind_points(single, 0, n)) {
    cplx v = f(p.x);
    if (weight == Weight::sqrt_vanishing) v /= p.weight();
    vals.push_back(v);
  }
  return coeffs_from_nodes(vals, weight);
}

/// Member of L^2(I) stored per interval in a Chebyshev basis.
class PiecewiseFunction {
 public:
  PiecewiseFunction() = default;

  PiecewiseFunction(IntervalSystem sys, std::vector<Piece> pieces, Field field)
      : sys_(std::move(sys)), pieces_(std::move(pieces)), field_(field) {
    if (pieces_.size() != sys_.size())
      throw Error(ErrorKind::domain, "piece count " + std::to_string(pieces_.size()) +
                                         " does not match interval count " + std::to_string(sys_.size()));
    if (field_ == Field::real)
      for (Piece& p : pieces_) p.coeffs = p.coeffs.real().cast<cplx>();
  }

  [[nodiscard]] static PiecewiseFunction zero(const IntervalSystem& sys, std::size_t modes, Weight weight,
                                              Field field = Field::real) {
    std::vector<Piece> pieces(sys.size(), Piece{weight, cheb::Coeffs::Zero(static_cast<Eigen::Index>(modes))});
    return {sys, std::move(pieces), field};
  }

  [[nodiscard]] const IntervalSystem& system() const noexcept { return sys_; }
  [[nodiscard]] std::size_t size() const noexcept { return pieces_.size(); }
  [[nodiscard]] const Piece& piece(std::size_t j) const { return pieces_.at(j); }
  [[nodiscard]] Field field() const noexcept { return field_; }
  [[nodiscard]] bool is_real() const noexcept { return field_ == Field::real; }

  [[nodiscard]] std::size_t max_modes() const noexcept {
    std::size_t m = 0;
    for (const Piece& p : pieces_) m = std::max(m, static_cast<std::size_t>(p.coeffs.size()));
    return m;
  }

  [[nodiscard]] cplx value(const IntervalPoint& p) const {
    const Piece& pc = piece(p.interval);
    const double s = sys_[p.interval].to_reference(p.x);
    if (pc.weight == Weight::plain) return cheb::eval_t(pc.coeffs, s);
    return p.weight() * cheb::eval_u(pc.coeffs, s);
  }

  [[nodiscard]] cplx value(std::size_t j, double x) const { return value(sys_.point(j, x)); }

  /// Value at x anywhere on the real line; zero off I.
  [[nodiscard]] cplx value_at(double x) const {
    const std::size_t j = sys_.locate(x);
    return j == sys_.size() ? cplx(0.0) : value(j, x);
  }

  /// value/w for a sqrt-vanishing piece, value for a plain piece.
  [[nodiscard]] cplx smooth_value(std::size_t j, double s) const {
    const Piece& pc = piece(j);
    return pc.weight == Weight::plain ? cheb::eval_t(pc.coeffs, s) : cheb::eval_u(pc.coeffs, s);
  }

  [[nodiscard]] PiecewiseFunction scaled(cplx factor) const {
    PiecewiseFunction out = *this;
    for (Piece& p : out.pieces_) p.coeffs *= factor;
    if (factor.imag() != 0.0) out.field_ = Field::complex;
    return out;
  }

  [[nodiscard]] PiecewiseFunction with_piece(std::size_t j, Piece p) const {
    std::vector<Piece> pieces = pieces_;
    pieces.at(j) = std::move(p);
    return {sys_, std::move(pieces), field_};
  }

  [[nodiscard]] PiecewiseFunction real_part() const {
    std::vector<Piece> pieces = pieces_;
    for (Piece& p : pieces) p.coeffs = p.coeffs.real().cast<cplx>();
    return {sys_, std::move(pieces), Field::real};
  }

  friend PiecewiseFunction combine(const PiecewiseFunction& f, cplx a, const PiecewiseFunction& g, cplx b) {
    if (!(f.sys_ == g.sys_)) throw Error(ErrorKind::domain, "functions live on different interval systems");
    std::vector<Piece> pieces(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
      const Piece& p = f.pieces_[j];
      const Piece& q = g.pieces_[j];
      if (p.weight != q.weight) throw Error(ErrorKind::domain, "cannot add plain and sqrt-vanishing pieces");
      const Eigen::Index n = std::max(p.coeffs.size(), q.coeffs.size());
      cheb::Coeffs c = cheb::Coeffs::Zero(n);
      c.head(p.coeffs.size()) += a * p.coeffs;
      c.head(q.coeffs.size()) += b * q.coeffs;
      pieces[j] = {p.weight, std::move(c)};
    }
    const bool real = f.is_real() && g.is_real() && a.imag() == 0.0 && b.imag() == 0.0;
    return {f.sys_, std::move(pieces), real ? Field::real : Field::complex};
  }

  friend PiecewiseFunction operator+(const PiecewiseFunction& f, const PiecewiseFunction& g) {
    return combine(f, 1.0, g, 1.0);
  }
  friend PiecewiseFunction operator-(const PiecewiseFunction& f, const PiecewiseFunction& g) {
    return combine(f, 1.0, g, -1.0);
  }

 private:
  IntervalSystem sys_;
  std::vector<Piece> pieces_;
  Field field_ = Field::real;
};

/// Projects f onto every interval. F is invoked as f(const IntervalPoint&).
template <class F>
[[nodiscard]] PiecewiseFunction project_points(const IntervalSystem& sys, std::size_t modes, Weight weight,
                                               Field field, F&& f) {
  if (modes < 2) throw Error(ErrorKind::domain, "projection needs at least two modes");
  std::vector<Piece> pieces(sys.size());
  for (std::size_t j = 0; j < sys.size(); ++j) {
    std::vector<cplx> vals;
    vals.reserve(modes);
    for (const IntervalPoint& p : first_kind_points(sys, j, modes)) {
      cplx v = f(p);
      if (weight == Weight::sqrt_vanishing) v /= p.weight();
      vals.push_back(v);
    }
    pieces[j] = {weight, coeffs_from_nodes(vals, weight)};
  }
  return {sys, std::move(pieces), field};
}

/// Projects f(j, x) onto every interval.
template <class F>
[[nodiscard]] PiecewiseFunction project(const IntervalSystem& sys, std::size_t modes, Weight weight, Field field,
                                        F&& f) {
  return project_points(sys, modes, weight, field, [&](const IntervalPoint& p) { return cplx(f(p.interval, p.x)); });
}

/// Integrates F(p) over each interval in the angle variable x = c + h cos(theta),
/// where sqrt-type endpoint behaviour becomes smooth. Returns per-interval sums.
template <class F>
[[nodiscard]] std::vector<cplx> integrate_by_angle(const IntervalSystem& sys, std::size_t nodes, F&& f) {
  const ReferenceRule rule = gauss_legendre(nodes);
  std::vector<cplx> out(sys.size(), 0.0);
  for (std::size_t j = 0; j < sys.size(); ++j) {
    const double h = sys[j].half_length();
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double angle = 0.5 * std::numbers::pi * (rule.nodes[i] + 1.0);
      const double jac = 0.5 * std::numbers::pi * rule.weights[i] * h * std::sin(angle);
      out[j] += jac * cplx(f(sys.point_from_angle(j, angle)));
    }
  }
  return out;
}

[[nodiscard]] inline std::size_t angle_nodes_for(std::size_t modes) { return 2 * modes + 32; }

/// Exact integral over I_j of one piece.
[[nodiscard]] inline cplx integrate_piece(const PiecewiseFunction& f, std::size_t j) {
  const Piece& p = f.piece(j);
  const double h = f.system()[j].half_length();
  if (p.weight == Weight::sqrt_vanishing)
    return p.coeffs.size() > 0 ? h * h * 0.5 * std::numbers::pi * p.coeffs[0] : cplx(0.0);
  cplx sum = 0.0;
  for (Eigen::Index k = 0; k < p.coeffs.size(); ++k) sum += p.coeffs[k] * cheb::integral_t(static_cast<std::size_t>(k));
  return h * sum;
}

/// int_{I_k} f_k(x) g(x) dx for g smooth on I_k. Sqrt-vanishing pieces use
/// second-kind Gauss-Chebyshev, plain pieces Gauss-Legendre.
template <class G>
[[nodiscard]] cplx integrate_product(const PiecewiseFunction& f, std::size_t k, G&& g, std::size_t nodes = 0) {
  const Piece& p = f.piece(k);
  const Interval& iv = f.system()[k];
  const double h = iv.half_length();
  if (nodes == 0) nodes = std::max<std::size_t>(2 * static_cast<std::size_t>(p.coeffs.size()), 64);
  cplx sum = 0.0;
  if (p.weight == Weight::sqrt_vanishing) {
    const ReferenceRule rule = gauss_chebyshev_second(nodes);
    for (std::size_t b = 0; b < nodes; ++b)
      sum += rule.weights[b] * cheb::eval_u(p.coeffs, rule.nodes[b]) * cplx(g(iv.from_reference(rule.nodes[b])));
    return h * h * sum;
  }
  const ReferenceRule rule = gauss_legendre(nodes);
  for (std::size_t b = 0; b < nodes; ++b)
    sum += rule.weights[b] * cheb::eval_t(p.coeffs, rule.nodes[b]) * cplx(g(iv.from_reference(rule.nodes[b])));
  return h * sum;
}

[[nodiscard]] inline double l2_distance(const PiecewiseFunction& f, const PiecewiseFunction& g) {
  const std::size_t nodes = angle_nodes_for(std::max(f.max_modes(), g.max_modes()));
  double total = 0.0;
  for (cplx v : integrate_by_angle(f.system(), nodes, [&](const IntervalPoint& p) {
         return std::norm(f.value(p) - g.value(p));
       }))
    total += v.real();
  return std::sqrt(total);
}

[[nodiscard]] inline double l2_norm(const PiecewiseFunction& f) {
  const std::size_t nodes = angle_nodes_for(f.max_modes());
  double total = 0.0;
  for (cplx v : integrate_by_angle(f.system(), nodes, [&](const IntervalPoint& p) { return std::norm(f.value(p)); }))
    total += v.real();
  return std::sqrt(total);
}

/// L^2 norm of the imaginary part.
[[nodiscard]] inline double imag_l2_norm(const PiecewiseFunction& f) {
  const std::size_t nodes = angle_nodes_for(f.max_modes());
  double total = 0.0;
  for (cplx v : integrate_by_angle(f.system(), nodes, [&](const IntervalPoint& p) {
         const double im = f.value(p).imag();
         return im * im;
       }))
    total += v.real();
  return std::sqrt(total);
}

}  // namespace mifht
