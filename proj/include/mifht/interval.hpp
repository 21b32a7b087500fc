#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mifht/error.hpp"
#include "mifht/quadrature.hpp"

namespace mifht {

using cplx = std::complex<double>;

/// Boundary-value selector for points on a cut.
enum class Side { above, below, off_cut };

struct Interval {
  double a;  ///< left endpoint alpha_j
  double b;  ///< right endpoint beta_j

  [[nodiscard]] double center() const noexcept { return 0.5 * (a + b); }
  [[nodiscard]] double half_length() const noexcept { return 0.5 * (b - a); }
  [[nodiscard]] double length() const noexcept { return b - a; }
  [[nodiscard]] bool contains_open(double x) const noexcept { return a < x && x < b; }
  /// Reference coordinate s in [-1, 1].
  [[nodiscard]] double to_reference(double x) const noexcept { return (x - center()) / half_length(); }
  [[nodiscard]] cplx to_reference(cplx z) const noexcept { return (z - center()) / half_length(); }
  [[nodiscard]] double from_reference(double s) const noexcept { return center() + half_length() * s; }
};

/// A point strictly inside interval j together with its endpoint offsets,
/// kept separately so that sqrt((x-a)(b-x)) stays accurate near the ends.
struct IntervalPoint {
  std::size_t interval;
  double x;
  double dl;  ///< x - a
  double dr;  ///< b - x

  [[nodiscard]] double weight() const noexcept { return std::sqrt(dl * dr); }
};

/// Ordered system of disjoint intervals alpha_1 < beta_1 < ... < alpha_n < beta_n.
class IntervalSystem {
 public:
  IntervalSystem() = default;

  explicit IntervalSystem(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
    if (intervals_.empty()) throw Error(ErrorKind::overlap, "interval list is empty");
    for (std::size_t j = 0; j < intervals_.size(); ++j) {
      const Interval& iv = intervals_[j];
      if (!std::isfinite(iv.a) || !std::isfinite(iv.b))
        throw Error(ErrorKind::non_finite, "endpoint of interval " + std::to_string(j) + " is not finite");
      if (!(iv.a < iv.b))
        throw Error(ErrorKind::overlap, "interval " + std::to_string(j) + " has alpha >= beta");
      if (j > 0 && !(intervals_[j - 1].b < iv.a))
        throw Error(ErrorKind::overlap, "intervals " + std::to_string(j - 1) + " and " +
                                            std::to_string(j) + " overlap or are out of order");
    }
  }

  [[nodiscard]] std::size_t size() const noexcept { return intervals_.size(); }
  [[nodiscard]] const Interval& operator[](std::size_t j) const { return intervals_[j]; }
  [[nodiscard]] const Interval& at(std::size_t j) const {
    if (j >= intervals_.size())
      throw Error(ErrorKind::index, "interval index " + std::to_string(j) + " out of range");
    return intervals_[j];
  }
  [[nodiscard]] std::span<const Interval> intervals() const noexcept { return intervals_; }

  /// Index of the open interval containing x, or size() if none.
  [[nodiscard]] std::size_t locate(double x) const noexcept {
    for (std::size_t j = 0; j < intervals_.size(); ++j)
      if (intervals_[j].contains_open(x)) return j;
    return intervals_.size();
  }

  [[nodiscard]] bool is_endpoint(double x) const noexcept {
    for (const Interval& iv : intervals_)
      if (x == iv.a || x == iv.b) return true;
    return false;
  }

  [[nodiscard]] double scale() const noexcept {
    double s = 0.0;
    for (const Interval& iv : intervals_) s = std::max({s, std::abs(iv.a), std::abs(iv.b)});
    return s;
  }

  [[nodiscard]] IntervalPoint point(std::size_t j, double x) const {
    const Interval& iv = at(j);
    if (!iv.contains_open(x))
      throw Error(ErrorKind::domain, "point " + std::to_string(x) + " is not inside interval " + std::to_string(j));
    return {j, x, x - iv.a, iv.b - x};
  }

  /// Point with reference coordinate cos(angle), angle in (0, pi).
  [[nodiscard]] IntervalPoint point_from_angle(std::size_t j, double angle) const {
    const Interval& iv = at(j);
    const double h = iv.half_length();
    const double c = std::cos(0.5 * angle);
    const double s = std::sin(0.5 * angle);
    return {j, iv.from_reference(std::cos(angle)), 2.0 * h * c * c, 2.0 * h * s * s};
  }

  bool operator==(const IntervalSystem& other) const noexcept {
    if (size() != other.size()) return false;
    for (std::size_t j = 0; j < size(); ++j)
      if (intervals_[j].a != other.intervals_[j].a || intervals_[j].b != other.intervals_[j].b) return false;
    return true;
  }

 private:
  std::vector<Interval> intervals_;
};

[[nodiscard]] inline IntervalSystem make_interval_system(std::span<const std::pair<double, double>> endpoints) {
  std::vector<Interval> ivs;
  ivs.reserve(endpoints.size());
  for (auto [a, b] : endpoints) ivs.push_back({a, b});
  return IntervalSystem(std::move(ivs));
}

[[nodiscard]] inline IntervalSystem make_interval_system(std::initializer_list<std::pair<double, double>> endpoints) {
  return make_interval_system(std::span<const std::pair<double, double>>(endpoints.begin(), endpoints.size()));
}

/// sqrt((z-a)(z-b)) with the cut on [a, b] and ~z at infinity.
///
/// Off the real axis this is the product of two principal square roots; the
/// individual cuts along (-inf, a] and (-inf, b] cancel left of a. Real
/// arguments are resolved explicitly: positive right of the cut, negative left
/// of it, +-i sqrt((x-a)(b-x)) on the cut for the upper/lower side.
[[nodiscard]] inline cplx radical(double a, double b, cplx z, Side side = Side::off_cut) {
  if (z.imag() != 0.0) return std::sqrt(z - a) * std::sqrt(z - b);
  const double x = z.real();
  if (x > b) return {std::sqrt((x - a) * (x - b)), 0.0};
  if (x < a) return {-std::sqrt((a - x) * (b - x)), 0.0};
  if (x == a || x == b) return {0.0, 0.0};
  const double mod = std::sqrt((x - a) * (b - x));
  switch (side) {
    case Side::above: return {0.0, mod};
    case Side::below: return {0.0, -mod};
    case Side::off_cut: break;
  }
  throw Error(ErrorKind::domain, "radical: real point on the cut needs a side selector");
}

/// R_j(z) for interval j of the system.
[[nodiscard]] inline cplx radical_eval(const IntervalSystem& sys, std::size_t j, cplx z, Side side = Side::off_cut) {
  const Interval& iv = sys.at(j);
  return radical(iv.a, iv.b, z, side);
}

/// Real radical R_j(x) for x outside I_j.
[[nodiscard]] inline double radical_off(const Interval& iv, double x) {
  if (x > iv.b) return std::sqrt((x - iv.a) * (x - iv.b));
  if (x < iv.a) return -std::sqrt((iv.a - x) * (iv.b - x));
  throw Error(ErrorKind::domain, "radical_off: point lies on the cut");
}

/// Root of the reference Joukowski map, W = t - sqrt(t^2-1) with |W| < 1 off
/// [-1, 1], and W = t -+ i sqrt(1-t^2) on the upper/lower side of the cut.
/// On the cut the angle representation keeps full accuracy near the ends.
[[nodiscard]] inline cplx joukowski_root(cplx t) {
  const cplx s = radical(-1.0, 1.0, t, Side::off_cut);
  return 1.0 / (t + s);
}

[[nodiscard]] inline cplx joukowski_root_on_cut(double t, double sqrt_one_minus_t2, Side side) {
  return side == Side::above ? cplx(t, -sqrt_one_minus_t2) : cplx(t, sqrt_one_minus_t2);
}

/// sgn(beta_od(x)) for a point in interval k: (-1)^(n-1-k) with k zero-based.
[[nodiscard]] inline double beta_od_sign(const IntervalSystem& sys, std::size_t k) noexcept {
  return ((sys.size() - 1 - k) % 2 == 0) ? 1.0 : -1.0;
}

/// sqrt(prod_j (x-a_j)(x-b_j)(z-a_j)(z-b_j)) with the sign rule
/// -sgn(beta_od(x)) sgn(beta_od(z)) prod |.|^(1/2), for x, z inside I.
[[nodiscard]] inline double multi_radical_sqrt(const IntervalSystem& sys, double x, double z) {
  const std::size_t kx = sys.locate(x);
  const std::size_t kz = sys.locate(z);
  if (kx == sys.size() || kz == sys.size())
    throw Error(ErrorKind::domain, "multi_radical_sqrt: arguments must lie inside the open intervals");
  double log_mod = 0.0;
  for (const Interval& iv : sys.intervals())
    log_mod += std::log(std::abs((x - iv.a) * (x - iv.b))) + std::log(std::abs((z - iv.a) * (z - iv.b)));
  return -beta_od_sign(sys, kx) * beta_od_sign(sys, kz) * std::exp(0.5 * log_mod);
}

/// Per-interval quadrature nodes and weights mapped from a reference rule.
struct QuadratureGrid {
  QuadratureFamily family;
  std::vector<std::vector<IntervalPoint>> points;
  /// Mapped weights; for Chebyshev families they integrate g against the
  /// physical weight (x-a)^(-1/2)(b-x)^(-1/2) resp. (x-a)^(1/2)(b-x)^(1/2).
  std::vector<std::vector<double>> weights;

  [[nodiscard]] std::size_t total_size() const noexcept {
    std::size_t n = 0;
    for (const auto& p : points) n += p.size();
    return n;
  }
};

/// Builds a grid with per_interval[j] nodes on interval j.
[[nodiscard]] inline QuadratureGrid make_grid(const IntervalSystem& sys, QuadratureFamily family,
                                              std::span<const std::size_t> per_interval) {
  QuadratureGrid grid{family, {}, {}};
  for (std::size_t j = 0; j < sys.size(); ++j) {
    const std::size_t n = per_interval[j];
    const Interval& iv = sys[j];
    const double h = iv.half_length();
    ReferenceRule rule = make_rule(family, n);
    std::vector<IntervalPoint> pts(n);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
      double angle = 0.0;
      switch (family) {
        case QuadratureFamily::chebyshev_first:
          angle = std::numbers::pi * (2.0 * static_cast<double>(i) + 1.0) / (2.0 * static_cast<double>(n));
          pts[i] = sys.point_from_angle(j, angle);
          w[i] = rule.weights[i];  // dx / sqrt((x-a)(b-x)) = ds / sqrt(1-s^2)
          break;
        case QuadratureFamily::chebyshev_second:
          angle = std::numbers::pi * static_cast<double>(i + 1) / static_cast<double>(n + 1);
          pts[i] = sys.point_from_angle(j, angle);
          w[i] = rule.weights[i] * h * h;  // sqrt((x-a)(b-x)) dx = h^2 sqrt(1-s^2) ds
          break;
        case QuadratureFamily::legendre: {
          const double s = rule.nodes[i];
          pts[i] = {j, iv.from_reference(s), h * (1.0 + s), h * (1.0 - s)};
          w[i] = rule.weights[i] * h;
          break;
        }
      }
    }
    grid.points.push_back(std::move(pts));
    grid.weights.push_back(std::move(w));
  }
  return grid;
}

[[nodiscard]] inline QuadratureGrid make_grid(const IntervalSystem& sys, QuadratureFamily family, std::size_t n) {
  std::vector<std::size_t> per(sys.size(), n);
  return make_grid(sys, family, per);
}

}  // namespace mifht
