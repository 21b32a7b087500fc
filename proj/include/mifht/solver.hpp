#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "mifht/chebyshev.hpp"
#include "mifht/error.hpp"
#include "mifht/fht.hpp"
#include "mifht/function.hpp"
#include "mifht/interval.hpp"
#include "mifht/parallel.hpp"
#include "mifht/quadrature.hpp"
#include "mifht/theta.hpp"

namespace mifht {

inline constexpr std::size_t default_nystrom_nodes = 96;

// ---------------------------------------------------------------------------
// Forward map and the shift/inverse data c, nu.
// ---------------------------------------------------------------------------

/// psi_m = sum_k theta_mk (H_k phi_k) restricted to I_m, as plain pieces with
/// at least `modes` coefficients. The diagonal term is exact for
/// sqrt-vanishing phi; cross terms are smooth and interpolated.
[[nodiscard]] inline PiecewiseFunction forward_map(const ThetaMatrix& theta, const PiecewiseFunction& phi,
                                                   std::size_t modes = default_modes) {
  const IntervalSystem& sys = phi.system();
  const std::size_t n = sys.size();
  if (theta.size() != n) throw Error(ErrorKind::schema, "interaction matrix size does not match interval count");
  std::vector<Piece> pieces(n);
  parallel_for(n, [&](std::size_t m) {
    const Piece diag = hilbert_on_interval(phi.piece(m), sys[m]);
    const Eigen::Index len = std::max<Eigen::Index>(diag.coeffs.size(), static_cast<Eigen::Index>(modes));
    cheb::Coeffs c = cheb::Coeffs::Zero(len);
    c.head(diag.coeffs.size()) = theta(m, m) * diag.coeffs;
    const auto pts = first_kind_points(sys, m, static_cast<std::size_t>(len));
    std::vector<cplx> cross(pts.size(), 0.0);
    bool any_cross = false;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == m || theta(m, k) == 0.0) continue;
      any_cross = true;
      for (std::size_t i = 0; i < pts.size(); ++i)
        cross[i] += theta(m, k) * cauchy_piece(phi.piece(k), sys[k], pts[i].x);
    }
    if (any_cross) c += cheb::interpolate_first_kind(cross);
    pieces[m] = {Weight::plain, std::move(c)};
  });
  return {sys, std::move(pieces), phi.field()};
}

/// c_j = (1/pi) int_{I_j} psi_j / sqrt((x-a_j)(b_j-x)) dx.
[[nodiscard]] inline Eigen::VectorXcd compute_c(const PiecewiseFunction& psi) {
  Eigen::VectorXcd c(static_cast<Eigen::Index>(psi.size()));
  for (std::size_t j = 0; j < psi.size(); ++j) c[static_cast<Eigen::Index>(j)] = range_scan(psi, j).c;
  return c;
}

/// nu_j = H_j^{-1}((psi_j - c_j)/theta_jj). Throws RangeError when c does not
/// remove the range moment of psi_j (tol < 0 selects the default tolerance).
[[nodiscard]] inline PiecewiseFunction compute_nu(const PiecewiseFunction& psi, const Eigen::VectorXcd& c,
                                                  const ThetaMatrix& theta, double tol = -1.0) {
  theta.require_invertible_diagonal();
  const std::size_t n = psi.size();
  if (theta.size() != n || static_cast<std::size_t>(c.size()) != n)
    throw Error(ErrorKind::schema, "size mismatch between data, shift vector and interaction matrix");
  std::vector<Piece> pieces(n);
  for (std::size_t j = 0; j < n; ++j) {
    const RangeData r = range_scan(psi, j);
    const double limit = tol < 0.0 ? default_range_tolerance(psi, j) : tol;
    const double moment = std::numbers::pi * std::abs(r.c - c[static_cast<Eigen::Index>(j)]);
    if (moment > limit)
      throw Error(ErrorKind::range, "interval " + std::to_string(j) + ": shifted data has range moment " +
                                        std::to_string(moment));
    // H^{-1} annihilates constants on the interval, so the shift only enters the check.
    Piece p = detail::invert_piece(psi.piece(j), psi.system()[j]);
    p.coeffs /= theta(j, j);
    pieces[j] = std::move(p);
  }
  return {psi.system(), std::move(pieces), psi.field()};
}

// ---------------------------------------------------------------------------
// Nystrom discretization of Id - K/lambda.
// ---------------------------------------------------------------------------

/// Dense Nystrom system for phi = nu + K phi / lambda, with phi_j = w_j u_j.
/// Unknowns are u_j at the second-kind nodes z_a = c_j + h_j cos(a pi/(M+1)),
/// ordered interval-major. The kernel acting on u reads
///   K(z, y)/w_j(z) = theta_jk / (pi theta_jj R_j(y) (y - z)),  z in I_j, y in I_k, k != j,
/// and vanishes on diagonal blocks.
struct NystromSystem {
  IntervalSystem sys;
  ThetaMatrix theta;
  std::size_t nodes = default_nystrom_nodes;
  cplx lambda = 1.0;
  std::vector<std::vector<IntervalPoint>> points;
  std::vector<double> weights;  ///< reference second-kind weights (pi/(M+1)) sin^2
  Eigen::MatrixXcd matrix;
  Eigen::VectorXd l2_scaling;   ///< quadrature weights of int w_j^2 |u|^2 dx

  [[nodiscard]] Eigen::Index index(std::size_t j, std::size_t a) const {
    return static_cast<Eigen::Index>(j * nodes + a);
  }
  [[nodiscard]] Eigen::Index dimension() const { return static_cast<Eigen::Index>(sys.size() * nodes); }

  /// K(z, y)/w_j(z) for z in I_j and y off I_j.
  [[nodiscard]] cplx kernel(std::size_t j, double z, std::size_t k, double y) const {
    if (j == k) return 0.0;
    return theta(j, k) / (std::numbers::pi * theta(j, j) * radical_off(sys[j], y) * (y - z));
  }
};

[[nodiscard]] inline NystromSystem assemble_K(const IntervalSystem& sys, const ThetaMatrix& theta,
                                              std::size_t nodes = default_nystrom_nodes, cplx lambda = 1.0) {
  theta.require_invertible_diagonal();
  if (lambda == cplx(0.0)) throw Error(ErrorKind::zero_lambda, "spectral parameter lambda must be nonzero");
  if (theta.size() != sys.size()) throw Error(ErrorKind::schema, "interaction matrix size does not match interval count");
  if (nodes < 2) throw Error(ErrorKind::domain, "Nystrom discretization needs at least two nodes");
  NystromSystem ns{sys, theta, nodes, lambda, {}, {}, {}, {}};
  const ReferenceRule rule = gauss_chebyshev_second(nodes);
  ns.weights = rule.weights;
  const QuadratureGrid grid = make_grid(sys, QuadratureFamily::chebyshev_second, nodes);
  ns.points = grid.points;
  const Eigen::Index dim = ns.dimension();
  ns.l2_scaling.resize(dim);
  for (std::size_t j = 0; j < sys.size(); ++j)
    for (std::size_t a = 0; a < nodes; ++a) {
      const double h = sys[j].half_length();
      ns.l2_scaling[ns.index(j, a)] = h * h * rule.weights[a] * ns.points[j][a].weight();
    }
  ns.matrix = Eigen::MatrixXcd::Identity(dim, dim);
  const std::size_t n = sys.size();
  parallel_for(n * nodes, [&](std::size_t row) {
    const std::size_t j = row / nodes;
    const std::size_t a = row % nodes;
    const double z = ns.points[j][a].x;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == j || theta(j, k) == 0.0) continue;
      const double h2 = sys[k].half_length() * sys[k].half_length();
      for (std::size_t b = 0; b < nodes; ++b)
        ns.matrix(static_cast<Eigen::Index>(row), ns.index(k, b)) -=
            ns.kernel(j, z, k, ns.points[k][b].x) * h2 * rule.weights[b] / lambda;
    }
  });
  return ns;
}

struct SingularValues {
  double min = 0.0;
  double max = 0.0;
};

/// Extreme singular values of Id - K/lambda in the L^2(I) norm.
[[nodiscard]] inline SingularValues singular_values(const NystromSystem& ns) {
  if (ns.matrix.isIdentity(0.0)) return {1.0, 1.0};
  const Eigen::VectorXd s = ns.l2_scaling.cwiseSqrt();
  const Eigen::MatrixXcd scaled = s.asDiagonal() * ns.matrix * s.cwiseInverse().asDiagonal();
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(scaled);
  const Eigen::VectorXd& sv = svd.singularValues();
  return {sv.minCoeff(), sv.maxCoeff()};
}

/// Solves (Id - K/lambda) u = rhs by LU with one step of iterative refinement.
[[nodiscard]] inline Eigen::MatrixXcd nystrom_solve(const NystromSystem& ns, const Eigen::MatrixXcd& rhs) {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(ns.matrix);
  Eigen::MatrixXcd u = lu.solve(rhs);
  u += lu.solve(rhs - ns.matrix * u);
  return u;
}

/// Right-hand side nu_j / w_j at the nodes.
[[nodiscard]] inline Eigen::VectorXcd nystrom_rhs(const NystromSystem& ns, const PiecewiseFunction& nu) {
  Eigen::VectorXcd b(ns.dimension());
  for (std::size_t j = 0; j < ns.sys.size(); ++j) {
    const Piece& p = nu.piece(j);
    for (std::size_t a = 0; a < ns.nodes; ++a) {
      const IntervalPoint& pt = ns.points[j][a];
      const double s = ns.sys[j].to_reference(pt.x);
      b[ns.index(j, a)] = p.weight == Weight::sqrt_vanishing ? cheb::eval_u(p.coeffs, s)
                                                            : cheb::eval_t(p.coeffs, s) / pt.weight();
    }
  }
  return b;
}

/// Sqrt-vanishing function with smooth parts given at the Nystrom nodes.
[[nodiscard]] inline PiecewiseFunction nystrom_function(const NystromSystem& ns, const Eigen::VectorXcd& u,
                                                        Field field) {
  std::vector<Piece> pieces(ns.sys.size());
  for (std::size_t j = 0; j < ns.sys.size(); ++j) {
    std::vector<cplx> vals(ns.nodes);
    for (std::size_t a = 0; a < ns.nodes; ++a) vals[a] = u[ns.index(j, a)];
    pieces[j] = {Weight::sqrt_vanishing, cheb::interpolate_second_kind(vals)};
  }
  return {ns.sys, std::move(pieces), field};
}

// ---------------------------------------------------------------------------
// Direct inversion and diagnostics.
// ---------------------------------------------------------------------------

/// r_m = (1/pi) sum_{k != m} theta_mk int_{I_k} phi_k / R_m dy - c_m.
[[nodiscard]] inline Eigen::VectorXcd residual_range2(const ThetaMatrix& theta, const PiecewiseFunction& phi,
                                                      const Eigen::VectorXcd& c) {
  const IntervalSystem& sys = phi.system();
  const std::size_t n = sys.size();
  Eigen::VectorXcd r = -c;
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t k = 0; k < n; ++k) {
      if (k == m || theta(m, k) == 0.0) continue;
      const cplx moment = integrate_product(phi, k, [&](double y) { return 1.0 / radical_off(sys[m], y); });
      r[static_cast<Eigen::Index>(m)] += theta(m, k) * moment / std::numbers::pi;
    }
  return r;
}

struct SolveOptions {
  std::size_t nystrom_nodes = default_nystrom_nodes;
  double range_tol = -1.0;                ///< < 0: default per-interval tolerance
  double singular_threshold = 1e-10;      ///< relative to the largest singular value
};

struct SolveDiagnostics {
  double residual = 0.0;        ///< ||(Id - K) u - nu/w|| at the nodes, relative
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  Eigen::VectorXcd range2;      ///< residual_range2 of the solution
  std::vector<std::string> warnings;
};

struct SolveResult {
  PiecewiseFunction phi;
  Eigen::VectorXcd c;
  PiecewiseFunction nu;
  SolveDiagnostics diagnostics;
};

/// Solves chi Theta H phi = psi for Theta with invertible diagonal.
[[nodiscard]] inline SolveResult solve_phi(const ThetaMatrix& theta, const PiecewiseFunction& psi,
                                           const SolveOptions& opt = {}) {
  theta.require_invertible_diagonal();
  SolveResult out;
  out.c = compute_c(psi);
  out.nu = compute_nu(psi, out.c, theta, opt.range_tol);
  const NystromSystem ns = assemble_K(psi.system(), theta, opt.nystrom_nodes, 1.0);
  const SingularValues sv = singular_values(ns);
  out.diagnostics.sigma_min = sv.min;
  out.diagnostics.sigma_max = sv.max;
  if (sv.min < opt.singular_threshold * sv.max)
    throw Error(ErrorKind::near_singular, "Id - K is numerically singular (sigma_min = " + std::to_string(sv.min) + ")");
  if (theta.classification() != ThetaClass::spd_symmetric && !theta.is_diagonal())
    out.diagnostics.warnings.emplace_back(
        "interaction matrix is not symmetric positive definite; invertibility of Id - K is certified numerically only");
  const Eigen::VectorXcd b = nystrom_rhs(ns, out.nu);
  const Eigen::VectorXcd u = nystrom_solve(ns, b);
  out.diagnostics.residual = (ns.matrix * u - b).norm() / std::max(b.norm(), 1e-300);
  out.phi = nystrom_function(ns, u, psi.field());
  out.diagnostics.range2 = residual_range2(theta, out.phi, out.c);
  return out;
}

// ---------------------------------------------------------------------------
// Bilinear form J and injectivity diagnostics.
// ---------------------------------------------------------------------------

struct FourierGrid {
  double half_width = 200.0;
  std::size_t points = std::size_t{1} << 14;
};

namespace detail {

/// J_0(x), ..., J_nmax(x) for x > 0 by Miller's backward recurrence,
/// normalized with J_0 + 2 sum J_2k = 1.
inline void bessel_j_sequence(double x, std::size_t nmax, std::vector<double>& out) {
  out.assign(nmax + 1, 0.0);
  const double top = std::max(static_cast<double>(nmax), x);
  std::size_t start = static_cast<std::size_t>(top + 20.0 + std::sqrt(60.0 * top));
  start += start % 2;
  double next = 0.0;  // b_{k+1}
  double cur = 1e-280;  // b_k
  double norm = 0.0;
  for (std::size_t k = start; k > 0; --k) {
    const double prev = 2.0 * static_cast<double>(k) / x * cur - next;  // b_{k-1}
    next = cur;
    cur = prev;
    const std::size_t idx = k - 1;
    if (idx <= nmax) out[idx] = cur;
    if (idx % 2 == 0) norm += idx == 0 ? cur : 2.0 * cur;
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      norm *= 1e-250;
      for (double& v : out) v *= 1e-250;
    }
  }
  for (double& v : out) v /= norm;
}

/// Fourier transform int f(x) e^{i x xi} dx of a sqrt-vanishing piece:
/// h^2 e^{i c xi} sum_j d_j pi (j+1) i^j J_{j+1}(h xi)/(h xi).
[[nodiscard]] inline std::vector<cplx> fourier_piece(const Piece& p, const Interval& iv,
                                                     const std::vector<double>& xi) {
  if (p.weight != Weight::sqrt_vanishing)
    throw Error(ErrorKind::domain, "the bilinear form is defined here for sqrt-vanishing pieces only");
  const double h = iv.half_length();
  const double c = iv.center();
  const std::size_t nd = static_cast<std::size_t>(p.coeffs.size());
  std::vector<cplx> out(xi.size());
  std::vector<double> bessel;
  static const cplx ipow[4] = {1.0, cplx(0.0, 1.0), -1.0, cplx(0.0, -1.0)};
  for (std::size_t i = 0; i < xi.size(); ++i) {
    const double arg = h * std::abs(xi[i]);
    bessel_j_sequence(arg, nd + 1, bessel);
    const double parity = xi[i] < 0.0 ? -1.0 : 1.0;  // J_{j+1}(-x)/(-x) = (-1)^j J_{j+1}(x)/x
    cplx sum = 0.0;
    double sign = 1.0;
    for (std::size_t j = 0; j < nd; ++j) {
      sum += p.coeffs[static_cast<Eigen::Index>(j)] * std::numbers::pi * static_cast<double>(j + 1) * ipow[j % 4] *
             (sign * bessel[j + 1] / arg);
      sign *= parity;
    }
    out[i] = h * h * std::polar(1.0, c * xi[i]) * sum;
  }
  return out;
}

}  // namespace detail

/// J(f, g) = (1/(2 pi)) sum_{j,k} theta_jk int |xi| f~_k(xi) conj(g~_j(xi)) dxi on a
/// symmetric midpoint frequency grid. Real part returned (exact for real f, g).
[[nodiscard]] inline double bilinear_form_J(const ThetaMatrix& theta, const PiecewiseFunction& f,
                                            const PiecewiseFunction& g, const FourierGrid& grid = {}) {
  const IntervalSystem& sys = f.system();
  const std::size_t n = sys.size();
  std::vector<double> xi(grid.points);
  const double step = 2.0 * grid.half_width / static_cast<double>(grid.points);
  for (std::size_t i = 0; i < grid.points; ++i) xi[i] = -grid.half_width + (static_cast<double>(i) + 0.5) * step;
  std::vector<std::vector<cplx>> ft(n), gt(n);
  parallel_for(2 * n, [&](std::size_t t) {
    if (t < n) ft[t] = detail::fourier_piece(f.piece(t), sys[t], xi);
    else gt[t - n] = detail::fourier_piece(g.piece(t - n), sys[t - n], xi);
  });
  cplx total = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      if (theta(j, k) == 0.0) continue;
      cplx s = 0.0;
      for (std::size_t i = 0; i < grid.points; ++i) s += std::abs(xi[i]) * ft[k][i] * std::conj(gt[j][i]);
      total += theta(j, k) * s * step;
    }
  return total.real() / (2.0 * std::numbers::pi);
}

struct InjectivityReport {
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double min_j_ratio = 0.0;     ///< min over samples of J(f,f)/||f||^2
  std::size_t samples = 0;
  ThetaClass classification = ThetaClass::spd_symmetric;
  std::vector<std::string> caveats;
};

/// Random real sqrt-vanishing function with `modes` decaying Gaussian coefficients.
[[nodiscard]] inline PiecewiseFunction random_sqrt_vanishing(const IntervalSystem& sys, std::size_t modes,
                                                             std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  std::vector<Piece> pieces(sys.size());
  for (std::size_t j = 0; j < sys.size(); ++j) {
    cheb::Coeffs d(static_cast<Eigen::Index>(modes));
    for (Eigen::Index k = 0; k < d.size(); ++k) d[k] = nd(rng) / (1.0 + static_cast<double>(k));
    pieces[j] = {Weight::sqrt_vanishing, std::move(d)};
  }
  return {sys, std::move(pieces), Field::real};
}

[[nodiscard]] inline InjectivityReport injectivity_report(const ThetaMatrix& theta, const IntervalSystem& sys,
                                                          std::size_t nodes = default_nystrom_nodes,
                                                          std::size_t samples = 16, std::uint64_t seed = 20240611,
                                                          const FourierGrid& grid = {}) {
  InjectivityReport rep;
  rep.classification = theta.classification();
  const SingularValues sv = singular_values(assemble_K(sys, theta, nodes, 1.0));
  rep.sigma_min = sv.min;
  rep.sigma_max = sv.max;
  std::mt19937_64 rng(seed);
  rep.min_j_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    const PiecewiseFunction f = random_sqrt_vanishing(sys, 8, rng);
    const double norm = l2_norm(f);
    rep.min_j_ratio = std::min(rep.min_j_ratio, bilinear_form_J(theta, f, f, grid) / (norm * norm));
  }
  rep.samples = samples;
  if (rep.classification != ThetaClass::spd_symmetric)
    rep.caveats.emplace_back("interaction matrix is not symmetric positive definite: a small sigma_min or a "
                             "non-positive J ratio is not excluded");
  return rep;
}

}  // namespace mifht
