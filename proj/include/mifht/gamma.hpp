#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "mifht/chebyshev.hpp"
#include "mifht/error.hpp"
#include "mifht/fht.hpp"
#include "mifht/function.hpp"
#include "mifht/interval.hpp"
#include "mifht/parallel.hpp"
#include "mifht/quadrature.hpp"
#include "mifht/solver.hpp"
#include "mifht/theta.hpp"

namespace mifht {

// Matrix Riemann-Hilbert data for the integrable kernel
//   K(z, x) = f(z)^t g(x) / (2 pi i (z - x)),
//   f(z)   = -2 R_{j+}(z) e_j                          for z in I_j,
//   g_j(x) = theta_jk / (theta_jj R_j(x)), j != k;  0 for j = k,   x in I_k.
//
// Gamma(z) = 1 - int_I F(w) g(w)^t dw / (2 pi i lambda (w - z)) with
// F = (Id - K/lambda)^{-1} f. Gamma jumps by V = 1 - f g^t / lambda across I,
// column j is continuous across I_j, and det Gamma = 1.

class IntegrableKernelData {
 public:
  IntegrableKernelData(IntervalSystem sys, ThetaMatrix theta) : sys_(std::move(sys)), theta_(std::move(theta)) {
    theta_.require_invertible_diagonal();
    if (theta_.size() != sys_.size())
      throw Error(ErrorKind::schema, "interaction matrix size does not match interval count");
    const QuadratureGrid probe = make_grid(sys_, QuadratureFamily::chebyshev_second, 16);
    for (const auto& points : probe.points)
      for (const IntervalPoint& p : points) {
        const Eigen::VectorXcd fv = f(p.x);
        const Eigen::VectorXcd gv = g(p.x);
        if (std::abs(fv.cwiseProduct(gv).sum()) > 1e-13 * fv.norm() * gv.norm())
          throw Error(ErrorKind::convergence, "kernel vectors are not orthogonal on the cut");
      }
  }

  [[nodiscard]] const IntervalSystem& system() const noexcept { return sys_; }
  [[nodiscard]] const ThetaMatrix& theta() const noexcept { return theta_; }

  /// Index of the open interval containing x; throws for endpoints and gaps.
  [[nodiscard]] std::size_t locate(double x) const {
    if (sys_.is_endpoint(x)) throw Error(ErrorKind::endpoint, "kernel vector requested at an endpoint");
    const std::size_t j = sys_.locate(x);
    if (j == sys_.size()) throw Error(ErrorKind::domain, "kernel vector requested off the intervals");
    return j;
  }

  [[nodiscard]] Eigen::VectorXcd f(double z) const {
    const std::size_t j = locate(z);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(sys_.size()));
    v[static_cast<Eigen::Index>(j)] = -2.0 * radical(sys_[j].a, sys_[j].b, z, Side::above);
    return v;
  }

  [[nodiscard]] Eigen::VectorXcd g(double x) const {
    const std::size_t k = locate(x);
    const std::size_t n = sys_.size();
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j)
      if (j != k) v[static_cast<Eigen::Index>(j)] = theta_(j, k) / (theta_(j, j) * radical_off(sys_[j], x));
    return v;
  }

 private:
  IntervalSystem sys_;
  ThetaMatrix theta_;
};

[[nodiscard]] inline IntegrableKernelData build_kernel_vectors(const IntervalSystem& sys, const ThetaMatrix& theta) {
  return {sys, theta};
}

/// Smooth parts F_l / w_k at the Nystrom nodes, one column per l.
[[nodiscard]] inline Eigen::MatrixXcd compute_F(const NystromSystem& ns, double singular_threshold = 1e-10) {
  const SingularValues sv = singular_values(ns);
  if (sv.min < singular_threshold * sv.max)
    throw Error(ErrorKind::near_singular,
                "Id - K/lambda is numerically singular (sigma_min = " + std::to_string(sv.min) + ")");
  const auto n = static_cast<Eigen::Index>(ns.sys.size());
  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(ns.dimension(), n);
  for (std::size_t j = 0; j < ns.sys.size(); ++j)
    for (std::size_t a = 0; a < ns.nodes; ++a) rhs(ns.index(j, a), static_cast<Eigen::Index>(j)) = cplx(0.0, -2.0);
  return nystrom_solve(ns, rhs);
}

class GammaSolution {
 public:
  explicit GammaSolution(const NystromSystem& ns, double singular_threshold = 1e-10)
      : kernel_(ns.sys, ns.theta), nodes_(ns.nodes), lambda_(ns.lambda), F_(compute_F(ns, singular_threshold)) {
    const std::size_t n = size();
    smooth_.resize(n * n);
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t k = 0; k < n; ++k) {
        std::vector<cplx> vals(nodes_);
        for (std::size_t a = 0; a < nodes_; ++a) vals[a] = F_(ns.index(k, a), static_cast<Eigen::Index>(l));
        smooth_[l * n + k] = cheb::interpolate_second_kind(vals);
      }
    // Density F_l / R_m on I_k resampled at twice the resolution so that the
    // factor 1/R_m is resolved beyond the degree of F.
    const std::size_t len = 2 * nodes_;
    const ReferenceRule rule = gauss_chebyshev_second(len);
    density_.resize(n * n * n);
    parallel_for(n * n * n, [&](std::size_t idx) {
      const std::size_t l = idx / (n * n);
      const std::size_t m = (idx / n) % n;
      const std::size_t k = idx % n;
      if (m == k || theta()(m, k) == 0.0) return;
      std::vector<cplx> vals(len);
      for (std::size_t b = 0; b < len; ++b) {
        const double s = rule.nodes[b];
        vals[b] = cheb::eval_u(smooth_[l * n + k], s) / radical_off(system()[m], system()[k].from_reference(s));
      }
      density_[idx] = cheb::interpolate_second_kind(vals);
    });
  }

  [[nodiscard]] std::size_t size() const noexcept { return kernel_.system().size(); }
  [[nodiscard]] std::size_t nodes() const noexcept { return nodes_; }
  [[nodiscard]] cplx lambda() const noexcept { return lambda_; }
  [[nodiscard]] const IntervalSystem& system() const noexcept { return kernel_.system(); }
  [[nodiscard]] const ThetaMatrix& theta() const noexcept { return kernel_.theta(); }
  [[nodiscard]] const IntegrableKernelData& kernel() const noexcept { return kernel_; }
  [[nodiscard]] const Eigen::MatrixXcd& F_nodes() const noexcept { return F_; }

  /// Component l of F as a sqrt-vanishing function.
  [[nodiscard]] PiecewiseFunction F(std::size_t l) const {
    std::vector<Piece> pieces(size());
    for (std::size_t k = 0; k < size(); ++k) pieces[k] = {Weight::sqrt_vanishing, smooth_[l * size() + k]};
    return {system(), std::move(pieces), Field::complex};
  }

  /// F(x) for x in I.
  [[nodiscard]] Eigen::VectorXcd F_at(double x) const {
    const std::size_t k = kernel_.locate(x);
    const Interval& iv = system()[k];
    const double s = iv.to_reference(x);
    const double w = std::sqrt((x - iv.a) * (iv.b - x));
    Eigen::VectorXcd v(static_cast<Eigen::Index>(size()));
    for (std::size_t l = 0; l < size(); ++l) v[static_cast<Eigen::Index>(l)] = w * cheb::eval_u(smooth_[l * size() + k], s);
    return v;
  }

  /// Gamma(z), or its boundary value from the given side for real z inside I.
  [[nodiscard]] Eigen::MatrixXcd value(cplx z, Side side = Side::off_cut) const {
    const std::size_t n = size();
    std::size_t on = n;
    if (z.imag() == 0.0) {
      if (system().is_endpoint(z.real())) throw Error(ErrorKind::endpoint, "Gamma evaluated at an endpoint");
      on = system().locate(z.real());
      if (on < n && side == Side::off_cut)
        throw Error(ErrorKind::domain, "Gamma on the cut needs a side selector");
    }
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const cplx scale = 1.0 / (cplx(0.0, 2.0) * lambda_);
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t k = 0; k < n; ++k) {
        if (k == m || theta()(m, k) == 0.0) continue;
        const cplx factor = scale * theta()(m, k) / theta()(m, m);
        const Side sk = k == on ? side : Side::off_cut;
        for (std::size_t l = 0; l < n; ++l) {
          const Piece p{Weight::sqrt_vanishing, density_[(l * n + m) * n + k]};
          G(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(m)) -= factor * cauchy_piece(p, system()[k], z, sk);
        }
      }
    return G;
  }

  /// Column m of Gamma at x in I_m, where it has no jump.
  [[nodiscard]] Eigen::VectorXcd own_column(std::size_t m, double x) const {
    return value(x, Side::above).col(static_cast<Eigen::Index>(m));
  }

  [[nodiscard]] Eigen::MatrixXcd inverse(cplx z, Side side = Side::off_cut) const {
    return value(z, side).partialPivLu().inverse();
  }

 private:
  IntegrableKernelData kernel_;
  std::size_t nodes_;
  cplx lambda_;
  Eigen::MatrixXcd F_;
  std::vector<cheb::Coeffs> smooth_;   ///< [l n + k]: U series of F_l / w_k on I_k
  std::vector<cheb::Coeffs> density_;  ///< [(l n + m) n + k]: U series of (F_l / R_m) / w_k on I_k
};

[[nodiscard]] inline GammaSolution build_gamma(const IntervalSystem& sys, const ThetaMatrix& theta,
                                               std::size_t nodes = default_nystrom_nodes, cplx lambda = 1.0) {
  return GammaSolution(assemble_K(sys, theta, nodes, lambda));
}

[[nodiscard]] inline Eigen::MatrixXcd gamma_eval(const GammaSolution& G, cplx z, Side side = Side::off_cut) {
  return G.value(z, side);
}

/// V(x) = 1 - f(x) g(x)^t / lambda for x in I.
[[nodiscard]] inline Eigen::MatrixXcd jump_matrix(const GammaSolution& G, double x) {
  const auto n = static_cast<Eigen::Index>(G.size());
  return Eigen::MatrixXcd::Identity(n, n) - G.kernel().f(x) * G.kernel().g(x).transpose() / G.lambda();
}

/// max_x ||Gamma_+(x) - Gamma_-(x) V(x)||.
[[nodiscard]] inline double verify_jump(const GammaSolution& G, std::span<const double> points) {
  double worst = 0.0;
  for (double x : points) {
    const Eigen::MatrixXcd r = G.value(x, Side::above) - G.value(x, Side::below) * jump_matrix(G, x);
    worst = std::max(worst, r.norm());
  }
  return worst;
}

struct NoJumpResidual {
  double gamma_f = 0.0;    ///< max ||(Gamma f)_+ - (Gamma f)_-||
  double g_gamma_inv = 0.0;  ///< max ||(g^t Gamma^{-1})_+ - (g^t Gamma^{-1})_-||
};

/// Gamma f and g^t Gamma^{-1} continue analytically across the cut.
[[nodiscard]] inline NoJumpResidual verify_no_jump(const GammaSolution& G, std::span<const double> points) {
  NoJumpResidual r;
  for (double x : points) {
    const Eigen::VectorXcd f = G.kernel().f(x);
    const Eigen::VectorXcd g = G.kernel().g(x);
    r.gamma_f = std::max(r.gamma_f, (G.value(x, Side::above) * f - G.value(x, Side::below) * f).norm());
    const Eigen::RowVectorXcd up = g.transpose() * G.inverse(x, Side::above);
    const Eigen::RowVectorXcd down = g.transpose() * G.inverse(x, Side::below);
    r.g_gamma_inv = std::max(r.g_gamma_inv, (up - down).norm());
  }
  return r;
}

/// Resolvent kernel g(x)^t Gamma^{-1}(x) Gamma(z) f(z) / (2 pi i lambda (z - x)) for z, x in I.
/// The boundary value of Gamma^{-1} is taken from `side`; the result does not depend on it.
[[nodiscard]] inline cplx resolvent_kernel(const GammaSolution& G, double z, double x, Side side = Side::above) {
  if (z == x) throw Error(ErrorKind::coincidence, "resolvent kernel requested on its diagonal");
  if (side == Side::off_cut) throw Error(ErrorKind::domain, "resolvent kernel needs a side selector");
  const Eigen::VectorXcd q = G.value(z, Side::above) * G.kernel().f(z);
  const Eigen::VectorXcd r = G.inverse(x, side).transpose() * G.kernel().g(x);
  return (r.transpose() * q)(0, 0) / (cplx(0.0, 2.0 * std::numbers::pi) * G.lambda() * (z - x));
}

namespace detail {

/// Node data for int_I R(z, x) nu(x) dx on second-kind nodes, with an even
/// node count so that no node meets a first-kind node or a second-kind node
/// of the next larger rule.
class ResolventQuadrature {
 public:
  ResolventQuadrature(const GammaSolution& G, const PiecewiseFunction& nu) : G_(&G) {
    const std::size_t n = G.size();
    const std::size_t q = G.nodes() % 2 == 0 ? G.nodes() : G.nodes() + 1;
    const QuadratureGrid grid = make_grid(G.system(), QuadratureFamily::chebyshev_second, q);
    for (std::size_t k = 0; k < n; ++k)
      for (const IntervalPoint& p : grid.points[k]) x_.push_back(p.x);
    A_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(x_.size()));
    parallel_for(x_.size(), [&](std::size_t i) {
      const std::size_t k = i / q;
      const std::size_t b = i % q;
      const IntervalPoint& p = grid.points[k][b];
      const Piece& piece = nu.piece(k);
      const double s = G.system()[k].to_reference(p.x);
      const cplx smooth = piece.weight == Weight::sqrt_vanishing ? cheb::eval_u(piece.coeffs, s)
                                                                 : cheb::eval_t(piece.coeffs, s) / p.weight();
      const Eigen::VectorXcd r = G.inverse(p.x, Side::above).transpose() * G.kernel().g(p.x);
      A_.col(static_cast<Eigen::Index>(i)) = r * (smooth * grid.weights[k][b]);
    });
  }

  /// (R nu)(z) / w_m(z) for z in I_m.
  [[nodiscard]] cplx correction(std::size_t m, double z) const {
    const Eigen::VectorXcd col = G_->own_column(m, z);
    const Eigen::VectorXcd proj = A_.transpose() * col;
    cplx sum = 0.0;
    for (std::size_t i = 0; i < x_.size(); ++i) {
      if (z == x_[i]) throw Error(ErrorKind::coincidence, "resolvent quadrature node meets an evaluation point");
      sum += proj[static_cast<Eigen::Index>(i)] / (z - x_[i]);
    }
    return -sum / (std::numbers::pi * G_->lambda());
  }

 private:
  const GammaSolution* G_;
  std::vector<double> x_;
  Eigen::MatrixXcd A_;
};

template <class G>
[[nodiscard]] Eigen::VectorXcd integrate_product_vector(const PiecewiseFunction& f, std::size_t k, G&& g,
                                                        Eigen::Index dim) {
  const Piece& p = f.piece(k);
  const Interval& iv = f.system()[k];
  const double h = iv.half_length();
  const std::size_t nodes = std::max<std::size_t>(2 * static_cast<std::size_t>(p.coeffs.size()), 64);
  const bool weighted = p.weight == Weight::sqrt_vanishing;
  const ReferenceRule rule = weighted ? gauss_chebyshev_second(nodes) : gauss_legendre(nodes);
  std::vector<Eigen::VectorXcd> terms(nodes);
  parallel_for(nodes, [&](std::size_t b) {
    const double s = rule.nodes[b];
    const cplx v = weighted ? cheb::eval_u(p.coeffs, s) : cheb::eval_t(p.coeffs, s);
    terms[b] = rule.weights[b] * v * g(iv.from_reference(s));
  });
  Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(dim);
  for (const auto& t : terms) sum += t;
  return (weighted ? h * h : h) * sum;
}

/// Row k of Theta_o Theta_d^{-1} R^{-1}(x) Gamma^{-1}(x) for x in I_k.
[[nodiscard]] inline Eigen::VectorXcd range_weight_row(const GammaSolution& G, std::size_t k, double x) {
  const ThetaMatrix& th = G.theta();
  Eigen::VectorXcd left = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(G.size()));
  for (std::size_t j = 0; j < G.size(); ++j)
    if (j != k) left[static_cast<Eigen::Index>(j)] = th(k, j) / (th(j, j) * radical_off(G.system()[j], x));
  return G.inverse(x, Side::above).transpose() * left;
}

inline void require_unit_lambda(const GammaSolution& G) {
  if (G.lambda() != cplx(1.0)) throw Error(ErrorKind::domain, "range conditions need Gamma at lambda = 1");
}

}  // namespace detail

/// nu + R nu, i.e. (Id - K/lambda)^{-1} nu, sampled at first-kind nodes.
[[nodiscard]] inline PiecewiseFunction apply_resolvent(const GammaSolution& G, const PiecewiseFunction& nu) {
  const detail::ResolventQuadrature rq(G, nu);
  const std::size_t n = G.size();
  const std::size_t out = G.nodes();
  std::vector<Piece> pieces(n);
  for (std::size_t m = 0; m < n; ++m) {
    const std::vector<IntervalPoint> pts = first_kind_points(G.system(), m, out);
    std::vector<cplx> vals(out);
    const Piece& p = nu.piece(m);
    parallel_for(out, [&](std::size_t i) {
      const double s = G.system()[m].to_reference(pts[i].x);
      const cplx smooth = p.weight == Weight::sqrt_vanishing ? cheb::eval_u(p.coeffs, s)
                                                             : cheb::eval_t(p.coeffs, s) / pts[i].weight();
      vals[i] = smooth + rq.correction(m, pts[i].x);
    });
    pieces[m] = {Weight::sqrt_vanishing, coeffs_from_nodes(vals, Weight::sqrt_vanishing)};
  }
  const Field field = G.lambda().imag() == 0.0 ? nu.field() : Field::complex;
  return {G.system(), std::move(pieces), field};
}

struct ResolventOptions {
  std::size_t nystrom_nodes = default_nystrom_nodes;
  double range_tol = -1.0;
  double singular_threshold = 1e-10;
};

/// Solves chi Theta H phi = psi through the resolvent at lambda = 1.
[[nodiscard]] inline PiecewiseFunction invert_via_resolvent(const ThetaMatrix& theta, const PiecewiseFunction& psi,
                                                            const ResolventOptions& opt = {}) {
  theta.require_invertible_diagonal();
  const Eigen::VectorXcd c = compute_c(psi);
  const PiecewiseFunction nu = compute_nu(psi, c, theta, opt.range_tol);
  if (theta.is_diagonal()) return nu;
  const GammaSolution G(assemble_K(psi.system(), theta, opt.nystrom_nodes, 1.0), opt.singular_threshold);
  return apply_resolvent(G, nu);
}

/// Predicted shift vector
///   c_m = (theta_mm/pi) sum_k int_{I_k} [Theta_o Theta_d^{-1} R^{-1} Gamma^{-1}]_{km} nu_k dx.
/// The k = m term is part of the sum. Valid for symmetric Theta.
[[nodiscard]] inline Eigen::VectorXcd range_condition_N2(const GammaSolution& G, const PiecewiseFunction& nu) {
  detail::require_unit_lambda(G);
  G.theta().require_symmetric();
  const auto n = static_cast<Eigen::Index>(G.size());
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n);
  for (std::size_t k = 0; k < G.size(); ++k) {
    Eigen::VectorXcd row = detail::integrate_product_vector(
        nu, k, [&](double x) { return detail::range_weight_row(G, k, x); }, n);
    c += row;
  }
  for (Eigen::Index m = 0; m < n; ++m) c[m] *= G.theta()(static_cast<std::size_t>(m), static_cast<std::size_t>(m)) / std::numbers::pi;
  return c;
}

/// Two-interval form of range_condition_N2, written with entries of Gamma:
///   c_1 = (theta_21/pi) int_{I_2} Gamma_22 nu_2 / R_1 - (theta_11 theta_12/(pi theta_22)) int_{I_1} Gamma_21 nu_1 / R_2,
/// and c_2 by exchanging the indices.
[[nodiscard]] inline Eigen::VectorXcd range_condition_two_intervals(const GammaSolution& G,
                                                                    const PiecewiseFunction& nu) {
  detail::require_unit_lambda(G);
  G.theta().require_symmetric();
  if (G.size() != 2) throw Error(ErrorKind::domain, "two-interval range condition needs exactly two intervals");
  const ThetaMatrix& th = G.theta();
  Eigen::VectorXcd c(2);
  for (std::size_t m = 0; m < 2; ++m) {
    const std::size_t k = 1 - m;
    const auto mi = static_cast<Eigen::Index>(m);
    const auto ki = static_cast<Eigen::Index>(k);
    const cplx cross = integrate_product(nu, k, [&](double x) {
      return G.own_column(k, x)[ki] / radical_off(G.system()[m], x);
    });
    const cplx own = integrate_product(nu, m, [&](double x) {
      return G.own_column(m, x)[ki] / radical_off(G.system()[k], x);
    });
    c[mi] = (th(k, m) * cross - th(m, m) * th(m, k) / th(k, k) * own) / std::numbers::pi;
  }
  return c;
}

struct J12Terms {
  Eigen::VectorXcd j1;  ///< (1/pi) sum_{k != m} theta_mk int_{I_k} nu_k / R_m
  Eigen::VectorXcd j2;  ///< same moment of R nu
  [[nodiscard]] Eigen::VectorXcd total() const { return j1 + j2; }
};

/// Predicted shift vector as the moment of nu + R nu; needs no symmetry.
[[nodiscard]] inline J12Terms range_condition_J12(const GammaSolution& G, const PiecewiseFunction& nu) {
  detail::require_unit_lambda(G);
  const std::size_t n = G.size();
  const IntervalSystem& sys = G.system();
  J12Terms t{Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n)), Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n))};
  if (G.theta().is_diagonal()) return t;
  const detail::ResolventQuadrature rq(G, nu);
  const std::size_t outer = (G.nodes() % 2 == 0 ? G.nodes() : G.nodes() + 1) + 1;
  const QuadratureGrid grid = make_grid(sys, QuadratureFamily::chebyshev_second, outer);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<cplx> corr(outer);
    parallel_for(outer, [&](std::size_t a) { corr[a] = rq.correction(k, grid.points[k][a].x); });
    for (std::size_t m = 0; m < n; ++m) {
      if (m == k || G.theta()(m, k) == 0.0) continue;
      const cplx direct = integrate_product(nu, k, [&](double y) { return 1.0 / radical_off(sys[m], y); });
      cplx resolvent = 0.0;
      for (std::size_t a = 0; a < outer; ++a)
        resolvent += grid.weights[k][a] * corr[a] / radical_off(sys[m], grid.points[k][a].x);
      const double scale = G.theta()(m, k) / std::numbers::pi;
      t.j1[static_cast<Eigen::Index>(m)] += scale * direct;
      t.j2[static_cast<Eigen::Index>(m)] += scale * resolvent;
    }
  }
  return t;
}

/// Residual of the range condition written directly in psi:
///   i int_{I_m} psi_m / R_{m+} - theta_mm sum_k (1/theta_kk) int_{I_k} W_km H^{-1}[psi_k],
/// with W_km the weight row of range_condition_N2. Vanishes iff psi is in the range.
[[nodiscard]] inline Eigen::VectorXcd range_check_L1_variant(const GammaSolution& G, const PiecewiseFunction& psi) {
  detail::require_unit_lambda(G);
  G.theta().require_symmetric();
  const std::size_t n = G.size();
  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::VectorXcd r(dim);
  for (std::size_t m = 0; m < n; ++m) {
    const cplx m0 = range_scan(psi, m).m0;
    if (!std::isfinite(m0.real()) || !std::isfinite(m0.imag()))
      throw Error(ErrorKind::singular_data, "endpoint-weighted moment of psi does not converge");
    r[static_cast<Eigen::Index>(m)] = cplx(0.0, 1.0) * m0;
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<Piece> pieces(n, Piece{Weight::sqrt_vanishing, cheb::Coeffs::Zero(1)});
    pieces[k] = detail::invert_piece(psi.piece(k), G.system()[k]);
    const PiecewiseFunction hinv(G.system(), std::move(pieces), Field::complex);
    Eigen::VectorXcd row = detail::integrate_product_vector(
        hinv, k, [&](double x) { return detail::range_weight_row(G, k, x); }, dim);
    for (std::size_t m = 0; m < n; ++m)
      r[static_cast<Eigen::Index>(m)] -= G.theta()(m, m) / G.theta()(k, k) * row[static_cast<Eigen::Index>(m)];
  }
  return r;
}

/// Residual of the range condition for data with vanishing shift vector:
///   sum_k (1/theta_kk) int_{I_k} W_km H^{-1}[psi_k].
[[nodiscard]] inline Eigen::VectorXcd range_check_zero_shift(const GammaSolution& G, const PiecewiseFunction& psi,
                                                             double tol = -1.0) {
  detail::require_unit_lambda(G);
  G.theta().require_symmetric();
  const std::size_t n = G.size();
  const auto dim = static_cast<Eigen::Index>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double limit = tol < 0.0 ? default_range_tolerance(psi, k) : tol;
    if (std::abs(range_scan(psi, k).m0) > limit)
      throw Error(ErrorKind::range, "interval " + std::to_string(k) + " has a nonzero shift constant");
  }
  Eigen::VectorXcd r = Eigen::VectorXcd::Zero(dim);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<Piece> pieces(n, Piece{Weight::sqrt_vanishing, cheb::Coeffs::Zero(1)});
    pieces[k] = detail::invert_piece(psi.piece(k), G.system()[k]);
    const PiecewiseFunction hinv(G.system(), std::move(pieces), Field::complex);
    Eigen::VectorXcd row = detail::integrate_product_vector(
        hinv, k, [&](double x) { return detail::range_weight_row(G, k, x); }, dim);
    r += row / G.theta()(k, k);
  }
  return r;
}

}  // namespace mifht
