#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/FFT>

#include "mifht/error.hpp"
#include "mifht/function.hpp"
#include "mifht/interval.hpp"
#include "mifht/parallel.hpp"

namespace mifht {

// Diagonalization of the full multi-interval transform
//   (H f)(z) = (1/pi) int_I f(x)/(x - z) dx
// by the substitution t = phi(x)/2, phi = ln|beta_ev/beta_od|, where
// beta_od = prod (z - alpha_j) and beta_ev = prod (z - beta_j). In channel
// space H becomes M^t K M, with K the convolution by 1/(pi sinh t) and
// Fourier multiplier i tanh(pi lambda/2) under f~(lambda) = int f e^{i lambda t} dt.

struct UniformGrid {
  double step = 1.0 / 64.0;
  std::size_t points = 4096;  ///< power of two

  [[nodiscard]] double half_width() const noexcept { return 0.5 * step * static_cast<double>(points); }
  [[nodiscard]] double t(std::size_t i) const noexcept {
    return (static_cast<double>(i) - 0.5 * static_cast<double>(points)) * step;
  }
  /// Angular frequency of DFT bin k; the Nyquist bin is reported as positive.
  [[nodiscard]] double lambda(std::size_t k) const noexcept {
    const auto kk = static_cast<double>(k <= points / 2 ? static_cast<long long>(k)
                                                        : static_cast<long long>(k) - static_cast<long long>(points));
    return 2.0 * std::numbers::pi * kk / (step * static_cast<double>(points));
  }
  [[nodiscard]] double lambda_step() const noexcept {
    return 2.0 * std::numbers::pi / (step * static_cast<double>(points));
  }
};

namespace poly {

/// Ascending coefficients of prod (z - r).
[[nodiscard]] inline Eigen::VectorXd from_roots(std::span<const double> roots) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(roots.size() + 1));
  c[0] = 1.0;
  for (std::size_t d = 0; d < roots.size(); ++d) {
    const auto deg = static_cast<Eigen::Index>(d);
    for (Eigen::Index i = deg + 1; i >= 1; --i) c[i] = c[i - 1] - roots[d] * c[i];
    c[0] *= -roots[d];
  }
  return c;
}

[[nodiscard]] inline double eval(const Eigen::VectorXd& c, double x) {
  double v = 0.0;
  for (Eigen::Index i = c.size() - 1; i >= 0; --i) v = v * x + c[i];
  return v;
}

[[nodiscard]] inline Eigen::VectorXd derivative(const Eigen::VectorXd& c) {
  if (c.size() <= 1) return Eigen::VectorXd::Zero(1);
  Eigen::VectorXd d(c.size() - 1);
  for (Eigen::Index i = 1; i < c.size(); ++i) d[i - 1] = static_cast<double>(i) * c[i];
  return d;
}

/// B with p(x) q(z) - p(z) q(x) = (x - z) sum_{i,j} B_ij z^i x^j, for deg p = deg q = n.
[[nodiscard]] inline Eigen::MatrixXd bezout(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  const Eigen::Index n = p.size() - 1;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
  // Coefficient of x^a z^b: B_{b, a-1} - B_{b-1, a} = p_a q_b - p_b q_a.
  for (Eigen::Index b = 0; b < n; ++b)
    for (Eigen::Index a = 1; a <= n; ++a)
      B(b, a - 1) = p[a] * q[b] - p[b] * q[a] + (b > 0 && a < n ? B(b - 1, a) : 0.0);
  return 0.5 * (B + B.transpose());
}

}  // namespace poly

struct SpectralData {
  IntervalSystem sys;
  UniformGrid grid;
  Eigen::VectorXd beta_od;
  Eigen::VectorXd beta_ev;
  Eigen::VectorXd q_poly;  ///< Q = beta_ev' beta_od - beta_ev beta_od'
  Eigen::MatrixXd bezout;
  Eigen::MatrixXd omega;   ///< bezout = omega^t diag(rho) omega
  Eigen::VectorXd rho;
  std::vector<std::vector<IntervalPoint>> nodes;  ///< [k][i]: phi_k^{-1}(2 t_i)
  std::vector<std::vector<double>> scale;         ///< [k][i]: channel factor at nodes[k][i]
  std::vector<Eigen::MatrixXd> M;                 ///< M(t_i)

  [[nodiscard]] std::size_t size() const noexcept { return sys.size(); }
  [[nodiscard]] double t_limit() const noexcept { return 1.25 * grid.half_width(); }

  /// sum_{j != k} ln|x - beta_j| - ln|x - alpha_j| for x in I_k, and its derivative.
  [[nodiscard]] std::pair<double, double> remote_log(std::size_t k, double x) const {
    double s = 0.0;
    double ds = 0.0;
    for (std::size_t j = 0; j < size(); ++j) {
      if (j == k) continue;
      s += std::log(std::abs(x - sys[j].b)) - std::log(std::abs(x - sys[j].a));
      ds += 1.0 / (x - sys[j].b) - 1.0 / (x - sys[j].a);
    }
    return {s, ds};
  }

  /// phi(x) = ln|beta_ev(x) / beta_od(x)|, accurate up to the endpoints.
  [[nodiscard]] double phi(const IntervalPoint& p) const {
    return std::log(p.dr) - std::log(p.dl) + remote_log(p.interval, p.x).first;
  }

  [[nodiscard]] double Q(double x) const { return poly::eval(q_poly, x); }

  /// P_j(x) = sum_i omega_ji x^i.
  [[nodiscard]] double P(std::size_t j, double x) const {
    double v = 0.0;
    for (Eigen::Index i = omega.cols() - 1; i >= 0; --i) v = v * x + omega(static_cast<Eigen::Index>(j), i);
    return v;
  }

  /// |beta_od(x) beta_ev(x)|.
  [[nodiscard]] double abs_product(const IntervalPoint& p) const {
    double v = p.dl * p.dr;
    for (std::size_t j = 0; j < size(); ++j)
      if (j != p.interval) v *= std::abs((p.x - sys[j].a) * (p.x - sys[j].b));
    return v;
  }

  /// sqrt(2) sgn(beta_od) / sqrt|phi'|, the factor of T at x.
  [[nodiscard]] double channel_scale(const IntervalPoint& p) const {
    return std::numbers::sqrt2 * beta_od_sign(sys, p.interval) * std::sqrt(abs_product(p) / Q(p.x));
  }

  /// Unique x in I_k with phi(x) = 2t.
  [[nodiscard]] IntervalPoint phi_inverse(std::size_t k, double t) const {
    if (k >= size()) throw Error(ErrorKind::index, "interval index out of range");
    if (!(std::abs(t) <= t_limit()))
      throw Error(ErrorKind::range_exceeded, "phi inverse requested at t = " + std::to_string(t) +
                                                 " beyond the tabulated range " + std::to_string(t_limit()));
    const Interval& iv = sys[k];
    const double len = iv.length();
    // x = a + len sigma(y): then ln(dr/dl) = -y exactly and phi(y) = -y + remote_log.
    const auto point = [&](double y) {
      const double e = std::exp(-std::abs(y));
      const double big = len / (1.0 + e);
      const double small = len * e / (1.0 + e);
      const double dl = y >= 0.0 ? big : small;
      const double dr = y >= 0.0 ? small : big;
      return IntervalPoint{k, dl <= dr ? iv.a + dl : iv.b - dr, dl, dr};
    };
    const double target = 2.0 * t;
    const auto residual = [&](double y) { return -y + remote_log(k, point(y).x).first - target; };
    double y = -target + remote_log(k, point(-target).x).first;
    double lo = y;
    double hi = y;
    for (double step = 1.0; residual(lo) < 0.0; step *= 2.0) lo -= step;
    for (double step = 1.0; residual(hi) > 0.0; step *= 2.0) hi += step;
    for (int it = 0; it < 200; ++it) {
      const IntervalPoint p = point(y);
      const auto [s, ds] = remote_log(k, p.x);
      const double r = -y + s - target;
      if (std::abs(r) <= 1e-13 * std::max(1.0, std::abs(target))) return p;
      if (r > 0.0) lo = y; else hi = y;
      double next = y - r / (-1.0 + ds * p.dl * p.dr / len);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (next == y) return p;
      y = next;
    }
    throw Error(ErrorKind::convergence, "phi inverse did not converge");
  }

  /// M_jk = P_j(x_k) sqrt(rho_j / Q(x_k)) with x_k in I_k and phi(x_k) = 2t.
  [[nodiscard]] Eigen::MatrixXd M_from_points(std::span<const IntervalPoint> xs) const {
    const auto n = static_cast<Eigen::Index>(size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k) {
        const double x = xs[static_cast<std::size_t>(k)].x;
        m(j, k) = P(static_cast<std::size_t>(j), x) * std::sqrt(rho[j] / Q(x));
      }
    return m;
  }
};

[[nodiscard]] inline SpectralData build_spectral_data(const IntervalSystem& sys, const UniformGrid& grid = {}) {
  if (grid.points < 8 || (grid.points & (grid.points - 1)) != 0 || !(grid.step > 0.0))
    throw Error(ErrorKind::schema, "t-grid needs a positive step and a power-of-two point count");
  SpectralData sd;
  sd.sys = sys;
  sd.grid = grid;
  const std::size_t n = sys.size();
  std::vector<double> alphas(n), betas(n);
  for (std::size_t j = 0; j < n; ++j) {
    alphas[j] = sys[j].a;
    betas[j] = sys[j].b;
  }
  sd.beta_od = poly::from_roots(alphas);
  sd.beta_ev = poly::from_roots(betas);
  const Eigen::VectorXd dev = poly::derivative(sd.beta_ev);
  const Eigen::VectorXd dod = poly::derivative(sd.beta_od);
  sd.q_poly = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * n));
  for (Eigen::Index i = 0; i < dev.size(); ++i)
    for (Eigen::Index j = 0; j < sd.beta_od.size(); ++j) {
      if (i + j < sd.q_poly.size()) sd.q_poly[i + j] += dev[i] * sd.beta_od[j] - dod[i] * sd.beta_ev[j];
    }
  sd.bezout = poly::bezout(sd.beta_ev, sd.beta_od);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sd.bezout);
  sd.rho = es.eigenvalues();
  sd.omega = es.eigenvectors().transpose();
  for (Eigen::Index j = 0; j < sd.rho.size(); ++j)
    if (!(sd.rho[j] > 0.0))
      throw Error(ErrorKind::non_positive_eigenvalue,
                  "Bezout matrix eigenvalue " + std::to_string(sd.rho[j]) + " is not positive");

  sd.nodes.assign(n, std::vector<IntervalPoint>(grid.points));
  sd.scale.assign(n, std::vector<double>(grid.points));
  parallel_for(n, [&](std::size_t k) {
    for (std::size_t i = 0; i < grid.points; ++i) {
      sd.nodes[k][i] = sd.phi_inverse(k, grid.t(i));
      const double q = sd.Q(sd.nodes[k][i].x);
      if (!(q > 0.0)) throw Error(ErrorKind::non_positive_eigenvalue, "Q is not positive on the intervals");
      sd.scale[k][i] = sd.channel_scale(sd.nodes[k][i]);
    }
  });
  sd.M.resize(grid.points);
  parallel_for(grid.points, [&](std::size_t i) {
    std::vector<IntervalPoint> xs(n);
    for (std::size_t k = 0; k < n; ++k) xs[k] = sd.nodes[k][i];
    sd.M[i] = sd.M_from_points(xs);
  });
  return sd;
}

[[nodiscard]] inline Eigen::MatrixXd build_M(const SpectralData& sd, double t) {
  std::vector<IntervalPoint> xs(sd.size());
  for (std::size_t k = 0; k < sd.size(); ++k) xs[k] = sd.phi_inverse(k, t);
  return sd.M_from_points(xs);
}

/// n channel functions sampled on the t-grid.
struct ChannelVector {
  std::vector<Eigen::VectorXcd> channels;
  double step = 0.0;

  [[nodiscard]] double norm() const {
    double s = 0.0;
    for (const auto& c : channels) s += c.squaredNorm();
    return std::sqrt(s * step);
  }
};

[[nodiscard]] inline ChannelVector apply_T(const SpectralData& sd, const PiecewiseFunction& f) {
  ChannelVector out{std::vector<Eigen::VectorXcd>(sd.size()), sd.grid.step};
  for (std::size_t k = 0; k < sd.size(); ++k) {
    out.channels[k].resize(static_cast<Eigen::Index>(sd.grid.points));
    for (std::size_t i = 0; i < sd.grid.points; ++i)
      out.channels[k][static_cast<Eigen::Index>(i)] = sd.scale[k][i] * f.value(sd.nodes[k][i]);
  }
  return out;
}

namespace detail {

/// Transform y~(lambda_k) = dt sum_i y_i e^{i lambda_k t_i}.
[[nodiscard]] inline Eigen::VectorXcd to_fourier(const UniformGrid& grid, const Eigen::VectorXcd& y) {
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  std::vector<cplx> in(y.data(), y.data() + y.size());
  std::vector<cplx> out;
  fft.inv(out, in);
  Eigen::VectorXcd spec(y.size());
  const double t0 = grid.t(0);
  for (std::size_t k = 0; k < grid.points; ++k)
    spec[static_cast<Eigen::Index>(k)] = grid.step * std::polar(1.0, grid.lambda(k) * t0) * out[k];
  return spec;
}

/// Band-limited reconstruction y(t) = (1/(N dt)) sum_k y~(lambda_k) e^{-i lambda_k t}; the
/// Nyquist bin is split evenly between +-lambda.
[[nodiscard]] inline cplx from_fourier_at(const UniformGrid& grid, const Eigen::VectorXcd& spec, double t) {
  const std::size_t n = grid.points;
  cplx sum = 0.0;
  const cplx base = std::polar(1.0, -grid.lambda_step() * t);
  cplx rot = 1.0;
  cplx rot_neg = 1.0;
  const cplx base_neg = std::conj(base);
  sum += spec[0];
  for (std::size_t k = 1; k < n / 2; ++k) {
    rot *= base;
    rot_neg *= base_neg;
    sum += spec[static_cast<Eigen::Index>(k)] * rot + spec[static_cast<Eigen::Index>(n - k)] * rot_neg;
    if (k % 64 == 0) {  // renormalize the rotation to stop drift
      rot = std::polar(1.0, -grid.lambda(k) * t);
      rot_neg = std::conj(rot);
    }
  }
  sum += spec[static_cast<Eigen::Index>(n / 2)] * std::cos(grid.lambda(n / 2) * t);
  return sum / (grid.step * static_cast<double>(n));
}

/// Channels of M T f on the t-grid.
[[nodiscard]] inline std::vector<Eigen::VectorXcd> rotated_channels(const SpectralData& sd, const ChannelVector& ch) {
  const std::size_t n = sd.size();
  const auto pts = static_cast<Eigen::Index>(sd.grid.points);
  std::vector<Eigen::VectorXcd> y(n, Eigen::VectorXcd(pts));
  for (Eigen::Index i = 0; i < pts; ++i) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) v[static_cast<Eigen::Index>(k)] = ch.channels[k][i];
    const Eigen::VectorXcd r = sd.M[static_cast<std::size_t>(i)] * v;
    for (std::size_t j = 0; j < n; ++j) y[j][i] = r[static_cast<Eigen::Index>(j)];
  }
  return y;
}

[[nodiscard]] inline std::vector<Eigen::VectorXcd> spectra(const SpectralData& sd,
                                                           const std::vector<Eigen::VectorXcd>& y) {
  std::vector<Eigen::VectorXcd> spec(y.size());
  parallel_for(y.size(), [&](std::size_t j) { spec[j] = to_fourier(sd.grid, y[j]); });
  return spec;
}

/// Spectra of M T f, one per channel.
[[nodiscard]] inline std::vector<Eigen::VectorXcd> rotated_spectra(const SpectralData& sd, const ChannelVector& ch) {
  return spectra(sd, rotated_channels(sd, ch));
}

/// Channel m of M^t F^{-1} spec at the point x of I_m, divided by the T factor.
[[nodiscard]] inline cplx pull_back(const SpectralData& sd, const std::vector<Eigen::VectorXcd>& spec,
                                    const IntervalPoint& p) {
  const double t = 0.5 * sd.phi(p);
  std::vector<IntervalPoint> xs(sd.size());
  for (std::size_t k = 0; k < sd.size(); ++k) xs[k] = k == p.interval ? p : sd.phi_inverse(k, t);
  const Eigen::MatrixXd m = sd.M_from_points(xs);
  cplx v = 0.0;
  for (std::size_t j = 0; j < sd.size(); ++j)
    v += m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(p.interval)) * from_fourier_at(sd.grid, spec[j], t);
  return v / sd.channel_scale(p);
}

/// Channel energy outside 0.9 of the grid half-width, relative to the total.
[[nodiscard]] inline double tail_fraction(const SpectralData& sd, const ChannelVector& ch) {
  double tail = 0.0;
  double total = 0.0;
  const double edge = 0.9 * sd.grid.half_width();
  for (const auto& c : ch.channels)
    for (std::size_t i = 0; i < sd.grid.points; ++i) {
      const double e = std::norm(c[static_cast<Eigen::Index>(i)]);
      total += e;
      if (std::abs(sd.grid.t(i)) > edge) tail += e;
    }
  return total > 0.0 ? tail / total : 0.0;
}

}  // namespace detail

/// T^{-1}: samples channel k at t = phi(x)/2 for first-kind nodes x of I_k.
[[nodiscard]] inline PiecewiseFunction apply_T_inverse(const SpectralData& sd, const ChannelVector& ch,
                                                       std::size_t modes = default_modes,
                                                       Weight weight = Weight::sqrt_vanishing,
                                                       Field field = Field::complex) {
  std::vector<Piece> pieces(sd.size());
  for (std::size_t k = 0; k < sd.size(); ++k) {
    const Eigen::VectorXcd spec = detail::to_fourier(sd.grid, ch.channels[k]);
    const std::vector<IntervalPoint> pts = first_kind_points(sd.sys, k, modes);
    std::vector<cplx> vals(modes);
    parallel_for(modes, [&](std::size_t i) {
      const cplx v = detail::from_fourier_at(sd.grid, spec, 0.5 * sd.phi(pts[i])) / sd.channel_scale(pts[i]);
      vals[i] = weight == Weight::sqrt_vanishing ? v / pts[i].weight() : v;
    });
    pieces[k] = {weight, coeffs_from_nodes(vals, weight)};
  }
  return {sd.sys, std::move(pieces), field};
}

struct UniformTransform {
  PiecewiseFunction result;
  double tail_fraction = 0.0;  ///< input channel energy near the grid edge
  std::vector<std::string> warnings;
};

struct UniformRangeReport {
  std::vector<double> channel_energy;  ///< (1/lambda)-weighted energy near lambda = 0
  double tolerance = 0.0;
  bool pass = true;
};

/// Discrete test of (1/lambda) (F M T g)_m in L^2 near lambda = 0: the weighted
/// energy over |lambda| < lambda0 of a spectrum that does not vanish at 0 is
/// |g~_m(0)|^2 (1/pi)(2/dlambda - 1/lambda0), which grows with the grid
/// resolution. Pass iff it stays below tol_rel ||g||^2 for every channel.
[[nodiscard]] inline UniformRangeReport uniform_range_check(const SpectralData& sd, const PiecewiseFunction& g,
                                                            double lambda0 = 0.25, double tol_rel = 1e-6) {
  const ChannelVector ch = apply_T(sd, g);
  const std::vector<Eigen::VectorXcd> spec = detail::rotated_spectra(sd, ch);
  const double norm2 = ch.norm() * ch.norm();
  UniformRangeReport rep;
  rep.tolerance = tol_rel * norm2;
  const double weight = (2.0 / sd.grid.lambda_step() - 1.0 / lambda0) / std::numbers::pi;
  for (const auto& s : spec) {
    const double e = std::norm(s[0]) * weight;
    rep.channel_energy.push_back(e);
    if (e > rep.tolerance) rep.pass = false;
  }
  return rep;
}

namespace detail {

/// Multiplies each channel spectrum by mult(lambda). Bins where mult is not
/// finite take the value zero_bin(channel samples) instead.
template <class Multiplier, class ZeroBin>
[[nodiscard]] UniformTransform apply_multiplier(const SpectralData& sd, const PiecewiseFunction& f, Multiplier&& mult,
                                                ZeroBin&& zero_bin, Weight out_weight, std::size_t modes) {
  if (!(f.system() == sd.sys)) throw Error(ErrorKind::domain, "function and spectral data live on different intervals");
  const ChannelVector ch = apply_T(sd, f);
  UniformTransform out;
  out.tail_fraction = tail_fraction(sd, ch);
  if (out.tail_fraction > 1e-8)
    out.warnings.push_back("TruncationWarning: channel energy near the t-grid edge is " +
                           std::to_string(out.tail_fraction) + " of the total");
  const std::vector<Eigen::VectorXcd> y = rotated_channels(sd, ch);
  std::vector<Eigen::VectorXcd> spec = spectra(sd, y);
  for (std::size_t j = 0; j < spec.size(); ++j)
    for (std::size_t k = 0; k < sd.grid.points; ++k) {
      const cplx m = mult(sd.grid.lambda(k));
      auto& bin = spec[j][static_cast<Eigen::Index>(k)];
      bin = std::isfinite(m.real()) && std::isfinite(m.imag()) ? bin * m : zero_bin(y[j]);
    }
  std::vector<Piece> pieces(sd.size());
  for (std::size_t m = 0; m < sd.size(); ++m) {
    const std::vector<IntervalPoint> pts = first_kind_points(sd.sys, m, modes);
    std::vector<cplx> vals(modes);
    parallel_for(modes, [&](std::size_t i) {
      const cplx v = pull_back(sd, spec, pts[i]);
      vals[i] = out_weight == Weight::sqrt_vanishing ? v / pts[i].weight() : v;
    });
    pieces[m] = {out_weight, coeffs_from_nodes(vals, out_weight)};
  }
  out.result = PiecewiseFunction(sd.sys, std::move(pieces), f.field());
  return out;
}

}  // namespace detail

/// H f through the tanh multiplier; the result is sampled as a plain function.
[[nodiscard]] inline UniformTransform uniform_forward(const SpectralData& sd, const PiecewiseFunction& f,
                                                      std::size_t modes = default_modes) {
  return detail::apply_multiplier(
      sd, f, [](double lam) { return cplx(0.0, std::tanh(0.5 * std::numbers::pi * lam)); },
      [](const Eigen::VectorXcd&) { return cplx(0.0); }, Weight::plain, modes);
}

/// H^{-1} g through the reciprocal multiplier. Data at lambda = 0 is discarded; the
/// output there is the limit through the first moment of the channel.
/// Throws RangeError when the range check fails, unless check_range is false.
[[nodiscard]] inline UniformTransform uniform_invert(const SpectralData& sd, const PiecewiseFunction& g,
                                                     std::size_t modes = default_modes, bool check_range = true) {
  if (check_range) {
    const UniformRangeReport rep = uniform_range_check(sd, g);
    if (!rep.pass) {
      double worst = 0.0;
      for (double e : rep.channel_energy) worst = std::max(worst, e);
      throw Error(ErrorKind::range, "data fails the low-frequency range test (energy " + std::to_string(worst) +
                                        " > " + std::to_string(rep.tolerance) + ")");
    }
  }
  return detail::apply_multiplier(
      sd, g,
      [](double lam) {
        const double th = std::tanh(0.5 * std::numbers::pi * lam);
        return std::abs(th) < 1e-8 ? cplx(std::numeric_limits<double>::quiet_NaN()) : 1.0 / cplx(0.0, th);
      },
      // Limit of g~(lambda) / (i tanh(pi lambda / 2)) at 0 is (2/pi) int t g(t) dt.
      [&sd](const Eigen::VectorXcd& y) {
        cplx moment = 0.0;
        for (std::size_t i = 0; i < sd.grid.points; ++i) moment += sd.grid.t(i) * y[static_cast<Eigen::Index>(i)];
        return 2.0 / std::numbers::pi * sd.grid.step * moment;
      },
      Weight::sqrt_vanishing, modes);
}

/// sum_{i,j} B_ij z^i x^j.
[[nodiscard]] inline double bezout_form(const SpectralData& sd, double x, double z) {
  double v = 0.0;
  for (Eigen::Index i = 0; i < sd.bezout.rows(); ++i)
    for (Eigen::Index j = 0; j < sd.bezout.cols(); ++j)
      v += sd.bezout(i, j) * std::pow(z, static_cast<double>(i)) * std::pow(x, static_cast<double>(j));
  return v;
}

}  // namespace mifht
