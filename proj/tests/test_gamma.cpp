#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include "mifht/gamma.hpp"
#include "mifht/solver.hpp"

using namespace mifht;

namespace {

const IntervalSystem two = make_interval_system({{-2.0, -1.0}, {1.0, 2.0}});
const IntervalSystem three = make_interval_system({{-3.0, -2.0}, {-1.0, 0.0}, {1.0, 3.0}});

ThetaMatrix spd2() { return ThetaMatrix((Eigen::Matrix2d() << 2, 1, 1, 2).finished()); }
ThetaMatrix skew2() { return ThetaMatrix((Eigen::Matrix2d() << 2, 1.2, 0.6, 1.5).finished()); }
ThetaMatrix spd3() {
  return ThetaMatrix((Eigen::Matrix3d() << 3, 1, 0.5, 1, 2.5, 0.7, 0.5, 0.7, 2).finished());
}

PiecewiseFunction smooth_phi(const IntervalSystem& sys, std::uint64_t seed, std::size_t modes = 8) {
  std::mt19937_64 rng(seed);
  return random_sqrt_vanishing(sys, modes, rng);
}

// Interior sample points spread over all intervals.
std::vector<double> interior_points(const IntervalSystem& sys, std::size_t per_interval) {
  std::vector<double> pts;
  for (std::size_t j = 0; j < sys.size(); ++j)
    for (std::size_t i = 0; i < per_interval; ++i)
      pts.push_back(sys[j].from_reference(-0.93 + 1.87 * (static_cast<double>(i) + 0.37) / static_cast<double>(per_interval)));
  return pts;
}

double column_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, Eigen::Index j) {
  return (a.col(j) - b.col(j)).norm();
}

}  // namespace

TEST(KernelVectors, StructureAndOrthogonality) {
  const IntegrableKernelData diag = build_kernel_vectors(two, ThetaMatrix::identity(2));
  EXPECT_EQ(diag.g(-1.5).norm(), 0.0);
  EXPECT_EQ(diag.g(1.3).norm(), 0.0);

  const IntegrableKernelData kd = build_kernel_vectors(two, spd2());
  const double x = -1.4;
  const Eigen::VectorXcd g = kd.g(x);
  EXPECT_EQ(g[0], cplx(0.0));
  EXPECT_NEAR(std::abs(g[1] - 1.0 / (2.0 * radical_off(two[1], x))), 0.0, 1e-15);
  const Eigen::VectorXcd f = kd.f(x);
  EXPECT_NEAR(std::abs(f[0] + 2.0 * radical(-2.0, -1.0, x, Side::above)), 0.0, 1e-15);
  EXPECT_EQ(f[1], cplx(0.0));

  const IntegrableKernelData k3 = build_kernel_vectors(three, spd3());
  for (double p : interior_points(three, 7)) EXPECT_EQ(std::abs(k3.f(p).cwiseProduct(k3.g(p)).sum()), 0.0);
  EXPECT_THROW((void)k3.f(-3.0), Error);
  EXPECT_THROW((void)k3.g(0.5), Error);
  EXPECT_THROW(build_kernel_vectors(two, ThetaMatrix((Eigen::Matrix2d() << 0, 1, 1, 1).finished())), Error);
}

TEST(ComputeF, DiagonalAndLargeLambda) {
  const Eigen::MatrixXcd u = compute_F(assemble_K(two, ThetaMatrix::identity(2), 32));
  for (Eigen::Index i = 0; i < u.rows(); ++i)
    for (Eigen::Index l = 0; l < 2; ++l) EXPECT_EQ(u(i, l), cplx(0.0, i / 32 == l ? -2.0 : 0.0));

  const auto deviation = [](cplx lambda) {
    const Eigen::MatrixXcd v = compute_F(assemble_K(two, spd2(), 48, lambda));
    Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(v.rows(), 2);
    for (Eigen::Index i = 0; i < v.rows(); ++i) f(i, i / 48) = cplx(0.0, -2.0);
    return (v - f).norm();
  };
  const double d3 = deviation(1e3);
  const double d4 = deviation(1e4);
  EXPECT_LT(d3, 1e-2);
  EXPECT_NEAR(d3 / d4, 10.0, 0.05);
}

TEST(ComputeF, SolverResidualAndRealness) {
  const NystromSystem ns = assemble_K(two, spd2());
  const Eigen::MatrixXcd u = compute_F(ns);
  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(ns.dimension(), 2);
  for (Eigen::Index i = 0; i < rhs.rows(); ++i) rhs(i, i / static_cast<Eigen::Index>(ns.nodes)) = cplx(0.0, -2.0);
  EXPECT_LT((ns.matrix * u - rhs).norm() / rhs.norm(), 1e-10);
  // F / R_+ is real, so the smooth parts are purely imaginary.
  EXPECT_LT(u.real().cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Gamma, DiagonalThetaIsIdentity) {
  const GammaSolution G = build_gamma(two, ThetaMatrix::identity(2), 32);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(2, 2);
  EXPECT_EQ(G.value(cplx(0.3, 0.4)), id);
  EXPECT_EQ(G.value(-1.5, Side::above), id);
  EXPECT_EQ(verify_jump(G, interior_points(two, 5)), 0.0);
  EXPECT_EQ(resolvent_kernel(G, -1.5, 1.5), cplx(0.0));
}

TEST(Gamma, ErrorsAtEndpointsAndOnCut) {
  const GammaSolution G = build_gamma(two, spd2(), 32);
  EXPECT_THROW((void)G.value(-1.0), Error);
  EXPECT_THROW((void)G.value(-1.5), Error);
  EXPECT_NO_THROW((void)G.value(0.0));
  EXPECT_THROW((void)resolvent_kernel(G, 1.5, 1.5), Error);
}

TEST(Gamma, NormalizationAndDeterminant) {
  for (const auto& [sys, theta] : {std::pair{two, spd2()}, std::pair{two, skew2()}, std::pair{three, spd3()}}) {
    const GammaSolution G = build_gamma(sys, theta);
    const auto n = static_cast<Eigen::Index>(sys.size());
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
    EXPECT_LT((G.value(cplx(1e6, 0.0)) - id).norm(), 1e-5);
    // Deviation from the identity decays like 1/z.
    const double d1 = (G.value(cplx(0.0, 1e3)) - id).norm();
    const double d2 = (G.value(cplx(0.0, 1e4)) - id).norm();
    EXPECT_NEAR(d1 / d2, 10.0, 0.01);
    for (cplx z : {cplx(0.1, 0.2), cplx(-2.5, -0.7), cplx(4.0, 0.0), cplx(-1.5, 1e-3)})
      EXPECT_NEAR(std::abs(G.value(z).determinant() - 1.0), 0.0, 1e-8);
    for (double x : interior_points(sys, 4)) {
      EXPECT_NEAR(std::abs(G.value(x, Side::above).determinant() - 1.0), 0.0, 1e-8);
      EXPECT_NEAR(std::abs(G.value(x, Side::below).determinant() - 1.0), 0.0, 1e-8);
    }
  }
}

TEST(Gamma, PlemeljJumpMatchesFg) {
  const GammaSolution G = build_gamma(two, spd2());
  for (double x : {-1.9, -1.5, -1.02}) {
    const Eigen::MatrixXcd jump = G.value(x, Side::above) - G.value(x, Side::below);
    const Eigen::MatrixXcd expected = -G.F_at(x) * G.kernel().g(x).transpose() / G.lambda();
    EXPECT_LT((jump - expected).norm(), 1e-8);
  }
}

TEST(Gamma, GammaFAndGGammaInverseHaveNoJump) {
  for (const auto& [sys, theta] : {std::pair{two, spd2()}, std::pair{three, spd3()}}) {
    const GammaSolution G = build_gamma(sys, theta);
    const NoJumpResidual r = verify_no_jump(G, interior_points(sys, 5));
    EXPECT_LT(r.gamma_f, 1e-8);
    EXPECT_LT(r.g_gamma_inv, 1e-8);
  }
}

TEST(Gamma, JumpConditionHolds) {
  for (const auto& [sys, theta] : {std::pair{two, spd2()}, std::pair{two, skew2()}, std::pair{three, spd3()}}) {
    const GammaSolution G = build_gamma(sys, theta);
    EXPECT_LT(verify_jump(G, interior_points(sys, 20 / static_cast<int>(sys.size()))), 1e-7);
  }
  const GammaSolution far = build_gamma(two, spd2(), 48, 1e6);
  EXPECT_LT(verify_jump(far, interior_points(two, 5)), 1e-9);
  const GammaSolution complex_lambda = build_gamma(three, spd3(), 64, cplx(0.5, 2.0));
  EXPECT_LT(verify_jump(complex_lambda, interior_points(three, 5)), 1e-7);
}

TEST(Gamma, ContinuityAcrossTheCut) {
  for (const auto& [sys, theta] : {std::pair{two, skew2()}, std::pair{three, spd3()}}) {
    const GammaSolution G = build_gamma(sys, theta);
    const IntegrableKernelData& kd = G.kernel();
    for (double x : interior_points(sys, 6)) {
      const auto j = static_cast<Eigen::Index>(sys.locate(x));
      const Eigen::MatrixXcd gp = G.value(x, Side::above);
      const Eigen::MatrixXcd gm = G.value(x, Side::below);
      EXPECT_LT(column_distance(gp, gm, j), 1e-8);
      EXPECT_LT((gp * kd.f(x) - gm * kd.f(x)).norm(), 1e-8);
      const Eigen::VectorXcd lp = gp.inverse().transpose() * kd.g(x);
      const Eigen::VectorXcd lm = gm.inverse().transpose() * kd.g(x);
      EXPECT_LT((lp - lm).norm(), 1e-8 * std::max(1.0, lp.norm()));
    }
  }
}

// Column m of Gamma as a Cauchy integral of the other columns:
//   Gamma_m(z) = e_m + 1/(pi i lambda) sum_{k != m} int_{I_k} theta_mk R_{k+} Gamma_k / (theta_mm R_m (s - z)) ds.
TEST(Gamma, ColumnCauchyRepresentation) {
  boost::math::quadrature::tanh_sinh<double> ts;
  for (const auto& [sys, theta] : {std::pair{two, skew2()}, std::pair{three, spd3()}}) {
    const GammaSolution G = build_gamma(sys, theta);
    const std::size_t n = sys.size();
    for (cplx z : {cplx(0.2, 0.5), cplx(-2.4, -0.3), cplx(3.5, 0.0)}) {
      const Eigen::MatrixXcd value = G.value(z);
      for (std::size_t m = 0; m < n; ++m) {
        Eigen::VectorXcd expected = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
        expected[static_cast<Eigen::Index>(m)] = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == m) continue;
          const Interval& iv = sys[k];
          for (std::size_t r = 0; r < n; ++r) {
            const auto integrand = [&](double s, bool imag_part) {
              s = std::clamp(s, std::nextafter(iv.a, iv.b), std::nextafter(iv.b, iv.a));
              const cplx rp(0.0, std::sqrt((s - iv.a) * (iv.b - s)));
              const cplx v = theta(m, k) * rp * G.own_column(k, s)[static_cast<Eigen::Index>(r)] /
                             (theta(m, m) * radical_off(sys[m], s) * (s - z));
              return imag_part ? v.imag() : v.real();
            };
            const double re = ts.integrate([&](double s) { return integrand(s, false); }, iv.a, iv.b);
            const double im = ts.integrate([&](double s) { return integrand(s, true); }, iv.a, iv.b);
            expected[static_cast<Eigen::Index>(r)] += cplx(re, im) / (cplx(0.0, std::numbers::pi) * G.lambda());
          }
        }
        EXPECT_LT((value.col(static_cast<Eigen::Index>(m)) - expected).norm(), 1e-7);
      }
    }
  }
}

TEST(Gamma, BoundedNearEndpoints) {
  const GammaSolution G = build_gamma(two, spd2());
  double previous = 0.0;
  for (int e = 2; e <= 10; e += 2) {
    const double x = 1.0 + std::pow(10.0, -e);
    const double norm = G.value(x, Side::above).norm();
    EXPECT_TRUE(std::isfinite(norm));
    EXPECT_LT(norm, 10.0);
    if (e > 2) {
      EXPECT_NEAR(norm, previous, 0.05);
    }
    previous = norm;
  }
}

TEST(Gamma, ContinuousInEndpoints) {
  const GammaSolution base = build_gamma(two, spd2());
  const cplx z(0.1, 0.6);
  const Eigen::MatrixXcd g0 = base.value(z);
  const double eps = 1e-4;
  const Eigen::MatrixXcd gp = build_gamma(make_interval_system({{-2.0, -1.0}, {1.0 + eps, 2.0}}), spd2()).value(z);
  const Eigen::MatrixXcd gm = build_gamma(make_interval_system({{-2.0, -1.0}, {1.0 - eps, 2.0}}), spd2()).value(z);
  EXPECT_LT((gp - g0).norm(), 100.0 * eps);
  EXPECT_GT((gp - g0).norm(), 0.0);
  // Central difference agrees with the one-sided ones, so the dependence is smooth.
  const Eigen::MatrixXcd central = (gp - gm) / (2.0 * eps);
  const Eigen::MatrixXcd forward = (gp - g0) / eps;
  EXPECT_LT((central - forward).norm(), 1e-2 * std::max(1.0, central.norm()));
}

TEST(Resolvent, SideIndependence) {
  for (const auto& [sys, theta] : {std::pair{two, skew2()}, std::pair{three, spd3()}}) {
    const GammaSolution G = build_gamma(sys, theta);
    const std::vector<double> pts = interior_points(sys, 3);
    for (double z : pts)
      for (double x : pts) {
        if (z == x) continue;
        EXPECT_NEAR(std::abs(resolvent_kernel(G, z, x, Side::above) - resolvent_kernel(G, z, x, Side::below)), 0.0,
                    1e-9);
      }
  }
}

// R(z, x) = K(z, x) + int_I R(z, y) K(y, x) dy, the kernel form of (Id + R)(Id - K) = Id.
TEST(Resolvent, SatisfiesResolventEquation) {
  const ThetaMatrix theta = spd3();
  const NystromSystem ns = assemble_K(three, theta, 64);
  const GammaSolution G(ns);
  const auto kernel = [&](double z, double x) -> cplx {
    const std::size_t j = three.locate(z);
    const std::size_t k = three.locate(x);
    const double w = std::sqrt((z - three[j].a) * (three[j].b - z));
    return w * ns.kernel(j, z, k, x);
  };
  const QuadratureGrid grid = make_grid(three, QuadratureFamily::chebyshev_second, 80);
  for (double z : {-2.71, -0.33, 1.87})
    for (double x : {-2.42, -0.61, 2.29}) {
      cplx integral = 0.0;
      for (std::size_t j = 0; j < three.size(); ++j) {
        if (three.locate(x) == j) continue;
        for (std::size_t b = 0; b < 80; ++b) {
          const IntervalPoint& p = grid.points[j][b];
          integral += grid.weights[j][b] * resolvent_kernel(G, z, p.x) * kernel(p.x, x) / p.weight();
        }
      }
      const cplx lhs = resolvent_kernel(G, z, x);
      EXPECT_NEAR(std::abs(lhs - kernel(z, x) - integral), 0.0, 1e-8 * std::max(1.0, std::abs(lhs)));
    }
}

TEST(Resolvent, MatchesNystromSolve) {
  const NystromSystem ns = assemble_K(three, spd3());
  const GammaSolution G(ns);
  const PiecewiseFunction nu = smooth_phi(three, 31);
  const PiecewiseFunction via_resolvent = apply_resolvent(G, nu);
  const PiecewiseFunction direct = nystrom_function(ns, nystrom_solve(ns, nystrom_rhs(ns, nu)), Field::real);
  EXPECT_LT(l2_distance(via_resolvent, direct) / l2_norm(direct), 1e-8);
}

TEST(InvertViaResolvent, TrivialCases) {
  const PiecewiseFunction phi = smooth_phi(two, 3);
  const PiecewiseFunction psi = forward_map(ThetaMatrix::identity(2), phi);
  const PiecewiseFunction nu = compute_nu(psi, compute_c(psi), ThetaMatrix::identity(2), -1.0);
  EXPECT_LT(l2_distance(invert_via_resolvent(ThetaMatrix::identity(2), psi), nu), 1e-14);
  const PiecewiseFunction zero = PiecewiseFunction::zero(two, 4, Weight::plain, Field::real);
  EXPECT_EQ(l2_norm(invert_via_resolvent(spd2(), zero)), 0.0);
}

TEST(InvertViaResolvent, AgreesWithDirectSolve) {
  for (const auto& [sys, theta] : {std::pair{two, spd2()}, std::pair{three, spd3()}, std::pair{two, skew2()}}) {
    const PiecewiseFunction phi = smooth_phi(sys, 17);
    const PiecewiseFunction psi = forward_map(theta, phi);
    const PiecewiseFunction a = invert_via_resolvent(theta, psi);
    const PiecewiseFunction b = solve_phi(theta, psi).phi;
    EXPECT_LT(l2_distance(a, b) / l2_norm(b), 1e-6);
    EXPECT_LT(l2_distance(a, phi) / l2_norm(phi), 1e-6);
  }
}

TEST(RangeCondition, DiagonalThetaPredictsZero) {
  const GammaSolution G = build_gamma(two, ThetaMatrix::identity(2), 32);
  const PiecewiseFunction nu = smooth_phi(two, 5);
  EXPECT_EQ(range_condition_N2(G, nu).norm(), 0.0);
  const J12Terms t = range_condition_J12(G, nu);
  EXPECT_EQ(t.j1.norm(), 0.0);
  EXPECT_EQ(t.j2.norm(), 0.0);
}

TEST(RangeCondition, N2PredictsShiftOfForwardData) {
  for (const auto& [sys, theta] : {std::pair{two, spd2()}, std::pair{three, spd3()}}) {
    const GammaSolution G = build_gamma(sys, theta);
    for (std::uint64_t seed : {7u, 8u, 9u}) {
      const PiecewiseFunction psi = forward_map(theta, smooth_phi(sys, seed));
      const Eigen::VectorXcd c = compute_c(psi);
      const PiecewiseFunction nu = compute_nu(psi, c, theta, -1.0);
      const Eigen::VectorXcd predicted = range_condition_N2(G, nu);
      EXPECT_LT((predicted - c).norm(), 1e-6 * std::max(1.0, c.norm()));
      EXPECT_LT(predicted.imag().norm(), 1e-8);
    }
  }
  EXPECT_THROW((void)range_condition_N2(build_gamma(two, skew2(), 32), smooth_phi(two, 1)), Error);
}

TEST(RangeCondition, TwoIntervalFormMatchesN2) {
  const GammaSolution G = build_gamma(two, spd2());
  const PiecewiseFunction psi = forward_map(spd2(), smooth_phi(two, 12));
  const PiecewiseFunction nu = compute_nu(psi, compute_c(psi), spd2(), -1.0);
  const Eigen::VectorXcd a = range_condition_N2(G, nu);
  const Eigen::VectorXcd b = range_condition_two_intervals(G, nu);
  EXPECT_LT((a - b).norm(), 1e-12 * std::max(1.0, a.norm()));
}

TEST(RangeCondition, J12AgreesWithN2AndHandlesNonSymmetric) {
  {
    const GammaSolution G = build_gamma(three, spd3());
    const PiecewiseFunction psi = forward_map(spd3(), smooth_phi(three, 21));
    const PiecewiseFunction nu = compute_nu(psi, compute_c(psi), spd3(), -1.0);
    EXPECT_LT((range_condition_J12(G, nu).total() - range_condition_N2(G, nu)).norm(), 1e-6);
  }
  const GammaSolution G = build_gamma(two, skew2());
  const PiecewiseFunction psi = forward_map(skew2(), smooth_phi(two, 22));
  const Eigen::VectorXcd c = compute_c(psi);
  const PiecewiseFunction nu = compute_nu(psi, c, skew2(), -1.0);
  EXPECT_LT((range_condition_J12(G, nu).total() - c).norm(), 1e-5 * std::max(1.0, c.norm()));
}

TEST(RangeCondition, ResidualFormsVanishOnRangeData) {
  const ThetaMatrix theta = spd3();
  const GammaSolution G = build_gamma(three, theta);
  const PiecewiseFunction phi = smooth_phi(three, 41);
  const PiecewiseFunction psi = forward_map(theta, phi);
  const double scale = l2_norm(psi);
  EXPECT_LT(range_check_L1_variant(G, psi).norm(), 1e-6 * scale);

  // Data off the range: the shift vector of the direct moments no longer matches.
  const PiecewiseFunction bumped = psi + project(three, 16, Weight::plain, Field::real,
                                                 [](std::size_t, double x) { return 0.05 * x * x; });
  EXPECT_GT(range_check_L1_variant(G, bumped).norm(), 1e-3 * scale);

  const PiecewiseFunction zero = PiecewiseFunction::zero(three, 4, Weight::plain, Field::real);
  EXPECT_EQ(range_check_L1_variant(G, zero).norm(), 0.0);
  EXPECT_EQ(range_check_zero_shift(G, zero).norm(), 0.0);

  // Range data with vanishing shift vector: correct phi by multiples of w_k,
  // whose images carry independent shift vectors.
  std::vector<PiecewiseFunction> basis;
  Eigen::MatrixXcd shifts(3, 3);
  for (std::size_t k = 0; k < 3; ++k) {
    std::vector<Piece> pieces(3, Piece{Weight::sqrt_vanishing, cheb::Coeffs::Zero(1)});
    pieces[k].coeffs[0] = 1.0;
    basis.emplace_back(three, std::move(pieces), Field::real);
    shifts.col(static_cast<Eigen::Index>(k)) = compute_c(forward_map(theta, basis.back()));
  }
  const Eigen::VectorXcd a = shifts.partialPivLu().solve(-compute_c(psi));
  PiecewiseFunction corrected = phi;
  for (std::size_t k = 0; k < 3; ++k) corrected = corrected + basis[k].scaled(a[static_cast<Eigen::Index>(k)].real());
  const PiecewiseFunction psi0 = forward_map(theta, corrected);
  ASSERT_LT(compute_c(psi0).norm(), 1e-10);
  EXPECT_LT(range_check_zero_shift(G, psi0).norm(), 1e-6 * l2_norm(psi0));
  EXPECT_THROW((void)range_check_zero_shift(G, psi), Error);
}
