#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <gtest/gtest.h>

#include "mifht/fht.hpp"
#include "mifht/solver.hpp"
#include "mifht/theta.hpp"

using namespace mifht;

namespace {

const IntervalSystem two = make_interval_system({{-2.0, -1.0}, {1.0, 2.0}});
const IntervalSystem three = make_interval_system({{-3.0, -2.0}, {-1.0, 0.0}, {1.0, 3.0}});

ThetaMatrix theta2(double d, double o) { return ThetaMatrix((Eigen::Matrix2d() << d, o, o, d).finished()); }

PiecewiseFunction smooth_phi(const IntervalSystem& sys, std::uint64_t seed, std::size_t modes = 8) {
  std::mt19937_64 rng(seed);
  return random_sqrt_vanishing(sys, modes, rng);
}

// (1/pi) int_{I_k} phi_k(y)/(y - x) dy for x off I_k, by tanh-sinh.
double cross_reference(const PiecewiseFunction& phi, std::size_t k, double x) {
  boost::math::quadrature::tanh_sinh<double> ts;
  const Interval& iv = phi.system()[k];
  return ts.integrate(
             [&](double y) {
               y = std::clamp(y, std::nextafter(iv.a, iv.b), std::nextafter(iv.b, iv.a));
               return phi.value(k, y).real() / (y - x);
             },
             iv.a, iv.b) /
         std::numbers::pi;
}

}  // namespace

TEST(ThetaMatrix, Classification) {
  EXPECT_EQ(theta2(1.0, 0.5).classification(), ThetaClass::spd_symmetric);
  EXPECT_EQ(ThetaMatrix::uniform(2).classification(), ThetaClass::uniform);
  EXPECT_EQ(ThetaMatrix::identity(1).classification(), ThetaClass::spd_symmetric);
  EXPECT_EQ(theta2(1.0, 2.0).classification(), ThetaClass::symmetric_invertible_diagonal);
  EXPECT_EQ(ThetaMatrix((Eigen::Matrix2d() << 1, 0.3, 0.7, 1).finished()).classification(),
            ThetaClass::invertible_diagonal);
  const ThetaMatrix degenerate((Eigen::Matrix2d() << 0, 1, 1, 1).finished());
  EXPECT_EQ(degenerate.classification(), ThetaClass::degenerate_diagonal);
  EXPECT_THROW(degenerate.require_invertible_diagonal(), Error);
  const ThetaMatrix t = theta2(2.0, 1.0);
  EXPECT_EQ(t.diagonal_part() + t.off_diagonal_part(), t.entries());
}

TEST(ForwardMap, ReducesToSingleIntervalTransform) {
  const auto sys = make_interval_system({{2.0, 5.0}});
  const PiecewiseFunction phi = smooth_phi(sys, 1);
  const PiecewiseFunction psi = forward_map(ThetaMatrix::identity(1), phi);
  for (double x : {2.1, 3.3, 4.9}) EXPECT_NEAR(std::abs(psi.value(0, x) - fht_forward(phi, 0, x)), 0.0, 1e-13);
  EXPECT_EQ(l2_norm(forward_map(ThetaMatrix::identity(1), PiecewiseFunction::zero(sys, 4, Weight::sqrt_vanishing))),
            0.0);
}

TEST(ForwardMap, DiagonalThetaDecouples) {
  const PiecewiseFunction phi = smooth_phi(two, 2);
  const ThetaMatrix diag((Eigen::Matrix2d() << 2.0, 0.0, 0.0, -3.0).finished());
  const PiecewiseFunction psi = forward_map(diag, phi);
  for (std::size_t m = 0; m < 2; ++m)
    for (double t : {0.1, 0.5, 0.9}) {
      const double x = two[m].a + t * two[m].length();
      EXPECT_NEAR(std::abs(psi.value(m, x) - diag(m, m) * fht_forward(phi, m, x)), 0.0, 1e-13);
    }
}

TEST(ForwardMap, CrossTermsMatchDirectQuadrature) {
  const PiecewiseFunction phi = smooth_phi(three, 3);
  const ThetaMatrix theta((Eigen::Matrix3d() << 1.0, 0.5, 0.25, 0.5, 1.0, 0.5, 0.25, 0.5, 1.0).finished());
  const PiecewiseFunction psi = forward_map(theta, phi);
  for (std::size_t m = 0; m < 3; ++m)
    for (double t : {0.05, 0.5, 0.95}) {
      const double x = three[m].a + t * three[m].length();
      double expect = theta(m, m) * fht_forward(phi, m, x).real();
      for (std::size_t k = 0; k < 3; ++k)
        if (k != m) expect += theta(m, k) * cross_reference(phi, k, x);
      EXPECT_NEAR(psi.value(m, x).real(), expect, 1e-11);
    }
}

TEST(ComputeC, ExampleValues) {
  const auto ref = make_interval_system({{-1.0, 1.0}});
  const auto shifted = make_interval_system({{0.0, 2.0}});
  const auto lin = [](std::size_t, double x) { return x; };
  EXPECT_NEAR(std::abs(compute_c(project(ref, 8, Weight::plain, Field::real, lin))[0]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(compute_c(project(shifted, 8, Weight::plain, Field::real, lin))[0] - 1.0), 0.0, 1e-14);
  const PiecewiseFunction constant =
      project(two, 4, Weight::plain, Field::real, [](std::size_t j, double) { return j == 0 ? 3.0 : -1.5; });
  const Eigen::VectorXcd c = compute_c(constant);
  EXPECT_NEAR(std::abs(c[0] - 3.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(c[1] + 1.5), 0.0, 1e-15);
  // psi = c exactly gives nu = 0.
  EXPECT_NEAR(l2_norm(compute_nu(constant, c, theta2(1.0, 0.5))), 0.0, 1e-15);
}

TEST(ComputeNu, ScaledSingleIntervalInversion) {
  const auto ref = make_interval_system({{-1.0, 1.0}});
  const PiecewiseFunction psi = project(ref, 8, Weight::plain, Field::real, [](std::size_t, double x) { return x; });
  const ThetaMatrix theta((Eigen::Matrix<double, 1, 1>() << 2.0).finished());
  const PiecewiseFunction nu = compute_nu(psi, compute_c(psi), theta);
  for (double x : {-0.7, 0.0, 0.4}) EXPECT_NEAR(nu.value(0, x).real(), -std::sqrt(1.0 - x * x) / 2.0, 1e-15);
  // Round trip psi_j - c_j = theta_jj H f_j.
  const PiecewiseFunction f = smooth_phi(two, 4);
  const ThetaMatrix diag((Eigen::Matrix2d() << 2.0, 0.0, 0.0, 0.5).finished());
  const PiecewiseFunction g = forward_map(diag, f);
  EXPECT_LE(l2_distance(compute_nu(g, compute_c(g), diag), f), 1e-12 * l2_norm(f));
  // A wrong shift is rejected.
  Eigen::VectorXcd bad = compute_c(g);
  bad[0] += 1.0;
  EXPECT_THROW((void)compute_nu(g, bad, diag), Error);
  EXPECT_THROW((void)compute_nu(g, compute_c(g), ThetaMatrix((Eigen::Matrix2d() << 0, 1, 1, 1).finished())), Error);
}

TEST(AssembleK, StructureAndLimits) {
  const NystromSystem diag = assemble_K(two, ThetaMatrix::identity(2), 16);
  EXPECT_EQ((diag.matrix - Eigen::MatrixXcd::Identity(32, 32)).norm(), 0.0);
  EXPECT_THROW((void)assemble_K(two, theta2(1.0, 0.5), 16, 0.0), Error);

  const NystromSystem ns = assemble_K(two, theta2(1.0, 0.5), 16);
  EXPECT_TRUE(ns.matrix.allFinite());
  EXPECT_EQ(ns.matrix.imag().norm(), 0.0);
  // Diagonal blocks are the identity, off-diagonal blocks carry the kernel.
  EXPECT_EQ((ns.matrix.block(0, 0, 16, 16) - Eigen::MatrixXcd::Identity(16, 16)).norm(), 0.0);
  EXPECT_EQ((ns.matrix.block(0, 16, 16, 16).array() == cplx(0.0)).count(), 0);
  // Entries against the kernel written with the upper boundary value:
  // K(z,y) = theta_jk R_{j+}(z) / (theta_jj R_j(y) pi i (y - z)).
  const ThetaMatrix t = theta2(1.0, 0.5);
  for (std::size_t a : {0u, 7u, 15u})
    for (std::size_t b : {0u, 9u, 15u}) {
      const double z = ns.points[0][a].x;
      const double y = ns.points[1][b].x;
      const cplx rplus = radical_eval(two, 0, z, Side::above);
      const cplx k = t(0, 1) * rplus / (t(0, 0) * radical_eval(two, 0, y) * std::numbers::pi * cplx(0, 1) * (y - z));
      const double h2 = two[1].half_length() * two[1].half_length();
      const cplx expect = -k / ns.points[0][a].weight() * h2 * ns.weights[b];
      EXPECT_NEAR(std::abs(ns.matrix(ns.index(0, a), ns.index(1, b)) - expect), 0.0, 1e-14);
    }
  // Large lambda: matrix tends to the identity.
  const NystromSystem big = assemble_K(two, theta2(1.0, 0.5), 16, 1e8);
  EXPECT_LE((big.matrix - Eigen::MatrixXcd::Identity(32, 32)).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(SolvePhi, RoundTripSpdTwoIntervals) {
  const ThetaMatrix theta = theta2(2.0, 1.0);
  const PiecewiseFunction phi0 = smooth_phi(two, 5);
  const PiecewiseFunction psi = forward_map(theta, phi0);
  const SolveResult res = solve_phi(theta, psi);
  EXPECT_LE(l2_distance(res.phi, phi0), 1e-6 * l2_norm(phi0));
  EXPECT_LE(res.diagnostics.residual, 1e-12);
  EXPECT_GT(res.diagnostics.sigma_min, 1e-6);
  EXPECT_LE(res.diagnostics.range2.norm(), 1e-6);
  EXPECT_TRUE(res.diagnostics.warnings.empty());
  EXPECT_LE(imag_l2_norm(res.phi), 0.0);
}

TEST(SolvePhi, ConsistencyChain) {
  // forward_map(phi) reproduces psi, and the T_0 coefficient of the coupled
  // part of the data equals c.
  const ThetaMatrix theta((Eigen::Matrix3d() << 1.0, 0.5, 0.5, 0.5, 1.0, 0.5, 0.5, 0.5, 1.0).finished());
  const PiecewiseFunction phi0 = smooth_phi(three, 6);
  const PiecewiseFunction psi = forward_map(theta, phi0);
  const SolveResult res = solve_phi(theta, psi);
  EXPECT_LE(l2_distance(forward_map(theta, res.phi), psi), 1e-6 * l2_norm(psi));
  const ThetaMatrix off(theta.off_diagonal_part());
  const Eigen::VectorXcd c_off = compute_c(forward_map(off, res.phi));
  EXPECT_LE((c_off - res.c).norm(), 1e-6);
  EXPECT_LE(res.diagnostics.range2.norm(), 1e-6);
}

TEST(SolvePhi, DiagonalThetaMatchesSingleIntervalInversion) {
  const ThetaMatrix diag((Eigen::Matrix2d() << 2.0, 0.0, 0.0, 3.0).finished());
  const PiecewiseFunction psi =
      project(two, 24, Weight::plain, Field::real, [](std::size_t j, double x) { return std::sin(x + double(j)); });
  const SolveResult res = solve_phi(diag, psi);
  EXPECT_LE(l2_distance(res.phi, compute_nu(psi, compute_c(psi), diag)), 1e-12);
  EXPECT_EQ(res.diagnostics.sigma_min, 1.0);
}

TEST(SolvePhi, ZeroDataAndNonSpdWarning) {
  const SolveResult zero = solve_phi(theta2(1.0, 0.5), PiecewiseFunction::zero(two, 8, Weight::plain));
  EXPECT_EQ(l2_norm(zero.phi), 0.0);
  EXPECT_EQ(zero.c.norm(), 0.0);
  const ThetaMatrix nonsym((Eigen::Matrix2d() << 1.0, 0.3, 0.7, 1.0).finished());
  const PiecewiseFunction phi0 = smooth_phi(two, 7);
  const SolveResult res = solve_phi(nonsym, forward_map(nonsym, phi0));
  EXPECT_FALSE(res.diagnostics.warnings.empty());
  EXPECT_LE(l2_distance(res.phi, phi0), 1e-6 * l2_norm(phi0));
  SolveOptions strict;
  strict.singular_threshold = 2.0;
  EXPECT_THROW((void)solve_phi(theta2(1.0, 0.5), forward_map(theta2(1.0, 0.5), phi0), strict), Error);
}

TEST(SolvePhi, GridConvergence) {
  // Closely spaced intervals make the coupling strong enough to resolve.
  const auto sys = make_interval_system({{-1.0, -0.1}, {0.1, 1.0}});
  const ThetaMatrix theta = theta2(1.0, 0.5);
  const PiecewiseFunction phi0 = smooth_phi(sys, 8, 6);
  const PiecewiseFunction psi = forward_map(theta, phi0);
  double previous = 0.0;
  for (std::size_t m : {6u, 12u, 24u, 48u}) {
    SolveOptions opt;
    opt.nystrom_nodes = m;
    const double err = l2_distance(solve_phi(theta, psi, opt).phi, phi0) / l2_norm(phi0);
    if (previous > 1e-9) {
      EXPECT_LE(err, previous / 10.0) << "M=" << m;
    }
    previous = err;
  }
}

TEST(ResidualRange2, TrivialCases) {
  const auto one = make_interval_system({{-1.0, 1.0}});
  Eigen::VectorXcd c(1);
  c << 0.7;
  EXPECT_NEAR(std::abs(residual_range2(ThetaMatrix::identity(1), smooth_phi(one, 1), c)[0] + 0.7), 0.0, 1e-15);
  EXPECT_EQ(residual_range2(theta2(1.0, 0.5), PiecewiseFunction::zero(two, 4, Weight::sqrt_vanishing),
                            Eigen::VectorXcd::Zero(2))
                .norm(),
            0.0);
}

TEST(BilinearForm, BesselSequenceMatchesLibrary) {
  std::vector<double> seq;
  for (double x : {1e-3, 0.7, 5.0, 37.5, 199.0}) {
    detail::bessel_j_sequence(x, 60, seq);
    for (int k = 0; k <= 60; k += 7)
      EXPECT_NEAR(seq[k], boost::math::cyl_bessel_j(k, x), 1e-13 + 1e-12 * std::abs(seq[k])) << "x=" << x << " k=" << k;
  }
}

TEST(BilinearForm, FourierTransformMatchesDirectQuadrature) {
  const PiecewiseFunction f = smooth_phi(make_interval_system({{2.0, 5.0}}), 9);
  const std::vector<double> xi = {-7.3, -0.2, 0.05, 1.0, 12.0};
  const std::vector<cplx> ft = detail::fourier_piece(f.piece(0), f.system()[0], xi);
  boost::math::quadrature::tanh_sinh<double> ts;
  for (std::size_t i = 0; i < xi.size(); ++i) {
    auto part = [&](bool imag) {
      return ts.integrate(
          [&](double x) {
            x = std::clamp(x, std::nextafter(2.0, 5.0), std::nextafter(5.0, 2.0));
            const cplx v = f.value(0, x) * std::polar(1.0, x * xi[i]);
            return imag ? v.imag() : v.real();
          },
          2.0, 5.0);
    };
    EXPECT_NEAR(std::abs(ft[i] - cplx(part(false), part(true))), 0.0, 1e-11);
  }
}

TEST(BilinearForm, ZeroSymmetryPositivity) {
  const ThetaMatrix theta = theta2(2.0, 1.0);
  const PiecewiseFunction f = smooth_phi(two, 10);
  const PiecewiseFunction g = smooth_phi(two, 11);
  EXPECT_EQ(bilinear_form_J(theta, PiecewiseFunction::zero(two, 4, Weight::sqrt_vanishing), g), 0.0);
  const double fg = bilinear_form_J(theta, f, g);
  const double gf = bilinear_form_J(theta, g, f);
  EXPECT_NEAR(fg, gf, 1e-8 * std::abs(fg) + 1e-14);
  EXPECT_GT(bilinear_form_J(theta, f, f), 0.0);
  EXPECT_THROW((void)bilinear_form_J(theta, PiecewiseFunction::zero(two, 4, Weight::plain), g), Error);
}

TEST(BilinearForm, DominatesIdentityFormScaledByMinimalEigenvalue) {
  const ThetaMatrix theta((Eigen::Matrix3d() << 1.0, 0.5, 0.5, 0.5, 1.0, 0.5, 0.5, 0.5, 1.0).finished());
  const double lmin = theta.min_symmetric_eigenvalue();
  std::mt19937_64 rng(3);
  for (int s = 0; s < 5; ++s) {
    const PiecewiseFunction f = random_sqrt_vanishing(three, 6, rng);
    EXPECT_GE(bilinear_form_J(theta, f, f), lmin * bilinear_form_J(ThetaMatrix::identity(3), f, f) * (1.0 - 1e-12));
  }
}

TEST(Injectivity, ReportValues) {
  const InjectivityReport diag = injectivity_report(ThetaMatrix::identity(2), two, 24, 2);
  EXPECT_NEAR(diag.sigma_min, 1.0, 1e-14);
  EXPECT_GT(diag.min_j_ratio, 0.0);
  const InjectivityReport spd = injectivity_report(theta2(2.0, 1.0), two, 32, 2);
  EXPECT_GT(spd.sigma_min, 0.0);
  EXPECT_TRUE(spd.caveats.empty());
  const InjectivityReport uni = injectivity_report(ThetaMatrix::uniform(2), two, 32, 2);
  EXPECT_FALSE(uni.caveats.empty());
}
