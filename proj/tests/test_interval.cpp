#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "mifht/mifht.hpp"  // umbrella must compile on its own
#include "mifht/chebyshev.hpp"
#include "mifht/function.hpp"
#include "mifht/interval.hpp"
#include "mifht/pv_oracle.hpp"
#include "mifht/quadrature.hpp"

using namespace mifht;

namespace {

// Reference Chebyshev values from the trigonometric definitions.
double t_trig(int k, double s) { return std::cos(k * std::acos(s)); }
double u_trig(int k, double s) {
  const double a = std::acos(s);
  return std::sin((k + 1) * a) / std::sin(a);
}

}  // namespace

TEST(IntervalSystem, AcceptsSortedDisjointIntervals) {
  EXPECT_EQ(make_interval_system({{-1.0, 1.0}}).size(), 1u);
  EXPECT_EQ(make_interval_system({{-2.0, -1.0}, {1.0, 2.0}}).size(), 2u);
}

TEST(IntervalSystem, RejectsOverlapReversalAndNonFinite) {
  auto kind_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::schema;
  };
  EXPECT_EQ(kind_of([] { (void)make_interval_system({{-1.0, 1.0}, {0.0, 2.0}}); }), ErrorKind::overlap);
  EXPECT_EQ(kind_of([] { (void)make_interval_system({{1.0, -1.0}}); }), ErrorKind::overlap);
  EXPECT_EQ(kind_of([] { (void)make_interval_system({{-1.0, 1.0}, {1.0, 2.0}}); }), ErrorKind::overlap);
  EXPECT_EQ(kind_of([] { (void)make_interval_system({{0.0, std::numeric_limits<double>::infinity()}}); }),
            ErrorKind::non_finite);
  EXPECT_EQ(kind_of([] { (void)make_interval_system({{std::nan(""), 1.0}}); }), ErrorKind::non_finite);
  EXPECT_EQ(kind_of([] { (void)make_interval_system(std::span<const std::pair<double, double>>{}); }),
            ErrorKind::overlap);
}

TEST(Radical, BranchValuesOnSingleInterval) {
  const auto sys = make_interval_system({{-1.0, 1.0}});
  EXPECT_NEAR(std::abs(radical_eval(sys, 0, 2.0) - std::sqrt(3.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(radical_eval(sys, 0, 0.0, Side::above) - cplx(0.0, 1.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(radical_eval(sys, 0, -2.0) + std::sqrt(3.0)), 0.0, 1e-15);
  EXPECT_THROW((void)radical_eval(sys, 1, 2.0), Error);
  EXPECT_THROW((void)radical_eval(sys, 0, 0.5), Error);
}

TEST(Radical, BoundaryValuesAreConjugateAndOpposite) {
  const auto sys = make_interval_system({{-3.0, -2.0}, {-1.0, 0.0}, {1.0, 3.0}});
  std::mt19937 rng(7);
  for (std::size_t j = 0; j < sys.size(); ++j) {
    std::uniform_real_distribution<double> u(sys[j].a, sys[j].b);
    for (int i = 0; i < 50; ++i) {
      const double x = u(rng);
      const cplx up = radical_eval(sys, j, x, Side::above);
      const cplx dn = radical_eval(sys, j, x, Side::below);
      EXPECT_EQ(up, std::conj(dn));
      EXPECT_NEAR(std::abs(up / dn + 1.0), 0.0, 1e-15);
      // Limit from the upper half plane.
      const cplx limit = radical_eval(sys, j, cplx(x, 1e-12));
      EXPECT_NEAR(std::abs(limit - up), 0.0, 1e-5);
    }
  }
}

TEST(Radical, BehavesLikeZAtInfinity) {
  const auto sys = make_interval_system({{-2.0, -1.0}, {1.0, 2.0}});
  const double big = 10.0 * sys.scale();
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (std::size_t j = 0; j < sys.size(); ++j)
    for (double r : {big, 10.0 * big, 100.0 * big})
      for (int i = 0; i < 20; ++i) {
        const cplx z = std::polar(r, angle(rng));
        const double dev = std::abs(radical_eval(sys, j, z) / z - 1.0);
        // R/z - 1 = -(a+b)/(2z) + O(z^-2), bounded by (|a|+|b|)/|z| for large |z|.
        EXPECT_LE(dev, (std::abs(sys[j].a) + std::abs(sys[j].b)) / r);
      }
}

TEST(MultiRadical, HandValuesAndSymmetry) {
  const auto one = make_interval_system({{-1.0, 1.0}});
  EXPECT_NEAR(multi_radical_sqrt(one, 0.0, 0.0), -1.0, 1e-15);
  EXPECT_NEAR(multi_radical_sqrt(one, 0.5, -0.5), -0.75, 1e-15);
  EXPECT_THROW((void)multi_radical_sqrt(one, 1.5, 0.0), Error);

  const auto sys = make_interval_system({{-3.0, -2.0}, {-1.0, 0.0}, {1.0, 3.0}});
  std::mt19937 rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, 2);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int i = 0; i < 100; ++i) {
    const std::size_t j = pick(rng), k = pick(rng);
    const double x = sys[j].a + u(rng) * sys[j].length();
    const double z = sys[k].a + u(rng) * sys[k].length();
    EXPECT_EQ(multi_radical_sqrt(sys, x, z), multi_radical_sqrt(sys, z, x));
    // Direct product, magnitude only.
    double prod = 1.0;
    for (const Interval& iv : sys.intervals()) prod *= (x - iv.a) * (x - iv.b) * (z - iv.a) * (z - iv.b);
    EXPECT_NEAR(std::abs(multi_radical_sqrt(sys, x, z)), std::sqrt(std::abs(prod)), 1e-12 * std::sqrt(std::abs(prod)));
  }
  // Coincidence: -|beta_od(x) beta_ev(x)|.
  const double x = -0.3;
  double bod = 1.0, bev = 1.0;
  for (const Interval& iv : sys.intervals()) {
    bod *= x - iv.a;
    bev *= x - iv.b;
  }
  EXPECT_NEAR(multi_radical_sqrt(sys, x, x), -std::abs(bod * bev), 1e-14);
}

TEST(Quadrature, RulesIntegratePolynomialsExactly) {
  for (std::size_t n : {1u, 2u, 5u, 16u, 64u}) {
    const ReferenceRule gl = gauss_legendre(n);
    for (std::size_t p = 0; p < 2 * n; ++p) {
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) sum += gl.weights[i] * std::pow(gl.nodes[i], static_cast<double>(p));
      const double exact = p % 2 == 0 ? 2.0 / static_cast<double>(p + 1) : 0.0;
      EXPECT_NEAR(sum, exact, 1e-13) << "n=" << n << " p=" << p;
    }
  }
  // First kind: int T_k / sqrt(1-s^2) = pi delta_k0; second kind: int U_k sqrt(1-s^2) = pi/2 delta_k0.
  const ReferenceRule c1 = gauss_chebyshev_first(12);
  const ReferenceRule c2 = gauss_chebyshev_second(12);
  for (int k = 0; k < 20; ++k) {
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < 12; ++i) {
      s1 += c1.weights[i] * t_trig(k, c1.nodes[i]);
      s2 += c2.weights[i] * u_trig(k, c2.nodes[i]);
    }
    EXPECT_NEAR(s1, k == 0 ? std::numbers::pi : 0.0, 1e-13);
    EXPECT_NEAR(s2, k == 0 ? std::numbers::pi / 2.0 : 0.0, 1e-13);
  }
}

TEST(Quadrature, GridsHavePositiveWeightsAndInteriorNodes) {
  const auto sys = make_interval_system({{-2.0, -1.0}, {1.0, 2.5}});
  for (auto family : {QuadratureFamily::chebyshev_first, QuadratureFamily::chebyshev_second,
                      QuadratureFamily::legendre}) {
    const QuadratureGrid grid = make_grid(sys, family, 33);
    EXPECT_EQ(grid.total_size(), 66u);
    for (std::size_t j = 0; j < sys.size(); ++j)
      for (std::size_t i = 0; i < 33; ++i) {
        const IntervalPoint& p = grid.points[j][i];
        EXPECT_GT(grid.weights[j][i], 0.0);
        EXPECT_TRUE(sys[j].contains_open(p.x));
        EXPECT_NEAR(p.dl, p.x - sys[j].a, 1e-14);
        EXPECT_NEAR(p.dr, sys[j].b - p.x, 1e-14);
      }
  }
  // Mapped second-kind weights integrate sqrt((x-a)(b-x)) * 1 to pi h^2 / 2.
  const QuadratureGrid g2 = make_grid(sys, QuadratureFamily::chebyshev_second, 9);
  for (std::size_t j = 0; j < sys.size(); ++j) {
    double s = 0.0;
    for (double w : g2.weights[j]) s += w;
    const double h = sys[j].half_length();
    EXPECT_NEAR(s, 0.5 * std::numbers::pi * h * h, 1e-14);
  }
}

TEST(Chebyshev, ClenshawMatchesTrigonometricDefinitions) {
  std::mt19937 rng(5);
  std::normal_distribution<double> nd;
  cheb::Coeffs c(17);
  for (auto& v : c) v = cplx(nd(rng), nd(rng));
  for (double s : {-0.99, -0.4, 0.0, 0.31, 0.97}) {
    cplx rt = 0.0, ru = 0.0;
    for (int k = 0; k < 17; ++k) {
      rt += c[k] * t_trig(k, s);
      ru += c[k] * u_trig(k, s);
    }
    EXPECT_NEAR(std::abs(cheb::eval_t(c, s) - rt), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(cheb::eval_u(c, s) - ru), 0.0, 1e-12);
  }
}

TEST(Chebyshev, BasisConversionsAreMutualInverses) {
  std::mt19937 rng(9);
  std::normal_distribution<double> nd;
  for (int n : {1, 2, 3, 10, 33}) {
    cheb::Coeffs c(n);
    for (auto& v : c) v = cplx(nd(rng), nd(rng));
    EXPECT_LE((cheb::u_to_t(cheb::t_to_u(c)) - c).norm(), 1e-13 * c.norm());
    EXPECT_LE((cheb::t_to_u(cheb::u_to_t(c)) - c).norm(), 1e-12 * c.norm());
    const cheb::Coeffs d = cheb::t_to_u(c);
    for (double s : {-0.7, 0.2, 0.9}) EXPECT_NEAR(std::abs(cheb::eval_t(c, s) - cheb::eval_u(d, s)), 0.0, 1e-12);
  }
}

TEST(Chebyshev, SecondKindInterpolationRecoversCoefficients) {
  std::mt19937 rng(12);
  std::normal_distribution<double> nd;
  const std::size_t n = 24;
  cheb::Coeffs d(n);
  for (auto& v : d) v = nd(rng);
  std::vector<cplx> vals(n);
  for (std::size_t i = 0; i < n; ++i)
    vals[i] = cheb::eval_u(d, std::cos(std::numbers::pi * static_cast<double>(i + 1) / static_cast<double>(n + 1)));
  EXPECT_LE((cheb::interpolate_second_kind(vals) - d).norm(), 1e-12 * d.norm());
}

TEST(ChebProject, ExampleCoefficients) {
  const Interval ref{-1.0, 1.0};
  const cheb::Coeffs one = cheb_project([](double) { return 1.0; }, ref, 8, Weight::plain);
  const cheb::Coeffs lin = cheb_project([](double x) { return x; }, ref, 8, Weight::plain);
  const cheb::Coeffs sq = cheb_project([](double x) { return std::sqrt(1.0 - x * x); }, ref, 8, Weight::sqrt_vanishing);
  for (Eigen::Index k = 0; k < 8; ++k) {
    EXPECT_NEAR(std::abs(one[k] - (k == 0 ? 1.0 : 0.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(lin[k] - (k == 1 ? 1.0 : 0.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(sq[k] - (k == 0 ? 1.0 : 0.0)), 0.0, 1e-14);
  }
  EXPECT_THROW((void)cheb_project([](double) { return 1.0; }, ref, 1, Weight::plain), Error);
}

TEST(ChebProject, PolynomialRoundTripOnMappedInterval) {
  const Interval iv{2.0, 5.0};
  auto poly = [](double x) { return 1.0 - 0.5 * x + 0.25 * x * x * x - 0.01 * std::pow(x, 6); };
  const cheb::Coeffs c = cheb_project(poly, iv, 12, Weight::plain);
  for (double x : {2.01, 2.7, 3.5, 4.99}) {
    const cplx v = cheb::eval_t(c, iv.to_reference(x));
    EXPECT_NEAR(std::abs(v - poly(x)), 0.0, 1e-12 * std::abs(poly(x)) + 1e-12);
  }
}

TEST(PiecewiseFunction, NormsAndRealness) {
  const auto sys = make_interval_system({{-2.0, -1.0}, {1.0, 3.0}});
  // f = sqrt((x-a)(b-x)) on each interval: ||f||^2 = sum (4/3) h^3.
  const PiecewiseFunction f = project_points(sys, 16, Weight::sqrt_vanishing, Field::real,
                                             [](const IntervalPoint& p) { return p.weight(); });
  double expect = 0.0;
  for (const Interval& iv : sys.intervals()) expect += 4.0 / 3.0 * std::pow(iv.half_length(), 3);
  EXPECT_NEAR(l2_norm(f), std::sqrt(expect), 1e-13);
  EXPECT_NEAR(std::abs(integrate_piece(f, 1) - 0.5 * std::numbers::pi), 0.0, 1e-14);
  // Real tag clears imaginary parts.
  const PiecewiseFunction g = project(sys, 8, Weight::plain, Field::real,
                                      [](std::size_t, double x) { return cplx(x, 5.0); });
  EXPECT_EQ(imag_l2_norm(g), 0.0);
  EXPECT_NEAR(l2_distance(f, f.scaled(2.0)), l2_norm(f), 1e-13);
}

TEST(PvOracle, ClosedFormValues) {
  const Interval ref{-1.0, 1.0};
  EXPECT_NEAR(pv_oracle([](double t) { return std::sqrt(1.0 - t * t); }, ref, 0.3), -0.3, 1e-10);
  EXPECT_EQ(pv_oracle([](double) { return 0.0; }, ref, 0.1), 0.0);
  EXPECT_NEAR(pv_oracle([](double) { return 1.0; }, ref, 0.5), std::log(0.5 / 1.5) / std::numbers::pi, 1e-10);
  EXPECT_NEAR(std::log(0.5 / 1.5) / std::numbers::pi, -0.349699, 1e-6);
  EXPECT_THROW((void)pv_oracle([](double) { return 1.0; }, ref, 1.5), Error);
}
