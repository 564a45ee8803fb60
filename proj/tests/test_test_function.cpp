#include <horofourier/detail/jet.hpp>
#include <horofourier/test_function.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace horofourier;
using horofourier::detail::Jet;

namespace {

// Hyperbolic Laplacian in ball coordinates by 4th-order central differences:
// Delta = (1-|x|^2)^2/4 Delta_E + (n-2)(1-|x|^2)/2 x.grad_E
template <int Dim, class F>
double fd_laplacian(const F& f, const Vec<Dim>& x, double h = 3e-4) {
  const double q = 1.0 - norm2<Dim>(x);
  double lap = 0.0, radial = 0.0;
  for (int d = 0; d < Dim; ++d) {
    auto at = [&](double off) {
      Vec<Dim> y = x;
      y[d] += off;
      return f(y);
    };
    const double fp1 = at(h), fm1 = at(-h), fp2 = at(2 * h), fm2 = at(-2 * h), f0 = at(0.0);
    lap += (-fp2 + 16 * fp1 - 30 * f0 + 16 * fm1 - fm2) / (12 * h * h);
    radial += x[d] * (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * h);
  }
  return 0.25 * q * q * lap + 0.5 * (Dim - 2) * q * radial;
}

// Symbolic Laplacian of psi(r/R) from hand-derived derivatives of
// psi(t) = exp(-1/(1-t^2)).
double symbolic_radial_laplacian(int dim, double R, double r) {
  const double t = r / R;
  if (t >= 1.0) return 0.0;
  const double q = 1.0 - t * t;
  const double psi = std::exp(-1.0 / q);
  const double g1 = -2.0 * t / (q * q);
  const double g2 = -(2.0 * q + 8.0 * t * t) / (q * q * q);
  const double d1 = psi * g1 / R;
  const double d2 = psi * (g1 * g1 + g2) / (R * R);
  return d2 + (dim - 1) * std::cosh(r) / std::sinh(r) * d1;
}

}  // namespace

TEST(Jet, ExpAndDivisionMatchKnownSeries) {
  // exp(x) at 0.3: all derivatives equal exp(0.3)
  const Jet e = exp(Jet::variable(0.3, 8));
  for (std::size_t k = 0; k <= 8; ++k) EXPECT_NEAR(e.derivative_value(k), std::exp(0.3), 1e-12);
  // 1/(1-x) at 0.5: k-th derivative k!/(0.5)^(k+1)
  const Jet g = 1.0 / (1.0 - Jet::variable(0.5, 6));
  double fact = 1.0;
  for (std::size_t k = 0; k <= 6; ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    EXPECT_NEAR(g.derivative_value(k), fact / std::pow(0.5, static_cast<double>(k + 1)), 1e-9);
  }
}

TEST(Jet, TanhAndPowerAgainstClosedForm) {
  const double x = 0.7;
  const Jet t = tanh(Jet::variable(x, 3));
  const double th = std::tanh(x), sech2 = 1.0 - th * th;
  EXPECT_NEAR(t.derivative_value(1), sech2, 1e-14);
  EXPECT_NEAR(t.derivative_value(2), -2.0 * th * sech2, 1e-13);
  const Jet p = pow(Jet::variable(x, 4), 3);
  EXPECT_NEAR(p.derivative_value(3), 6.0, 1e-13);
  EXPECT_NEAR(p.derivative_value(4), 0.0, 1e-13);
}

TEST(TestFunction, CanonicalBumpValuesAndSupport) {
  const auto f = TestFunction<2>::canonical(1.0);
  EXPECT_NEAR(f.value(Point<2>::origin()), std::exp(-1.0), 1e-15);
  EXPECT_EQ(f.support_radius(), 1.0);
  EXPECT_TRUE(f.is_radial());
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const auto x = Point<2>::from_polar(1.0 + 2.0 * u(rng), BoundaryPoint<2>::from_angle(6.3 * u(rng)));
    EXPECT_EQ(f.value(x), 0.0);
    EXPECT_EQ(f.laplacian_value(x), 0.0);
  }
}

TEST(TestFunction, LaplacianMatchesSymbolicDerivative) {
  for (double R : {0.5, 1.0, 2.0}) {
    const auto f2 = TestFunction<2>::canonical(R);
    const auto f3 = TestFunction<3>::canonical(R);
    for (double frac : {0.05, 0.2, 0.5, 0.8, 0.95}) {
      const double r = frac * R;
      const double ref2 = symbolic_radial_laplacian(2, R, r);
      const double ref3 = symbolic_radial_laplacian(3, R, r);
      EXPECT_NEAR(f2.laplacian_value(Point<2>::from_polar(r, BoundaryPoint<2>::from_angle(0.4))), ref2,
                  1e-10 * std::max(1.0, std::abs(ref2)));
      EXPECT_NEAR(f3.laplacian_value(Point<3>::from_polar(r, BoundaryPoint<3>::from_angles(1.0, 2.0))), ref3,
                  1e-10 * std::max(1.0, std::abs(ref3)));
    }
  }
}

TEST(TestFunction, LaplacianContinuousThroughTheOrigin) {
  const auto f = TestFunction<2>::canonical(1.0);
  const double at0 = f.laplacian_value(Point<2>::origin());
  // Delta psi(r) at r = 0 is n psi''(0) = 2 * (-2 / e) in H^2 with R = 1.
  EXPECT_NEAR(at0, -4.0 * std::exp(-1.0), 1e-11);
  const double near = f.laplacian_value(Point<2>::from_polar(1e-4, BoundaryPoint<2>::from_angle(0.0)));
  EXPECT_NEAR(near, at0, 1e-7);
  // Across the switch radius the two evaluation paths agree.
  const double below = f.laplacian_power(Point<2>::from_polar(0.1 - 1e-9, BoundaryPoint<2>::from_angle(0.0)), 2);
  const double above = f.laplacian_power(Point<2>::from_polar(0.1 + 1e-9, BoundaryPoint<2>::from_angle(0.0)), 2);
  EXPECT_NEAR(below, above, 1e-8 * std::abs(above));
}

TEST(TestFunction, HarmonicAndOffsetTermsAgainstFiniteDifferences) {
  std::vector<TestFunction<2>::Term> terms2{CenteredBump<2>{0.8, 1.2, 2, 0, 0.3},
                                            OffsetBump<2>{0.6, 0.7, Point<2>::from_polar(0.4, BoundaryPoint<2>::from_angle(1.0))}};
  const TestFunction<2> f2(terms2);
  std::vector<TestFunction<3>::Term> terms3{CenteredBump<3>{1.0, 1.0, 1, -1, 0.0},
                                            CenteredBump<3>{0.5, 1.0, 2, 1, 0.0},
                                            OffsetBump<3>{0.6, 0.6, Point<3>::from_polar(0.3, BoundaryPoint<3>::from_angles(0.5, 0.2))}};
  const TestFunction<3> f3(terms3);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  for (int i = 0; i < 20; ++i) {
    const Vec<2> x2{u(rng), u(rng)};
    const double fd2 = fd_laplacian<2>([&](const Vec<2>& y) { return f2.value(Point<2>(y)); }, x2);
    EXPECT_NEAR(f2.laplacian_value(Point<2>(x2)), fd2, 2e-6 * std::max(1.0, std::abs(fd2)));
    const Vec<3> x3{u(rng), u(rng), u(rng)};
    const double fd3 = fd_laplacian<3>([&](const Vec<3>& y) { return f3.value(Point<3>(y)); }, x3);
    EXPECT_NEAR(f3.laplacian_value(Point<3>(x3)), fd3, 2e-6 * std::max(1.0, std::abs(fd3)));
    // Delta^2 against finite differences of the exact Delta.
    const double fd22 = fd_laplacian<2>([&](const Vec<2>& y) { return f2.laplacian_value(Point<2>(y)); }, x2);
    EXPECT_NEAR(f2.laplacian_power(Point<2>(x2), 2), fd22, 2e-5 * std::max(1.0, std::abs(fd22)));
  }
}

TEST(TestFunction, SecondDifferencesConvergeAtRateHSquared) {
  const auto fam = generate_family<2>(21, 4);
  for (const auto& f : fam) {
    const Vec<2> x{0.15, -0.1};
    auto second = [&](double h) {
      const Vec<2> p{x[0] + h, x[1]}, m{x[0] - h, x[1]};
      return (f.value(Point<2>(p)) - 2.0 * f.value(Point<2>(x)) + f.value(Point<2>(m))) / (h * h);
    };
    const double ref = second(1e-4);
    const double e1 = std::abs(second(0.02) - ref);
    const double e2 = std::abs(second(0.01) - ref);
    EXPECT_NEAR(e1 / e2, 4.0, 0.5);
  }
}

TEST(TestFunction, SupSeminormBasics) {
  const auto f = TestFunction<2>::canonical(1.0);
  EXPECT_NEAR(f.sup_seminorm(0), std::exp(-1.0), 1e-12);
  double prev = 0.0;
  for (int m = 0; m <= 4; ++m) {
    const double s = f.sup_seminorm(m);
    EXPECT_GE(s, prev);
    EXPECT_NEAR(f.scaled(5.0).sup_seminorm(m), 5.0 * s, 1e-12 * s);
    prev = s;
  }
}

TEST(TestFunction, SupSeminormSecondOrderMatchesExactHessianScale) {
  // Along the x-axis d^2/dx^2 psi(2 atanh(x)) at the origin equals 4 psi''(0) = -8/e for R = 1.
  const auto f = TestFunction<2>::canonical(1.0);
  const double s2 = f.sup_seminorm(2, 401);
  EXPECT_GE(s2, 8.0 * std::exp(-1.0) * 0.98);
}

TEST(Family, DeterministicWithDeclaredSupport) {
  const auto a = generate_family<2>(42, 10);
  const auto b = generate_family<2>(42, 10);
  ASSERT_EQ(a.size(), 10u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double R = a[i].support_radius();
    EXPECT_GE(R, 0.5);
    EXPECT_LE(R, 2.0);
    const auto x = Point<2>::from_polar(0.3 * R, BoundaryPoint<2>::from_angle(0.7));
    EXPECT_EQ(a[i].value(x), b[i].value(x));
    const auto outside = Point<2>::from_polar(R * 1.0001, BoundaryPoint<2>::from_angle(2.0));
    EXPECT_EQ(a[i].value(outside), 0.0);
  }
  EXPECT_FALSE(a[1].is_radial());
  EXPECT_TRUE(generate_family<3>(1, 1)[0].is_radial());
}
