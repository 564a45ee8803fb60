#pragma once

// Compactly supported smooth test functions on H^n.
//
// The canonical building block is psi(t) = exp(-1/(1 - t^2)) for |t| < 1,
// taken either about the origin (optionally times a boundary harmonic) or
// about an arbitrary center. Every term is a radial profile in geodesic polar
// coordinates about its own center times a sphere eigenfunction, so powers of
// the Laplace-Beltrami operator act on the profile through
//
//   L u = u'' + (n-1) coth(r) u' - mu sinh(r)^-2 u,
//
// mu being the sphere eigenvalue. Taylor jets make every power of L exact.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <variant>
#include <vector>

#include "horofourier/boundary_modes.hpp"
#include "horofourier/detail/jet.hpp"
#include "horofourier/errors.hpp"
#include "horofourier/geometry.hpp"

namespace horofourier {

// amplitude * psi(r / radius) * tanh(r/2)^degree * Y(direction), where Y is
// cos(degree (theta - phase)) on S^1 and the real spherical harmonic
// (degree, order) on S^2. The tanh factor keeps the product smooth at the origin.
template <int Dim>
struct CenteredBump {
  double amplitude = 1.0;
  double radius = 1.0;
  int degree = 0;
  int order = 0;
  double phase = 0.0;
};

// amplitude * psi(d(center, x) / radius).
template <int Dim>
struct OffsetBump {
  double amplitude = 1.0;
  double radius = 1.0;
  Point<Dim> center = Point<Dim>::origin();
};

namespace detail {

// Value of L^k u at r, where `profile(r0, order)` returns the jet of u at r0.
// Below `switch_radius` the coth and csch^2 jets lose accuracy, so the jet of
// L^k u is formed at switch_radius and its Taylor polynomial is evaluated back
// at r (L^k u is analytic through the origin).
template <int Dim, class Profile>
double polar_laplacian_power(const Profile& profile, double r, int k, double mu, double switch_radius) {
  if (k == 0) return profile(r, 0).value();
  const bool extrapolate = r < switch_radius;
  const double r1 = extrapolate ? switch_radius : r;
  const std::size_t order = static_cast<std::size_t>(2 * k) + (extrapolate ? 22 : 0);

  Jet u = profile(r1, order);
  const Jet var = Jet::variable(r1, order);
  const Jet sh = sinh(var);
  const Jet coth = cosh(var) / sh;
  const Jet csch2 = 1.0 / (sh * sh);
  for (int step = 0; step < k; ++step) {
    const Jet d1 = u.derivative();
    const Jet d2 = d1.derivative();
    Jet next = d2 + static_cast<double>(Dim - 1) * (coth * d1);
    if (mu != 0.0) next -= mu * (csch2 * u);
    u = std::move(next);
  }
  return u.evaluate_at_offset(r - r1);
}

inline Jet centered_profile(double amplitude, double radius, int degree, double r0, std::size_t order) {
  const Jet r = Jet::variable(r0, order);
  Jet u = bump_profile(r * (1.0 / radius)) * amplitude;
  if (degree > 0) u = u * pow(tanh(r * 0.5), degree);
  return u;
}

}  // namespace detail

template <int Dim>
class TestFunction {
 public:
  using Term = std::variant<CenteredBump<Dim>, OffsetBump<Dim>>;

  TestFunction() = default;
  explicit TestFunction(std::vector<Term> terms) : terms_(std::move(terms)) {
    for (const auto& t : terms_) {
      std::visit([](const auto& term) {
        if (!(term.radius > 0.0)) throw ConfigError("TestFunction: term radius must be positive");
      }, t);
      if (const auto* c = std::get_if<CenteredBump<Dim>>(&t)) {
        if (c->degree < 0 || (Dim == 3 && std::abs(c->order) > c->degree))
          throw ConfigError("TestFunction: invalid harmonic degree/order");
      }
    }
  }

  // The radial bump psi(d(0, x) / R).
  static TestFunction canonical(double radius) { return TestFunction({CenteredBump<Dim>{1.0, radius}}); }

  const std::vector<Term>& terms() const { return terms_; }

  TestFunction scaled(double s) const {
    TestFunction out = *this;
    for (auto& t : out.terms_) std::visit([s](auto& term) { term.amplitude *= s; }, t);
    return out;
  }

  friend TestFunction operator+(const TestFunction& a, const TestFunction& b) {
    std::vector<Term> terms = a.terms_;
    terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
    return TestFunction(std::move(terms));
  }

  // Radius of the smallest origin-centered ball containing the support.
  double support_radius() const {
    double r = 0.0;
    for (const auto& t : terms_) {
      if (const auto* c = std::get_if<CenteredBump<Dim>>(&t)) r = std::max(r, c->radius);
      else {
        const auto& o = std::get<OffsetBump<Dim>>(t);
        r = std::max(r, o.center.radius() + o.radius);
      }
    }
    return r;
  }

  bool is_radial() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) {
      const auto* c = std::get_if<CenteredBump<Dim>>(&t);
      return c != nullptr && c->degree == 0;
    });
  }

  double value(const Point<Dim>& x) const { return laplacian_power(x, 0); }

  double laplacian_value(const Point<Dim>& x) const { return laplacian_power(x, 1); }

  // Delta^k f(x), exact up to rounding.
  double laplacian_power(const Point<Dim>& x, int k) const {
    double total = 0.0;
    for (const auto& t : terms_) {
      if (const auto* c = std::get_if<CenteredBump<Dim>>(&t)) total += centered_term(*c, x, k);
      else total += offset_term(std::get<OffsetBump<Dim>>(t), x, k);
    }
    return total;
  }

  // ||f||_m: the largest sup-norm of a partial derivative of order <= m in
  // ball coordinates, by repeated central differences on a Cartesian lattice
  // of `points_per_axis` points per axis covering the support.
  double sup_seminorm(int order, int points_per_axis = Dim == 2 ? 257 : 49) const;

 private:
  static double centered_term(const CenteredBump<Dim>& c, const Point<Dim>& x, int k) {
    const double r = x.radius();
    if (r >= c.radius) return 0.0;
    double angular = 1.0;
    double mu = 0.0;
    if (c.degree > 0) {
      const BoundaryPoint<Dim> dir = x.direction();
      if constexpr (Dim == 2) {
        angular = std::cos(c.degree * (angle(dir) - c.phase));
        mu = static_cast<double>(c.degree) * c.degree;
      } else {
        angular = real_spherical_harmonic(c.degree, c.order, polar_angle(dir), azimuth_angle(dir));
        mu = static_cast<double>(c.degree) * (c.degree + 1);
      }
    }
    auto profile = [&c](double r0, std::size_t order) {
      return detail::centered_profile(c.amplitude, c.radius, c.degree, r0, order);
    };
    return angular * detail::polar_laplacian_power<Dim>(profile, r, k, mu, 0.1 * std::min(c.radius, 1.0));
  }

  static double offset_term(const OffsetBump<Dim>& o, const Point<Dim>& x, int k) {
    const double s = distance(o.center, x);
    if (s >= o.radius) return 0.0;
    auto profile = [&o](double r0, std::size_t order) {
      return detail::centered_profile(o.amplitude, o.radius, 0, r0, order);
    };
    return detail::polar_laplacian_power<Dim>(profile, s, k, 0.0, 0.1 * std::min(o.radius, 1.0));
  }

  std::vector<Term> terms_;
};

template <int Dim>
double TestFunction<Dim>::sup_seminorm(int order, int points_per_axis) const {
  if (order < 0) throw ConfigError("sup_seminorm: negative order");
  if (points_per_axis < 8) throw ConfigError("sup_seminorm: lattice too coarse");
  const double a = std::tanh(0.5 * support_radius());
  const int n = points_per_axis;
  // Lattice over [-a', a'] with a zero margin of order + 2 cells outside the support.
  const double h = 2.0 * a / (n - 1 - 2 * (order + 2));
  const double start = -a - (order + 2) * h;
  if (!(h > 0.0) || -start >= 1.0) throw ConfigError("sup_seminorm: lattice does not fit in the ball");

  std::size_t total = 1;
  for (int d = 0; d < Dim; ++d) total *= static_cast<std::size_t>(n);
  std::vector<double> base(total, 0.0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    Vec<Dim> c{};
    std::size_t rem = flat;
    for (int d = Dim - 1; d >= 0; --d) {
      c[d] = start + h * static_cast<double>(rem % static_cast<std::size_t>(n));
      rem /= static_cast<std::size_t>(n);
    }
    if (norm2<Dim>(c) < a * a * (1.0 + 1e-12) + 1e-300) base[flat] = value(Point<Dim>(c));
  }

  std::array<std::size_t, Dim> stride{};
  stride[Dim - 1] = 1;
  for (int d = Dim - 2; d >= 0; --d) stride[d] = stride[d + 1] * static_cast<std::size_t>(n);

  auto central = [&](const std::vector<double>& in, int axis) {
    std::vector<double> out(total, 0.0);
    const std::size_t st = stride[axis];
    for (std::size_t flat = 0; flat < total; ++flat) {
      const std::size_t idx = (flat / st) % static_cast<std::size_t>(n);
      const double fwd = idx + 1 < static_cast<std::size_t>(n) ? in[flat + st] : 0.0;
      const double bwd = idx > 0 ? in[flat - st] : 0.0;
      out[flat] = (fwd - bwd) / (2.0 * h);
    }
    return out;
  };
  auto sup = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  };

  // Breadth-first over multi-indices in nondecreasing axis order, so each
  // mixed partial is derived once.
  struct Node {
    std::vector<double> values;
    int last_axis;
    int level;
  };
  double best = sup(base);
  std::vector<Node> frontier{{std::move(base), 0, 0}};
  for (int level = 1; level <= order; ++level) {
    std::vector<Node> next;
    for (const auto& node : frontier)
      for (int axis = node.last_axis; axis < Dim; ++axis) {
        Node child{central(node.values, axis), axis, level};
        best = std::max(best, sup(child.values));
        next.push_back(std::move(child));
      }
    frontier = std::move(next);
  }
  return best;
}

// Seeded generator for the canonical family: a radial bump of radius R plus,
// depending on the index, a boundary-harmonic term and an off-center bump,
// all with support radius exactly R.
struct FamilyOptions {
  double min_radius = 0.5;
  double max_radius = 2.0;
  bool harmonics = true;
  bool offsets = true;
  int max_harmonic_degree = 3;
};

template <int Dim>
std::vector<TestFunction<Dim>> generate_family(std::uint64_t seed, std::size_t count, const FamilyOptions& opt = {}) {
  if (!(opt.min_radius > 0.0) || opt.max_radius < opt.min_radius) throw ConfigError("generate_family: bad radius range");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  std::vector<TestFunction<Dim>> family;
  family.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double R = uniform(opt.min_radius, opt.max_radius);
    std::vector<typename TestFunction<Dim>::Term> terms;
    terms.push_back(CenteredBump<Dim>{uniform(0.5, 1.5), R});
    if (opt.harmonics && i % 3 != 0 && opt.max_harmonic_degree > 0) {
      CenteredBump<Dim> h;
      h.amplitude = uniform(0.3, 1.0);
      h.radius = R;
      h.degree = 1 + static_cast<int>(unit(rng) * opt.max_harmonic_degree) % opt.max_harmonic_degree;
      h.phase = uniform(0.0, 2.0 * std::numbers::pi);
      if constexpr (Dim == 3) h.order = static_cast<int>(std::floor(uniform(-h.degree, h.degree + 1.0 - 1e-9)));
      terms.push_back(h);
    }
    if (opt.offsets && i % 2 == 1) {
      const double dc = uniform(0.05, 0.2) * R;
      Vec<Dim> dir{};
      for (auto& v : dir) v = uniform(-1.0, 1.0);
      if (norm2<Dim>(dir) < 1e-6) dir[0] = 1.0;
      const Point<Dim> center = Point<Dim>::from_polar(dc, BoundaryPoint<Dim>(dir));
      terms.push_back(OffsetBump<Dim>{uniform(0.3, 1.0), R - center.radius(), center});
    }
    family.emplace_back(std::move(terms));
  }
  return family;
}

}  // namespace horofourier
