#pragma once

// Ball-model geometry of real hyperbolic space H^n, n = 2 or 3, at curvature -1.
//
// Points live in the open unit ball, boundary points on the unit sphere. The
// Riemannian volume in geodesic polar coordinates is sinh(r)^(n-1) dr dw, and
// the boundary measure db is the rotation-invariant probability measure, so
// the sphere area is folded into volume_density.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/special_functions/legendre.hpp>

#include "horofourier/errors.hpp"

namespace horofourier {

template <int Dim>
struct ModelParams {
  static_assert(Dim == 2 || Dim == 3, "only H^2 and H^3 are supported");
  static constexpr int dimension = Dim;
  // Half-sum of positive restricted roots in the rank-one case.
  static constexpr double rho = 0.5 * (Dim - 1);
  static constexpr double sphere_area = Dim == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi;
};

template <int Dim>
using Vec = std::array<double, Dim>;

template <int Dim>
constexpr double dot(const Vec<Dim>& a, const Vec<Dim>& b) {
  double s = 0.0;
  for (int i = 0; i < Dim; ++i) s += a[i] * b[i];
  return s;
}

template <int Dim>
constexpr double norm2(const Vec<Dim>& a) {
  return dot<Dim>(a, a);
}

template <int Dim>
class BoundaryPoint {
 public:
  // Normalizes v; rejects zero and non-finite vectors.
  explicit BoundaryPoint(const Vec<Dim>& v) {
    const double n = std::sqrt(norm2<Dim>(v));
    if (!(n > 0.0) || !std::isfinite(n)) throw std::domain_error("BoundaryPoint: direction must be a nonzero finite vector");
    for (int i = 0; i < Dim; ++i) dir_[i] = v[i] / n;
  }

  static BoundaryPoint from_angle(double theta)
    requires(Dim == 2)
  {
    return BoundaryPoint(Vec<2>{std::cos(theta), std::sin(theta)});
  }

  // polar angle from the +z axis, azimuth in the xy-plane.
  static BoundaryPoint from_angles(double polar, double azimuth)
    requires(Dim == 3)
  {
    const double s = std::sin(polar);
    return BoundaryPoint(Vec<3>{s * std::cos(azimuth), s * std::sin(azimuth), std::cos(polar)});
  }

  const Vec<Dim>& direction() const { return dir_; }
  double operator[](int i) const { return dir_[i]; }

 private:
  Vec<Dim> dir_{};
};

template <int Dim>
class Point {
 public:
  // Ball coordinates; |coords| must be strictly below 1.
  explicit Point(const Vec<Dim>& coords) : c_(coords) {
    const double n2 = norm2<Dim>(c_);
    if (!(n2 < 1.0)) throw std::domain_error("Point: coordinates must lie in the open unit ball");
  }

  static Point origin() { return Point(Vec<Dim>{}); }

  // The point at geodesic distance `radius` from the origin in direction `dir`.
  static Point from_polar(double radius, const BoundaryPoint<Dim>& dir) {
    if (radius < 0.0) throw std::domain_error("Point::from_polar: negative radius");
    const double s = std::tanh(0.5 * radius);
    Vec<Dim> c{};
    for (int i = 0; i < Dim; ++i) c[i] = s * dir[i];
    return Point(c);
  }

  const Vec<Dim>& coords() const { return c_; }
  double operator[](int i) const { return c_[i]; }
  double euclidean_norm2() const { return norm2<Dim>(c_); }

  // Geodesic distance to the origin.
  double radius() const { return 2.0 * std::atanh(std::sqrt(euclidean_norm2())); }

  // Unit direction; the origin reports the first coordinate axis.
  BoundaryPoint<Dim> direction() const {
    if (euclidean_norm2() == 0.0) {
      Vec<Dim> e{};
      e[0] = 1.0;
      return BoundaryPoint<Dim>(e);
    }
    return BoundaryPoint<Dim>(c_);
  }

 private:
  Vec<Dim> c_{};
};

template <int Dim>
double distance(const Point<Dim>& x, const Point<Dim>& y) {
  Vec<Dim> d{};
  for (int i = 0; i < Dim; ++i) d[i] = x[i] - y[i];
  const double u = norm2<Dim>(d) / ((1.0 - x.euclidean_norm2()) * (1.0 - y.euclidean_norm2()));
  // arccosh(1 + 2u) == 2 asinh(sqrt(u)), without the cancellation near u = 0.
  return 2.0 * std::asinh(std::sqrt(u));
}

// A(x, b) = log((1 - |x|^2) / |x - b|^2), the signed distance from the origin
// to the horosphere through x based at b.
template <int Dim>
double horocycle_bracket(const Point<Dim>& x, const BoundaryPoint<Dim>& b) {
  // |x - b|^2 with |b| = 1 taken exactly, so A(0, b) == 0.
  const double n2 = x.euclidean_norm2();
  return std::log((1.0 - n2) / (n2 - 2.0 * dot<Dim>(x.coords(), b.direction()) + 1.0));
}

// The bracket for a point at geodesic radius r whose direction makes angle
// arccos(t) with b. Depends on (r, t) only.
inline double horocycle_bracket_polar(double r, double t) {
  const double s = std::tanh(0.5 * r);
  const double c = std::cosh(0.5 * r);
  // 1 - s^2 = 1 / cosh^2(r/2)
  return -std::log(c * c * (1.0 - 2.0 * s * t + s * s));
}

// Volume element in geodesic polar coordinates against the probability measure
// on the sphere: |S^(n-1)| * sinh(r)^(n-1).
template <int Dim>
double volume_density(double r) {
  if (r < 0.0) throw std::domain_error("volume_density: negative radius");
  return ModelParams<Dim>::sphere_area * std::pow(std::sinh(r), Dim - 1);
}

// Gauss-Legendre rule with n nodes on (a, b), nodes ascending.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0) {
  if (n < 1) throw ConfigError("gauss_legendre: need at least one node");
  const std::vector<double> positive = boost::math::legendre_p_zeros<double>(n);
  std::vector<double> x;
  x.reserve(static_cast<std::size_t>(n));
  for (auto it = positive.rbegin(); it != positive.rend(); ++it)
    if (*it > 0.0) x.push_back(-*it);
  for (double z : positive) x.push_back(z);

  QuadratureRule rule;
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (double z : x) {
    const double dp = boost::math::legendre_p_prime(n, z);
    rule.nodes.push_back(mid + half * z);
    rule.weights.push_back(half * 2.0 / ((1.0 - z * z) * dp * dp));
  }
  return rule;
}

// Rotation-invariant rule on the boundary sphere with weights summing to 1.
// H^2: `angular_count` equispaced angles with uniform weights.
// H^3: Gauss-Legendre in cos(polar) with angular_count / 2 nodes times
//      `angular_count` equispaced azimuths.
template <int Dim>
struct BoundaryRule {
  std::vector<BoundaryPoint<Dim>> nodes;
  std::vector<double> weights;
  int angular_count = 0;

  std::size_t size() const { return nodes.size(); }
};

template <int Dim>
BoundaryRule<Dim> make_boundary_rule(int angular_count) {
  if (angular_count < 4) throw ConfigError("make_boundary_rule: angular count must be at least 4");
  BoundaryRule<Dim> rule;
  rule.angular_count = angular_count;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if constexpr (Dim == 2) {
    for (int j = 0; j < angular_count; ++j) {
      rule.nodes.push_back(BoundaryPoint<2>::from_angle(two_pi * j / angular_count));
      rule.weights.push_back(1.0 / angular_count);
    }
  } else {
    const auto polar = gauss_legendre(std::max(2, angular_count / 2));
    for (std::size_t p = 0; p < polar.nodes.size(); ++p) {
      const double theta = std::acos(polar.nodes[p]);
      for (int k = 0; k < angular_count; ++k) {
        rule.nodes.push_back(BoundaryPoint<3>::from_angles(theta, two_pi * k / angular_count));
        rule.weights.push_back(0.5 * polar.weights[p] / angular_count);
      }
    }
  }
  return rule;
}

// Product quadrature on the geodesic ball B_R(0): Gauss-Legendre in r times
// the boundary rule above.
template <int Dim>
struct PolarGrid {
  double support_radius = 0.0;
  std::vector<double> radial_nodes;
  std::vector<double> radial_weights;
  std::vector<BoundaryPoint<Dim>> angular_nodes;
  std::vector<double> angular_weights;
  int angular_count = 0;

  std::size_t radial_size() const { return radial_nodes.size(); }
  std::size_t angular_size() const { return angular_nodes.size(); }
  std::size_t size() const { return radial_size() * angular_size(); }

  Point<Dim> node(std::size_t i, std::size_t j) const {
    return Point<Dim>::from_polar(radial_nodes[i], angular_nodes[j]);
  }

  // dr-weight times volume density at radial node i.
  double shell_weight(std::size_t i) const { return radial_weights[i] * volume_density<Dim>(radial_nodes[i]); }

  double weight(std::size_t i, std::size_t j) const { return shell_weight(i) * angular_weights[j]; }
};

template <int Dim>
PolarGrid<Dim> make_polar_grid(double support_radius, int radial_count, int angular_count) {
  if (!(support_radius > 0.0) || !std::isfinite(support_radius))
    throw ConfigError("make_polar_grid: support radius must be positive");
  if (radial_count < 4 || angular_count < 4) throw ConfigError("make_polar_grid: node counts must be at least 4");

  PolarGrid<Dim> grid;
  grid.support_radius = support_radius;
  grid.angular_count = angular_count;
  auto radial = gauss_legendre(radial_count, 0.0, support_radius);
  grid.radial_nodes = std::move(radial.nodes);
  grid.radial_weights = std::move(radial.weights);
  auto sphere = make_boundary_rule<Dim>(angular_count);
  grid.angular_nodes = std::move(sphere.nodes);
  grid.angular_weights = std::move(sphere.weights);
  return grid;
}

// Integral of f over the ball covered by the grid against the Riemannian volume.
template <int Dim, class F>
double integrate(const PolarGrid<Dim>& grid, F&& f) {
  double total = 0.0;
  for (std::size_t i = 0; i < grid.radial_size(); ++i) {
    double shell = 0.0;
    for (std::size_t j = 0; j < grid.angular_size(); ++j) shell += grid.angular_weights[j] * f(grid.node(i, j));
    total += grid.shell_weight(i) * shell;
  }
  return total;
}

}  // namespace horofourier
