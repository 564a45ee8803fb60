#pragma once

// Polynomials in the Laplace-Beltrami operator, D = p(Delta), acting on both
// sides of the transform. On the spectral side D multiplies by its symbol
// P_D(lambda) = p(-(lambda^2 + rho^2)).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <type_traits>
#include <vector>

#include "horofourier/errors.hpp"
#include "horofourier/geometry.hpp"
#include "horofourier/paley_wiener.hpp"
#include "horofourier/polynomial.hpp"
#include "horofourier/test_function.hpp"
#include "horofourier/transform.hpp"

namespace horofourier {

template <int Dim>
class InvariantOperator {
 public:
  explicit InvariantOperator(Polynomial p) : p_(std::move(p)) {}

  static InvariantOperator identity() { return InvariantOperator(Polynomial({1.0})); }
  static InvariantOperator laplacian() { return InvariantOperator(Polynomial({0.0, 1.0})); }

  const Polynomial& polynomial() const { return p_; }
  int order() const { return 2 * p_.degree(); }

  Complex symbol(Complex lambda) const {
    constexpr double rho = ModelParams<Dim>::rho;
    return p_(-(lambda * lambda + rho * rho));
  }

  // Zeros of the symbol in the lambda plane: lambda^2 = -(z + rho^2) per root z of p.
  std::vector<Complex> symbol_zeros() const {
    constexpr double rho = ModelParams<Dim>::rho;
    std::vector<Complex> out;
    for (const Complex z : p_.roots()) {
      const Complex l = std::sqrt(-(z + rho * rho));
      out.push_back(l);
      out.push_back(-l);
    }
    return out;
  }

 private:
  Polynomial p_;
};

// ---------------------------------------------------------------- physical side

// D f(x) from exact Laplacian jets of a test function.
template <int Dim>
double apply_physical(const InvariantOperator<Dim>& D, const TestFunction<Dim>& f, const Point<Dim>& x) {
  const auto& c = D.polynomial().coefficients();
  double s = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k)
    if (c[k] != 0.0) s += c[k] * f.laplacian_power(x, static_cast<int>(k));
  return s;
}

template <int Dim>
SampledFunction<Dim> apply_physical(const InvariantOperator<Dim>& D, const TestFunction<Dim>& f,
                                    const PolarGrid<Dim>& grid) {
  return sample(grid, f.support_radius(), [&](const Point<Dim>& x) { return apply_physical(D, f, x); });
}

inline constexpr double kFiniteDifferenceStep = 1e-3;

template <int Dim>
struct StencilTerm {
  double weight;
  Vec<Dim> x;
};

// Fourth-order central differences in ball coordinates for
// Delta = (1-|x|^2)^2/4 Delta_E + (n-2)(1-|x|^2)/2 x.grad_E
template <int Dim>
std::vector<StencilTerm<Dim>> laplacian_stencil(const Vec<Dim>& x, double h) {
  const double q = 1.0 - norm2<Dim>(x);
  const double a = 0.25 * q * q / (12.0 * h * h);
  const double b = 0.5 * (Dim - 2) * q / (12.0 * h);
  std::vector<StencilTerm<Dim>> out;
  out.push_back({-30.0 * a * Dim, x});
  for (int d = 0; d < Dim; ++d) {
    for (const auto& [off, second, first] : {std::tuple{h, 16.0, 8.0}, std::tuple{-h, 16.0, -8.0},
                                             std::tuple{2 * h, -1.0, -1.0}, std::tuple{-2 * h, -1.0, 1.0}}) {
      Vec<Dim> y = x;
      y[d] += off;
      out.push_back({second * a + first * b * x[d], y});
    }
  }
  return out;
}

// Stencil of D at x: Delta^k by nesting the Laplacian stencil k times.
template <int Dim>
std::vector<StencilTerm<Dim>> operator_stencil(const InvariantOperator<Dim>& D, const std::type_identity_t<Vec<Dim>>& x,
                                               double h = kFiniteDifferenceStep) {
  if (!(h > 0.0)) throw ConfigError("finite differences: step must be positive");
  const auto& c = D.polynomial().coefficients();
  std::vector<StencilTerm<Dim>> out;
  std::vector<StencilTerm<Dim>> power{{1.0, x}};
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] != 0.0)
      for (const auto& t : power) out.push_back({c[k] * t.weight, t.x});
    if (k + 1 == c.size()) break;
    std::vector<StencilTerm<Dim>> next;
    for (const auto& t : power)
      for (const auto& s : laplacian_stencil<Dim>(t.x, h)) next.push_back({t.weight * s.weight, s.x});
    power = std::move(next);
  }
  for (const auto& t : out)
    if (!(norm2<Dim>(t.x) < 1.0)) throw ConfigError("finite differences: stencil leaves the ball");
  return out;
}

// D u(x_p) for a field without exact jets. `batch` maps a vector of points to
// a vector of values (real or complex).
template <int Dim, class Batch>
auto apply_fd_batch(const InvariantOperator<Dim>& D, const Batch& batch, const std::vector<Point<Dim>>& xs,
                    double h = kFiniteDifferenceStep, Diagnostics* diag = nullptr) {
  warn(diag, "apply_physical: no exact jets, using fourth-order finite differences with h = " + std::to_string(h));
  std::vector<std::size_t> offsets{0};
  std::vector<double> weights;
  std::vector<Point<Dim>> pts;
  for (const auto& x : xs) {
    for (const auto& t : operator_stencil(D, x.coords(), h)) {
      weights.push_back(t.weight);
      pts.emplace_back(t.x);
    }
    offsets.push_back(pts.size());
  }
  const auto values = batch(pts);
  using Value = std::decay_t<decltype(values[0])>;
  std::vector<Value> out(xs.size());
  for (std::size_t p = 0; p < xs.size(); ++p) {
    Value s{};
    for (std::size_t i = offsets[p]; i < offsets[p + 1]; ++i) s += weights[i] * values[i];
    out[p] = s;
  }
  return out;
}

// Pointwise version: f takes a Point and returns a real or complex value.
template <int Dim, class F>
auto apply_fd(const InvariantOperator<Dim>& D, const F& f, const Point<Dim>& x, double h = kFiniteDifferenceStep,
              Diagnostics* diag = nullptr) {
  auto batch = [&f](const std::vector<Point<Dim>>& pts) {
    std::vector<std::decay_t<decltype(f(pts[0]))>> v;
    v.reserve(pts.size());
    for (const auto& p : pts) v.push_back(f(p));
    return v;
  };
  return apply_fd_batch(D, batch, std::vector<Point<Dim>>{x}, h, diag).front();
}

// ---------------------------------------------------------------- spectral side

template <int Dim>
SpectralFunction<Dim> apply_spectral(const InvariantOperator<Dim>& D, const SpectralFunction<Dim>& phi) {
  return phi.multiplied([D](Complex l) { return D.symbol(l); });
}

struct DiagramOptions {
  std::size_t samples = 48;
  double lambda_max = 12.0;       // real parts drawn from [0, lambda_max]
  double imag_fraction = 0.5;     // |Im lambda| <= imag_fraction * rho on a third of the samples
  std::uint64_t seed = 7;
  double nodes_per_feature = 160.0;
};

template <int Dim>
BoundaryPoint<Dim> random_boundary_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if constexpr (Dim == 2) return BoundaryPoint<2>::from_angle(2.0 * std::numbers::pi * u(rng));
  else {
    const double ct = 1.0 - 2.0 * u(rng);
    return BoundaryPoint<3>::from_angles(std::acos(ct), 2.0 * std::numbers::pi * u(rng));
  }
}

// max |F(Df) - P_D Ff| / max(|F(Df)|, |P_D Ff|) over seeded (lambda, b).
// Both transforms are computed independently on the same grid.
template <int Dim>
double diagram_defect(const InvariantOperator<Dim>& D, const TestFunction<Dim>& f, const DiagramOptions& opt = {}) {
  if (opt.samples == 0) throw ConfigError("diagram_defect: need at least one sample");
  SpectralConfig cfg;
  cfg.lambda_max = opt.lambda_max;
  const auto grid = default_grid(f, cfg, opt.nodes_per_feature);
  const auto Ff = forward_transform(f, grid, cfg);
  const auto FDf = forward_transform(apply_physical(D, f, grid), cfg);

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  constexpr double rho = ModelParams<Dim>::rho;
  double gap = 0.0, scale = 0.0;
  for (std::size_t s = 0; s < opt.samples; ++s) {
    double im = 0.0;
    const double re = opt.lambda_max * u(rng);
    if (s % 3 == 2) im = opt.imag_fraction * rho * (2.0 * u(rng) - 1.0);
    const Complex l(re, im);
    const auto b = random_boundary_point<Dim>(rng);
    const Complex lhs = FDf.eval(l, b);
    const Complex rhs = D.symbol(l) * Ff.eval(l, b);
    gap = std::max(gap, std::abs(lhs - rhs));
    scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
  }
  return scale > 0.0 ? gap / scale : gap;
}

// ---------------------------------------------------------------- support

struct SupportEstimate {
  double radius = 0.0;  // smallest radial node beyond which |f| <= tol sup |f|
  double cell = 0.0;    // radial node spacing at that node
  bool flagged = false; // the tail never drops below tol inside the grid
};

template <int Dim>
SupportEstimate support_radius(const SampledFunction<Dim>& f, double tol = 1e-10) {
  if (!(tol >= 0.0)) throw ConfigError("support_radius: tolerance must be non-negative");
  const auto& g = f.grid;
  const std::size_t nr = g.radial_size();
  SupportEstimate out;
  const double sup = f.sup_norm();
  if (sup == 0.0 || nr == 0) return out;
  std::vector<double> tail(nr + 1, 0.0);  // max |f| over shells i..nr-1
  for (std::size_t i = nr; i-- > 0;) {
    double m = 0.0;
    for (std::size_t j = 0; j < g.angular_size(); ++j) m = std::max(m, std::abs(f.at(i, j)));
    tail[i] = std::max(tail[i + 1], m);
  }
  auto spacing = [&](std::size_t i) {
    if (nr == 1) return g.support_radius;
    return i + 1 < nr ? g.radial_nodes[i + 1] - g.radial_nodes[i] : g.radial_nodes[i] - g.radial_nodes[i - 1];
  };
  for (std::size_t i = 0; i < nr; ++i) {
    if (tail[i] <= tol * sup) {
      out.radius = g.radial_nodes[i];
      out.cell = std::max(spacing(i), i > 0 ? spacing(i - 1) : 0.0);
      return out;
    }
  }
  out.radius = g.support_radius;
  out.cell = spacing(nr - 1);
  out.flagged = true;
  return out;
}

// ---------------------------------------------------------------- solving D u = g

struct SolveOptions {
  double epsilon_floor = 1e-8;
  double fd_step = kFiniteDifferenceStep;
  double output_radius_factor = 1.5;  // u is sampled out to this multiple of supp g
  int output_radial = 48;
  int check_radial = 12;              // residual lattice, reaching 1.1 supp g
  int check_angular = 16;
};

template <int Dim>
struct SolveResult {
  SampledFunction<Dim> u;
  SpectralFunction<Dim> spectrum;  // g~ / P_D
  double residual = 0.0;           // ||D u - g||_inf / ||g||_inf on the check lattice
  double symbol_min = 0.0;         // min |P_D| on the real lambda grid
  SupportEstimate support_in;
  SupportEstimate support_out;
  Diagnostics diagnostics;
};

// min |P_D(lambda_q)| over the real grid of phi.
template <int Dim>
double symbol_min_on_grid(const InvariantOperator<Dim>& D, const std::vector<double>& lambdas) {
  double m = std::numeric_limits<double>::infinity();
  for (double l : lambdas) m = std::min(m, std::abs(D.symbol(Complex(l, 0.0))));
  if (lambdas.empty()) return m;
  // Zeros between nodes: probe the real projection of each symbol zero.
  const auto [lo, hi] = std::minmax_element(lambdas.begin(), lambdas.end());
  for (const Complex z : D.symbol_zeros()) {
    const double x = z.real();
    if (x >= *lo && x <= *hi) m = std::min(m, std::abs(D.symbol(Complex(x, 0.0))));
  }
  return m;
}

template <int Dim>
void require_symbol_floor(const InvariantOperator<Dim>& D, const std::vector<double>& lambdas, double floor) {
  const double m = symbol_min_on_grid(D, lambdas);
  if (!(m >= floor)) {
    std::ostringstream os;
    os << "symbol of p = [" << D.polynomial().to_string() << "] drops to " << m << " on the real spectrum (floor "
       << floor << ")";
    throw SymbolVanishes(os.str());
  }
}

template <int Dim>
SolveResult<Dim> solve(const InvariantOperator<Dim>& D, const TestFunction<Dim>& g, const SolveOptions& opt = {}) {
  if (!(opt.epsilon_floor > 0.0)) throw ConfigError("solve: epsilon floor must be positive");
  const double R = g.support_radius();
  const auto cfg = default_spectral_config<Dim>(feature_radius(g));
  const auto grid = default_grid(g, cfg);

  SolveResult<Dim> out;
  const auto gt = forward_transform(g, grid, cfg);
  require_symbol_floor(D, gt.lambda_grid(), opt.epsilon_floor);
  out.symbol_min = symbol_min_on_grid(D, gt.lambda_grid());
  out.spectrum = gt.multiplied([D](Complex l) { return 1.0 / D.symbol(l); });
  out.support_in = support_radius(sample(g, grid));

  const auto& density = calibrated_density<Dim>();
  auto field = [&](const std::vector<Point<Dim>>& pts) {
    return helgason_inverse(out.spectrum, density, pts, &out.diagnostics);
  };

  const auto ugrid = make_polar_grid<Dim>(opt.output_radius_factor * R, opt.output_radial, grid.angular_count);
  std::vector<Point<Dim>> nodes;
  nodes.reserve(ugrid.size());
  for (std::size_t i = 0; i < ugrid.radial_size(); ++i)
    for (std::size_t j = 0; j < ugrid.angular_size(); ++j) nodes.push_back(ugrid.node(i, j));
  out.u.grid = ugrid;
  out.u.declared_radius = ugrid.support_radius;
  out.u.values = field(nodes);
  out.support_out = support_radius(out.u);

  const auto pts = evaluation_points<Dim>(R, opt.check_radial, opt.check_angular);
  const auto Du = apply_fd_batch(D, field, pts, opt.fd_step, &out.diagnostics);
  double gap = 0.0, gmax = 0.0;
  for (std::size_t p = 0; p < pts.size(); ++p) {
    const double gv = g.value(pts[p]);
    gap = std::max(gap, std::abs(Du[p] - gv));
    gmax = std::max(gmax, std::abs(gv));
  }
  out.residual = gmax > 0.0 ? gap / gmax : gap;
  return out;
}

// ---------------------------------------------------------------- division

struct DivisionCheck {
  double strip_half_width = 0.0;
  double symbol_max_on_strip = 0.0;  // max |P_D| over the strip nodes
  double symbol_min_on_strip = 0.0;
  PWReport quotient;                 // g~ / P_D
  PWReport source;                   // g~ on the same strip
};

// Paley-Wiener report for g~ / P_D. The quotient has poles wherever P_D
// vanishes and g~ does not, e.g. at +-i rho for D = Delta, so the strip is
// narrowed to half the distance to the nearest non-real symbol zero and no
// widening is attempted.
template <int Dim>
DivisionCheck division_pw_check(const TestFunction<Dim>& g, const InvariantOperator<Dim>& D, int max_order = 4,
                                double epsilon_floor = 1e-8) {
  const double R = g.support_radius();
  const auto gt = default_transform(g);
  require_symbol_floor(D, gt.lambda_grid(), epsilon_floor);

  double S = 2.0 * ModelParams<Dim>::rho;
  for (const Complex z : D.symbol_zeros())
    if (std::abs(z.imag()) > 0.0) S = std::min(S, 0.5 * std::abs(z.imag()));

  DivisionCheck out;
  out.strip_half_width = S;
  const auto strip = default_strip_grid(gt, R, S);
  out.symbol_min_on_strip = std::numeric_limits<double>::infinity();
  for (double x : strip.doubled().real_nodes)
    for (double y : strip.doubled().imag_nodes) {
      const double p = std::abs(D.symbol(Complex(x, y)));
      out.symbol_max_on_strip = std::max(out.symbol_max_on_strip, p);
      out.symbol_min_on_strip = std::min(out.symbol_min_on_strip, p);
    }
  if (!(out.symbol_min_on_strip >= epsilon_floor)) throw SymbolVanishes("division_pw_check: symbol vanishes on the strip");

  const auto psi = gt.multiplied([D](Complex l) { return 1.0 / D.symbol(l); });
  const auto bgrid = make_polar_grid<Dim>(R, 8, std::max(Dim == 2 ? 128 : 32, 2 * gt.basis().max_degree() + 2));
  const SeminormOptions opt{.check_refinement = true, .check_divergence = false};
  out.quotient = pw_report(psi, R, max_order, strip, bgrid, opt);
  out.source = pw_report(gt, R, max_order, strip, bgrid, opt);
  return out;
}

}  // namespace horofourier
