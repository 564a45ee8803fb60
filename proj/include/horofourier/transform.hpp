#pragma once

// The Helgason Fourier transform on H^n
//
//   Ff(lambda, b) = int_X f(x) exp((-i lambda + rho) A(x, b)) dx
//
// and its inverse
//
//   f(x) = kappa int_0^Lambda density(lambda) int_B Ff(lambda, b) exp((i lambda + rho) A(x, b)) db dlambda.
//
// Two routes compute Ff. helgason_forward sums the defining integral over a
// polar grid directly. forward_transform expands f in boundary modes on each
// radial shell; since exp((-i lambda + rho) A) depends on x only through |x|
// and <x/|x|, b>, each mode of f maps to the same mode of Ff scaled by a
// zonal coefficient, which is computed to rounding by a ZonalRule sized to
// the kernel bandwidth. Spectral functions therefore live as mode
// coefficients phi_m(lambda) on a uniform lambda grid, plus an evaluator
// that reruns the quadrature at any complex lambda.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "horofourier/boundary_modes.hpp"
#include "horofourier/detail/parallel.hpp"
#include "horofourier/errors.hpp"
#include "horofourier/geometry.hpp"
#include "horofourier/test_function.hpp"
#include "horofourier/zonal.hpp"

namespace horofourier {

// Function values at the nodes of a polar grid, radial index major.
template <int Dim>
struct SampledFunction {
  PolarGrid<Dim> grid;
  std::vector<double> values;
  double declared_radius = 0.0;

  double at(std::size_t i, std::size_t j) const { return values[i * grid.angular_size() + j]; }

  double sup_norm() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
};

template <int Dim, class F>
SampledFunction<Dim> sample(const PolarGrid<Dim>& grid, double declared_radius, F&& f) {
  SampledFunction<Dim> out;
  out.grid = grid;
  out.declared_radius = declared_radius;
  out.values.assign(grid.size(), 0.0);
  detail::parallel_for(grid.radial_size(), [&](std::size_t i) {
    for (std::size_t j = 0; j < grid.angular_size(); ++j) out.values[i * grid.angular_size() + j] = f(grid.node(i, j));
  });
  return out;
}

template <int Dim>
SampledFunction<Dim> sample(const TestFunction<Dim>& f, const PolarGrid<Dim>& grid) {
  return sample(grid, f.support_radius(), [&f](const Point<Dim>& x) { return f.value(x); });
}

template <int Dim>
constexpr int default_max_degree() {
  return Dim == 2 ? 32 : 16;
}

// Spectral truncation. max_degree is K (H^2, harmonics |k| <= K) or L (H^3,
// degrees l <= L).
struct SpectralConfig {
  double lambda_max = 20.0;
  double lambda_step = 0.05;
  int max_degree = -1;  // negative: the dimension default

  template <int Dim>
  int degree() const {
    return max_degree < 0 ? default_max_degree<Dim>() : max_degree;
  }

  std::size_t lambda_count() const { return static_cast<std::size_t>(std::llround(lambda_max / lambda_step)) + 1; }
};

// Lambda_max = bandwidth_radius / (smallest feature radius). Truncation error
// of the round trip is governed by lambda_max * radius; the lambda^2 weight
// on H^3 makes its tail heavier.
template <int Dim>
inline constexpr double kBandwidthRadius = Dim == 2 ? 150.0 : 300.0;

template <int Dim>
SpectralConfig default_spectral_config(double feature_radius) {
  if (!(feature_radius > 0.0)) throw ConfigError("default_spectral_config: feature radius must be positive");
  SpectralConfig cfg;
  cfg.lambda_max = kBandwidthRadius<Dim> / feature_radius;
  cfg.lambda_step = 0.05;
  cfg.max_degree = default_max_degree<Dim>();
  return cfg;
}

// Smallest radius among the terms of f: the finest spatial scale.
template <int Dim>
double feature_radius(const TestFunction<Dim>& f) {
  double r = 0.0;
  for (const auto& t : f.terms()) {
    const double tr = std::visit([](const auto& term) { return term.radius; }, t);
    r = r == 0.0 ? tr : std::min(r, tr);
  }
  return r == 0.0 ? 1.0 : r;
}

// Gauss-Legendre resolves exp(i lambda r) on (0, R) once the node count
// passes about lambda R / 3.
inline int recommended_radial_count(double support_radius, double lambda_max) {
  return std::max(64, static_cast<int>(std::ceil(lambda_max * support_radius / 3.0)) + 24);
}

template <int Dim>
PolarGrid<Dim> default_grid(double support_radius, const SpectralConfig& cfg) {
  const int k = cfg.degree<Dim>();
  return make_polar_grid<Dim>(support_radius, recommended_radial_count(support_radius, cfg.lambda_max),
                              std::max(Dim == 2 ? 128 : 40, 2 * k + 2));
}

// Radial nodes for the spatial profile. Around 100 Gauss-Legendre nodes per
// feature radius integrate a bump to 1e-8 relative; off-center bumps converge
// slowest, reaching 1e-10 at 160.
inline int feature_radial_count(double support_radius, double feature_radius, double nodes_per_feature = 96.0) {
  return static_cast<int>(std::ceil(nodes_per_feature * support_radius / feature_radius)) + 32;
}

template <int Dim>
PolarGrid<Dim> default_grid(const TestFunction<Dim>& f, const SpectralConfig& cfg, double nodes_per_feature = 96.0) {
  const double R = f.support_radius();
  const int k = cfg.degree<Dim>();
  const int radial = std::max(recommended_radial_count(R, cfg.lambda_max),
                              feature_radial_count(R, feature_radius(f), nodes_per_feature));
  return make_polar_grid<Dim>(R, radial, std::max(Dim == 2 ? 128 : 40, 2 * k + 2));
}

template <int Dim>
void validate(const SpectralConfig& cfg, const PolarGrid<Dim>& grid) {
  if (!(cfg.lambda_max > 0.0) || !std::isfinite(cfg.lambda_max))
    throw ConfigError("spectral config: lambda_max must be positive");
  if (!(cfg.lambda_step > 0.0) || cfg.lambda_step > cfg.lambda_max)
    throw ConfigError("spectral config: lambda_step must lie in (0, lambda_max]");
  const int k = cfg.degree<Dim>();
  if (grid.angular_count < 2 * k + 2)
    throw ConfigError("spectral config: angular count " + std::to_string(grid.angular_count) + " below 2K+2 = " +
                      std::to_string(2 * k + 2) + " aliases boundary modes");
}

namespace detail {

// Boundary-mode content of a sampled function, shell by shell.
template <int Dim>
struct ModalSource {
  BoundaryBasis<Dim> basis;
  std::vector<double> radii;
  std::vector<double> shell_weights;
  std::vector<Complex> modes;        // radial x basis.size()
  std::vector<int> active_degrees;   // ascending
  std::vector<int> degree_slot;      // degree -> index in active_degrees, or -1
  std::vector<std::size_t> active;   // modes with content
  std::vector<int> active_slot;      // per active mode: index into active_degrees

  // Mode vectors of Ff at lambda0 + k h, k < count; count x basis.size().
  std::vector<Complex> evaluate(Complex lambda0, double h, std::size_t count) const {
    const std::size_t nm = basis.size();
    std::vector<Complex> out(count * nm, Complex{});
    if (active.empty() || count == 0) return out;
    constexpr std::size_t chunk = 32;
    const std::size_t chunks = (count + chunk - 1) / chunk;
    const std::size_t nd = active_degrees.size();
    parallel_for(chunks, [&](std::size_t c) {
      const std::size_t k0 = c * chunk;
      const std::size_t kn = std::min(chunk, count - k0);
      const Complex first = lambda0 + static_cast<double>(k0) * h;
      const Complex last = lambda0 + static_cast<double>(k0 + kn - 1) * h;
      const double reach = std::max(std::abs(first), std::abs(last));
      std::vector<Complex> khat(kn * nd);
      for (std::size_t i = 0; i < radii.size(); ++i) {
        const auto rule = zonal_rule_for<Dim>(reach, radii[i], basis.max_degree());
        zonal_coefficients<Dim>(*rule, radii[i], first, h, kn, -1, active_degrees, khat.data());
        const Complex* fm = &modes[i * nm];
        const double w = shell_weights[i];
        for (std::size_t k = 0; k < kn; ++k) {
          Complex* row = &out[(k0 + k) * nm];
          const Complex* kh = &khat[k * nd];
          for (std::size_t a = 0; a < active.size(); ++a) row[active[a]] += w * fm[active[a]] * kh[active_slot[a]];
        }
      }
    });
    return out;
  }
};

template <int Dim>
std::shared_ptr<const ModalSource<Dim>> analyze(const SampledFunction<Dim>& f, int max_degree) {
  auto src = std::make_shared<ModalSource<Dim>>();
  src->basis = BoundaryBasis<Dim>(max_degree);
  const auto& grid = f.grid;
  const std::size_t nm = src->basis.size();
  const std::size_t na = grid.angular_size();
  src->radii = grid.radial_nodes;
  for (std::size_t i = 0; i < grid.radial_size(); ++i) src->shell_weights.push_back(grid.shell_weight(i));

  // conj(e_m(b_j)) * w_j
  std::vector<Complex> projector(na * nm);
  for (std::size_t j = 0; j < na; ++j) {
    const auto e = src->basis.values(grid.angular_nodes[j]);
    for (std::size_t m = 0; m < nm; ++m) projector[j * nm + m] = std::conj(e[m]) * grid.angular_weights[j];
  }
  src->modes.assign(grid.radial_size() * nm, Complex{});
  parallel_for(grid.radial_size(), [&](std::size_t i) {
    Complex* row = &src->modes[i * nm];
    for (std::size_t j = 0; j < na; ++j) {
      const double v = f.at(i, j);
      if (v == 0.0) continue;
      for (std::size_t m = 0; m < nm; ++m) row[m] += v * projector[j * nm + m];
    }
  });

  // Modes at rounding level relative to the strongest one carry no content.
  double peak = 0.0;
  std::vector<double> mode_peak(nm, 0.0);
  for (std::size_t i = 0; i < grid.radial_size(); ++i)
    for (std::size_t m = 0; m < nm; ++m) mode_peak[m] = std::max(mode_peak[m], std::abs(src->modes[i * nm + m]));
  for (double p : mode_peak) peak = std::max(peak, p);
  src->degree_slot.assign(static_cast<std::size_t>(max_degree) + 1, -1);
  for (std::size_t m = 0; m < nm; ++m) {
    if (peak > 0.0 && mode_peak[m] > 1e-14 * peak) {
      src->active.push_back(m);
      src->degree_slot[src->basis.degree(m)] = 0;
    } else {
      for (std::size_t i = 0; i < grid.radial_size(); ++i) src->modes[i * nm + m] = 0.0;
    }
  }
  for (int d = 0; d <= max_degree; ++d)
    if (src->degree_slot[d] == 0) {
      src->degree_slot[d] = static_cast<int>(src->active_degrees.size());
      src->active_degrees.push_back(d);
    }
  for (std::size_t m : src->active) src->active_slot.push_back(src->degree_slot[src->basis.degree(m)]);
  return src;
}

}  // namespace detail

// Spectral data: mode coefficients phi_m(lambda_q), lambda_q = q * step for
// q = 0..count-1, with an optional evaluator at arbitrary complex lambda.
template <int Dim>
class SpectralFunction {
 public:
  // Mode vectors at lambda0 + k h for k < count, count x modes row-major.
  using RowEvaluator = std::function<std::vector<Complex>(Complex lambda0, double h, std::size_t count)>;

  SpectralFunction() = default;
  SpectralFunction(BoundaryBasis<Dim> basis, double lambda_step, std::vector<Complex> table, double declared_radius,
                   RowEvaluator evaluator = {})
      : basis_(std::move(basis)),
        step_(lambda_step),
        table_(std::move(table)),
        radius_(declared_radius),
        evaluator_(std::move(evaluator)) {
    if (!(step_ > 0.0)) throw ConfigError("SpectralFunction: lambda step must be positive");
    if (basis_.size() == 0 || table_.size() % basis_.size() != 0)
      throw ConfigError("SpectralFunction: table size is not a multiple of the mode count");
  }

  // Tabulates `evaluator` on the real grid [0, lambda_max].
  static SpectralFunction from_evaluator(BoundaryBasis<Dim> basis, const SpectralConfig& cfg, double declared_radius,
                                         RowEvaluator evaluator) {
    auto table = evaluator(Complex{}, cfg.lambda_step, cfg.lambda_count());
    return SpectralFunction(std::move(basis), cfg.lambda_step, std::move(table), declared_radius, std::move(evaluator));
  }

  // Builds from a pointwise rule lambda -> mode vector.
  static SpectralFunction from_modes(BoundaryBasis<Dim> basis, const SpectralConfig& cfg, double declared_radius,
                                     std::function<std::vector<Complex>(Complex)> modes) {
    RowEvaluator row = [modes, n = basis.size()](Complex lambda0, double h, std::size_t count) {
      std::vector<Complex> out(count * n);
      for (std::size_t k = 0; k < count; ++k) {
        const auto v = modes(lambda0 + static_cast<double>(k) * h);
        std::copy(v.begin(), v.end(), out.begin() + static_cast<std::ptrdiff_t>(k * n));
      }
      return out;
    };
    return from_evaluator(std::move(basis), cfg, declared_radius, std::move(row));
  }

  const BoundaryBasis<Dim>& basis() const { return basis_; }
  std::size_t mode_count() const { return basis_.size(); }
  std::size_t lambda_count() const { return table_.size() / basis_.size(); }
  double lambda_step() const { return step_; }
  double lambda(std::size_t q) const { return static_cast<double>(q) * step_; }
  double lambda_max() const { return lambda(lambda_count() - 1); }
  std::vector<double> lambda_grid() const {
    std::vector<double> g(lambda_count());
    for (std::size_t q = 0; q < g.size(); ++q) g[q] = lambda(q);
    return g;
  }
  double declared_radius() const { return radius_; }
  bool has_evaluator() const { return static_cast<bool>(evaluator_); }

  const std::vector<Complex>& table() const { return table_; }
  Complex coefficient(std::size_t q, std::size_t m) const { return table_[q * mode_count() + m]; }

  std::vector<Complex> modes_on_row(Complex lambda0, double h, std::size_t count) const {
    if (evaluator_) return evaluator_(lambda0, h, count);
    std::vector<Complex> out;
    out.reserve(count * mode_count());
    for (std::size_t k = 0; k < count; ++k) {
      const auto v = interpolate(lambda0 + static_cast<double>(k) * h);
      out.insert(out.end(), v.begin(), v.end());
    }
    return out;
  }

  std::vector<Complex> modes_at(Complex lambda) const { return modes_on_row(lambda, 0.0, 1); }

  Complex eval(Complex lambda, const BoundaryPoint<Dim>& b) const { return combine(modes_at(lambda), b); }

  // sum_m modes[m] e_m(b)
  Complex combine(const std::vector<Complex>& modes, const BoundaryPoint<Dim>& b) const {
    const auto e = basis_.values(b);
    Complex s{};
    for (std::size_t m = 0; m < e.size(); ++m) s += modes[m] * e[m];
    return s;
  }

  // lambda -> multiplier(lambda) * phi(lambda), grid and evaluator alike.
  SpectralFunction multiplied(std::function<Complex(Complex)> multiplier) const {
    std::vector<Complex> table = table_;
    const std::size_t nm = mode_count();
    for (std::size_t q = 0; q < lambda_count(); ++q) {
      const Complex p = multiplier(Complex(lambda(q), 0.0));
      for (std::size_t m = 0; m < nm; ++m) table[q * nm + m] *= p;
    }
    RowEvaluator row;
    if (evaluator_) {
      row = [base = evaluator_, multiplier, nm](Complex lambda0, double h, std::size_t count) {
        auto v = base(lambda0, h, count);
        for (std::size_t k = 0; k < count; ++k) {
          const Complex p = multiplier(lambda0 + static_cast<double>(k) * h);
          for (std::size_t m = 0; m < nm; ++m) v[k * nm + m] *= p;
        }
        return v;
      };
    }
    return SpectralFunction(basis_, step_, std::move(table), radius_, std::move(row));
  }

  SpectralFunction scaled(Complex c) const {
    return multiplied([c](Complex) { return c; });
  }

  friend SpectralFunction operator+(const SpectralFunction& a, const SpectralFunction& b) {
    if (a.mode_count() != b.mode_count() || a.lambda_count() != b.lambda_count() || a.step_ != b.step_)
      throw ConfigError("SpectralFunction: sum of incompatible grids");
    std::vector<Complex> table = a.table_;
    for (std::size_t i = 0; i < table.size(); ++i) table[i] += b.table_[i];
    RowEvaluator row;
    if (a.evaluator_ && b.evaluator_) {
      row = [ea = a.evaluator_, eb = b.evaluator_](Complex lambda0, double h, std::size_t count) {
        auto v = ea(lambda0, h, count);
        const auto w = eb(lambda0, h, count);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += w[i];
        return v;
      };
    }
    return SpectralFunction(a.basis_, a.step_, std::move(table), std::max(a.radius_, b.radius_), std::move(row));
  }

 private:
  // Cubic interpolation along the real grid; the only option without a source.
  std::vector<Complex> interpolate(Complex lambda) const {
    if (lambda.imag() != 0.0 || lambda.real() < 0.0 || lambda.real() > lambda_max() * (1.0 + 1e-12))
      throw ConfigError("SpectralFunction: no evaluator; only real lambda on the tabulated range is available");
    const std::size_t n = lambda_count();
    const std::size_t nm = mode_count();
    const double u = std::min(lambda.real() / step_, static_cast<double>(n - 1));
    const auto q = std::min(static_cast<std::size_t>(u), n >= 2 ? n - 2 : 0);
    const double t = u - static_cast<double>(q);
    std::vector<Complex> out(nm);
    auto at = [&](long k, std::size_t m) {
      const long kk = std::clamp<long>(k, 0, static_cast<long>(n) - 1);
      return table_[static_cast<std::size_t>(kk) * nm + m];
    };
    for (std::size_t m = 0; m < nm; ++m) {
      const long k = static_cast<long>(q);
      const Complex p0 = at(k - 1, m), p1 = at(k, m), p2 = at(k + 1, m), p3 = at(k + 2, m);
      // Catmull-Rom
      out[m] = p1 + 0.5 * t * (p2 - p0 + t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + t * (3.0 * (p1 - p2) + p3 - p0)));
    }
    return out;
  }

  BoundaryBasis<Dim> basis_;
  double step_ = 1.0;
  std::vector<Complex> table_;
  double radius_ = 0.0;
  RowEvaluator evaluator_;
};

// Mode route: tabulates Ff on [0, lambda_max] and keeps the quadrature
// available at complex lambda.
template <int Dim>
SpectralFunction<Dim> forward_transform(const SampledFunction<Dim>& f, const SpectralConfig& cfg) {
  validate<Dim>(cfg, f.grid);
  if (f.grid.support_radius < f.declared_radius * (1.0 - 1e-12))
    throw ConfigError("forward_transform: grid radius is smaller than the declared support");
  auto src = detail::analyze(f, cfg.degree<Dim>());
  typename SpectralFunction<Dim>::RowEvaluator row = [src](Complex lambda0, double h, std::size_t count) {
    return src->evaluate(lambda0, h, count);
  };
  return SpectralFunction<Dim>::from_evaluator(src->basis, cfg, f.declared_radius, std::move(row));
}

template <int Dim>
SpectralFunction<Dim> forward_transform(const TestFunction<Dim>& f, const PolarGrid<Dim>& grid, const SpectralConfig& cfg) {
  if (grid.support_radius < f.support_radius() * (1.0 - 1e-12))
    throw ConfigError("forward_transform: grid radius is smaller than the support of f");
  return forward_transform(sample(f, grid), cfg);
}

// Direct quadrature of the defining integral at one (lambda, b).
template <int Dim>
Complex helgason_forward(const SampledFunction<Dim>& f, Complex lambda, const BoundaryPoint<Dim>& b,
                         double strip = 2.0 * ModelParams<Dim>::rho) {
  if (f.grid.support_radius < f.declared_radius * (1.0 - 1e-12))
    throw ConfigError("helgason_forward: grid radius is smaller than the declared support");
  if (std::abs(lambda.imag()) > strip)
    throw ConfigError("helgason_forward: |Im lambda| exceeds the configured strip half-width");
  const Complex c = Complex(0.0, -1.0) * lambda + ModelParams<Dim>::rho;
  const auto& g = f.grid;
  Complex total{};
  for (std::size_t i = 0; i < g.radial_size(); ++i) {
    Complex shell{};
    for (std::size_t j = 0; j < g.angular_size(); ++j) {
      const double v = f.at(i, j);
      if (v == 0.0) continue;
      shell += g.angular_weights[j] * v * std::exp(c * horocycle_bracket(g.node(i, j), b));
    }
    total += g.shell_weight(i) * shell;
  }
  return total;
}

template <int Dim>
Complex helgason_forward(const TestFunction<Dim>& f, const PolarGrid<Dim>& grid, Complex lambda,
                         const BoundaryPoint<Dim>& b, double strip = 2.0 * ModelParams<Dim>::rho) {
  if (grid.support_radius < f.support_radius() * (1.0 - 1e-12))
    throw ConfigError("helgason_forward: grid radius is smaller than the support of f");
  return helgason_forward(sample(f, grid), lambda, b, strip);
}

// Shape of the Plancherel density: lambda tanh(pi lambda) on H^2, lambda^2 on H^3.
template <int Dim>
double plancherel_shape(double lambda) {
  if constexpr (Dim == 2) return lambda * std::tanh(std::numbers::pi * lambda);
  else return lambda * lambda;
}

template <int Dim>
double c_density(double lambda, double constant) {
  return constant * plancherel_shape<Dim>(lambda);
}

template <int Dim>
struct PlancherelDensity {
  double constant = 1.0;
  std::function<double(double)> shape = plancherel_shape<Dim>;

  double operator()(double lambda) const { return constant * shape(lambda); }
};

// Fraction of the Plancherel mass int density |phi|^2 carried by the last
// tenth of the lambda range.
template <int Dim>
double spectral_tail_fraction(const SpectralFunction<Dim>& phi, const PlancherelDensity<Dim>& density) {
  const std::size_t n = phi.lambda_count();
  const std::size_t start = static_cast<std::size_t>(0.9 * static_cast<double>(n - 1));
  double total = 0.0, tail = 0.0;
  for (std::size_t q = 0; q < n; ++q) {
    double mass = 0.0;
    for (std::size_t m = 0; m < phi.mode_count(); ++m) mass += std::norm(phi.coefficient(q, m));
    mass *= std::abs(density(phi.lambda(q)));
    total += mass;
    if (q >= start) tail += mass;
  }
  return total > 0.0 ? tail / total : 0.0;
}

namespace detail {

template <int Dim>
void warn_tail(const SpectralFunction<Dim>& phi, const PlancherelDensity<Dim>& density, Diagnostics* diag) {
  if (diag == nullptr) return;
  const double frac = spectral_tail_fraction(phi, density);
  if (frac > 1e-8)
    diag->warn("inverse: last-decade spectral mass fraction " + std::to_string(frac) +
               " exceeds 1e-8; lambda_max is too small for this function");
}

// Trapezoid weights times density times phi, for the modes that carry content.
template <int Dim>
struct InverseWeights {
  std::vector<std::size_t> active;
  std::vector<int> degrees;      // ascending distinct degrees of active modes
  std::vector<int> degree_slot;  // degree -> index into degrees
  std::vector<int> active_slot;  // per active mode
  std::vector<Complex> weighted; // lambda x active
};

template <int Dim>
InverseWeights<Dim> inverse_weights(const SpectralFunction<Dim>& phi, const PlancherelDensity<Dim>& density) {
  InverseWeights<Dim> iw;
  const std::size_t n = phi.lambda_count();
  const std::size_t nm = phi.mode_count();
  for (std::size_t m = 0; m < nm; ++m) {
    bool any = false;
    for (std::size_t q = 0; q < n && !any; ++q) any = phi.coefficient(q, m) != Complex{};
    if (any) iw.active.push_back(m);
  }
  const int maxd = phi.basis().max_degree();
  iw.degree_slot.assign(static_cast<std::size_t>(maxd) + 1, -1);
  for (std::size_t m : iw.active) iw.degree_slot[phi.basis().degree(m)] = 0;
  for (int d = 0; d <= maxd; ++d)
    if (iw.degree_slot[d] == 0) {
      iw.degree_slot[d] = static_cast<int>(iw.degrees.size());
      iw.degrees.push_back(d);
    }
  for (std::size_t m : iw.active) iw.active_slot.push_back(iw.degree_slot[phi.basis().degree(m)]);
  iw.weighted.resize(n * iw.active.size());
  const double h = phi.lambda_step();
  for (std::size_t q = 0; q < n; ++q) {
    const double w = h * ((q == 0 || q + 1 == n) ? 0.5 : 1.0) * density(phi.lambda(q));
    for (std::size_t a = 0; a < iw.active.size(); ++a) iw.weighted[q * iw.active.size() + a] = w * phi.coefficient(q, iw.active[a]);
  }
  return iw;
}

// g_m(r) such that the inverse at radius r and direction w is Re sum_m g_m e_m(w).
template <int Dim>
std::vector<Complex> inverse_radial_modes(const SpectralFunction<Dim>& phi, const InverseWeights<Dim>& iw, double r) {
  std::vector<Complex> g(phi.mode_count(), Complex{});
  if (iw.active.empty()) return g;
  const std::size_t n = phi.lambda_count();
  const std::size_t na = iw.active.size();
  const std::size_t nd = iw.degrees.size();
  constexpr std::size_t chunk = 32;
  std::vector<Complex> kcheck(chunk * nd);
  for (std::size_t k0 = 0; k0 < n; k0 += chunk) {
    const std::size_t kn = std::min(chunk, n - k0);
    const double reach = phi.lambda(k0 + kn - 1);
    const auto rule = zonal_rule_for<Dim>(reach, r, phi.basis().max_degree());
    zonal_coefficients<Dim>(*rule, r, Complex(phi.lambda(k0), 0.0), phi.lambda_step(), kn, +1, iw.degrees, kcheck.data());
    for (std::size_t k = 0; k < kn; ++k) {
      const Complex* wrow = &iw.weighted[(k0 + k) * na];
      const Complex* kc = &kcheck[k * nd];
      for (std::size_t a = 0; a < na; ++a) g[iw.active[a]] += wrow[a] * kc[iw.active_slot[a]];
    }
  }
  return g;
}

}  // namespace detail

// Inverse at a batch of points; points sharing a radius share the lambda integral.
template <int Dim>
std::vector<double> helgason_inverse(const SpectralFunction<Dim>& phi, const PlancherelDensity<Dim>& density,
                                     const std::vector<Point<Dim>>& xs, Diagnostics* diag = nullptr) {
  detail::warn_tail(phi, density, diag);
  const auto iw = detail::inverse_weights(phi, density);
  std::vector<double> radii(xs.size());
  for (std::size_t p = 0; p < xs.size(); ++p) radii[p] = xs[p].radius();
  std::vector<double> unique = radii;
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());

  std::vector<std::vector<Complex>> g(unique.size());
  detail::parallel_for(unique.size(), [&](std::size_t u) { g[u] = detail::inverse_radial_modes(phi, iw, unique[u]); });

  std::vector<double> out(xs.size());
  for (std::size_t p = 0; p < xs.size(); ++p) {
    const auto u = static_cast<std::size_t>(std::lower_bound(unique.begin(), unique.end(), radii[p]) - unique.begin());
    out[p] = phi.combine(g[u], xs[p].direction()).real();
  }
  return out;
}

template <int Dim>
double helgason_inverse(const SpectralFunction<Dim>& phi, const PlancherelDensity<Dim>& density, const Point<Dim>& x,
                        Diagnostics* diag = nullptr) {
  return helgason_inverse(phi, density, std::vector<Point<Dim>>{x}, diag).front();
}

// int_B exp((i lambda + rho) A(x, b)) db over the grid's boundary rule.
template <int Dim>
Complex spherical_function(Complex lambda, const Point<Dim>& x, const PolarGrid<Dim>& grid) {
  const Complex c = Complex(0.0, 1.0) * lambda + ModelParams<Dim>::rho;
  Complex s{};
  for (std::size_t j = 0; j < grid.angular_size(); ++j)
    s += grid.angular_weights[j] * std::exp(c * horocycle_bracket(x, grid.angular_nodes[j]));
  return s;
}

// Points at which round trips are compared: the origin plus a polar lattice
// reaching 10% past the support.
template <int Dim>
std::vector<Point<Dim>> evaluation_points(double support_radius, int radial = 40, int angular = Dim == 2 ? 64 : 16) {
  const auto g = make_polar_grid<Dim>(1.1 * support_radius, radial, angular);
  std::vector<Point<Dim>> pts{Point<Dim>::origin()};
  for (std::size_t i = 0; i < g.radial_size(); ++i)
    for (std::size_t j = 0; j < g.angular_size(); ++j) pts.push_back(g.node(i, j));
  return pts;
}

struct RoundTripError {
  double sup_error = 0.0;  // relative to sup |f|
  double l2_error = 0.0;   // relative, volume-weighted over the evaluation lattice
};

template <int Dim>
RoundTripError compare_on_points(const TestFunction<Dim>& f, const std::vector<Point<Dim>>& pts,
                                 const std::vector<double>& approx) {
  double fmax = 0.0, emax = 0.0, e2 = 0.0, f2 = 0.0;
  for (std::size_t p = 0; p < pts.size(); ++p) {
    const double v = f.value(pts[p]);
    const double e = approx[p] - v;
    fmax = std::max(fmax, std::abs(v));
    emax = std::max(emax, std::abs(e));
    // sinh^(n-1) volume weight; the lattice is a product rule in r
    const double w = std::pow(std::sinh(std::max(pts[p].radius(), 1e-12)), Dim - 1);
    e2 += w * e * e;
    f2 += w * v * v;
  }
  RoundTripError r;
  r.sup_error = fmax > 0.0 ? emax / fmax : emax;
  r.l2_error = f2 > 0.0 ? std::sqrt(e2 / f2) : std::sqrt(e2);
  return r;
}

template <int Dim>
RoundTripError round_trip_error(const TestFunction<Dim>& f, const PolarGrid<Dim>& grid, const SpectralConfig& cfg,
                                const PlancherelDensity<Dim>& density, Diagnostics* diag = nullptr) {
  const auto phi = forward_transform(f, grid, cfg);
  const auto pts = evaluation_points<Dim>(f.support_radius());
  return compare_on_points(f, pts, helgason_inverse(phi, density, pts, diag));
}

struct Calibration {
  double constant = 0.0;
  double residual = 0.0;  // sup |kappa u - f| / sup |f| at the optimum
};

// The scalar kappa minimizing sup |kappa * u - f| over the evaluation points,
// where u is the inverse with the given density shape at unit constant.
template <int Dim>
Calibration fit_inversion_constant(const TestFunction<Dim>& f, const PolarGrid<Dim>& grid, const SpectralConfig& cfg,
                                   std::function<double(double)> shape = plancherel_shape<Dim>) {
  const auto phi = forward_transform(f, grid, cfg);
  const auto pts = evaluation_points<Dim>(f.support_radius());
  const PlancherelDensity<Dim> unit{1.0, std::move(shape)};
  const auto u = helgason_inverse(phi, unit, pts);
  std::vector<double> fv(pts.size());
  double fmax = 0.0, uf = 0.0, uu = 0.0;
  for (std::size_t p = 0; p < pts.size(); ++p) {
    fv[p] = f.value(pts[p]);
    fmax = std::max(fmax, std::abs(fv[p]));
    uf += u[p] * fv[p];
    uu += u[p] * u[p];
  }
  if (!(uu > 0.0) || !(fmax > 0.0)) throw CalibrationError("calibrate_inversion: degenerate calibration function");
  auto cost = [&](double k) {
    double m = 0.0;
    for (std::size_t p = 0; p < pts.size(); ++p) m = std::max(m, std::abs(k * u[p] - fv[p]));
    return m;
  };
  // The cost is convex in kappa; golden section around the least-squares fit.
  const double ls = uf / uu;
  double a = std::min(0.5 * ls, 1.5 * ls), b = std::max(0.5 * ls, 1.5 * ls);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = cost(c), fd = cost(d);
  for (int it = 0; it < 200 && (b - a) > 1e-15 * std::abs(ls); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = cost(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = cost(d);
    }
  }
  const double kappa = 0.5 * (a + b);
  return {kappa, cost(kappa) / fmax};
}

// As fit_inversion_constant with the standard density shape; throws when
// the optimum leaves a residual above 1e-4, which points at a density or
// quadrature defect rather than a constant.
template <int Dim>
double calibrate_inversion(const TestFunction<Dim>& f, const PolarGrid<Dim>& grid, const SpectralConfig& cfg,
                           double* residual = nullptr) {
  const Calibration cal = fit_inversion_constant(f, grid, cfg);
  if (residual != nullptr) *residual = cal.residual;
  if (!(cal.constant > 0.0) || cal.residual > 1e-4)
    throw CalibrationError("calibrate_inversion: residual " + std::to_string(cal.residual) +
                           " after scaling exceeds 1e-4");
  return cal.constant;
}

// The inversion constant for the library's conventions, calibrated once on
// the unit-radius canonical bump.
template <int Dim>
const PlancherelDensity<Dim>& calibrated_density() {
  static const PlancherelDensity<Dim> density = [] {
    const auto f = TestFunction<Dim>::canonical(1.0);
    SpectralConfig cfg = default_spectral_config<Dim>(1.0);
    cfg.max_degree = 0;
    const auto grid = make_polar_grid<Dim>(1.0, recommended_radial_count(1.0, cfg.lambda_max), 8);
    return PlancherelDensity<Dim>{calibrate_inversion(f, grid, cfg)};
  }();
  return density;
}

// ---------------------------------------------------------------------------
// Boundary modes of spectral data.

template <int Dim>
struct ModeDecomposition {
  BoundaryBasis<Dim> basis;
  std::vector<Complex> lambdas;
  std::vector<Complex> coefficients;  // lambda x mode
  std::vector<double> tail;           // per lambda: squared L^2(B) mass outside the retained modes

  std::size_t mode_count() const { return basis.size(); }
  Complex coefficient(std::size_t q, std::size_t m) const { return coefficients[q * mode_count() + m]; }

  Complex reconstruct(std::size_t q, const BoundaryPoint<Dim>& b) const {
    const auto e = basis.values(b);
    Complex s{};
    for (std::size_t m = 0; m < e.size(); ++m) s += coefficient(q, m) * e[m];
    return s;
  }

  // sqrt(sum_q |phi_m(lambda_q)|^2) per mode.
  std::vector<double> mode_norms() const {
    std::vector<double> n(mode_count(), 0.0);
    for (std::size_t q = 0; q < lambdas.size(); ++q)
      for (std::size_t m = 0; m < mode_count(); ++m) n[m] += std::norm(coefficient(q, m));
    for (auto& v : n) v = std::sqrt(v);
    return n;
  }

  double max_tail() const {
    double t = 0.0;
    for (double v : tail) t = std::max(t, v);
    return t;
  }
};

// Values phi(lambda_q, b_j) on a boundary rule.
template <int Dim>
struct BoundarySamples {
  std::vector<Complex> lambdas;
  BoundaryRule<Dim> rule;
  std::vector<Complex> values;  // lambda x node
};

template <int Dim>
BoundarySamples<Dim> sample_on_boundary(const SpectralFunction<Dim>& phi, const std::vector<Complex>& lambdas,
                                        int angular_count) {
  BoundarySamples<Dim> s{lambdas, make_boundary_rule<Dim>(angular_count), {}};
  const std::size_t nb = s.rule.size();
  s.values.resize(lambdas.size() * nb);
  std::vector<std::vector<Complex>> basis_at(nb);
  for (std::size_t j = 0; j < nb; ++j) basis_at[j] = phi.basis().values(s.rule.nodes[j]);
  for (std::size_t q = 0; q < lambdas.size(); ++q) {
    const auto modes = phi.modes_at(lambdas[q]);
    for (std::size_t j = 0; j < nb; ++j) {
      Complex v{};
      for (std::size_t m = 0; m < modes.size(); ++m) v += modes[m] * basis_at[j][m];
      s.values[q * nb + j] = v;
    }
  }
  return s;
}

// Direct quadrature of the defining integral at every (lambda, node).
template <int Dim>
BoundarySamples<Dim> sample_on_boundary(const SampledFunction<Dim>& f, const std::vector<Complex>& lambdas,
                                        int angular_count, double strip = 2.0 * ModelParams<Dim>::rho) {
  BoundarySamples<Dim> s{lambdas, make_boundary_rule<Dim>(angular_count), {}};
  const std::size_t nb = s.rule.size();
  s.values.resize(lambdas.size() * nb);
  detail::parallel_for(lambdas.size() * nb, [&](std::size_t idx) {
    s.values[idx] = helgason_forward(f, lambdas[idx / nb], s.rule.nodes[idx % nb], strip);
  });
  return s;
}

// Projects boundary samples onto modes up to max_degree. The tail is the
// quadrature norm minus the retained mode energy (Parseval).
template <int Dim>
ModeDecomposition<Dim> boundary_mode_decompose(const BoundarySamples<Dim>& s, int max_degree) {
  if (s.rule.angular_count < 2 * max_degree + 2)
    throw ConfigError("boundary_mode_decompose: angular count " + std::to_string(s.rule.angular_count) +
                      " below 2K+2 aliases the requested modes");
  ModeDecomposition<Dim> d{BoundaryBasis<Dim>(max_degree), s.lambdas, {}, {}};
  const std::size_t nm = d.basis.size();
  const std::size_t nb = s.rule.size();
  std::vector<Complex> projector(nb * nm);
  for (std::size_t j = 0; j < nb; ++j) {
    const auto e = d.basis.values(s.rule.nodes[j]);
    for (std::size_t m = 0; m < nm; ++m) projector[j * nm + m] = std::conj(e[m]) * s.rule.weights[j];
  }
  d.coefficients.assign(s.lambdas.size() * nm, Complex{});
  d.tail.assign(s.lambdas.size(), 0.0);
  for (std::size_t q = 0; q < s.lambdas.size(); ++q) {
    double energy = 0.0;
    for (std::size_t j = 0; j < nb; ++j) {
      const Complex v = s.values[q * nb + j];
      energy += s.rule.weights[j] * std::norm(v);
      for (std::size_t m = 0; m < nm; ++m) d.coefficients[q * nm + m] += v * projector[j * nm + m];
    }
    double kept = 0.0;
    for (std::size_t m = 0; m < nm; ++m) kept += std::norm(d.coefficients[q * nm + m]);
    d.tail[q] = std::max(0.0, energy - kept);
  }
  return d;
}

// Truncates tabulated modes to degree max_degree; the tail is the energy of
// the dropped modes.
template <int Dim>
ModeDecomposition<Dim> boundary_mode_decompose(const SpectralFunction<Dim>& phi, int max_degree) {
  if (max_degree > phi.basis().max_degree())
    throw ConfigError("boundary_mode_decompose: requested degree exceeds the modes carried by phi");
  ModeDecomposition<Dim> d{BoundaryBasis<Dim>(max_degree), {}, {}, {}};
  const std::size_t n = phi.lambda_count();
  const std::size_t nm = d.basis.size();
  for (std::size_t q = 0; q < n; ++q) d.lambdas.emplace_back(phi.lambda(q), 0.0);
  d.coefficients.resize(n * nm);
  d.tail.assign(n, 0.0);
  for (std::size_t m = 0; m < phi.mode_count(); ++m) {
    const int deg = phi.basis().degree(m);
    std::size_t target = 0;
    if (deg <= max_degree) {
      if constexpr (Dim == 2) target = d.basis.index(phi.basis().label(m));
      else target = d.basis.index(deg, phi.basis().order(m));
    }
    for (std::size_t q = 0; q < n; ++q) {
      const Complex v = phi.coefficient(q, m);
      if (deg <= max_degree) d.coefficients[q * nm + target] = v;
      else d.tail[q] += std::norm(v);
    }
  }
  return d;
}

}  // namespace horofourier
