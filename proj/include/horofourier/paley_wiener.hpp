#pragma once

// Growth of spectral functions on the complex strip.
//
// A function supported in the closed R-ball has a transform with
//
//   ||phi(lambda)||_{L^2(B)} <= C_N exp(R |Im lambda|) (1 + |lambda|)^(-N)
//
// for every N; the smallest C_N is the seminorm |||phi|||_N. Everything here
// samples that bound: grid maxima with local refinement, the growth rate
// along the imaginary axis, and the Weyl symmetry of the inversion integrand.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "horofourier/boundary_modes.hpp"
#include "horofourier/detail/parallel.hpp"
#include "horofourier/errors.hpp"
#include "horofourier/geometry.hpp"
#include "horofourier/test_function.hpp"
#include "horofourier/transform.hpp"

namespace horofourier {

// Nodes lambda = x + i y with x = Lambda j / n (|j| <= n) and y = S k / M
// (|k| <= M). An odd M keeps the rows off y = +-S/2, which is +-i rho at the
// default S = 2 rho.
struct StripGrid {
  std::vector<double> real_nodes;
  std::vector<double> imag_nodes;
  double half_width = 0.0;

  double lambda_max() const { return real_nodes.back(); }
  double real_spacing() const { return real_nodes.size() > 1 ? real_nodes[1] - real_nodes[0] : 0.0; }
  int real_intervals() const { return static_cast<int>(real_nodes.size() / 2); }
  int imag_rows() const { return static_cast<int>(imag_nodes.size() / 2); }
  std::size_t size() const { return real_nodes.size() * imag_nodes.size(); }

  // Halved real spacing and M -> 2M + 1 rows.
  StripGrid doubled() const;
};

inline StripGrid make_strip_grid(double lambda_max, double half_width, int real_intervals, int imag_rows) {
  if (!(lambda_max > 0.0) || !std::isfinite(lambda_max)) throw ConfigError("strip grid: lambda_max must be positive");
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw ConfigError("strip grid: half-width must be positive");
  if (real_intervals < 1 || imag_rows < 1) throw ConfigError("strip grid: need at least one interval per direction");
  StripGrid g;
  g.half_width = half_width;
  for (int j = -real_intervals; j <= real_intervals; ++j) g.real_nodes.push_back(lambda_max * j / real_intervals);
  for (int k = -imag_rows; k <= imag_rows; ++k) g.imag_nodes.push_back(half_width * k / imag_rows);
  return g;
}

inline StripGrid StripGrid::doubled() const {
  return make_strip_grid(lambda_max(), half_width, 2 * real_intervals(), 2 * imag_rows() + 1);
}

// Real extent of the tabulated range, spacing 0.5 / R, three rows per
// half-strip. Peaks are polished afterwards, so the grid only has to land
// in the right basin.
template <int Dim>
StripGrid default_strip_grid(const SpectralFunction<Dim>& phi, double R, double half_width = 2.0 * ModelParams<Dim>::rho) {
  if (!(R > 0.0)) throw ConfigError("strip grid: radius must be positive");
  const double lambda_max = phi.lambda_max();
  const int intervals = std::max(8, static_cast<int>(std::ceil(lambda_max * R / 0.5)));
  return make_strip_grid(lambda_max, half_width, intervals, 3);
}

// ||phi(lambda)||_{L^2(B)} for lambda = lambda0 + k h, k < count. The basis is
// orthonormal, so the boundary norm is the l2 norm of the mode vector.
template <int Dim>
std::vector<double> boundary_norms(const SpectralFunction<Dim>& phi, Complex lambda0, double h, std::size_t count) {
  const auto modes = phi.modes_on_row(lambda0, h, count);
  const std::size_t nm = phi.mode_count();
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    double s = 0.0;
    for (std::size_t m = 0; m < nm; ++m) s += std::norm(modes[k * nm + m]);
    out[k] = std::sqrt(s);
  }
  return out;
}

template <int Dim>
double boundary_norm(const SpectralFunction<Dim>& phi, Complex lambda) {
  return boundary_norms(phi, lambda, 0.0, 1)[0];
}

// Memoized rows of boundary norms. The seminorms for every N and R are
// reweightings of the same samples, so one sampler serves a whole report.
// A sampler may restrict the norm to a subset of modes; masked samplers made
// from one another share the raw mode rows. Not thread-safe.
template <int Dim>
class StripSampler {
 public:
  explicit StripSampler(const SpectralFunction<Dim>& phi)
      : phi_(&phi), modes_(std::make_shared<ModeRows>()) {}

  // Same function and mode cache, norm over the modes with mask[m] set.
  StripSampler(const StripSampler& other, std::vector<bool> mask)
      : phi_(other.phi_), modes_(other.modes_), mask_(std::move(mask)) {
    if (mask_.size() != phi_->mode_count()) throw ConfigError("StripSampler: mask size differs from the mode count");
  }

  const SpectralFunction<Dim>& function() const { return *phi_; }

  // Norms at x_j + i y for the given real nodes (equispaced).
  const std::vector<double>& row(const std::vector<double>& xs, double y) {
    const double h = xs.size() > 1 ? xs[1] - xs[0] : 0.0;
    const auto key = std::make_tuple(xs.front(), h, xs.size(), y);
    auto it = rows_.find(key);
    if (it == rows_.end()) {
      auto m = modes_->find(key);
      if (m == modes_->end()) m = modes_->emplace(key, phi_->modes_on_row(Complex(xs.front(), y), h, xs.size())).first;
      it = rows_.emplace(key, norms(m->second, xs.size())).first;
    }
    return it->second;
  }

  double at(Complex lambda) const { return norms(phi_->modes_at(lambda), 1)[0]; }

 private:
  using Key = std::tuple<double, double, std::size_t, double>;
  using ModeRows = std::map<Key, std::vector<Complex>>;

  std::vector<double> norms(const std::vector<Complex>& modes, std::size_t count) const {
    const std::size_t nm = phi_->mode_count();
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) {
      double s = 0.0;
      for (std::size_t m = 0; m < nm; ++m)
        if (mask_.empty() || mask_[m]) s += std::norm(modes[k * nm + m]);
      out[k] = std::sqrt(s);
    }
    return out;
  }

  const SpectralFunction<Dim>* phi_;
  std::shared_ptr<ModeRows> modes_;
  std::vector<bool> mask_;
  std::map<Key, std::vector<double>> rows_;
};

inline double seminorm_weight(Complex lambda, double R, int N) {
  return std::exp(-R * std::abs(lambda.imag())) * std::pow(1.0 + std::abs(lambda), N);
}

struct SeminormOptions {
  bool check_refinement = true;  // recompute on the doubled grid
  bool check_divergence = true;  // widen the strip geometrically
  int refine_peaks = 4;          // local maxima polished by golden section
  double widen_until = 64.0;     // last strip half-width times R
};

struct SeminormReport {
  int order = 0;
  double radius = 0.0;
  double value = 0.0;       // refined maximum
  double grid_value = 0.0;  // raw grid maximum
  Complex argmax{};
  std::optional<double> doubled_value;
  std::optional<double> refinement_change;  // |doubled - value| / value
  std::vector<std::pair<double, double>> extension;  // (strip half-width, maximum over that strip)
  bool at_real_boundary = false;
  bool diverged = false;

  bool finite() const { return !diverged && std::isfinite(value); }
};

namespace detail {

struct StripSamples {
  std::vector<double> values;  // imag-major: values[k * nx + j]
  std::size_t nx = 0, ny = 0;
  double at(std::size_t k, std::size_t j) const { return values[k * nx + j]; }
};

template <int Dim>
StripSamples sample_maximand(StripSampler<Dim>& sampler, double R, int N, const std::vector<double>& xs,
                             const std::vector<double>& ys) {
  StripSamples s;
  s.nx = xs.size();
  s.ny = ys.size();
  s.values.resize(s.nx * s.ny);
  for (std::size_t k = 0; k < ys.size(); ++k) {
    const auto& norms = sampler.row(xs, ys[k]);
    for (std::size_t j = 0; j < xs.size(); ++j)
      s.values[k * s.nx + j] = seminorm_weight(Complex(xs[j], ys[k]), R, N) * norms[j];
  }
  return s;
}

// Maximizes g on [a, b]; g is unimodal near a grid peak.
template <class G>
std::pair<double, double> golden_max(G&& g, double a, double b, double tol) {
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double gc = g(c), gd = g(d);
  while (b - a > tol) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = g(d);
    }
  }
  return gc > gd ? std::pair{c, gc} : std::pair{d, gd};
}

struct GridMax {
  double value = 0.0;
  double grid_value = 0.0;
  Complex argmax{};
  bool at_real_boundary = false;
};

template <int Dim>
GridMax refined_max(StripSampler<Dim>& sampler, double R, int N, const StripGrid& strip, int peaks) {
  const auto& xs = strip.real_nodes;
  const auto& ys = strip.imag_nodes;
  const auto s = sample_maximand(sampler, R, N, xs, ys);
  GridMax out;
  std::size_t bk = 0, bj = 0;
  for (std::size_t k = 0; k < s.ny; ++k)
    for (std::size_t j = 0; j < s.nx; ++j)
      if (s.at(k, j) > out.grid_value) {
        out.grid_value = s.at(k, j);
        bk = k;
        bj = j;
      }
  out.value = out.grid_value;
  out.argmax = Complex(xs[bj], ys[bk]);
  // Still rising at the edge: the outermost band, at least one oscillation
  // period 2 pi / R of a radius-R transform wide, holds the maximum.
  const double L = strip.lambda_max();
  const double band = std::max(0.1 * L, 2.0 * std::numbers::pi / R);
  out.at_real_boundary = out.grid_value > 0.0 && std::abs(xs[bj]) >= L - band;
  if (out.grid_value == 0.0 || peaks <= 0) return out;

  // Local maxima over the 8-neighbourhood, largest first.
  std::vector<std::pair<double, std::pair<std::size_t, std::size_t>>> cand;
  for (std::size_t k = 0; k < s.ny; ++k)
    for (std::size_t j = 0; j < s.nx; ++j) {
      const double v = s.at(k, j);
      bool peak = v > 0.0;
      for (int dk = -1; dk <= 1 && peak; ++dk)
        for (int dj = -1; dj <= 1 && peak; ++dj) {
          const long kk = static_cast<long>(k) + dk, jj = static_cast<long>(j) + dj;
          if ((dk == 0 && dj == 0) || kk < 0 || jj < 0 || kk >= static_cast<long>(s.ny) || jj >= static_cast<long>(s.nx))
            continue;
          if (s.at(static_cast<std::size_t>(kk), static_cast<std::size_t>(jj)) > v) peak = false;
        }
      if (peak) cand.push_back({v, {k, j}});
    }
  std::sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  if (cand.size() > static_cast<std::size_t>(peaks)) cand.resize(static_cast<std::size_t>(peaks));

  const double hx = strip.real_spacing();
  const double hy = ys.size() > 1 ? ys[1] - ys[0] : 0.0;
  const double S = strip.half_width;
  std::vector<std::pair<double, Complex>> polished(cand.size());
  detail::parallel_for(cand.size(), [&](std::size_t c) {
    double x = xs[cand[c].second.second], y = ys[cand[c].second.first];
    double best = cand[c].first;
    auto m = [&](double re, double im) {
      const Complex l(re, im);
      return seminorm_weight(l, R, N) * sampler.at(l);
    };
    for (int pass = 0; pass < 2; ++pass) {
      const auto [nx, vx] = golden_max([&](double t) { return m(t, y); }, std::max(-L, x - hx), std::min(L, x + hx), 1e-4 * hx);
      if (vx > best) {
        best = vx;
        x = nx;
      }
      if (hy > 0.0) {
        const auto [ny, vy] =
            golden_max([&](double t) { return m(x, t); }, std::max(-S, y - hy), std::min(S, y + hy), 1e-4 * hy);
        if (vy > best) {
          best = vy;
          y = ny;
        }
      }
    }
    polished[c] = {best, Complex(x, y)};
  });
  for (const auto& [v, l] : polished)
    if (v > out.value) {
      out.value = v;
      out.argmax = l;
    }
  return out;
}

}  // namespace detail

// max over the strip of exp(-R |Im lambda|) (1 + |lambda|)^N ||phi(lambda)||,
// polished around the largest grid peaks.
//
// Refinement: the same on the doubled grid. Divergence: the strip is widened
// S -> 2S -> 4S ... until its half-width reaches widen_until / R, sampling
// rows at 1.5 and 2 times each previous width on every fourth real node. The
// maximand of a function in H^R stays bounded; a persistent rise over the
// last two widenings, or a grid maximum in the outermost real band, is
// reported as divergence.
template <int Dim>
SeminormReport seminorm_report(StripSampler<Dim>& sampler, double R, int N, const StripGrid& strip,
                               const SeminormOptions& opt = {}) {
  if (!(R > 0.0)) throw ConfigError("seminorm: radius must be positive");
  if (N < 0) throw ConfigError("seminorm: order must be non-negative");
  if (!sampler.function().has_evaluator())
    throw ConfigError("seminorm: complex lambda needs a source-backed spectral function");

  SeminormReport rep;
  rep.order = N;
  rep.radius = R;
  const auto base = detail::refined_max(sampler, R, N, strip, opt.refine_peaks);
  rep.value = base.value;
  rep.grid_value = base.grid_value;
  rep.argmax = base.argmax;
  rep.at_real_boundary = base.at_real_boundary;

  if (opt.check_refinement) {
    const auto fine = detail::refined_max(sampler, R, N, strip.doubled(), opt.refine_peaks);
    rep.doubled_value = fine.value;
    rep.refinement_change = rep.value > 0.0 ? std::abs(fine.value - rep.value) / rep.value : 0.0;
  }

  bool growing = false;
  if (opt.check_divergence && rep.value > 0.0) {
    std::vector<double> xs;
    for (std::size_t j = 0; j < strip.real_nodes.size(); j += 4) xs.push_back(strip.real_nodes[j]);
    double width = strip.half_width;
    double running = rep.grid_value;
    rep.extension.emplace_back(width, running);
    std::vector<bool> grew;
    while (width * R < opt.widen_until) {
      const std::vector<double> ys{-2.0 * width, -1.5 * width, 1.5 * width, 2.0 * width};
      const auto s = detail::sample_maximand(sampler, R, N, xs, ys);
      const double band_max = *std::max_element(s.values.begin(), s.values.end());
      grew.push_back(band_max > 1.01 * running);
      running = std::max(running, band_max);
      width *= 2.0;
      rep.extension.emplace_back(width, running);
    }
    growing = grew.size() >= 2 && grew[grew.size() - 1] && grew[grew.size() - 2];
  }
  rep.diverged = rep.at_real_boundary || growing || !std::isfinite(rep.value);
  return rep;
}

template <int Dim>
SeminormReport seminorm_report(const SpectralFunction<Dim>& phi, double R, int N, const StripGrid& strip,
                               const SeminormOptions& opt = {}) {
  StripSampler<Dim> sampler(phi);
  return seminorm_report(sampler, R, N, strip, opt);
}

template <int Dim>
double seminorm(const SpectralFunction<Dim>& phi, double R, int N, const StripGrid& strip) {
  return seminorm_report(phi, R, N, strip, {.check_refinement = false, .check_divergence = false}).value;
}

struct TypeEstimate {
  double type = 0.0;      // least-squares slope
  double intercept = 0.0;
  double max_residual = 0.0;
  double log_range = 0.0;
  bool nonlinear = false;  // max residual above 10% of the log range
  std::vector<double> sigmas;
  std::vector<double> log_sup;
};

// Samples sigma R in [150, 250]. At smaller sigma R the sub-exponential
// factor of a smooth bump's transform biases the slope low.
inline std::vector<double> default_type_samples(double R, int count = 9) {
  if (!(R > 0.0)) throw ConfigError("type samples: radius must be positive");
  std::vector<double> s;
  for (int i = 0; i < count; ++i) s.push_back((150.0 + 100.0 * i / std::max(1, count - 1)) / R);
  return s;
}

inline double sup_over_boundary(const std::vector<Complex>& modes, const std::vector<std::vector<Complex>>& basis_at_nodes) {
  double m = 0.0;
  for (const auto& e : basis_at_nodes) {
    Complex s{};
    for (std::size_t i = 0; i < e.size(); ++i) s += modes[i] * e[i];
    m = std::max(m, std::abs(s));
  }
  return m;
}

// Least-squares line through (sigma, log sup); the slope is the type.
inline TypeEstimate fit_type(TypeEstimate t) {
  const auto& sigmas = t.sigmas;
  if (sigmas.size() < 3 || t.log_sup.size() != sigmas.size())
    throw ConfigError("exponential_type: need at least three sigma samples");
  for (double v : t.log_sup)
    if (!std::isfinite(v)) throw NumericalError("exponential_type: transform vanishes or overflows on the sigma samples");
  const double n = static_cast<double>(sigmas.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    sx += sigmas[i];
    sy += t.log_sup[i];
    sxx += sigmas[i] * sigmas[i];
    sxy += sigmas[i] * t.log_sup[i];
  }
  const double den = n * sxx - sx * sx;
  if (!(den > 0.0)) throw ConfigError("exponential_type: sigma samples must not coincide");
  t.type = (n * sxy - sx * sy) / den;
  t.intercept = (sy - t.type * sx) / n;
  const auto [lo, hi] = std::minmax_element(t.log_sup.begin(), t.log_sup.end());
  t.log_range = *hi - *lo;
  for (std::size_t i = 0; i < sigmas.size(); ++i)
    t.max_residual = std::max(t.max_residual, std::abs(t.log_sup[i] - t.intercept - t.type * sigmas[i]));
  t.nonlinear = t.max_residual > 0.1 * t.log_range;
  return t;
}

// Slope of log sup_b |phi(i sigma, b)| against sigma.
template <int Dim>
TypeEstimate exponential_type_report(const SpectralFunction<Dim>& phi, const std::vector<double>& sigmas) {
  if (sigmas.size() < 3) throw ConfigError("exponential_type: need at least three sigma samples");
  if (!phi.has_evaluator()) throw ConfigError("exponential_type: needs a source-backed spectral function");
  const int k = phi.basis().max_degree();
  const auto rule = make_boundary_rule<Dim>(std::max(2 * k + 2, Dim == 2 ? 64 : 16));
  std::vector<std::vector<Complex>> basis_at(rule.size());
  for (std::size_t j = 0; j < rule.size(); ++j) basis_at[j] = phi.basis().values(rule.nodes[j]);

  TypeEstimate t;
  t.sigmas = sigmas;
  t.log_sup.resize(sigmas.size());
  detail::parallel_for(sigmas.size(), [&](std::size_t i) {
    t.log_sup[i] = std::log(sup_over_boundary(phi.modes_at(Complex(0.0, sigmas[i])), basis_at));
  });
  return fit_type(std::move(t));
}

template <int Dim>
double exponential_type(const SpectralFunction<Dim>& phi, const std::vector<double>& sigmas) {
  return exponential_type_report(phi, sigmas).type;
}

template <int Dim>
double exponential_type(const SpectralFunction<Dim>& phi) {
  return exponential_type(phi, default_type_samples(phi.declared_radius()));
}

// Largest relative gap between the two sides of
//
//   int_B exp((-i lambda + rho) A(x, b)) phi(-lambda, b) db = int_B exp((i lambda + rho) A(x, b)) phi(lambda, b) db
//
// over the samples, with the boundary integral on the grid's angular rule.
// Gaps are relative to max(|lhs|, |rhs|, 1e-12 * largest side seen).
template <int Dim>
double weyl_defect(const SpectralFunction<Dim>& phi, const std::vector<Point<Dim>>& xs, const std::vector<Complex>& lambdas,
                   const PolarGrid<Dim>& grid) {
  constexpr double rho = ModelParams<Dim>::rho;
  const std::size_t nb = grid.angular_size();
  std::vector<std::vector<Complex>> basis_at(nb);
  for (std::size_t j = 0; j < nb; ++j) basis_at[j] = phi.basis().values(grid.angular_nodes[j]);
  auto on_nodes = [&](Complex lambda) {
    const auto modes = phi.modes_at(lambda);
    std::vector<Complex> v(nb);
    for (std::size_t j = 0; j < nb; ++j) {
      Complex s{};
      for (std::size_t m = 0; m < modes.size(); ++m) s += modes[m] * basis_at[j][m];
      v[j] = s;
    }
    return v;
  };

  std::vector<std::pair<double, double>> gaps(lambdas.size() * xs.size());  // (|lhs - rhs|, max side)
  detail::parallel_for(lambdas.size(), [&](std::size_t q) {
    const Complex lambda = lambdas[q];
    const auto plus = on_nodes(lambda);
    const auto minus = on_nodes(-lambda);
    const Complex i(0.0, 1.0);
    for (std::size_t p = 0; p < xs.size(); ++p) {
      Complex lhs{}, rhs{};
      for (std::size_t j = 0; j < nb; ++j) {
        const double a = horocycle_bracket(xs[p], grid.angular_nodes[j]);
        const double w = grid.angular_weights[j];
        lhs += w * std::exp((-i * lambda + rho) * a) * minus[j];
        rhs += w * std::exp((i * lambda + rho) * a) * plus[j];
      }
      gaps[q * xs.size() + p] = {std::abs(lhs - rhs), std::max(std::abs(lhs), std::abs(rhs))};
    }
  });
  double scale = 0.0;
  for (const auto& g : gaps) scale = std::max(scale, g.second);
  const double eps = std::max(1e-12 * scale, std::numeric_limits<double>::min());
  double worst = 0.0;
  for (const auto& g : gaps) worst = std::max(worst, g.first / std::max(g.second, eps));
  return worst;
}

// Transform of f at the default resolution for its finest feature.
template <int Dim>
SpectralFunction<Dim> default_transform(const TestFunction<Dim>& f) {
  const auto cfg = default_spectral_config<Dim>(feature_radius(f));
  return forward_transform(f, default_grid(f, cfg), cfg);
}

struct ContinuityResult {
  double constant = 0.0;           // max ratio
  std::vector<double> ratios;      // |||Ff|||_N / ||f||_{2N}
  std::vector<double> seminorms;   // |||Ff|||_N
  std::vector<double> sup_norms;   // ||f||_{2N}
  double spread() const {
    if (ratios.empty()) return 0.0;
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    return *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
  }
};

// max over the family of |||Ff|||_N / ||f||_{2N}, with R the largest support
// radius in the family.
template <int Dim>
ContinuityResult continuity_constant(const std::vector<TestFunction<Dim>>& family, int N) {
  if (family.empty()) throw ConfigError("continuity_constant: empty family");
  if (N < 0) throw ConfigError("continuity_constant: order must be non-negative");
  double R = 0.0;
  for (const auto& f : family) R = std::max(R, f.support_radius());
  ContinuityResult out;
  for (const auto& f : family) {
    const auto phi = default_transform(f);
    const double s = seminorm(phi, R, N, default_strip_grid(phi, R));
    const double d = f.sup_seminorm(2 * N);
    out.seminorms.push_back(s);
    out.sup_norms.push_back(d);
    out.ratios.push_back(d > 0.0 ? s / d : std::numeric_limits<double>::infinity());
    out.constant = std::max(out.constant, out.ratios.back());
  }
  return out;
}

struct PWReport {
  double radius = 0.0;
  std::vector<std::pair<int, double>> seminorms;
  std::vector<SeminormReport> details;
  double exponential_type = 0.0;
  double weyl_defect = 0.0;
};

template <int Dim>
std::vector<Point<Dim>> weyl_sample_points(double R, std::size_t count = 8) {
  std::vector<Point<Dim>> xs{Point<Dim>::origin()};
  for (std::size_t k = 1; k < count; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(count);
    const double r = 0.9 * R * t;
    if constexpr (Dim == 2) xs.push_back(Point<2>::from_polar(r, BoundaryPoint<2>::from_angle(2.399963 * k)));
    else xs.push_back(Point<3>::from_polar(r, BoundaryPoint<3>::from_angles(std::acos(1.0 - 2.0 * t), 2.399963 * k)));
  }
  return xs;
}

inline std::vector<Complex> weyl_sample_lambdas(double strip) {
  return {Complex(0.7, 0.0), Complex(2.3, 0.25 * strip), Complex(5.1, -0.5 * strip), Complex(1.1, 0.9 * strip),
          Complex(8.4, 0.0)};
}

template <int Dim>
PWReport pw_report(const SpectralFunction<Dim>& phi, double R, int max_order, const StripGrid& strip,
                   const PolarGrid<Dim>& boundary_grid, const SeminormOptions& opt = {}) {
  PWReport rep;
  rep.radius = R;
  StripSampler<Dim> sampler(phi);
  for (int N = 0; N <= max_order; ++N) {
    auto s = seminorm_report(sampler, R, N, strip, opt);
    rep.seminorms.emplace_back(N, s.value);
    rep.details.push_back(std::move(s));
  }
  rep.exponential_type = exponential_type(phi, default_type_samples(R));
  rep.weyl_defect =
      weyl_defect(phi, weyl_sample_points<Dim>(R), weyl_sample_lambdas(strip.half_width), boundary_grid);
  return rep;
}

}  // namespace horofourier
