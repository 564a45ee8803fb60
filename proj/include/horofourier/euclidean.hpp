#pragma once

// The Fourier transform on the real line, f^(xi) = int f(x) e^{-i x xi} dx,
// for smooth compactly supported f: the rank-one Euclidean model of the
// lambda variable. Also the mode-by-mode view of a hyperbolic transform,
// where each boundary mode is a scalar function of lambda of the same kind.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "horofourier/detail/jet.hpp"
#include "horofourier/detail/parallel.hpp"
#include "horofourier/errors.hpp"
#include "horofourier/paley_wiener.hpp"
#include "horofourier/polynomial.hpp"
#include "horofourier/test_function.hpp"
#include "horofourier/transform.hpp"

namespace horofourier {

// amplitude * psi((x - center) / radius)
struct EuclideanBump {
  double amplitude = 1.0;
  double center = 0.0;
  double radius = 1.0;
};

class EuclideanTestFunction {
 public:
  EuclideanTestFunction() = default;
  explicit EuclideanTestFunction(std::vector<EuclideanBump> bumps) : bumps_(std::move(bumps)) {
    for (const auto& b : bumps_)
      if (!(b.radius > 0.0) || !std::isfinite(b.center) || !std::isfinite(b.amplitude))
        throw ConfigError("EuclideanTestFunction: bump radius must be positive and parameters finite");
  }

  static EuclideanTestFunction canonical(double radius) { return EuclideanTestFunction({{1.0, 0.0, radius}}); }

  const std::vector<EuclideanBump>& bumps() const { return bumps_; }

  double support_radius() const {
    double r = 0.0;
    for (const auto& b : bumps_) r = std::max(r, std::abs(b.center) + b.radius);
    return r;
  }

  double feature_radius() const {
    double a = std::numeric_limits<double>::infinity();
    for (const auto& b : bumps_) a = std::min(a, b.radius);
    return bumps_.empty() ? 1.0 : a;
  }

  double value(double x) const { return derivative(x, 0); }

  // k-th derivative, exact up to rounding.
  double derivative(double x, int k) const {
    if (k < 0) throw ConfigError("EuclideanTestFunction: negative derivative order");
    double s = 0.0;
    for (const auto& b : bumps_) {
      const double t = (x - b.center) / b.radius;
      if (std::abs(t) >= 1.0) continue;
      const auto j = detail::bump_profile(detail::Jet::variable(t, static_cast<std::size_t>(k)));
      s += b.amplitude * j.derivative_value(static_cast<std::size_t>(k)) / std::pow(b.radius, k);
    }
    return s;
  }

  EuclideanTestFunction scaled(double c) const {
    auto out = *this;
    for (auto& b : out.bumps_) b.amplitude *= c;
    return out;
  }

 private:
  std::vector<EuclideanBump> bumps_;
};

// Seeded sums of one to three bumps inside [-R, R], R drawn from [min_radius, max_radius].
inline std::vector<EuclideanTestFunction> generate_euclidean_family(std::uint64_t seed, std::size_t count,
                                                                    double min_radius = 0.5, double max_radius = 2.0) {
  if (!(min_radius > 0.0) || max_radius < min_radius) throw ConfigError("generate_euclidean_family: bad radius range");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<EuclideanTestFunction> out;
  for (std::size_t i = 0; i < count; ++i) {
    const double R = min_radius + (max_radius - min_radius) * u(rng);
    std::vector<EuclideanBump> bumps{{0.5 + u(rng), 0.0, R}};
    const int extra = static_cast<int>(i % 3);
    for (int e = 0; e < extra; ++e) {
      const double r = R * (0.3 + 0.4 * u(rng));
      const double c = (R - r) * (2.0 * u(rng) - 1.0);
      bumps.push_back({2.0 * u(rng) - 1.0, c, r});
    }
    out.emplace_back(std::move(bumps));
  }
  return out;
}

struct EuclidConfig {
  int nodes = 2048;        // trapezoid nodes on [-R, R]
  double xi_max = 0.0;     // <= 0: 400 / feature radius
  double xi_step = 0.05;
};

inline constexpr double kEuclidBandwidthRadius = 400.0;

// phi(xi) = multiplier(xi) * sum_j c_j exp(-i x_j xi): the defining integral
// on a fixed rule, so any complex xi is available.
class EuclideanSpectral {
 public:
  EuclideanSpectral() = default;
  // Nodes x_j = x0 + j h, weighted samples c_j.
  EuclideanSpectral(double x0, double h, std::vector<Complex> weighted, double declared_radius, double xi_max,
                    double xi_step)
      : x0_(x0), h_(h), c_(std::move(weighted)), radius_(declared_radius), xi_max_(xi_max), xi_step_(xi_step) {
    if (!(h_ > 0.0)) throw ConfigError("EuclideanSpectral: node spacing must be positive");
    if (!(xi_max_ > 0.0) || !(xi_step_ > 0.0)) throw ConfigError("EuclideanSpectral: xi range must be positive");
  }

  Complex operator()(Complex xi) const {
    // exp(-i x_j xi) by a geometric recurrence in j, reseeded every 128 nodes.
    const Complex mi(0.0, -1.0);
    const Complex ratio = std::exp(mi * h_ * xi);
    Complex s{}, e{};
    for (std::size_t j = 0; j < c_.size(); ++j) {
      if (j % 128 == 0) e = std::exp(mi * (x0_ + h_ * static_cast<double>(j)) * xi);
      s += c_[j] * e;
      e *= ratio;
    }
    return multiplier_ ? multiplier_(xi) * s : s;
  }

  EuclideanSpectral multiplied(std::function<Complex(Complex)> m) const {
    auto out = *this;
    out.multiplier_ = multiplier_ ? std::function<Complex(Complex)>([a = multiplier_, m](Complex xi) { return a(xi) * m(xi); })
                                  : std::move(m);
    return out;
  }

  EuclideanSpectral scaled(Complex c) const {
    return multiplied([c](Complex) { return c; });
  }

  double declared_radius() const { return radius_; }
  double xi_max() const { return xi_max_; }
  double xi_step() const { return xi_step_; }

  // xi_q = -xi_max + q step, q = 0..2n
  std::vector<double> xi_grid() const {
    const auto n = static_cast<long>(std::llround(xi_max_ / xi_step_));
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(2 * n + 1));
    for (long q = -n; q <= n; ++q) g.push_back(static_cast<double>(q) * xi_step_);
    return g;
  }

  std::vector<Complex> samples() const {
    const auto g = xi_grid();
    std::vector<Complex> v(g.size());
    detail::parallel_for(g.size(), [&](std::size_t q) { v[q] = (*this)(g[q]); });
    return v;
  }

  // Single-mode spectral function on the same lambda range, so the strip
  // machinery applies unchanged.
  SpectralFunction<2> as_spectral_function() const {
    SpectralConfig cfg;
    cfg.lambda_max = xi_max_;
    cfg.lambda_step = xi_step_;
    cfg.max_degree = 0;
    return SpectralFunction<2>::from_evaluator(BoundaryBasis<2>(0), cfg, radius_,
                                               [self = *this](Complex l0, double h, std::size_t count) {
                                                 std::vector<Complex> v(count);
                                                 for (std::size_t k = 0; k < count; ++k)
                                                   v[k] = self(l0 + static_cast<double>(k) * h);
                                                 return v;
                                               });
  }

 private:
  double x0_ = 0.0;
  double h_ = 1.0;
  std::vector<Complex> c_;
  double radius_ = 0.0;
  double xi_max_ = 1.0;
  double xi_step_ = 0.05;
  std::function<Complex(Complex)> multiplier_;
};

inline EuclidConfig resolved(const EuclidConfig& cfg, double feature_radius) {
  EuclidConfig out = cfg;
  if (out.nodes < 16) throw ConfigError("euclid: need at least 16 nodes");
  if (!(out.xi_step > 0.0)) throw ConfigError("euclid: xi step must be positive");
  if (!(out.xi_max > 0.0)) out.xi_max = kEuclidBandwidthRadius / feature_radius;
  return out;
}

// Transform of g on [-R, R]. The trapezoid rule is exact up to aliasing at
// frequency pi nodes / R, since g and all its derivatives vanish at the ends.
template <class G>
EuclideanSpectral euclid_transform(G&& g, double R, double feature_radius, const EuclidConfig& cfg = {}) {
  if (!(R > 0.0)) throw ConfigError("euclid: support radius must be positive");
  const auto c = resolved(cfg, feature_radius);
  const double h = 2.0 * R / c.nodes;
  std::vector<Complex> w(static_cast<std::size_t>(c.nodes) + 1);
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = h * Complex(g(-R + h * static_cast<double>(j)));
  return EuclideanSpectral(-R, h, std::move(w), R, c.xi_max, c.xi_step);
}

inline EuclideanSpectral euclid_transform(const EuclideanTestFunction& f, const EuclidConfig& cfg = {}) {
  return euclid_transform([&f](double x) { return f.value(x); }, f.support_radius(), f.feature_radius(), cfg);
}

inline Complex euclid_forward(const EuclideanTestFunction& f, Complex xi, const EuclidConfig& cfg = {}) {
  return euclid_transform(f, cfg)(xi);
}

// (1 / 2 pi) int_{-xi_max}^{xi_max} phi(xi) e^{i x xi} dxi, trapezoid on the xi grid.
inline std::vector<Complex> euclid_inverse(const EuclideanSpectral& phi, const std::vector<double>& xs) {
  const auto grid = phi.xi_grid();
  const auto vals = phi.samples();
  const double h = phi.xi_step();
  std::vector<Complex> out(xs.size());
  detail::parallel_for(xs.size(), [&](std::size_t p) {
    Complex s{};
    for (std::size_t q = 0; q < grid.size(); ++q) {
      const double w = (q == 0 || q + 1 == grid.size()) ? 0.5 * h : h;
      s += w * vals[q] * std::polar(1.0, xs[p] * grid[q]);
    }
    out[p] = s / (2.0 * std::numbers::pi);
  });
  return out;
}

// Relative sup error of inverse(forward(f)) on 401 points over [-1.1 R, 1.1 R].
inline double euclid_round_trip_error(const EuclideanTestFunction& f, const EuclidConfig& cfg = {}) {
  const double R = f.support_radius();
  std::vector<double> xs;
  for (int i = 0; i <= 400; ++i) xs.push_back(-1.1 * R + 2.2 * R * i / 400.0);
  const auto back = euclid_inverse(euclid_transform(f, cfg), xs);
  double err = 0.0, fmax = 0.0;
  for (std::size_t p = 0; p < xs.size(); ++p) {
    const double v = f.value(xs[p]);
    fmax = std::max(fmax, std::abs(v));
    err = std::max(err, std::abs(back[p] - v));
  }
  return fmax > 0.0 ? err / fmax : err;
}

inline StripGrid euclid_strip_grid(const EuclideanSpectral& phi, double R, double half_width = 1.0) {
  if (!(R > 0.0)) throw ConfigError("strip grid: radius must be positive");
  const int intervals = std::max(8, static_cast<int>(std::ceil(phi.xi_max() * R / 0.5)));
  return make_strip_grid(phi.xi_max(), half_width, intervals, 3);
}

inline SeminormReport euclid_seminorm_report(const EuclideanSpectral& phi, double R, int N, const StripGrid& strip,
                                             const SeminormOptions& opt = {}) {
  return seminorm_report(phi.as_spectral_function(), R, N, strip, opt);
}

inline double euclid_pw_seminorm(const EuclideanSpectral& phi, double R, int N, const StripGrid& strip) {
  return euclid_seminorm_report(phi, R, N, strip, {.check_refinement = false, .check_divergence = false}).value;
}

// Slope of log max(|phi(i sigma)|, |phi(-i sigma)|): growth in either half-plane.
inline TypeEstimate euclid_exponential_type(const EuclideanSpectral& phi, const std::vector<double>& sigmas) {
  TypeEstimate t;
  t.sigmas = sigmas;
  for (double s : sigmas)
    t.log_sup.push_back(std::log(std::max(std::abs(phi(Complex(0.0, s))), std::abs(phi(Complex(0.0, -s))))));
  return fit_type(std::move(t));
}

// Relative max over seeded xi of |F(p(-i d/dx) f)(xi) - p(xi) Ff(xi)|, the two
// sides computed independently. A third of the samples sit off the real axis.
inline double constcoeff_correspondence(const Polynomial& p, const EuclideanTestFunction& f, std::size_t samples = 48,
                                        double xi_range = 20.0, std::uint64_t seed = 11) {
  const auto& c = p.coefficients();
  auto Df = [&](double x) {
    Complex s{}, ik(1.0, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (c[k] != 0.0) s += c[k] * ik * f.derivative(x, static_cast<int>(k));
      ik *= Complex(0.0, -1.0);
    }
    return s;
  };
  const double R = f.support_radius();
  const auto lhs_t = euclid_transform(Df, R, f.feature_radius());
  const auto rhs_t = euclid_transform(f);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double gap = 0.0, scale = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Complex xi(xi_range * u(rng), s % 3 == 2 ? u(rng) : 0.0);
    const Complex lhs = lhs_t(xi), rhs = p(xi) * rhs_t(xi);
    gap = std::max(gap, std::abs(lhs - rhs));
    scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
  }
  return scale > 0.0 ? gap / scale : gap;
}

// ---------------------------------------------------------------- mode factorization

struct ModeFactorizationReport {
  double radius = 0.0;
  int modes_active = 0;
  std::vector<int> active;                         // active mode indices k
  std::vector<std::pair<int, double>> tail_norms;  // (K, |||sum_{|k|>K} phi_k e_k|||_N)
  std::vector<std::pair<int, double>> per_mode_types;
  std::vector<double> mode_peaks;                  // max_lambda |phi_k(lambda)| / max over all modes, index k + K_max
  double max_type = 0.0;

  bool tails_decreasing() const {
    for (std::size_t i = 1; i < tail_norms.size(); ++i)
      if (!(tail_norms[i].second < tail_norms[i - 1].second)) return false;
    return true;
  }
};

struct ModeFactorizationOptions {
  int max_degree = 64;
  int angular = 256;
  std::vector<int> tail_orders{4, 8, 16, 32};
  int order = 2;                 // N of the tail seminorm
  double active_tolerance = 1e-10;
};

// Ff as a sum of scalar profiles phi_k(lambda) e_k(b): each active profile's
// exponential type, and the seminorm of the tail beyond |k| = K.
inline ModeFactorizationReport mode_factorization_check(const TestFunction<2>& f, const ModeFactorizationOptions& opt = {}) {
  if (opt.max_degree < 0) throw ConfigError("mode_factorization_check: negative maximum degree");
  auto cfg = default_spectral_config<2>(feature_radius(f));
  cfg.max_degree = opt.max_degree;
  const auto base = default_grid(f, cfg);
  const auto grid = make_polar_grid<2>(base.support_radius, static_cast<int>(base.radial_size()), opt.angular);
  const auto phi = forward_transform(f, grid, cfg);
  const double R = f.support_radius();
  const auto& basis = phi.basis();
  const std::size_t nm = phi.mode_count();

  ModeFactorizationReport rep;
  rep.radius = R;
  rep.mode_peaks.assign(nm, 0.0);
  for (std::size_t q = 0; q < phi.lambda_count(); ++q)
    for (std::size_t m = 0; m < nm; ++m) rep.mode_peaks[m] = std::max(rep.mode_peaks[m], std::abs(phi.coefficient(q, m)));
  const double top = *std::max_element(rep.mode_peaks.begin(), rep.mode_peaks.end());
  for (auto& v : rep.mode_peaks) v = top > 0.0 ? v / top : 0.0;
  for (std::size_t m = 0; m < nm; ++m)
    if (rep.mode_peaks[m] > opt.active_tolerance) rep.active.push_back(basis.label(m));
  rep.modes_active = static_cast<int>(rep.active.size());

  const auto sigmas = default_type_samples(R);
  std::vector<std::vector<Complex>> at_sigma(sigmas.size());
  detail::parallel_for(sigmas.size(), [&](std::size_t i) { at_sigma[i] = phi.modes_at(Complex(0.0, sigmas[i])); });
  for (int k : rep.active) {
    TypeEstimate t;
    t.sigmas = sigmas;
    for (const auto& v : at_sigma) t.log_sup.push_back(std::log(std::abs(v[basis.index(k)])));
    const double type = fit_type(std::move(t)).type;
    rep.per_mode_types.emplace_back(k, type);
    rep.max_type = std::max(rep.max_type, type);
  }

  StripSampler<2> all(phi);
  const auto strip = default_strip_grid(phi, R);
  for (int K : opt.tail_orders) {
    std::vector<bool> mask(nm);
    for (std::size_t m = 0; m < nm; ++m) mask[m] = std::abs(basis.label(m)) > K;
    StripSampler<2> tail(all, std::move(mask));
    rep.tail_norms.emplace_back(
        K, seminorm_report(tail, R, opt.order, strip, {.check_refinement = false, .check_divergence = false}).value);
  }
  return rep;
}

}  // namespace horofourier
