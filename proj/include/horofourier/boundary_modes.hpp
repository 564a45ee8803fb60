#pragma once

// Orthonormal bases of L^2(B) for the probability measure on B = S^(n-1), and
// the zonal (Funk-Hecke) rule used to push rotation-invariant kernels through
// them:
//
//   int_B K(<w, b>) e(w) dw = khat(deg e) * e(b)
//
// H^2: e_k(b) = exp(i k beta), |k| <= K, khat(d) = (1/2pi) int K(cos u) cos(d u) du.
// H^3: real spherical harmonics of degree l <= L scaled by sqrt(4pi),
//      khat(l) = (1/2) int_{-1}^{1} K(t) P_l(t) dt.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/legendre.hpp>
#include <boost/math/special_functions/spherical_harmonic.hpp>

#include "horofourier/errors.hpp"
#include "horofourier/geometry.hpp"

namespace horofourier {

using Complex = std::complex<double>;

// Real spherical harmonic of degree l, order m in [-l, l], orthonormal for the
// probability measure on S^2.
inline double real_spherical_harmonic(int l, int m, double polar, double azimuth) {
  const double scale = std::sqrt(4.0 * std::numbers::pi);
  if (m == 0) return scale * boost::math::spherical_harmonic_r<double>(l, 0, polar, azimuth);
  if (m > 0) return scale * std::numbers::sqrt2 * boost::math::spherical_harmonic_r<double>(l, m, polar, azimuth);
  return scale * std::numbers::sqrt2 * boost::math::spherical_harmonic_i<double>(l, -m, polar, azimuth);
}

inline double polar_angle(const BoundaryPoint<3>& b) { return std::acos(std::clamp(b[2], -1.0, 1.0)); }
inline double azimuth_angle(const BoundaryPoint<3>& b) { return std::atan2(b[1], b[0]); }
inline double angle(const BoundaryPoint<2>& b) { return std::atan2(b[1], b[0]); }

template <int Dim>
class BoundaryBasis {
 public:
  BoundaryBasis() = default;

  // max_degree: K (H^2, modes -K..K) or L (H^3, degrees 0..L).
  explicit BoundaryBasis(int max_degree) : max_degree_(max_degree) {
    if (max_degree < 0) throw ConfigError("BoundaryBasis: negative maximum degree");
  }

  int max_degree() const { return max_degree_; }

  std::size_t size() const {
    const auto d = static_cast<std::size_t>(max_degree_);
    if constexpr (Dim == 2) return 2 * d + 1;
    else return (d + 1) * (d + 1);
  }

  // H^2: mode index of harmonic k. H^3: index of (l, m).
  std::size_t index(int k) const
    requires(Dim == 2)
  {
    return static_cast<std::size_t>(k + max_degree_);
  }
  std::size_t index(int l, int m) const
    requires(Dim == 3)
  {
    return static_cast<std::size_t>(l * l + l + m);
  }

  // H^2: the harmonic k. H^3: the degree l.
  int label(std::size_t idx) const {
    if constexpr (Dim == 2) return static_cast<int>(idx) - max_degree_;
    else return static_cast<int>(std::sqrt(static_cast<double>(idx)) + 1e-9);
  }

  // Order m of an H^3 mode.
  int order(std::size_t idx) const
    requires(Dim == 3)
  {
    const int l = label(idx);
    return static_cast<int>(idx) - l * l - l;
  }

  int degree(std::size_t idx) const {
    if constexpr (Dim == 2) return std::abs(label(idx));
    else return label(idx);
  }

  Complex value(std::size_t idx, const BoundaryPoint<Dim>& b) const {
    if constexpr (Dim == 2) {
      const double beta = angle(b);
      const double k = label(idx);
      return {std::cos(k * beta), std::sin(k * beta)};
    } else {
      return {real_spherical_harmonic(label(idx), order(idx), polar_angle(b), azimuth_angle(b)), 0.0};
    }
  }

  // value(idx, b) for every mode.
  std::vector<Complex> values(const BoundaryPoint<Dim>& b) const {
    std::vector<Complex> out(size());
    if constexpr (Dim == 2) {
      const double beta = angle(b);
      for (std::size_t i = 0; i < out.size(); ++i) {
        const double k = label(i);
        out[i] = {std::cos(k * beta), std::sin(k * beta)};
      }
    } else {
      const double th = polar_angle(b), ph = azimuth_angle(b);
      for (int l = 0; l <= max_degree_; ++l)
        for (int m = -l; m <= l; ++m) out[index(l, m)] = {real_spherical_harmonic(l, m, th, ph), 0.0};
    }
    return out;
  }

 private:
  int max_degree_ = 0;
};

// Nodes t = cos(angle to the pole) with weights and basis-polynomial table for
// zonal coefficients khat(d), d = 0..max_degree.
template <int Dim>
class ZonalRule {
 public:
  ZonalRule() = default;

  // H^2: `nodes` equispaced angles on the circle, folded onto [0, pi] using the
  // evenness of zonal kernels. H^3: `nodes` Gauss-Legendre points in t.
  ZonalRule(int nodes, int max_degree) : max_degree_(max_degree) {
    if (nodes < 4) throw ConfigError("ZonalRule: need at least 4 nodes");
    if constexpr (Dim == 2) {
      const int n = nodes;
      for (int j = 0; j <= n / 2; ++j) {
        const double u = 2.0 * std::numbers::pi * j / n;
        const bool doubled = j != 0 && !(n % 2 == 0 && j == n / 2);
        t_.push_back(std::cos(u));
        w_.push_back((doubled ? 2.0 : 1.0) / n);
      }
    } else {
      const auto gl = gauss_legendre(nodes);
      t_ = gl.nodes;
      for (double w : gl.weights) w_.push_back(0.5 * w);
    }
    table_.assign(t_.size() * static_cast<std::size_t>(max_degree + 1), 0.0);
    for (std::size_t q = 0; q < t_.size(); ++q) {
      for (int d = 0; d <= max_degree; ++d) {
        double p;
        if constexpr (Dim == 2) p = std::cos(d * std::acos(std::clamp(t_[q], -1.0, 1.0)));
        else p = boost::math::legendre_p(d, t_[q]);
        table_[q * static_cast<std::size_t>(max_degree + 1) + static_cast<std::size_t>(d)] = w_[q] * p;
      }
    }
  }

  std::size_t size() const { return t_.size(); }
  int max_degree() const { return max_degree_; }
  const std::vector<double>& nodes() const { return t_; }
  const std::vector<double>& weights() const { return w_; }

  // weight(q) * basis_d(t_q)
  double weighted_basis(std::size_t q, int d) const {
    return table_[q * static_cast<std::size_t>(max_degree_ + 1) + static_cast<std::size_t>(d)];
  }
  const double* weighted_row(std::size_t q) const { return &table_[q * static_cast<std::size_t>(max_degree_ + 1)]; }

 private:
  int max_degree_ = 0;
  std::vector<double> t_;
  std::vector<double> w_;
  std::vector<double> table_;
};

}  // namespace horofourier
