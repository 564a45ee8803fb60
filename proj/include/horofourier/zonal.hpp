#pragma once

// Zonal coefficients of the plane-wave kernels
//
//   K(t) = exp(c * A(r, t)),   c = rho - i*lambda (forward) or rho + i*lambda (inverse),
//
// where A(r, t) is the horocycle bracket of a point at radius r whose
// direction makes angle arccos(t) with b. For real lambda the kernel is
// a phase of local angular frequency up to |lambda| sinh(r), so the rule
// size follows lambda and r.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "horofourier/boundary_modes.hpp"
#include "horofourier/geometry.hpp"

namespace horofourier {

// Kernel bandwidth in angular degree, plus a decay allowance past the bulk.
inline double zonal_bandwidth(double lambda_abs, double rho, double r) {
  if (r <= 0.0) return 0.0;
  const double bulk = 1.1 * (lambda_abs + rho) * std::sinh(r);
  const double s = std::tanh(0.5 * r);
  // Past the turning point the expansion decays like s^k; reach e^-40.
  const double tail = s > 1e-12 ? 40.0 / -std::log(s) : 0.0;
  return bulk + 4.0 * std::cbrt(bulk) + tail + 8.0;
}

// Node count for a ZonalRule resolving degrees 0..max_degree of K at the
// given |lambda| and radius.
template <int Dim>
int zonal_node_count(double lambda_abs, double r, int max_degree) {
  const double band = zonal_bandwidth(lambda_abs, ModelParams<Dim>::rho, r) + max_degree;
  if constexpr (Dim == 2) {
    const int n = 2 * static_cast<int>(std::ceil(band)) + 16;
    return std::max(32, (n + 15) / 16 * 16);
  } else {
    const int n = static_cast<int>(std::ceil(0.5 * band)) + 16;
    return std::max(16, (n + 7) / 8 * 8);
  }
}

// Process-wide cache; rules are immutable once built.
template <int Dim>
std::shared_ptr<const ZonalRule<Dim>> cached_zonal_rule(int nodes, int max_degree) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const ZonalRule<Dim>>> cache;
  const std::lock_guard lock(mu);
  auto& slot = cache[{nodes, max_degree}];
  if (!slot) slot = std::make_shared<const ZonalRule<Dim>>(nodes, max_degree);
  return slot;
}

template <int Dim>
std::shared_ptr<const ZonalRule<Dim>> zonal_rule_for(double lambda_abs, double r, int max_degree) {
  return cached_zonal_rule<Dim>(zonal_node_count<Dim>(lambda_abs, r, max_degree), max_degree);
}

// khat(d) for every d in `degrees` at lambda_q = lambda0 + q*h, q < count.
// sign = -1 gives exp((-i lambda + rho) A), sign = +1 gives exp((i lambda + rho) A).
// out is count x degrees.size(), row-major. Consecutive lambdas advance the
// kernel by a fixed phase factor, reseeded from exp every 32 steps.
template <int Dim>
void zonal_coefficients(const ZonalRule<Dim>& rule, double r, Complex lambda0, double h, std::size_t count, int sign,
                        const std::vector<int>& degrees, Complex* out) {
  constexpr double rho = ModelParams<Dim>::rho;
  const std::size_t nq = rule.size();
  const std::size_t nd = degrees.size();
  std::vector<double> a(nq);
  for (std::size_t q = 0; q < nq; ++q) a[q] = horocycle_bracket_polar(r, rule.nodes()[q]);

  const Complex unit_i(0.0, static_cast<double>(sign));
  std::vector<Complex> kernel(nq), step(nq);
  for (std::size_t q = 0; q < nq; ++q) step[q] = std::exp(unit_i * h * a[q]);

  for (std::size_t k = 0; k < count; ++k) {
    if (k % 32 == 0) {
      const Complex c = unit_i * (lambda0 + static_cast<double>(k) * h) + rho;
      for (std::size_t q = 0; q < nq; ++q) kernel[q] = std::exp(c * a[q]);
    } else {
      for (std::size_t q = 0; q < nq; ++q) kernel[q] *= step[q];
    }
    Complex* row = out + k * nd;
    for (std::size_t j = 0; j < nd; ++j) row[j] = 0.0;
    for (std::size_t q = 0; q < nq; ++q) {
      const double* wb = rule.weighted_row(q);
      const Complex kq = kernel[q];
      for (std::size_t j = 0; j < nd; ++j) row[j] += wb[degrees[j]] * kq;
    }
  }
}

}  // namespace horofourier
