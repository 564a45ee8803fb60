#pragma once

// Truncated Taylor series arithmetic. A Jet of order K at a point r0 stores
// c_0..c_K with c_k = f^(k)(r0) / k!. All operations truncate at the order of
// the shorter operand, so derivatives of any order come out exact up to
// rounding.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace horofourier::detail {

class Jet {
 public:
  Jet() = default;
  explicit Jet(std::size_t order, double constant = 0.0) : c_(order + 1, 0.0) { c_[0] = constant; }

  // The identity function r -> r expanded around r0.
  static Jet variable(double r0, std::size_t order) {
    Jet j(order, r0);
    if (order >= 1) j.c_[1] = 1.0;
    return j;
  }

  std::size_t order() const { return c_.size() - 1; }
  double operator[](std::size_t k) const { return c_[k]; }
  double& operator[](std::size_t k) { return c_[k]; }
  double value() const { return c_[0]; }

  // k-th derivative at the expansion point.
  double derivative_value(std::size_t k) const {
    double fact = 1.0;
    for (std::size_t i = 2; i <= k; ++i) fact *= static_cast<double>(i);
    return c_.at(k) * fact;
  }

  // Jet of f' (one order lower).
  Jet derivative() const {
    if (order() == 0) throw std::logic_error("Jet::derivative: order-0 jet");
    Jet d(order() - 1);
    for (std::size_t k = 0; k + 1 < c_.size(); ++k) d.c_[k] = static_cast<double>(k + 1) * c_[k + 1];
    return d;
  }

  Jet truncated(std::size_t order) const {
    Jet t(std::min(order, this->order()));
    std::copy_n(c_.begin(), t.c_.size(), t.c_.begin());
    return t;
  }

  // Evaluates the Taylor polynomial at r0 + offset.
  double evaluate_at_offset(double offset) const {
    double acc = 0.0;
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * offset + c_[k];
    return acc;
  }

  Jet& operator+=(const Jet& o) {
    resize_to(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    resize_to(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
  }
  Jet& operator+=(double s) {
    c_[0] += s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(double s, const Jet& a) { return (a * -1.0) += s; }
  friend Jet operator-(const Jet& a) { return a * -1.0; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    const std::size_t n = std::min(a.order(), b.order());
    Jet p(n);
    for (std::size_t k = 0; k <= n; ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j <= k; ++j) s += a.c_[j] * b.c_[k - j];
      p.c_[k] = s;
    }
    return p;
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    if (b.c_[0] == 0.0) throw std::domain_error("Jet division by a series with zero constant term");
    const std::size_t n = std::min(a.order(), b.order());
    Jet q(n);
    for (std::size_t k = 0; k <= n; ++k) {
      double s = a.c_[k];
      for (std::size_t j = 1; j <= k; ++j) s -= b.c_[j] * q.c_[k - j];
      q.c_[k] = s / b.c_[0];
    }
    return q;
  }

  friend Jet operator/(double s, const Jet& b) { return Jet(b.order(), s) / b; }

  friend Jet exp(const Jet& a) {
    Jet e(a.order());
    e.c_[0] = std::exp(a.c_[0]);
    for (std::size_t k = 1; k <= a.order(); ++k) {
      double s = 0.0;
      for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * a.c_[j] * e.c_[k - j];
      e.c_[k] = s / static_cast<double>(k);
    }
    return e;
  }

  friend Jet pow(const Jet& a, int m) {
    Jet result(a.order(), 1.0);
    Jet base = a;
    for (int e = m; e > 0; e >>= 1) {
      if (e & 1) result = result * base;
      if (e > 1) base = base * base;
    }
    return result;
  }

  friend Jet sinh(const Jet& a) { return (exp(a) - exp(-a)) * 0.5; }
  friend Jet cosh(const Jet& a) { return (exp(a) + exp(-a)) * 0.5; }
  friend Jet tanh(const Jet& a) {
    Jet e2 = exp(a * 2.0);
    return (e2 + (-1.0)) / (e2 + 1.0);
  }

 private:
  void resize_to(const Jet& o) {
    if (o.c_.size() < c_.size()) c_.resize(o.c_.size());
  }

  std::vector<double> c_{0.0};
};

// exp(-1/(1-t^2)) for |t| < 1, identically zero outside, as a jet in t.
inline Jet bump_profile(const Jet& t) {
  const double t0 = t.value();
  if (std::abs(t0) >= 1.0) return Jet(t.order(), 0.0);
  return exp(-1.0 / (1.0 - t * t));
}

inline double bump_profile(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - t * t));
}

}  // namespace horofourier::detail
