#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <unsupported/Eigen/Polynomials>

#include "horofourier/errors.hpp"

namespace horofourier {

using Complex = std::complex<double>;

// Real polynomial with ascending coefficients c0 + c1 z + ...
class Polynomial {
 public:
  explicit Polynomial(std::vector<double> coefficients) : c_(std::move(coefficients)) {
    for (double c : c_)
      if (!std::isfinite(c)) throw ConfigError("polynomial: non-finite coefficient");
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
    if (c_.empty()) throw ConfigError("polynomial: identically zero");
  }

  // "c0,c1,..." with optional whitespace.
  static Polynomial parse(std::string_view text) {
    std::vector<double> cs;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t comma = std::min(text.find(',', pos), text.size());
      std::string_view tok = text.substr(pos, comma - pos);
      while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front()))) tok.remove_prefix(1);
      while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.remove_suffix(1);
      if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
      double v = 0.0;
      const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (tok.empty() || ec != std::errc() || end != tok.data() + tok.size())
        throw ConfigError("polynomial: cannot parse coefficient '" + std::string(tok) + "'");
      cs.push_back(v);
      pos = comma + 1;
    }
    return Polynomial(std::move(cs));
  }

  const std::vector<double>& coefficients() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }

  template <class T>
  T operator()(T z) const {
    T s{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) s = s * z + *it;
    return s;
  }

  // Complex roots; empty for constants.
  std::vector<Complex> roots() const {
    if (degree() < 1) return {};
    Eigen::VectorXd coeffs(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) coeffs[static_cast<Eigen::Index>(i)] = c_[i];
    Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(coeffs);
    std::vector<Complex> out;
    for (Eigen::Index i = 0; i < solver.roots().size(); ++i) out.push_back(solver.roots()[i]);
    return out;
  }

  std::string to_string() const {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < c_.size(); ++i) os << (i ? "," : "") << c_[i];
    return os.str();
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<double> c_;
};

}  // namespace horofourier
