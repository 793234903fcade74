#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace interlace {

/// A real number held as sign · exp(log_abs); products of many Γ values stay finite.
struct SignedLog {
  double log_abs = 0.0;
  int sign = 1;

  static SignedLog of(double v) {
    if (v == 0.0) return {-INFINITY, 0};
    return {std::log(std::abs(v)), v < 0 ? -1 : 1};
  }

  SignedLog& operator*=(const SignedLog& o) {
    log_abs += o.log_abs;
    sign *= o.sign;
    return *this;
  }
  SignedLog& operator/=(const SignedLog& o) {
    if (o.sign == 0) throw std::domain_error("SignedLog: division by zero");
    log_abs -= o.log_abs;
    sign *= o.sign;
    return *this;
  }
  friend SignedLog operator*(SignedLog a, const SignedLog& b) { return a *= b; }
  friend SignedLog operator/(SignedLog a, const SignedLog& b) { return a /= b; }

  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
};

inline bool is_gamma_pole(double x) { return x <= 0.0 && x == std::floor(x); }

/// Γ(x) as a SignedLog; throws at poles (non-positive integers).
inline SignedLog gamma_signed(double x) {
  if (is_gamma_pole(x)) throw std::domain_error("gamma pole at " + std::to_string(x));
  int sign = 1;
  if (x < 0.0) {
    // Γ alternates sign on (−k−1, −k).
    const double k = std::floor(-x);
    sign = (static_cast<long long>(k) % 2 == 0) ? -1 : 1;
  }
  // Direct Γ for moderate positive arguments, log-gamma otherwise.
  if (x > 0.0 && x < 30.0) return {std::log(std::tgamma(x)), 1};
  return {std::lgamma(x), sign};
}

/// Pochhammer (a)_n = a(a+1)···(a+n−1).
inline double shifted_factorial(double a, int n) {
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= a + k;
  return r;
}

}  // namespace interlace
