#pragma once

#include "thermo/numeric.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace thermo {

/// An exact element of the rational span of {log p : p prime}.
///
/// Logarithms of positive integers and their rational combinations are
/// represented by their coordinates in the prime basis. Because the
/// logarithms of distinct primes are linearly independent over Q, equality
/// (in particular equality with zero) is decided exactly. Ordering of unequal
/// values is decided by a 50-digit evaluation.
class LogLinear {
 public:
  LogLinear() = default;

  /// log(n) for n >= 1.
  static LogLinear log_of(const BigInt& n);
  static LogLinear log_of(std::uint64_t n) { return log_of(BigInt(n)); }
  /// Parses "0", "log(2)", "1/2*log(3) - log(5)", ...
  static LogLinear parse(std::string_view text);

  bool is_zero() const { return coeffs_.empty(); }
  /// -1, 0 or +1.
  int sign() const;
  double to_double() const;
  std::string to_string() const;
  const std::map<std::uint64_t, Rational>& coefficients() const { return coeffs_; }

  LogLinear& operator+=(const LogLinear& o);
  LogLinear& operator-=(const LogLinear& o);
  LogLinear& operator*=(const Rational& k);
  LogLinear& operator/=(const Rational& k);

  friend LogLinear operator+(LogLinear a, const LogLinear& b) { return a += b; }
  friend LogLinear operator-(LogLinear a, const LogLinear& b) { return a -= b; }
  friend LogLinear operator-(LogLinear a) { return a *= Rational(-1); }
  friend LogLinear operator*(LogLinear a, const Rational& k) { return a *= k; }
  friend LogLinear operator*(const Rational& k, LogLinear a) { return a *= k; }
  friend LogLinear operator/(LogLinear a, const Rational& k) { return a /= k; }

  friend bool operator==(const LogLinear& a, const LogLinear& b) { return a.coeffs_ == b.coeffs_; }
  friend bool operator<(const LogLinear& a, const LogLinear& b) { return (a - b).sign() < 0; }
  friend bool operator>(const LogLinear& a, const LogLinear& b) { return b < a; }
  friend bool operator<=(const LogLinear& a, const LogLinear& b) { return !(b < a); }
  friend bool operator>=(const LogLinear& a, const LogLinear& b) { return !(a < b); }

 private:
  std::map<std::uint64_t, Rational> coeffs_;  // prime -> coefficient, no zeros stored
};

inline LogLinear abs(const LogLinear& x) { return x.sign() < 0 ? -x : x; }

}  // namespace thermo
