#include "thermo/log_linear.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cctype>
#include <mutex>
#include <sstream>
#include <unordered_map>
#include <vector>

namespace thermo {

namespace {

using Wide = boost::multiprecision::cpp_bin_float_50;
using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 b, u64 e, u64 m) {
  u64 r = 1;
  b %= m;
  while (e) {
    if (e & 1) r = mul_mod(r, b, m);
    b = mul_mod(b, b, m);
    e >>= 1;
  }
  return r;
}

// Deterministic for all 64-bit inputs with this base set.
bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

u64 gcd(u64 a, u64 b) {
  while (b) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

// Pollard rho with a fixed seed sequence, so factorization is reproducible.
u64 find_divisor(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    u64 x = 2, y = 2, d = 1;
    auto step = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
    while (d == 1) {
      x = step(x);
      y = step(step(y));
      d = gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

void factor_into(u64 n, std::map<u64, int>& out) {
  if (n == 1) return;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
    while (n % p == 0) {
      ++out[p];
      n /= p;
    }
  }
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  u64 d = find_divisor(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

std::map<u64, int> factor_cached(u64 n) {
  static std::mutex mu;
  static std::unordered_map<u64, std::map<u64, int>> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
  }
  std::map<u64, int> f;
  factor_into(n, f);
  std::lock_guard lock(mu);
  if (cache.size() > (1u << 20)) cache.clear();
  cache.emplace(n, f);
  return f;
}

Wide wide_value(const std::map<u64, Rational>& coeffs) {
  Wide total = 0;
  for (const auto& [p, c] : coeffs) {
    Wide num(boost::multiprecision::numerator(c));
    Wide den(boost::multiprecision::denominator(c));
    total += num / den * boost::multiprecision::log(Wide(p));
  }
  return total;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  if (s.empty()) throw SpecError("empty rational literal");
  try {
    if (auto slash = s.find('/'); slash != std::string::npos) {
      BigInt num(s.substr(0, slash));
      BigInt den(s.substr(slash + 1));
      if (den == 0) throw SpecError("zero denominator in '" + s + "'");
      return Rational(num, den);
    }
    if (auto dot = s.find('.'); dot != std::string::npos) {
      bool neg = !s.empty() && s[0] == '-';
      std::string digits = s.substr(neg ? 1 : 0);
      dot = digits.find('.');
      std::string whole = digits.substr(0, dot);
      std::string frac = digits.substr(dot + 1);
      if (whole.empty()) whole = "0";
      BigInt num(whole + frac);
      BigInt den = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
      Rational q(num, den);
      return neg ? Rational(-q) : q;
    }
    return Rational(BigInt(s));
  } catch (const SpecError&) {
    throw;
  } catch (const std::exception&) {
    throw SpecError("malformed rational literal '" + s + "'");
  }
}

std::string to_string(const Rational& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

double log_of(const BigInt& n) {
  if (n <= 0) return kNegInf;
  if (n < BigInt(1) << 60) return std::log(n.convert_to<double>());
  unsigned shift = static_cast<unsigned>(boost::multiprecision::msb(n)) - 52;
  return std::log((n >> shift).convert_to<double>()) + shift * std::log(2.0);
}

LogLinear LogLinear::log_of(const BigInt& n) {
  if (n < 1) throw SpecError("logarithm of a non-positive integer");
  if (n > BigInt(std::numeric_limits<u64>::max())) throw CapError("count exceeds the 64-bit exact-factorization range");
  LogLinear out;
  for (const auto& [p, e] : factor_cached(n.convert_to<u64>())) out.coeffs_[p] = Rational(e);
  return out;
}

LogLinear LogLinear::parse(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw SpecError("empty exact log expression");
  LogLinear out;
  if (s == "0") return out;
  std::size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (i != 0) {
      throw SpecError("expected '+' or '-' in '" + s + "'");
    }
    Rational coeff(1);
    std::size_t log_pos = s.find("log(", i);
    if (log_pos == std::string::npos) throw SpecError("expected log(n) in '" + s + "'");
    if (log_pos != i) {
      if (s[log_pos - 1] != '*') throw SpecError("expected '*' before log in '" + s + "'");
      coeff = parse_rational(s.substr(i, log_pos - 1 - i));
    }
    std::size_t close = s.find(')', log_pos);
    if (close == std::string::npos) throw SpecError("unclosed log( in '" + s + "'");
    BigInt arg;
    try {
      arg = BigInt(s.substr(log_pos + 4, close - log_pos - 4));
    } catch (const std::exception&) {
      throw SpecError("log argument must be a positive integer in '" + s + "'");
    }
    out += LogLinear::log_of(arg) * Rational(sign * coeff);
    i = close + 1;
  }
  return out;
}

int LogLinear::sign() const {
  if (coeffs_.empty()) return 0;
  Wide v = wide_value(coeffs_);
  if (boost::multiprecision::abs(v) < Wide("1e-40"))
    throw std::runtime_error("exact log comparison below evaluation precision: " + to_string());
  return v > 0 ? 1 : -1;
}

double LogLinear::to_double() const { return wide_value(coeffs_).convert_to<double>(); }

std::string LogLinear::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [p, c] : coeffs_) {
    Rational mag = c < 0 ? Rational(-c) : c;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (mag != 1) os << mag << "*";
    os << "log(" << p << ")";
    first = false;
  }
  return os.str();
}

LogLinear& LogLinear::operator+=(const LogLinear& o) {
  for (const auto& [p, c] : o.coeffs_) {
    auto& slot = coeffs_[p];
    slot += c;
    if (slot == 0) coeffs_.erase(p);
  }
  return *this;
}

LogLinear& LogLinear::operator-=(const LogLinear& o) {
  for (const auto& [p, c] : o.coeffs_) {
    auto& slot = coeffs_[p];
    slot -= c;
    if (slot == 0) coeffs_.erase(p);
  }
  return *this;
}

LogLinear& LogLinear::operator*=(const Rational& k) {
  if (k == 0) {
    coeffs_.clear();
    return *this;
  }
  for (auto& [p, c] : coeffs_) c *= k;
  return *this;
}

LogLinear& LogLinear::operator/=(const Rational& k) {
  if (k == 0) throw std::domain_error("LogLinear division by zero");
  for (auto& [p, c] : coeffs_) c /= k;
  return *this;
}

}  // namespace thermo
