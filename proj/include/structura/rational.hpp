#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace structura {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/// Exact rational scalar. Always held in canonical form: gcd(num, den) == 1,
/// den > 0. All arithmetic is exact; nothing in the library ever rounds.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(int n) : v_(n) {}                 // NOLINT: implicit by design
  Rational(long long n) : v_(n) {}           // NOLINT: implicit by design
  explicit Rational(BigInt n) : v_(std::move(n)) {}

  Rational(long long num, long long den) : Rational(BigInt(num), BigInt(den)) {}
  Rational(BigInt num, BigInt den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    v_ = BigRat(std::move(num), std::move(den));
  }

  /// Accepts "p" or "p/q" with optional leading '-' on p. q must be a
  /// positive integer literal; anything else (including "1/-2", "1/0",
  /// floats, blanks) is rejected.
  static Rational parse(std::string_view text) {
    auto split = text.find('/');
    std::string_view num_part = text.substr(0, split);
    if (!is_integer_literal(num_part, /*allow_sign=*/true))
      throw std::invalid_argument("Rational::parse: bad numerator in '" + std::string(text) + "'");
    BigInt num{std::string(num_part)};
    if (split == std::string_view::npos) return Rational(std::move(num));
    std::string_view den_part = text.substr(split + 1);
    if (!is_integer_literal(den_part, /*allow_sign=*/false))
      throw std::invalid_argument("Rational::parse: bad denominator in '" + std::string(text) + "'");
    BigInt den{std::string(den_part)};
    if (den == 0) throw std::invalid_argument("Rational::parse: zero denominator in '" + std::string(text) + "'");
    return Rational(std::move(num), std::move(den));
  }

  /// Canonical text form: "p" when the denominator is 1, else "p/q" (q > 0).
  /// parse(str()) round-trips exactly.
  [[nodiscard]] std::string str() const {
    std::string s = numerator().str();
    if (denominator() != 1) {
      s += '/';
      s += denominator().str();
    }
    return s;
  }

  [[nodiscard]] BigInt numerator() const { return boost::multiprecision::numerator(v_); }
  [[nodiscard]] BigInt denominator() const { return boost::multiprecision::denominator(v_); }

  [[nodiscard]] bool is_zero() const { return v_ == 0; }
  [[nodiscard]] bool is_negative() const { return v_ < 0; }
  [[nodiscard]] bool is_positive() const { return v_ > 0; }
  [[nodiscard]] bool is_integer() const { return denominator() == 1; }

  [[nodiscard]] Rational abs() const { return is_negative() ? -*this : *this; }

  /// Nonnegative integer power by repeated squaring.
  [[nodiscard]] Rational pow(std::size_t e) const {
    Rational base = *this;
    Rational acc = 1;
    while (e != 0) {
      if (e & 1U) acc *= base;
      base *= base;
      e >>= 1U;
    }
    return acc;
  }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { a += b; return a; }
  friend Rational operator-(Rational a, const Rational& b) { a -= b; return a; }
  friend Rational operator*(Rational a, const Rational& b) { a *= b; return a; }
  friend Rational operator/(Rational a, const Rational& b) { a /= b; return a; }
  friend Rational operator-(const Rational& a) { Rational r; r.v_ = -a.v_; return r; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

 private:
  static bool is_integer_literal(std::string_view s, bool allow_sign) {
    if (allow_sign && !s.empty() && s.front() == '-') s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  }

  BigRat v_;
};

}  // namespace structura
