#pragma once

// Exact decimal quantity.
//
// Values are held as reduced rationals so that every intermediate of the cost
// chain (e.g. 92 * 140 / 180 kWh) stays exact. Rounding only happens when a
// value is rendered with to_fixed() or quantized with rounded().

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace heatcost {

class Decimal {
 public:
  using rational_type = boost::multiprecision::cpp_rational;
  using integer_type = boost::multiprecision::cpp_int;

  Decimal() = default;
  Decimal(std::int64_t v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  Decimal(int v) : value_(v) {}           // NOLINT(google-explicit-constructor)
  explicit Decimal(rational_type v) : value_(std::move(v)) {}

  /// Parses `[+-]digits[.digits][e[+-]digits]`. Throws std::invalid_argument.
  static Decimal parse(std::string_view text) {
    std::size_t i = 0;
    const std::size_t n = text.size();
    bool negative = false;
    if (i < n && (text[i] == '+' || text[i] == '-')) {
      negative = text[i] == '-';
      ++i;
    }
    integer_type digits = 0;
    std::size_t int_digits = 0;
    while (i < n && is_digit(text[i])) {
      digits = digits * 10 + (text[i] - '0');
      ++i;
      ++int_digits;
    }
    if (int_digits == 0) throw std::invalid_argument("not a decimal number: '" + std::string(text) + "'");
    long scale = 0;
    if (i < n && text[i] == '.') {
      ++i;
      std::size_t frac_digits = 0;
      while (i < n && is_digit(text[i])) {
        digits = digits * 10 + (text[i] - '0');
        ++i;
        ++frac_digits;
      }
      if (frac_digits == 0) throw std::invalid_argument("not a decimal number: '" + std::string(text) + "'");
      scale = -static_cast<long>(frac_digits);
    }
    if (i < n && (text[i] == 'e' || text[i] == 'E')) {
      ++i;
      bool exp_negative = false;
      if (i < n && (text[i] == '+' || text[i] == '-')) {
        exp_negative = text[i] == '-';
        ++i;
      }
      long exponent = 0;
      std::size_t exp_digits = 0;
      while (i < n && is_digit(text[i])) {
        if (exponent > 1000) throw std::invalid_argument("exponent out of range: '" + std::string(text) + "'");
        exponent = exponent * 10 + (text[i] - '0');
        ++i;
        ++exp_digits;
      }
      if (exp_digits == 0) throw std::invalid_argument("not a decimal number: '" + std::string(text) + "'");
      scale += exp_negative ? -exponent : exponent;
    }
    if (i != n) throw std::invalid_argument("not a decimal number: '" + std::string(text) + "'");

    rational_type value(digits);
    if (scale > 0) value *= rational_type(pow10(static_cast<unsigned>(scale)));
    if (scale < 0) value /= rational_type(pow10(static_cast<unsigned>(-scale)));
    if (negative) value = -value;
    return Decimal(std::move(value));
  }

  const rational_type& rational() const noexcept { return value_; }

  int sign() const { return value_.sign(); }
  bool is_zero() const { return value_.is_zero(); }

  double to_double() const { return value_.convert_to<double>(); }

  enum class Rounding { half_away_from_zero, toward_zero };

  /// Rounds to `digits` fractional digits.
  Decimal rounded(unsigned digits, Rounding mode = Rounding::half_away_from_zero) const {
    return Decimal(rational_type(scaled_round(digits, mode), pow10(digits)));
  }

  /// Fixed-point rendering with `digits` fractional digits.
  std::string to_fixed(unsigned digits, Rounding mode = Rounding::half_away_from_zero) const {
    integer_type scaled = scaled_round(digits, mode);
    const bool negative = scaled < 0;
    if (negative) scaled = -scaled;
    std::string s = scaled.str();
    if (digits > 0) {
      if (s.size() <= digits) s.insert(0, digits - s.size() + 1, '0');
      s.insert(s.size() - digits, 1, '.');
    }
    return negative ? "-" + s : s;
  }

  /// Exact decimal rendering with at least `min_fraction` fractional digits.
  /// Values without a terminating decimal expansion fall back to 18 digits.
  std::string to_string(unsigned min_fraction = 1) const {
    integer_type den = boost::multiprecision::denominator(value_);
    unsigned twos = 0;
    unsigned fives = 0;
    while (boost::multiprecision::integer_modulus(den, 2) == 0) {
      den /= 2;
      ++twos;
    }
    while (boost::multiprecision::integer_modulus(den, 5) == 0) {
      den /= 5;
      ++fives;
    }
    if (den != 1) return to_fixed(18);
    unsigned digits = std::max({twos, fives, min_fraction});
    return to_fixed(digits);
  }

  friend Decimal operator+(const Decimal& a, const Decimal& b) { return Decimal(a.value_ + b.value_); }
  friend Decimal operator-(const Decimal& a, const Decimal& b) { return Decimal(a.value_ - b.value_); }
  friend Decimal operator*(const Decimal& a, const Decimal& b) { return Decimal(a.value_ * b.value_); }
  friend Decimal operator/(const Decimal& a, const Decimal& b) {
    if (b.value_.is_zero()) throw std::domain_error("division by zero");
    return Decimal(a.value_ / b.value_);
  }
  Decimal operator-() const { return Decimal(-value_); }
  Decimal& operator+=(const Decimal& o) { value_ += o.value_; return *this; }
  Decimal& operator-=(const Decimal& o) { value_ -= o.value_; return *this; }
  Decimal& operator*=(const Decimal& o) { value_ *= o.value_; return *this; }
  Decimal& operator/=(const Decimal& o) { return *this = *this / o; }

  friend bool operator==(const Decimal& a, const Decimal& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Decimal& a, const Decimal& b) {
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ > b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Decimal& d) { return os << d.to_string(); }

 private:
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }

  static integer_type pow10(unsigned e) {
    integer_type r = 1;
    for (unsigned k = 0; k < e; ++k) r *= 10;
    return r;
  }

  integer_type scaled_round(unsigned digits, Rounding mode) const {
    integer_type num = boost::multiprecision::numerator(value_) * pow10(digits);
    integer_type den = boost::multiprecision::denominator(value_);
    const bool negative = num < 0;
    if (negative) num = -num;
    integer_type q = mode == Rounding::toward_zero ? integer_type(num / den) : integer_type((2 * num + den) / (2 * den));
    return negative ? integer_type(-q) : q;
  }

  rational_type value_{0};
};

inline Decimal min(const Decimal& a, const Decimal& b) { return b < a ? b : a; }
inline Decimal max(const Decimal& a, const Decimal& b) { return a < b ? b : a; }

namespace literals {
inline Decimal operator""_d(const char* text) {
  std::string digits(text);
  std::erase(digits, '\'');  // digit separators
  return Decimal::parse(digits);
}
}  // namespace literals

}  // namespace heatcost
