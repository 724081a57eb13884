#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace posauction {

/// Exact fraction with arbitrary-precision numerator and denominator.
///
/// Always held in lowest terms with a positive denominator, so two values
/// compare equal exactly when their textual forms match. Every price, CTR,
/// value and welfare figure in the library is a Rational.
class Rational
{
public:
  Rational() = default;
  Rational(long value);  // NOLINT(google-explicit-constructor)
  Rational(int value)    // NOLINT(google-explicit-constructor)
    : Rational(static_cast<long>(value))
  {}
  Rational(long numerator, long denominator);

  /// Accepts "7", "-3", "23/3", "0.125", "-1.5". Decimals are converted
  /// exactly (0.1 is 1/10). Throws ParseError on anything else.
  static Rational parse(std::string_view text);

  /// Canonical form: "23/3", "6", "-1/2".
  std::string str() const;

  /// Decimal expansion truncated toward zero after `digits` fractional
  /// digits, e.g. 90/89 -> "1.011235955056" for digits = 12.
  std::string decimal(int digits = 12) const;

  double to_double() const;

  std::string numerator_str() const;
  std::string denominator_str() const;

  int  sign() const;
  bool is_zero() const
  {
    return sign() == 0;
  }

  Rational &operator+=(Rational const &rhs);
  Rational &operator-=(Rational const &rhs);
  Rational &operator*=(Rational const &rhs);
  /// Throws InvalidInput on division by zero.
  Rational &operator/=(Rational const &rhs);

  friend Rational operator+(Rational lhs, Rational const &rhs)
  {
    return lhs += rhs;
  }
  friend Rational operator-(Rational lhs, Rational const &rhs)
  {
    return lhs -= rhs;
  }
  friend Rational operator*(Rational lhs, Rational const &rhs)
  {
    return lhs *= rhs;
  }
  friend Rational operator/(Rational lhs, Rational const &rhs)
  {
    return lhs /= rhs;
  }
  Rational operator-() const;

  friend bool                 operator==(Rational const &lhs, Rational const &rhs);
  friend std::strong_ordering operator<=>(Rational const &lhs, Rational const &rhs);

  mpq_class const &raw() const
  {
    return value_;
  }

private:
  explicit Rational(mpq_class value);

  mpq_class value_{0};
};

Rational abs(Rational const &value);
Rational max(Rational const &lhs, Rational const &rhs);
Rational min(Rational const &lhs, Rational const &rhs);

/// Integer power for non-negative exponents.
Rational pow(Rational const &base, unsigned exponent);

std::ostream &operator<<(std::ostream &os, Rational const &value);

}  // namespace posauction

template <>
struct std::hash<posauction::Rational>
{
  std::size_t operator()(posauction::Rational const &value) const noexcept;
};
