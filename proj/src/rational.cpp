#include "posauction/rational.hpp"

#include <cctype>

#include "posauction/errors.hpp"

namespace posauction {

namespace {

bool all_digits(std::string_view text)
{
  if (text.empty())
  {
    return false;
  }
  for (char c : text)
  {
    if (!std::isdigit(static_cast<unsigned char>(c)))
    {
      return false;
    }
  }
  return true;
}

mpz_class parse_integer(std::string_view digits)
{
  return mpz_class(std::string(digits), 10);
}

}  // namespace

Rational::Rational(long value)
  : value_(value)
{}

Rational::Rational(long numerator, long denominator)
{
  if (denominator == 0)
  {
    throw InvalidInput("rational with zero denominator");
  }
  value_ = mpq_class(numerator, 1);
  value_ /= denominator;
  value_.canonicalize();
}

Rational::Rational(mpq_class value)
  : value_(std::move(value))
{
  value_.canonicalize();
}

Rational Rational::parse(std::string_view text)
{
  std::string_view const original = text;
  auto fail = [&](char const *why) -> ParseError {
    return ParseError("malformed number \"" + std::string(original) + "\": " + why);
  };

  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
  {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
  {
    text.remove_suffix(1);
  }
  if (text.empty())
  {
    throw fail("empty");
  }

  bool negative = false;
  if (text.front() == '-' || text.front() == '+')
  {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }

  mpq_class result;
  if (auto slash = text.find('/'); slash != std::string_view::npos)
  {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
    {
      throw fail("expected <integer>/<integer>");
    }
    mpz_class d = parse_integer(den);
    if (d == 0)
    {
      throw fail("zero denominator");
    }
    result = mpq_class(parse_integer(num), d);
  }
  else if (auto dot = text.find('.'); dot != std::string_view::npos)
  {
    auto whole = text.substr(0, dot);
    auto frac  = text.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
        (whole.empty() && frac.empty()))
    {
      throw fail("expected a decimal literal");
    }
    mpz_class scale = 1;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    mpz_class w = whole.empty() ? mpz_class(0) : parse_integer(whole);
    mpz_class f = frac.empty() ? mpz_class(0) : parse_integer(frac);
    result      = mpq_class(w * scale + f, scale);
  }
  else
  {
    if (!all_digits(text))
    {
      throw fail("expected an integer, decimal or fraction");
    }
    result = mpq_class(parse_integer(text), 1);
  }
  result.canonicalize();
  if (negative)
  {
    result = -result;
  }
  return Rational(std::move(result));
}

std::string Rational::str() const
{
  if (value_.get_den() == 1)
  {
    return value_.get_num().get_str();
  }
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string Rational::decimal(int digits) const
{
  mpz_class num = abs(value_.get_num());
  mpz_class den = value_.get_den();
  mpz_class whole = num / den;
  mpz_class rem   = num % den;

  std::string out = sign() < 0 ? "-" : "";
  out += whole.get_str();
  if (digits > 0)
  {
    out += '.';
    for (int i = 0; i < digits; ++i)
    {
      rem *= 10;
      mpz_class d = rem / den;
      rem %= den;
      out += static_cast<char>('0' + d.get_si());
    }
  }
  return out;
}

double Rational::to_double() const
{
  return value_.get_d();
}

std::string Rational::numerator_str() const
{
  return value_.get_num().get_str();
}

std::string Rational::denominator_str() const
{
  return value_.get_den().get_str();
}

int Rational::sign() const
{
  return sgn(value_);
}

Rational &Rational::operator+=(Rational const &rhs)
{
  value_ += rhs.value_;
  return *this;
}

Rational &Rational::operator-=(Rational const &rhs)
{
  value_ -= rhs.value_;
  return *this;
}

Rational &Rational::operator*=(Rational const &rhs)
{
  value_ *= rhs.value_;
  return *this;
}

Rational &Rational::operator/=(Rational const &rhs)
{
  if (rhs.is_zero())
  {
    throw InvalidInput("division by zero");
  }
  value_ /= rhs.value_;
  return *this;
}

Rational Rational::operator-() const
{
  return Rational(mpq_class(-value_));
}

bool operator==(Rational const &lhs, Rational const &rhs)
{
  return lhs.value_ == rhs.value_;
}

std::strong_ordering operator<=>(Rational const &lhs, Rational const &rhs)
{
  int c = cmp(lhs.value_, rhs.value_);
  if (c < 0)
  {
    return std::strong_ordering::less;
  }
  if (c > 0)
  {
    return std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

Rational abs(Rational const &value)
{
  return value.sign() < 0 ? -value : value;
}

Rational max(Rational const &lhs, Rational const &rhs)
{
  return lhs < rhs ? rhs : lhs;
}

Rational min(Rational const &lhs, Rational const &rhs)
{
  return rhs < lhs ? rhs : lhs;
}

Rational pow(Rational const &base, unsigned exponent)
{
  Rational result{1};
  for (unsigned i = 0; i < exponent; ++i)
  {
    result *= base;
  }
  return result;
}

std::ostream &operator<<(std::ostream &os, Rational const &value)
{
  return os << value.str();
}

}  // namespace posauction

std::size_t std::hash<posauction::Rational>::operator()(posauction::Rational const &value) const noexcept
{
  return std::hash<std::string>{}(value.str());
}
