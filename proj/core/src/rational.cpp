#include "autobid/rational.hpp"

#include "autobid/errors.hpp"

#include <cctype>

namespace autobid {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s) {
  std::string digits(s.front() == '+' ? s.substr(1) : s);
  return mpz_class(digits, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    if (!is_integer_literal(text)) {
      throw InputError("not an exact rational (expected \"p/q\"): '" + std::string(text) + "'");
    }
    return Rational(parse_integer(text));
  }
  const auto num = text.substr(0, slash);
  const auto den = text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' || den[0] == '+') {
    throw InputError("not an exact rational (expected \"p/q\"): '" + std::string(text) + "'");
  }
  mpz_class d = parse_integer(den);
  if (d == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
  Rational r(parse_integer(num), d);
  r.canonicalize();
  return r;
}

Rational parse_number(std::string_view text) {
  const auto dot = text.find('.');
  if (dot == std::string_view::npos) return parse_rational(text);
  const auto whole = text.substr(0, dot);
  const auto frac = text.substr(dot + 1);
  const bool negative = !whole.empty() && whole[0] == '-';
  const auto whole_digits = (!whole.empty() && (whole[0] == '-' || whole[0] == '+')) ? whole.substr(1) : whole;
  if ((!whole_digits.empty() && !is_integer_literal(whole_digits)) || frac.empty() ||
      !is_integer_literal(frac) || frac[0] == '-' || frac[0] == '+' ||
      (whole_digits.empty() && frac.empty())) {
    throw InputError("not a number: '" + std::string(text) + "'");
  }
  mpz_class den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  mpz_class num = whole_digits.empty() ? mpz_class(0) : parse_integer(whole_digits);
  num = num * den + parse_integer(frac);
  Rational r(num, den);
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string to_decimal(const Rational& value, int precision) {
  if (precision < 0) precision = 0;
  mpz_class scale = 1;
  for (int i = 0; i < precision; ++i) scale *= 10;
  // Round half away from zero.
  const bool negative = value < 0;
  Rational magnitude = negative ? Rational(-value) : value;
  Rational scaled = magnitude * scale + Rational(1, 2);
  mpz_class q = scaled.get_num() / scaled.get_den();
  std::string digits = q.get_str();
  if (precision > 0) {
    if (digits.size() <= static_cast<std::size_t>(precision)) {
      digits.insert(0, static_cast<std::size_t>(precision) + 1 - digits.size(), '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(precision), ".");
  }
  if (negative && q != 0) digits.insert(0, "-");
  return digits;
}

double to_double(const Rational& value) { return value.get_d(); }

Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }
Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

Rational ceil_to(const Rational& value, const Rational& quantum) {
  Rational steps = value / quantum;
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), steps.get_num().get_mpz_t(), steps.get_den().get_mpz_t());
  Rational out = Rational(q) * quantum;
  out.canonicalize();
  return out;
}

Extended Extended::ratio(const Rational& numerator, const Rational& denominator,
                         const Rational& zero_over_zero) {
  if (denominator == 0) {
    if (numerator == 0) return Extended(zero_over_zero);
    return infinity();
  }
  Rational q = numerator / denominator;
  return Extended(q);
}

std::partial_ordering Extended::operator<=>(const Extended& rhs) const {
  if (infinite_ && rhs.infinite_) return std::partial_ordering::equivalent;
  if (infinite_) return std::partial_ordering::greater;
  if (rhs.infinite_) return std::partial_ordering::less;
  const int c = cmp(value_, rhs.value_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

}  // namespace autobid
