#pragma once

#include <gmpxx.h>

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace autobid {

/// Exact rational number. All instance data, bids, prices and allocations
/// are carried in this type so that ties and binding constraints are decided
/// exactly.
using Rational = mpq_class;

/// Parses the mandatory exact encoding "p/q" or "p" (optionally signed).
/// Decimal points, exponents and whitespace are rejected.
Rational parse_rational(std::string_view text);

/// Parses either an exact "p/q" string or a finite decimal such as "0.05"
/// (converted exactly to 1/20). Intended for command-line flags.
Rational parse_number(std::string_view text);

/// Canonical exact rendering: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& value);

/// Fixed-point decimal rendering with the given number of fractional digits.
std::string to_decimal(const Rational& value, int precision = 6);

double to_double(const Rational& value);

Rational abs(const Rational& value);
Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

/// Smallest multiple of `quantum` that is >= value.
Rational ceil_to(const Rational& value, const Rational& quantum);

/// A nonnegative rational extended with +infinity. Used for value-to-spend
/// ratios (zero spend) and for ratios of welfare figures.
class Extended {
 public:
  Extended() = default;
  Extended(Rational value) : value_(std::move(value)) {}  // NOLINT(google-explicit-constructor)

  static Extended infinity() {
    Extended e;
    e.infinite_ = true;
    return e;
  }

  /// numerator / denominator with x/0 = +inf for x > 0 and 0/0 = `zero_over_zero`.
  static Extended ratio(const Rational& numerator, const Rational& denominator,
                        const Rational& zero_over_zero = Rational(1));

  bool is_infinite() const { return infinite_; }
  const Rational& value() const { return value_; }

  bool operator>=(const Rational& rhs) const { return infinite_ || value_ >= rhs; }
  bool operator<(const Rational& rhs) const { return !infinite_ && value_ < rhs; }
  bool operator==(const Extended& rhs) const {
    return infinite_ == rhs.infinite_ && (infinite_ || value_ == rhs.value_);
  }
  std::partial_ordering operator<=>(const Extended& rhs) const;

  std::string str() const { return infinite_ ? "inf" : to_string(value_); }
  std::string decimal(int precision = 6) const {
    return infinite_ ? "inf" : to_decimal(value_, precision);
  }

 private:
  Rational value_{0};
  bool infinite_ = false;
};

}  // namespace autobid
