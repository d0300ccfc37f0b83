#pragma once

#include <cstdint>
#include <string>

#include "dtsr/bigint.hpp"

namespace dtsr {

/// Exact nonnegative dyadic rational numerator / 2^exponent.
///
/// Canonical form: the numerator is odd or zero, and zero always has
/// exponent 0. All tree probabilities live in this type; there is no
/// floating-point fast path anywhere.
class Dyadic {
 public:
  Dyadic() = default;  // zero
  Dyadic(BigInt numerator, std::uint64_t exponent);

  static Dyadic zero() { return Dyadic(); }
  static Dyadic one() { return Dyadic(1, 0); }
  static Dyadic half() { return Dyadic(1, 1); }

  const BigInt& numerator() const { return num_; }
  std::uint64_t exponent() const { return exp_; }

  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return num_ == 1 && exp_ == 0; }

  Dyadic operator+(const Dyadic& o) const;
  /// Requires *this >= o; probabilities never go negative.
  Dyadic operator-(const Dyadic& o) const;
  Dyadic operator*(const Dyadic& o) const;

  static Dyadic average(const Dyadic& a, const Dyadic& b);

  /// 1 - *this; requires *this <= 1.
  Dyadic complement() const;

  /// Negative, zero or positive as *this compares to the argument.
  int compare(const Dyadic& o) const;
  int compare(const BigRational& r) const;

  bool operator==(const Dyadic& o) const { return num_ == o.num_ && exp_ == o.exp_; }
  bool operator!=(const Dyadic& o) const { return !(*this == o); }
  bool operator<(const Dyadic& o) const { return compare(o) < 0; }
  bool operator<=(const Dyadic& o) const { return compare(o) <= 0; }
  bool operator>(const Dyadic& o) const { return compare(o) > 0; }
  bool operator>=(const Dyadic& o) const { return compare(o) >= 0; }

  BigRational to_rational() const;
  double to_double() const;

  /// "0", "1", "3/2^2", ...
  std::string to_string() const;
  /// Exact finite decimal, e.g. "0.75".
  std::string to_decimal_string() const;

 private:
  BigInt num_ = 0;
  std::uint64_t exp_ = 0;
};

}  // namespace dtsr
