#include "dtsr/dyadic.hpp"

#include <algorithm>

#include "dtsr/errors.hpp"

namespace dtsr {

namespace {

// Largest e such that 2^e divides v (v != 0).
std::uint64_t twos_valuation(const BigInt& v) {
  return boost::multiprecision::lsb(v);
}

}  // namespace

Dyadic::Dyadic(BigInt numerator, std::uint64_t exponent)
    : num_(std::move(numerator)), exp_(exponent) {
  if (num_ < 0) throw DomainError("dyadic numerator must be nonnegative");
  if (num_ == 0) {
    exp_ = 0;
    return;
  }
  const std::uint64_t tz = std::min<std::uint64_t>(twos_valuation(num_), exp_);
  if (tz > 0) {
    num_ >>= tz;
    exp_ -= tz;
  }
}

Dyadic Dyadic::operator+(const Dyadic& o) const {
  const std::uint64_t e = std::max(exp_, o.exp_);
  return Dyadic((num_ << (e - exp_)) + (o.num_ << (e - o.exp_)), e);
}

Dyadic Dyadic::operator-(const Dyadic& o) const {
  const std::uint64_t e = std::max(exp_, o.exp_);
  BigInt r = (num_ << (e - exp_)) - (o.num_ << (e - o.exp_));
  if (r < 0) throw DomainError("dyadic subtraction went negative");
  return Dyadic(std::move(r), e);
}

Dyadic Dyadic::operator*(const Dyadic& o) const {
  return Dyadic(num_ * o.num_, exp_ + o.exp_);
}

Dyadic Dyadic::average(const Dyadic& a, const Dyadic& b) {
  const std::uint64_t e = std::max(a.exp_, b.exp_);
  return Dyadic((a.num_ << (e - a.exp_)) + (b.num_ << (e - b.exp_)), e + 1);
}

Dyadic Dyadic::complement() const {
  BigInt r = pow2(exp_) - num_;
  if (r < 0) throw DomainError("complement of a dyadic above 1");
  return Dyadic(std::move(r), exp_);
}

int Dyadic::compare(const Dyadic& o) const {
  const std::uint64_t e = std::max(exp_, o.exp_);
  const BigInt a = num_ << (e - exp_);
  const BigInt b = o.num_ << (e - o.exp_);
  return a < b ? -1 : (a == b ? 0 : 1);
}

int Dyadic::compare(const BigRational& r) const {
  // num/2^e vs p/q  <=>  num*q vs p*2^e (q > 0)
  const BigInt p = boost::multiprecision::numerator(r);
  const BigInt q = boost::multiprecision::denominator(r);
  const BigInt lhs = num_ * q;
  const BigInt rhs = p << exp_;
  return lhs < rhs ? -1 : (lhs == rhs ? 0 : 1);
}

BigRational Dyadic::to_rational() const { return BigRational(num_, pow2(exp_)); }

double Dyadic::to_double() const {
  return static_cast<double>(BigRational(num_, pow2(exp_)));
}

std::string Dyadic::to_string() const {
  if (exp_ == 0) return num_.str();
  return num_.str() + "/2^" + std::to_string(exp_);
}

std::string Dyadic::to_decimal_string() const {
  if (exp_ == 0) return num_.str();
  // num/2^e = num*5^e / 10^e, which is a finite decimal.
  BigInt scaled = num_;
  for (std::uint64_t i = 0; i < exp_; ++i) scaled *= 5;
  std::string digits = scaled.str();
  if (digits.size() <= exp_) digits.insert(0, exp_ + 1 - digits.size(), '0');
  digits.insert(digits.size() - exp_, ".");
  while (digits.back() == '0') digits.pop_back();
  if (digits.back() == '.') digits.pop_back();
  return digits;
}

}  // namespace dtsr
