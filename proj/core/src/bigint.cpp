#include "dtsr/bigint.hpp"

#include <cctype>

#include "dtsr/errors.hpp"

namespace dtsr {

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt c = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    c *= BigInt(n - i);
    c /= BigInt(i + 1);  // exact: c is a binomial prefix product
  }
  return c;
}

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

BigRational parse_rational(const std::string& text) {
  if (auto slash = text.find('/'); slash != std::string::npos) {
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw ParseError("malformed rational '" + text + "'");
    BigInt q(den);
    if (q == 0) throw ParseError("zero denominator in '" + text + "'");
    return BigRational(BigInt(num), q);
  }
  if (auto dot = text.find('.'); dot != std::string::npos) {
    const std::string whole = text.substr(0, dot);
    const std::string frac = text.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac))
      throw ParseError("malformed decimal '" + text + "'");
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    BigInt numer = (whole.empty() ? BigInt(0) : BigInt(whole)) * scale + BigInt(frac);
    return BigRational(numer, scale);
  }
  if (!all_digits(text)) throw ParseError("malformed rational '" + text + "'");
  return BigRational(BigInt(text));
}

std::string format_rational(const BigRational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

BigInt ceil_rational(const BigRational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  BigInt q = num / den;
  if (q * den < num) ++q;  // cpp_int division truncates toward zero
  return q;
}

}  // namespace dtsr
