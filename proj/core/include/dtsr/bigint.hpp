#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace dtsr {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

inline BigInt pow2(std::uint64_t e) { return BigInt(1) << e; }

BigInt binomial(std::uint64_t n, std::uint64_t k);

/// Parses "p/q", an integer, or a decimal literal ("0.875") into an exact
/// rational. Decimals are converted exactly, never through binary floating
/// point. Throws ParseError on anything else.
BigRational parse_rational(const std::string& text);

std::string format_rational(const BigRational& r);

/// Smallest integer >= r.
BigInt ceil_rational(const BigRational& r);

}  // namespace dtsr
