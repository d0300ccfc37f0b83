#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dtsr {

enum class Trit : std::uint8_t { Zero = 0, One = 1, Undef = 2 };

/// Complete 0/1 input vector.
using Bits = std::vector<std::uint8_t>;

/// Input over {0, 1, undefined}; '*' denotes the undefined symbol in text
/// form, position j (1-based) is variable j.
class PartialInput {
 public:
  PartialInput() = default;
  explicit PartialInput(std::vector<Trit> values) : values_(std::move(values)) {}

  static PartialInput undef(std::size_t n) {
    return PartialInput(std::vector<Trit>(n, Trit::Undef));
  }
  static PartialInput from_bits(const Bits& bits);
  /// Parses a string over {0,1,*}.
  static PartialInput parse(const std::string& text);

  std::size_t size() const { return values_.size(); }
  Trit operator[](std::size_t i) const { return values_[i]; }
  void set(std::size_t i, Trit t) { values_[i] = t; }

  bool is_complete() const;
  std::size_t undef_count() const;

  /// Requires is_complete().
  Bits to_bits() const;
  std::string to_string() const;

  bool operator==(const PartialInput&) const = default;

 private:
  std::vector<Trit> values_;
};

/// True iff no coordinate carries two distinct defined values.
bool consistent(const PartialInput& a, const PartialInput& b);

Bits parse_bits(const std::string& text);
std::string format_bits(const Bits& bits);

}  // namespace dtsr
