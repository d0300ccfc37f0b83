#include "dtsr/partial_input.hpp"

#include "dtsr/errors.hpp"

namespace dtsr {

PartialInput PartialInput::from_bits(const Bits& bits) {
  std::vector<Trit> v;
  v.reserve(bits.size());
  for (auto b : bits) {
    if (b > 1) throw DomainError("bit vector entry out of {0,1}");
    v.push_back(b ? Trit::One : Trit::Zero);
  }
  return PartialInput(std::move(v));
}

PartialInput PartialInput::parse(const std::string& text) {
  std::vector<Trit> v;
  v.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    switch (text[i]) {
      case '0': v.push_back(Trit::Zero); break;
      case '1': v.push_back(Trit::One); break;
      case '*': v.push_back(Trit::Undef); break;
      default:
        throw ParseError("invalid character '" + std::string(1, text[i]) +
                         "' at position " + std::to_string(i + 1) +
                         " (expected 0, 1 or *)");
    }
  }
  return PartialInput(std::move(v));
}

bool PartialInput::is_complete() const {
  for (auto t : values_)
    if (t == Trit::Undef) return false;
  return true;
}

std::size_t PartialInput::undef_count() const {
  std::size_t c = 0;
  for (auto t : values_) c += (t == Trit::Undef);
  return c;
}

Bits PartialInput::to_bits() const {
  Bits bits;
  bits.reserve(values_.size());
  for (auto t : values_) {
    if (t == Trit::Undef) throw DomainError("partial input is not complete");
    bits.push_back(t == Trit::One);
  }
  return bits;
}

std::string PartialInput::to_string() const {
  std::string s;
  s.reserve(values_.size());
  for (auto t : values_)
    s.push_back(t == Trit::Undef ? '*' : (t == Trit::One ? '1' : '0'));
  return s;
}

bool consistent(const PartialInput& a, const PartialInput& b) {
  if (a.size() != b.size())
    throw ShapeError("consistency check on inputs of different length");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != Trit::Undef && b[i] != Trit::Undef && a[i] != b[i]) return false;
  }
  return true;
}

Bits parse_bits(const std::string& text) {
  Bits bits;
  bits.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '0' && text[i] != '1')
      throw ParseError("invalid character at position " + std::to_string(i + 1) +
                       " (expected 0 or 1)");
    bits.push_back(text[i] == '1');
  }
  return bits;
}

std::string format_bits(const Bits& bits) {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

}  // namespace dtsr
