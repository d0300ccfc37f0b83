#include "dtsr/reductions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "dtsr/errors.hpp"

namespace dtsr {

namespace {

// Clause-gadget nodes inside an existing arena: query every clause position,
// then z; accept iff exactly one clause variable was 0, or none were and
// z = 0. The running number of 0s saturates at 2.
NodeId gadget_nodes(TreeBuilder& b, const std::vector<std::size_t>& positions,
                    std::size_t z_position) {
  const NodeId zero = b.leaf(false);
  const NodeId one = b.leaf(true);
  std::array<NodeId, 3> next = {
      b.node(z_position, one, zero),   // no 0s: accept iff z = 0
      b.node(z_position, one, one),    // exactly one 0: accept
      b.node(z_position, zero, zero),  // two or more 0s: reject
  };
  for (auto it = positions.rbegin(); it != positions.rend(); ++it) {
    std::array<NodeId, 3> cur;
    for (std::size_t zeros = 0; zeros < 3; ++zeros)
      cur[zeros] = b.node(*it, next[std::min<std::size_t>(zeros + 1, 2)], next[zeros]);
    next = cur;
  }
  return next[0];
}

}  // namespace

DecisionTree conjunction_tree(std::size_t num_vars,
                              const std::vector<std::size_t>& vars) {
  if (vars.empty()) throw DomainError("conjunction over no variables");
  std::set<std::size_t> distinct(vars.begin(), vars.end());
  if (distinct.size() != vars.size())
    throw DomainError("conjunction lists a variable twice");
  TreeBuilder b(num_vars);
  NodeId acc = b.leaf(true);
  const NodeId zero = b.leaf(false);
  for (auto it = vars.rbegin(); it != vars.rend(); ++it)
    acc = b.node(*it, zero, acc);
  return b.take(acc);
}

namespace {

void check_eps(const BigRational& eps) {
  if (eps <= 0 || eps >= 1) throw DomainError("epsilon must lie strictly in (0, 1)");
}

}  // namespace

std::size_t canonical_conjunction_size(std::size_t n, const BigRational& eps,
                                       std::size_t max_m) {
  check_eps(eps);
  const BigInt a = boost::multiprecision::numerator(eps);
  const BigInt b = boost::multiprecision::denominator(eps);
  if (a == 1 && (b & (b - 1)) == 0) {
    // eps = 1/2^j: log2(2/eps) = j+1 and 1/eps = 2^j are exact integers.
    const std::uint64_t j = boost::multiprecision::lsb(b);
    const BigInt base = BigInt(n) + j + 1;
    BigInt m = 1;
    for (BigInt i = 0; i < b; ++i) {
      m *= base;
      if (m > max_m)
        throw BudgetError("canonical m exceeds the size budget of " +
                          std::to_string(max_m));
    }
    return m.convert_to<std::size_t>();
  }
  const long double ed = eps.convert_to<long double>();
  const long double raw = powl(static_cast<long double>(n) + log2l(2.0L / ed), 1.0L / ed);
  if (!(raw < static_cast<long double>(max_m)))
    throw BudgetError("canonical m exceeds the size budget of " + std::to_string(max_m));
  return static_cast<std::size_t>(ceill(raw));
}

LiftResult conjunction_lift(const DecisionTree& t, const BigRational& eps,
                            std::optional<std::size_t> m_override, std::size_t max_m) {
  check_eps(eps);
  const std::size_t n = t.num_vars();
  const std::size_t m = m_override ? *m_override : canonical_conjunction_size(n, eps, max_m);
  if (m == 0) throw DomainError("m override must be positive");
  if (m > max_m)
    throw BudgetError("m exceeds the size budget of " + std::to_string(max_m));

  TreeBuilder b(n + m);
  NodeId conj = b.leaf(true);
  const NodeId zero = b.leaf(false);
  for (std::size_t i = m; i > 0; --i) conj = b.node(n + i - 1, zero, conj);

  std::vector<NodeId> mapped(t.node_count());
  for (std::size_t i = 0; i < t.node_count(); ++i) {
    const TreeNode& nd = t.node(static_cast<NodeId>(i));
    if (nd.is_leaf())
      mapped[i] = nd.label ? b.leaf(true) : conj;
    else
      mapped[i] = b.node(static_cast<std::size_t>(nd.var), mapped[nd.zero_child],
                         mapped[nd.one_child]);
  }
  return LiftResult{b.take(mapped[t.root()]), m, !m_override.has_value()};
}

FeatureSet sr_from_partial(const PartialInput& y) {
  std::vector<std::size_t> coords;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == Trit::Zero)
      throw DomainError("partial input contains a 0 at position " +
                        std::to_string(i + 1) + "; expected entries over {1, undefined}");
    if (y[i] == Trit::One) coords.push_back(i);
  }
  return FeatureSet(std::move(coords));
}

bool is_fat(const std::vector<std::uint8_t>& word) {
  std::size_t ones = 0;
  for (auto b : word) ones += b;
  return 2 * ones > word.size();
}

FatWordMap::FatWordMap(std::size_t half_width, std::size_t num_clauses)
    : half_width_(half_width), num_clauses_(num_clauses) {
  if (half_width > 30) throw DomainError("selector half-width too large");
  if (num_clauses == 0) throw DomainError("no clauses");
  if (num_clauses > fat_total())
    throw DomainError("more clauses than fat words: need m <= 2^(2l)");
  const std::size_t len = word_length();
  suffix_fat_.assign(len + 1, std::vector<std::uint64_t>(len + 2, 0));
  suffix_fat_[0][0] = 1;
  for (std::size_t r = 1; r <= len; ++r) {
    for (std::size_t need = 0; need <= len; ++need) {
      const std::uint64_t with_one = suffix_fat_[r - 1][need > 0 ? need - 1 : 0];
      const std::uint64_t with_zero = suffix_fat_[r - 1][need];
      suffix_fat_[r][need] = with_one + with_zero;
    }
  }
}

std::uint64_t FatWordMap::fat_rank(const std::vector<std::uint8_t>& word) const {
  const std::size_t len = word_length();
  if (word.size() != len) throw ShapeError("word length does not match the map");
  if (!is_fat(word)) throw DomainError("word is not fat");
  const std::size_t need_total = half_width_ + 1;
  std::uint64_t rank = 0;
  std::size_t ones = 0;
  for (std::size_t i = 0; i < len; ++i) {
    if (word[i]) {
      // count fat words with 0 here and the same prefix
      const std::size_t rem = len - i - 1;
      const std::size_t need = need_total > ones ? need_total - ones : 0;
      if (need <= rem) rank += suffix_fat_[rem][need];
      ++ones;
    }
  }
  return rank;
}

std::vector<std::uint8_t> FatWordMap::fat_unrank(std::uint64_t rank) const {
  if (rank >= fat_total()) throw DomainError("fat rank out of range");
  const std::size_t len = word_length();
  const std::size_t need_total = half_width_ + 1;
  std::vector<std::uint8_t> word(len, 0);
  std::size_t ones = 0;
  for (std::size_t i = 0; i < len; ++i) {
    const std::size_t rem = len - i - 1;
    const std::size_t need = need_total > ones ? need_total - ones : 0;
    const std::uint64_t with_zero = need <= rem ? suffix_fat_[rem][need] : 0;
    if (rank < with_zero) {
      word[i] = 0;
    } else {
      rank -= with_zero;
      word[i] = 1;
      ++ones;
    }
  }
  return word;
}

std::size_t FatWordMap::clause_of(const std::vector<std::uint8_t>& word) const {
  return clause_of_rank(fat_rank(word));
}

std::uint64_t FatWordMap::preimage_count(std::size_t clause) const {
  if (clause >= num_clauses_) throw DomainError("clause id out of range");
  const std::uint64_t base = fat_total() / num_clauses_;
  const std::uint64_t rem = fat_total() % num_clauses_;
  return base + (clause < rem ? 1 : 0);
}

DecisionTree clause_gadget(std::size_t num_vars,
                           const std::vector<std::size_t>& clause_positions,
                           std::size_t z_position) {
  if (clause_positions.empty()) throw DomainError("empty clause");
  std::set<std::size_t> distinct(clause_positions.begin(), clause_positions.end());
  distinct.insert(z_position);
  if (distinct.size() != clause_positions.size() + 1)
    throw DomainError("clause positions and z must be distinct");
  TreeBuilder b(num_vars);
  return b.take(gadget_nodes(b, clause_positions, z_position));
}

std::size_t min_half_width(std::size_t num_clauses) {
  std::size_t l = 0;
  while ((std::uint64_t{1} << (2 * l)) < num_clauses) ++l;
  return l;
}

SelectorLayout layout_for(const HittingSetInstance& inst) {
  return SelectorLayout{inst.num_vars, min_half_width(inst.num_clauses())};
}

namespace {

struct SelectorBuilder {
  const HittingSetInstance& inst;
  const SelectorLayout layout;
  const FatWordMap& map;
  TreeBuilder& b;
  const std::vector<NodeId>& gadget_roots;
  std::size_t max_nodes;
  std::vector<std::uint8_t> word;

  NodeId build(std::size_t j, std::size_t ones) {
    if (b.size() > max_nodes)
      throw BudgetError("selector construction exceeds the node budget");
    const std::size_t len = layout.selector_width();
    if (j == len) {
      if (2 * ones <= len) return b.leaf(true);  // thin word accepts
      return gadget_roots[map.clause_of(word)];
    }
    word[j] = 0;
    const NodeId zc = build(j + 1, ones);
    word[j] = 1;
    const NodeId oc = build(j + 1, ones + 1);
    return b.node(layout.selector_position(j), zc, oc);
  }
};

}  // namespace

SelectorResult build_selector(const HittingSetInstance& inst, std::size_t max_nodes) {
  const SelectorLayout layout = layout_for(inst);
  if ((std::uint64_t{1} << layout.selector_width()) > max_nodes)
    throw BudgetError("selector block of width " +
                      std::to_string(layout.selector_width()) +
                      " exceeds the node budget");
  FatWordMap map(layout.half_width, inst.num_clauses());
  TreeBuilder b(layout.total_width());
  std::vector<NodeId> gadget_roots;
  gadget_roots.reserve(inst.num_clauses());
  for (const auto& cl : inst.clauses) {
    // clause variables sit at the same indices inside the wider layout
    std::vector<std::size_t> positions(cl.begin(), cl.end());
    gadget_roots.push_back(gadget_nodes(b, positions, layout.z_position()));
  }
  SelectorBuilder sb{inst, layout, map, b, gadget_roots, max_nodes,
                     std::vector<std::uint8_t>(layout.selector_width(), 0)};
  const NodeId root = sb.build(0, 0);
  return SelectorResult{b.take(root), layout};
}

AmplifierParams choose_params(const BigRational& kappa, const BigRational& delta_gap) {
  if (kappa <= 0 || kappa >= 1) throw DomainError("kappa must lie strictly in (0, 1)");
  if (delta_gap <= 0 || delta_gap >= BigRational(7, 8))
    throw DomainError("delta_gap must lie strictly in (0, 7/8)");
  const long double kd = kappa.convert_to<long double>();
  const long double dd = delta_gap.convert_to<long double>();
  const long double raw = 2.0L * logl(2.0L / kd) / (dd * dd);
  if (!(raw < 0x1p62)) throw BudgetError("copy count overflows");
  const std::uint64_t copies = static_cast<std::uint64_t>(ceill(raw));
  const BigRational factor = BigRational(7, 8) - delta_gap / 2;
  const BigInt threshold = ceil_rational(factor * copies);
  return AmplifierParams{kappa, delta_gap, copies,
                         threshold.convert_to<std::uint64_t>()};
}

DecisionTree amplify(const DecisionTree& base, const AmplifierParams& params,
                     std::size_t max_nodes) {
  const std::uint64_t copies = params.copies;
  const std::uint64_t threshold = params.threshold_count;
  if (copies == 0) throw DomainError("need at least one copy");
  if (threshold > copies) throw DomainError("threshold exceeds the copy count");
  const std::size_t width = base.num_vars();
  const std::uint64_t est = copies * (threshold + 1) * base.node_count();
  if (est > max_nodes)
    throw BudgetError("amplifier of estimated size " + std::to_string(est) +
                      " exceeds the node budget of " + std::to_string(max_nodes));

  TreeBuilder b(width * copies);
  // continuation[c] = entry node once `c` copies accepted (saturated)
  std::vector<NodeId> continuation(threshold + 1);
  for (std::uint64_t c = 0; c <= threshold; ++c)
    continuation[c] = b.leaf(c >= threshold);
  std::vector<NodeId> mapped(base.node_count());
  for (std::uint64_t copy = copies; copy-- > 0;) {
    std::vector<NodeId> next(threshold + 1);
    for (std::uint64_t c = 0; c <= threshold; ++c) {
      for (std::size_t i = 0; i < base.node_count(); ++i) {
        const TreeNode& nd = base.node(static_cast<NodeId>(i));
        if (nd.is_leaf()) {
          const std::uint64_t after = std::min(c + nd.label, threshold);
          mapped[i] = continuation[after];
        } else {
          mapped[i] = b.node(static_cast<std::size_t>(nd.var) + copy * width,
                             mapped[nd.zero_child], mapped[nd.one_child]);
        }
      }
      next[c] = mapped[base.root()];
      if (b.size() > max_nodes)
        throw BudgetError("amplifier construction exceeds the node budget");
    }
    continuation = std::move(next);
  }
  return b.take(continuation[0]);
}

Dyadic amplifier_acceptance(const std::vector<Dyadic>& per_copy_values,
                            std::uint64_t threshold) {
  if (threshold == 0) return Dyadic::one();
  std::vector<Dyadic> dist(threshold + 1, Dyadic::zero());
  dist[0] = Dyadic::one();
  for (const Dyadic& v : per_copy_values) {
    std::vector<Dyadic> next(threshold + 1, Dyadic::zero());
    for (std::uint64_t c = 0; c <= threshold; ++c) {
      if (dist[c].is_zero()) continue;
      const std::uint64_t up = std::min(c + 1, threshold);
      next[up] = next[up] + dist[c] * v;
      next[c] = next[c] + dist[c] * v.complement();
    }
    dist = std::move(next);
  }
  return dist[threshold];
}

Dyadic binomial_tail(std::uint64_t copies, std::uint64_t threshold, const Dyadic& p) {
  if (p.compare(Dyadic::one()) > 0) throw DomainError("probability above 1");
  if (threshold == 0) return Dyadic::one();
  if (threshold > copies) return Dyadic::zero();
  if (p.is_zero()) return Dyadic::zero();
  if (p.is_one()) return Dyadic::one();
  if (copies > 0xffffffffull) throw BudgetError("copy count too large for an exact tail");
  const BigInt& a = p.numerator();
  const std::uint64_t e = p.exponent();
  const BigInt b = pow2(e) - a;
  // term(i) = C(copies, i) a^i b^(copies-i), walked downward from i = copies;
  // the ratio updates below divide exactly at every step.
  BigInt term = boost::multiprecision::pow(a, static_cast<unsigned>(copies));
  BigInt sum = term;
  for (std::uint64_t i = copies; i-- > threshold;) {
    term *= (i + 1);
    term /= (copies - i);
    term *= b;
    term /= a;
    sum += term;
  }
  return Dyadic(sum, e * copies);
}

PartialInput assignment_to_partial(const Bits& alpha, const SelectorLayout& layout) {
  if (alpha.size() != layout.num_formula_vars)
    throw ShapeError("assignment length does not match the layout");
  PartialInput p = PartialInput::undef(layout.total_width());
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] > 1) throw DomainError("assignment entry out of {0,1}");
    if (alpha[i] == 0) p.set(i, Trit::One);
  }
  return p;
}

Bits partial_to_assignment(const PartialInput& p, const SelectorLayout& layout) {
  if (p.size() != layout.total_width())
    throw ShapeError("partial input length does not match the layout");
  Bits alpha(layout.num_formula_vars);
  for (std::size_t i = 0; i < layout.num_formula_vars; ++i) {
    if (p[i] == Trit::Zero)
      throw DomainError("formula block contains a 0 at position " + std::to_string(i + 1));
    alpha[i] = (p[i] == Trit::Undef);
  }
  return alpha;
}

}  // namespace dtsr
