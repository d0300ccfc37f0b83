#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dtsr/bigint.hpp"
#include "dtsr/dyadic.hpp"
#include "dtsr/explanations.hpp"
#include "dtsr/instances.hpp"
#include "dtsr/tree.hpp"

namespace dtsr {

/// Path tree querying the given variables in order; any 0 branch falls to
/// leaf 0, the final 1 branch reaches leaf 1.
DecisionTree conjunction_tree(std::size_t num_vars,
                              const std::vector<std::size_t>& vars);

/// The fresh-conjunction count m = ceil((n + log2(2/eps))^(1/eps)). Exact
/// whenever 2/eps is a power of two and 1/eps an integer; otherwise
/// evaluated in long double. Throws BudgetError when the result exceeds
/// max_m, since the formula explodes quickly for small eps.
std::size_t canonical_conjunction_size(std::size_t n, const BigRational& eps,
                                       std::size_t max_m = 1u << 20);

struct LiftResult {
  DecisionTree tree;       // over n + m variables
  std::size_t fresh_vars;  // m
  bool canonical_m;        // false when an override was supplied
};

/// Disjoins a conjunction of m fresh variables onto the tree: every 0 leaf
/// is replaced by the conjunction over variables n+1..n+m (1-based), 1
/// leaves stay. The conjunction subtree is shared across all 0 leaves.
LiftResult conjunction_lift(const DecisionTree& t, const BigRational& eps,
                            std::optional<std::size_t> m_override = {},
                            std::size_t max_m = 1u << 20);

/// Positions of the 1 entries; the input must contain no 0.
FeatureSet sr_from_partial(const PartialInput& y);

/// More 1s than 0s.
bool is_fat(const std::vector<std::uint8_t>& word);

/// Round-robin surjection from fat words of length 2l+1 onto clause ids:
/// the j-th fat word in lexicographic order (word[0] most significant) maps
/// to clause j mod m. Surjective since there are exactly 2^(2l) >= m fat
/// words.
class FatWordMap {
 public:
  FatWordMap(std::size_t half_width, std::size_t num_clauses);

  std::size_t half_width() const { return half_width_; }
  std::size_t word_length() const { return 2 * half_width_ + 1; }
  std::uint64_t fat_total() const { return 1ull << (2 * half_width_); }

  std::uint64_t fat_rank(const std::vector<std::uint8_t>& word) const;
  std::vector<std::uint8_t> fat_unrank(std::uint64_t rank) const;

  /// 0-based clause id assigned to a fat word.
  std::size_t clause_of(const std::vector<std::uint8_t>& word) const;
  std::size_t clause_of_rank(std::uint64_t rank) const { return rank % num_clauses_; }
  std::uint64_t preimage_count(std::size_t clause) const;

 private:
  std::size_t half_width_;
  std::size_t num_clauses_;
  // suffix_fat_[r][need]: words of length r with at least `need` ones
  std::vector<std::vector<std::uint64_t>> suffix_fat_;
};

/// Clause gadget over the clause variables and an auxiliary variable z.
/// Queries all k clause positions, then z (depth exactly k+1 on every
/// path); outputs 1 iff exactly one clause variable is 0, or all are 1 and
/// z = 0.
DecisionTree clause_gadget(std::size_t num_vars,
                           const std::vector<std::size_t>& clause_positions,
                           std::size_t z_position);

/// Variable layout of a selector construction over n formula variables:
/// x_1..x_n at positions 0..n-1, the selector block y_1..y_{2l+1} next, z
/// last; total width n + 2l + 2.
struct SelectorLayout {
  std::size_t num_formula_vars = 0;  // n
  std::size_t half_width = 0;        // l, smallest with m <= 2^(2l)

  std::size_t selector_width() const { return 2 * half_width + 1; }
  std::size_t total_width() const { return num_formula_vars + selector_width() + 1; }
  std::size_t selector_position(std::size_t j) const { return num_formula_vars + j; }
  std::size_t z_position() const { return total_width() - 1; }
};

std::size_t min_half_width(std::size_t num_clauses);
SelectorLayout layout_for(const HittingSetInstance& inst);

struct SelectorResult {
  DecisionTree tree;
  SelectorLayout layout;
};

/// The dispatch tree: reads the selector block, outputs 1 on thin words,
/// and on fat words runs the clause gadget of the round-robin clause.
/// Depth is 2l+1+k+1. Sub-DAGs are shared, so the arena stays small even
/// though the unfolded tree has 2^(2l+1) selector leaves.
SelectorResult build_selector(const HittingSetInstance& inst,
                              std::size_t max_nodes = 1u << 22);

struct AmplifierParams {
  BigRational kappa;
  BigRational delta_gap;
  std::uint64_t copies = 1;           // K
  std::uint64_t threshold_count = 1;  // accepting copies required
};

/// K = ceil(2 ln(2/kappa) / delta_gap^2), threshold = ceil((7/8 -
/// delta_gap/2) * K). The gap is a caller decision (measured, the 1/128
/// floor, or explicit); there is no default.
AmplifierParams choose_params(const BigRational& kappa, const BigRational& delta_gap);

/// K copies of the base tree on disjoint variable blocks; accepts iff at
/// least threshold_count copies accept. Copies are stitched through
/// continuation nodes indexed by (copy, accepting count so far, saturated
/// at the threshold), so the arena is O(K * threshold * |base|) while the
/// unfolded tree keeps every path querying all K blocks.
DecisionTree amplify(const DecisionTree& base, const AmplifierParams& params,
                     std::size_t max_nodes = 1u << 22);

/// Exact acceptance probability of the thresholding: tail of a sum of
/// independent Bernoulli draws with the given per-copy values.
Dyadic amplifier_acceptance(const std::vector<Dyadic>& per_copy_values,
                            std::uint64_t threshold);

/// Homogeneous case, efficient for large K: P[Bin(copies, p) >= threshold].
Dyadic binomial_tail(std::uint64_t copies, std::uint64_t threshold, const Dyadic& p);

/// alpha_i = 0 maps to a fixed 1, alpha_i = 1 maps to undefined; the
/// selector block and z are undefined.
PartialInput assignment_to_partial(const Bits& alpha, const SelectorLayout& layout);

/// Reverse of the above on the formula block; the block must contain no 0.
Bits partial_to_assignment(const PartialInput& p, const SelectorLayout& layout);

}  // namespace dtsr
