#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dtsr/bigint.hpp"
#include "dtsr/dyadic.hpp"
#include "dtsr/tree.hpp"

namespace dtsr {

/// Sorted set of distinct 0-based coordinates. The text form is 1-based
/// comma-separated indices ("1,3,7"), matching the file and CLI convention.
class FeatureSet {
 public:
  FeatureSet() = default;
  explicit FeatureSet(std::vector<std::size_t> coords);

  static FeatureSet full(std::size_t n);
  static FeatureSet parse(const std::string& text, std::size_t num_vars);

  std::size_t size() const { return coords_.size(); }
  bool empty() const { return coords_.empty(); }
  bool contains(std::size_t coord) const;
  const std::vector<std::size_t>& coords() const { return coords_; }
  auto begin() const { return coords_.begin(); }
  auto end() const { return coords_.end(); }

  FeatureSet with(std::size_t coord) const;

  std::string to_string() const;

  bool operator==(const FeatureSet&) const = default;

 private:
  std::vector<std::size_t> coords_;
};

/// y with y_i = x_i for i in S, undefined elsewhere.
PartialInput restriction_of(const Bits& x, const FeatureSet& s);

/// Pr[T(z) = T(x)] where z agrees with x on S and is uniform elsewhere.
Dyadic agreement_probability(const DecisionTree& t, const Bits& x, const FeatureSet& s);

/// Exact comparison agreement_probability >= delta; no rounding anywhere.
bool is_delta_sufficient(const DecisionTree& t, const Bits& x, const FeatureSet& s,
                         const BigRational& delta);

/// The delta = 1 case, decided by a pruning walk over the leaves reachable
/// under the restriction; no counting.
bool is_sufficient_reason(const DecisionTree& t, const Bits& x, const FeatureSet& s);

enum class SearchStatus {
  kFound,
  kNoneWithinCap,    // search space exhausted, no set qualifies
  kBudgetExceeded,   // gave up before exhausting the space
};

struct MinSrOptions {
  std::optional<std::size_t> size_cap;      // default: number of variables
  std::uint64_t max_subsets = 1ull << 24;   // enumeration budget
  std::size_t max_vars = 22;                // refuse larger search spaces
  unsigned jobs = 1;
};

struct MinSrResult {
  SearchStatus status = SearchStatus::kNoneWithinCap;
  std::optional<FeatureSet> set;
  std::optional<Dyadic> agreement;
  std::uint64_t subsets_examined = 0;
  std::string method;
};

/// Smallest delta-sufficient reason, subsets enumerated in (cardinality,
/// lexicographic) order over the tree's support. Coordinates the tree never
/// queries cannot change the agreement, so skipping them is sound and does
/// not disturb the tie-break. The result is independent of `jobs`.
MinSrResult min_sr_exhaustive(const DecisionTree& t, const Bits& x,
                              const BigRational& delta, const MinSrOptions& opts = {});

/// Greedy heuristic: repeatedly adds the coordinate that maximizes the
/// agreement (ties to the smallest index) until it reaches delta. Always
/// terminates with a (not necessarily minimal) reason.
MinSrResult min_sr_greedy(const DecisionTree& t, const Bits& x, const BigRational& delta);

}  // namespace dtsr
