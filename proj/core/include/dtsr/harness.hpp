#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dtsr/bigint.hpp"
#include "dtsr/dyadic.hpp"
#include "dtsr/instances.hpp"
#include "dtsr/reductions.hpp"
#include "dtsr/tree.hpp"

namespace dtsr {

struct BudgetOptions {
  std::uint64_t max_steps = 1ull << 24;  // enumeration steps per check
  unsigned jobs = 1;
};

/// One verified claim: the observed value is an exact rational and the
/// verdict is an exact comparison against the expected relation.
struct VerificationReport {
  std::string claim_id;
  std::string params;
  std::string expected;
  std::string observed;
  bool pass = false;
  std::int64_t millis = 0;
};

struct ReportBundle {
  std::vector<VerificationReport> reports;

  bool all_pass() const;
  void append(ReportBundle other);
  /// Stable order by claim id; report content never depends on how the
  /// checks were scheduled.
  void sort_canonical();
};

/// One JSON object per line. include_timing=false zeroes the millis field
/// so identical runs serialize byte-identically.
std::string to_records(const ReportBundle& bundle, bool include_timing = true);
std::string to_table(const ReportBundle& bundle, bool include_timing = true);

/// Enumerates every {1,undef} pattern over a generic width-k clause gadget
/// and checks the good/bad dichotomy: good patterns (z undefined, exactly
/// one clause variable undefined) evaluate to exactly 3/4, every other
/// 0-free pattern to at most 5/8, with the exact t-dependent value when z
/// is undefined.
ReportBundle verify_lemma_cases(std::size_t k);

/// For a satisfying assignment: the selector evaluates to exactly 7/8 on
/// the derived partial input. With amplifier params, additionally checks
/// the exact acceptance tail against 1 - kappa, and against a directly
/// evaluated amplifier when the copy count is small enough to build.
ReportBundle verify_completeness(const HittingSetInstance& inst, const Bits& alpha,
                                 const std::optional<AmplifierParams>& params = {},
                                 std::size_t amplifier_node_budget = 1u << 20);

/// Exact maxima of the selector over {1,undef} patterns.
struct SelectorScan {
  Dyadic slice_max;  // selector block and z all undefined
  PartialInput slice_witness;
  Dyadic full_max;  // unrestricted
  PartialInput full_witness;
  bool thin_term_bounded = false;  // thin probability <= 1/2 for every fixing
  std::uint64_t steps = 0;
};

/// Maximizes the selector over all {1,undef} partial inputs. Decomposes
/// the value per fixed formula-block pattern into the thin mass plus a
/// superset-sum over fat words of exact per-gadget values, so the scan
/// costs O(2^u * 2^(2l+1) * (2l+1)) word operations instead of one
/// eval_partial per point; the values are identical and exact. Witnesses
/// are the lexicographically smallest maximizers ('*' < '1').
SelectorScan scan_selector_maximum(const HittingSetInstance& inst,
                                   const SelectorResult& sel,
                                   const BudgetOptions& budget = {});

/// Certifies max-sat <= 1/2 by brute force (precondition), then checks the
/// soundness floor: the all-undefined-selector slice maximum is at most
/// 7/8 - m/2^(2l+5) and at most 7/8 - 1/128, and the unrestricted maximum
/// is strictly below 7/8. Reports the observed gap as a candidate
/// delta_gap, and cross-checks the scanner against eval_partial on the
/// witnesses plus sample points.
ReportBundle verify_soundness_bruteforce(const HittingSetInstance& inst,
                                         const BudgetOptions& budget = {});

/// Desk-scale check of both sides of the disjunction-lift reduction at
/// kappa = eps/2. Brute force over {1,undef}^n certifies the side; side A
/// checks the constructed set is a (1-eps)-sufficient reason, side B
/// checks by exhaustive search that no eps-sufficient reason exists below
/// the size bound (restated as m - log2(2/eps) when m is overridden: that
/// part of the argument is valid for every m).
ReportBundle verify_t1_claims(const DecisionTree& t, const BigRational& eps,
                              std::optional<std::size_t> m_override = {},
                              const BudgetOptions& budget = {});

/// exp(-2 delta^2 n), rounded up (conservative); the one knowingly
/// inexact value in the harness, used only as an upper bound.
double hoeffding_bound(double delta, std::uint64_t n);

/// Exact probability that a word of length 2l+1 is fat when `fixed_ones`
/// coordinates are pinned to 1 and the rest are uniform.
Dyadic fat_probability_exact(std::size_t half_width, std::size_t fixed_ones);

struct PipelineOptions {
  BigRational kappa = BigRational(1, 4);
  std::optional<BigRational> gap;  // explicit delta_gap
  bool floor_gap = false;          // use the 1/128 all-undefined floor
  std::optional<Bits> alpha;       // satisfying assignment, if known
  BudgetOptions budget;
  std::size_t amplifier_node_budget = 1u << 20;
};

/// Builds the selector, certifies the instance side, picks amplifier
/// params (explicit gap, the 1/128 floor, or the measured gap), amplifies
/// within budget, and emits one bundle with every claim it could check.
ReportBundle run_full_pipeline(const HittingSetInstance& inst, const PipelineOptions& opts);

}  // namespace dtsr
