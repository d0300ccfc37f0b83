#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dtsr/bigint.hpp"
#include "dtsr/partial_input.hpp"

namespace dtsr {

/// 1-in-k exact hitting set formula: m clauses of exactly k distinct
/// positive variables each; a clause is satisfied iff exactly one of its
/// variables is set to 1. Variables are 0-based in memory, 1-based in files.
struct HittingSetInstance {
  std::size_t num_vars = 0;
  std::size_t clause_width = 0;
  std::vector<std::vector<std::uint32_t>> clauses;

  std::size_t num_clauses() const { return clauses.size(); }
};

/// Validates the invariants (width, distinctness, range, m >= 1) and sorts
/// each clause.
HittingSetInstance make_instance(std::size_t num_vars, std::size_t clause_width,
                                 std::vector<std::vector<std::uint32_t>> clauses);

/// Text format, DIMACS-flavoured:
///
///   c comment
///   p 1inkhs <n> <m> <k>
///   <v1> ... <vk> 0
///
std::string emit_instance(const HittingSetInstance& inst);
HittingSetInstance parse_instance(const std::string& text);
HittingSetInstance load_instance(const std::string& path);
void save_instance(const HittingSetInstance& inst, const std::string& path);

/// Number of clauses with exactly one variable set to 1 under alpha.
std::size_t count_satisfied(const HittingSetInstance& inst, const Bits& alpha);

struct MaxSatResult {
  std::size_t best_count = 0;
  BigRational fraction;
  Bits witness;  // lexicographically smallest argmax
};

/// Exact maximum of count_satisfied over all 2^n assignments. Refuses with
/// BudgetError above max_vars. Deterministic for any jobs value.
MaxSatResult max_sat_fraction_bruteforce(const HittingSetInstance& inst,
                                         unsigned jobs = 1, std::size_t max_vars = 24);

/// Seed-deterministic random instance. With a planted assignment, every
/// clause contains exactly one variable that alpha sets to 1, so alpha
/// satisfies the whole instance.
HittingSetInstance generate_random(std::size_t num_vars, std::size_t num_clauses,
                                   std::size_t clause_width, std::uint64_t seed,
                                   const std::optional<Bits>& planted = {});

/// All k-subsets of {1..n} as clauses, in lexicographic order.
HittingSetInstance complete_instance(std::size_t num_vars, std::size_t clause_width);

}  // namespace dtsr
