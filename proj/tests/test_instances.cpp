#include <doctest.h>

#include "dtsr/errors.hpp"
#include "dtsr/instances.hpp"
#include "dtsr/rng.hpp"

using namespace dtsr;

TEST_CASE("instance text round trip") {
  const HittingSetInstance one = make_instance(3, 3, {{0, 1, 2}});
  CHECK(parse_instance(emit_instance(one)).clauses == one.clauses);

  SeededRng rng(61);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 3 + rng.below(8);
    const std::size_t k = 2 + rng.below(std::min<std::size_t>(n, 4) - 1);
    const std::size_t m = 1 + rng.below(8);
    const HittingSetInstance inst = generate_random(n, m, k, rng.next());
    const HittingSetInstance back = parse_instance(emit_instance(inst));
    CHECK(back.num_vars == inst.num_vars);
    CHECK(back.clause_width == inst.clause_width);
    CHECK(back.clauses == inst.clauses);
  }
}

TEST_CASE("parser rejects invariant violations with line numbers") {
  CHECK_THROWS_AS(parse_instance("p 1inkhs 3 1 3\n1 1 2 0\n"), ParseError);
  try {
    parse_instance("p 1inkhs 3 2 3\n1 2 3 0\n1 1 2 0\n");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_instance("p 1inkhs 3 1 3\n1 2 0\n"), ParseError);      // width
  CHECK_THROWS_AS(parse_instance("p 1inkhs 3 1 3\n1 2 4 0\n"), ParseError);    // range
  CHECK_THROWS_AS(parse_instance("p 1inkhs 3 1 3\n1 2 3\n"), ParseError);      // no 0
  CHECK_THROWS_AS(parse_instance("p 1inkhs 3 2 3\n1 2 3 0\n"), ParseError);    // count
  CHECK_THROWS_AS(parse_instance("1 2 3 0\n"), ParseError);                    // header
  CHECK_THROWS_AS(parse_instance("p 1inkhs 3 1 4\n"), ParseError);             // k > n
  // comments are fine
  const auto inst = parse_instance("c a comment\np 1inkhs 3 1 2\nc mid\n2 3 0\n");
  CHECK(inst.clauses == std::vector<std::vector<std::uint32_t>>{{1, 2}});
}

TEST_CASE("count_satisfied") {
  const HittingSetInstance inst = make_instance(4, 3, {{0, 1, 2}, {1, 2, 3}});
  CHECK(count_satisfied(inst, {0, 0, 0, 0}) == 0);
  CHECK(count_satisfied(inst, {1, 0, 0, 0}) == 1);
  CHECK(count_satisfied(inst, {1, 0, 0, 1}) == 2);
  CHECK(count_satisfied(inst, {1, 1, 0, 0}) == 1);  // {1,2,3} still has exactly one
  CHECK(count_satisfied(inst, {1, 1, 1, 0}) == 0);
  CHECK_THROWS_AS(count_satisfied(inst, {1, 0, 0}), ShapeError);

  // independent per-clause recount on random instances
  SeededRng rng(67);
  for (int i = 0; i < 40; ++i) {
    const HittingSetInstance r = generate_random(8, 6, 3, rng.next());
    Bits alpha(8);
    for (auto& b : alpha) b = rng.coin();
    std::size_t expect = 0;
    for (const auto& cl : r.clauses) {
      std::size_t ones = 0;
      for (auto v : cl) ones += alpha[v];
      expect += ones == 1;
    }
    CHECK(count_satisfied(r, alpha) == expect);
  }
}

TEST_CASE("brute-force maximum") {
  const HittingSetInstance single = make_instance(3, 3, {{0, 1, 2}});
  const auto r = max_sat_fraction_bruteforce(single);
  CHECK(r.fraction == 1);
  CHECK(r.witness == Bits{0, 0, 1});  // lexicographically smallest argmax

  CHECK_THROWS_AS(
      max_sat_fraction_bruteforce(complete_instance(25, 3)), BudgetError);
}

TEST_CASE("brute-force maximum matches a double enumeration") {
  SeededRng rng(71);
  for (int i = 0; i < 10; ++i) {
    const std::size_t n = 4 + rng.below(5);
    const HittingSetInstance inst = generate_random(n, 2 + rng.below(6), 3, rng.next());
    const auto fast = max_sat_fraction_bruteforce(inst);
    std::size_t best = 0;
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << n); ++a) {
      Bits alpha(n);
      for (std::size_t j = 0; j < n; ++j) alpha[j] = (a >> j) & 1;
      best = std::max(best, count_satisfied(inst, alpha));
    }
    CHECK(fast.best_count == best);
    CHECK(count_satisfied(inst, fast.witness) == best);
  }
}

TEST_CASE("brute-force maximum is jobs-independent") {
  SeededRng rng(73);
  const HittingSetInstance inst = generate_random(10, 8, 3, rng.next());
  const auto serial = max_sat_fraction_bruteforce(inst, 1);
  const auto parallel = max_sat_fraction_bruteforce(inst, 4);
  CHECK(serial.best_count == parallel.best_count);
  CHECK(serial.witness == parallel.witness);
}

TEST_CASE("random generation is seed-deterministic") {
  const auto a = generate_random(9, 7, 3, 12345);
  const auto b = generate_random(9, 7, 3, 12345);
  const auto c = generate_random(9, 7, 3, 12346);
  CHECK(a.clauses == b.clauses);
  CHECK(a.clauses != c.clauses);
}

TEST_CASE("planted instances are satisfied by the plant") {
  SeededRng rng(79);
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = 5 + rng.below(4);
    Bits alpha(n, 0);
    alpha[rng.below(n)] = 1;
    alpha[rng.below(n)] = 1;  // one or two ones
    const std::size_t m = 2 + rng.below(5);
    const HittingSetInstance inst = generate_random(n, m, 3, rng.next(), alpha);
    CHECK(count_satisfied(inst, alpha) == m);
    CHECK(max_sat_fraction_bruteforce(inst).fraction == 1);
  }
  CHECK_THROWS_AS(generate_random(5, 2, 3, 1, Bits(5, 0)), DomainError);
  CHECK_THROWS_AS(generate_random(5, 2, 3, 1, Bits(5, 1)), DomainError);
}

TEST_CASE("complete instance enumerates all width-k subsets") {
  const HittingSetInstance inst = complete_instance(4, 3);
  CHECK(inst.num_clauses() == 4);
  CHECK(inst.clauses == std::vector<std::vector<std::uint32_t>>{
                            {0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
}

TEST_CASE("no small instance stays below half max-sat") {
  // The smallest width-3 instance family with max-sat <= 1/2 needs 14
  // variables; one step below, the complete instance already fails.
  const auto r13 = max_sat_fraction_bruteforce(complete_instance(13, 3), 1, 24);
  CHECK(r13.fraction == BigRational(144, 286));
  CHECK(r13.fraction > BigRational(1, 2));
}
