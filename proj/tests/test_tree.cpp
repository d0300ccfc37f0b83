#include <doctest.h>

#include <array>
#include <thread>

#include "dtsr/errors.hpp"
#include "dtsr/reductions.hpp"
#include "dtsr/tree.hpp"
#include "dtsr/tree_io.hpp"
#include "test_util.hpp"

using namespace dtsr;
using namespace dtsr::testing;

namespace {

DecisionTree leaf_tree(bool label, std::size_t n = 1) {
  TreeBuilder b(n);
  return b.take(b.leaf(label));
}

DecisionTree or2() {
  TreeBuilder b(2);
  return b.take(b.node(0, b.node(1, b.leaf(false), b.leaf(true)), b.leaf(true)));
}

// Queries x1 twice along its 0-branch; the inner test must follow the
// outer decision, so the whole tree computes the constant 1.
DecisionTree repeated_var_tree() {
  TreeBuilder b(2);
  const NodeId inner = b.node(0, b.leaf(true), b.leaf(false));
  return b.take(b.node(0, inner, b.leaf(true)));
}

}  // namespace

TEST_CASE("eval_complete basics") {
  CHECK(eval_complete(leaf_tree(true), {0}) == 1);
  CHECK(eval_complete(leaf_tree(true), {1}) == 1);

  const DecisionTree conj = conjunction_over_first(2, 2);
  CHECK(eval_complete(conj, {1, 1}) == 1);
  CHECK(eval_complete(conj, {1, 0}) == 0);
  CHECK(eval_complete(conj, {0, 1}) == 0);

  CHECK_THROWS_AS(eval_complete(conj, {1}), ShapeError);
  CHECK_THROWS_AS(eval_complete(conj, {1, 2}), DomainError);
}

TEST_CASE("eval_complete on the clause gadget") {
  // accepts iff exactly one 0 among the clause variables, or all 1 and z=0
  const DecisionTree g = clause_gadget(4, {0, 1, 2}, 3);
  CHECK(eval_complete(g, {0, 1, 1, 0}) == 1);
  CHECK(eval_complete(g, {0, 1, 1, 1}) == 1);
  CHECK(eval_complete(g, {1, 1, 1, 0}) == 1);
  CHECK(eval_complete(g, {1, 1, 1, 1}) == 0);
  CHECK(eval_complete(g, {0, 0, 1, 0}) == 0);
  CHECK(eval_complete(g, {0, 0, 0, 1}) == 0);
}

TEST_CASE("eval_partial basics") {
  CHECK(eval_partial(leaf_tree(true), PartialInput::undef(1)) == Dyadic::one());
  CHECK(eval_partial(conjunction_over_first(2, 2), PartialInput::undef(2)) ==
        Dyadic(1, 2));
  // one clause variable and z undefined, the rest fixed to 1: the good shape
  const DecisionTree g = clause_gadget(4, {0, 1, 2}, 3);
  CHECK(eval_partial(g, PartialInput::parse("1*1*")) == Dyadic(3, 2));
  CHECK_THROWS_AS(eval_partial(g, PartialInput::undef(3)), ShapeError);
}

TEST_CASE("eval_partial equals eval_complete on complete inputs") {
  SeededRng rng(7);
  for (int i = 0; i < 40; ++i) {
    const DecisionTree t = random_tree(rng, 5, 6);
    const Bits x = random_bits(rng, 5);
    const Dyadic v = eval_partial(t, PartialInput::from_bits(x));
    CHECK(v == (eval_complete(t, x) ? Dyadic::one() : Dyadic::zero()));
  }
}

TEST_CASE("repeated variables are evaluated through the path environment") {
  const DecisionTree t = repeated_var_tree();
  CHECK_FALSE(t.read_once_per_path());
  // naive child-averaging would give 3/4 here
  CHECK(eval_partial(t, PartialInput::undef(2)) == Dyadic::one());
  CHECK(eval_partial(t, PartialInput::undef(2)) ==
        eval_partial_bruteforce(t, PartialInput::undef(2)));
}

TEST_CASE("eval_partial matches the enumeration oracle on random trees") {
  SeededRng rng(11);
  for (int i = 0; i < 60; ++i) {
    const std::size_t n = 2 + rng.below(6);
    const DecisionTree t = random_tree(rng, n, 6);
    for (int j = 0; j < 3; ++j) {
      const PartialInput y = random_partial(rng, n);
      const Dyadic v = eval_partial(t, y);
      CHECK(v == eval_partial_bruteforce(t, y));
      // probability bounds and the exponent cap
      CHECK(v.compare(Dyadic::one()) <= 0);
      CHECK(v.exponent() <= y.undef_count());
    }
  }
}

TEST_CASE("concurrent evaluation of a shared tree") {
  SeededRng rng(12);
  const DecisionTree t = random_tree(rng, 8, 7);
  const PartialInput y = random_partial(rng, 8);
  const Dyadic expect = eval_partial(t, y);
  std::vector<std::thread> pool;
  std::array<bool, 4> ok{};
  for (std::size_t w = 0; w < ok.size(); ++w)
    pool.emplace_back([&, w] {
      bool good = true;
      for (int i = 0; i < 50; ++i) good = good && (eval_partial(t, y) == expect);
      ok[w] = good;
    });
  for (auto& th : pool) th.join();
  for (bool good : ok) CHECK(good);
}

TEST_CASE("averaging law at an undefined root variable") {
  SeededRng rng(13);
  for (int i = 0; i < 40; ++i) {
    const std::size_t n = 2 + rng.below(5);
    const DecisionTree t = random_tree(rng, n, 5);
    if (t.node(t.root()).is_leaf()) continue;
    const auto var = static_cast<std::size_t>(t.node(t.root()).var);
    PartialInput y = random_partial(rng, n);
    y.set(var, Trit::Undef);
    PartialInput y0 = y, y1 = y;
    y0.set(var, Trit::Zero);
    y1.set(var, Trit::One);
    CHECK(eval_partial(t, y) ==
          Dyadic::average(eval_partial(t, y0), eval_partial(t, y1)));
  }
}

TEST_CASE("eval_partial_bruteforce basics and budget") {
  CHECK(eval_partial_bruteforce(leaf_tree(false), PartialInput::undef(1)) ==
        Dyadic::zero());
  CHECK(eval_partial_bruteforce(or2(), PartialInput::undef(2)) == Dyadic(3, 2));
  const DecisionTree t = conjunction_over_first(8, 8);
  CHECK_THROWS_AS(eval_partial_bruteforce(t, PartialInput::undef(8), 4), BudgetError);
}

TEST_CASE("consistency of partial inputs") {
  CHECK(consistent(PartialInput::parse("1*"), PartialInput::parse("*0")));
  CHECK_FALSE(consistent(PartialInput::parse("10"), PartialInput::parse("11")));
  CHECK_THROWS_AS(consistent(PartialInput::parse("1"), PartialInput::parse("10")),
                  ShapeError);
  SeededRng rng(3);
  for (int i = 0; i < 30; ++i) {
    const PartialInput y = random_partial(rng, 6);
    CHECK(consistent(y, y));
  }
}

TEST_CASE("validate reports structure") {
  const auto conj = validate(conjunction_over_first(5, 5));
  CHECK(conj.well_formed);
  CHECK(conj.read_once_per_path);
  CHECK(conj.depth == 5);
  CHECK(conj.unfolded_size == 11);

  const auto rep = validate(repeated_var_tree());
  CHECK_FALSE(rep.read_once_per_path);

  // sharing: a diamond counts once in the arena, twice unfolded
  TreeBuilder b(2);
  const NodeId shared = b.node(1, b.leaf(false), b.leaf(true));
  const auto diamond = validate(b.take(b.node(0, shared, shared)));
  CHECK(diamond.node_count == 4);
  CHECK(diamond.unfolded_size == 7);
}

TEST_CASE("serialize round-trips random trees exactly") {
  SeededRng rng(17);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 1 + rng.below(8);
    const DecisionTree t = random_tree(rng, n, 6);
    const DecisionTree back = deserialize(serialize(t));
    CHECK(back == t);
  }
}

TEST_CASE("round-trip preserves eval_complete on every input") {
  SeededRng rng(19);
  for (int i = 0; i < 10; ++i) {
    const std::size_t n = 1 + rng.below(12);
    const DecisionTree t = random_tree(rng, n, 8);
    const DecisionTree back = deserialize(serialize(t));
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      Bits x(n);
      for (std::size_t j = 0; j < n; ++j) x[j] = (mask >> j) & 1;
      CHECK(eval_complete(back, x) == eval_complete(t, x));
    }
  }
}

TEST_CASE("leaf-only document") {
  const DecisionTree t = deserialize("dtree 1\nvars 3\n0 leaf 1\nroot 0\n");
  CHECK(t.node_count() == 1);
  CHECK(eval_complete(t, {0, 1, 0}) == 1);
}

TEST_CASE("hand-written gadget document matches the builder") {
  // the width-2 clause gadget over variables 1,2 with z = 3
  const std::string doc =
      "dtree 1\n"
      "vars 3\n"
      "# z level, by number of zeros seen\n"
      "10 leaf 0\n"
      "11 leaf 1\n"
      "20 node 3 11 10\n"
      "21 node 3 11 11\n"
      "22 node 3 10 10\n"
      "30 node 2 21 20\n"
      "31 node 2 22 21\n"
      "40 node 1 31 30\n"
      "root 40\n";
  const DecisionTree parsed = deserialize(doc);
  const DecisionTree built = clause_gadget(3, {0, 1}, 2);
  for (std::uint64_t mask = 0; mask < 8; ++mask) {
    const Bits x = {static_cast<std::uint8_t>(mask & 1),
                    static_cast<std::uint8_t>((mask >> 1) & 1),
                    static_cast<std::uint8_t>((mask >> 2) & 1)};
    CHECK(eval_complete(parsed, x) == eval_complete(built, x));
  }
}

TEST_CASE("malformed tree documents") {
  CHECK_THROWS_AS(deserialize(""), ParseError);
  CHECK_THROWS_AS(deserialize("dtree 2\nvars 1\n0 leaf 0\nroot 0\n"), ParseError);
  CHECK_THROWS_AS(deserialize("dtree 1\n0 leaf 0\nroot 0\n"), ParseError);
  CHECK_THROWS_AS(deserialize("dtree 1\nvars 1\n0 leaf 2\nroot 0\n"), ParseError);
  CHECK_THROWS_AS(deserialize("dtree 1\nvars 1\n0 leaf 0\n0 leaf 1\nroot 0\n"), ParseError);
  CHECK_THROWS_AS(deserialize("dtree 1\nvars 1\n0 leaf 0\n"), ParseError);
  CHECK_THROWS_AS(deserialize("dtree 1\nvars 1\n0 node 1 1 1\nroot 0\n"), ParseError);
  // variable out of range, with the line number in the message
  try {
    deserialize("dtree 1\nvars 2\n0 leaf 0\n1 node 3 0 0\nroot 1\n");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
  // a cycle is a structural error, not a parse error
  CHECK_THROWS_AS(
      deserialize("dtree 1\nvars 1\n0 node 1 1 2\n1 node 1 0 2\n2 leaf 1\nroot 0\n"),
      StructureError);
}

TEST_CASE("forward references parse") {
  const DecisionTree t = deserialize(
      "dtree 1\nvars 1\n5 node 1 1 2\n1 leaf 0\n2 leaf 1\nroot 5\n");
  CHECK(eval_complete(t, {1}) == 1);
  CHECK(eval_complete(t, {0}) == 0);
}

TEST_CASE("support and complement") {
  const DecisionTree t = conjunction_over_first(6, 3);
  CHECK(support(t) == std::vector<std::size_t>{0, 1, 2});
  const DecisionTree c = complement_leaves(t);
  CHECK(eval_complete(c, {1, 1, 1, 0, 0, 0}) == 0);
  CHECK(eval_complete(c, {0, 1, 1, 0, 0, 0}) == 1);
}
