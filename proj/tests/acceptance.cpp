// Acceptance suite: every criterion prints exactly one PASS/FAIL line;
// the process exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "dtsr/explanations.hpp"
#include "dtsr/harness.hpp"
#include "dtsr/instances.hpp"
#include "dtsr/reductions.hpp"
#include "dtsr/rng.hpp"
#include "dtsr/tree.hpp"
#include "test_util.hpp"

using namespace dtsr;
using namespace dtsr::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += "FAILED: " + what;
    }
  }
  void note(const std::string& text) {
    if (!detail.empty()) detail += "; ";
    detail += text;
  }
};

int failures = 0;

void run(int index, const std::string& title, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.pass = false;
    out.note(std::string("exception: ") + e.what());
  }
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  failures += !out.pass;
  std::printf("[%d] %s  %-34s  %6lld ms  %s\n", index, out.pass ? "PASS" : "FAIL",
              title.c_str(), static_cast<long long>(ms), out.detail.c_str());
  std::fflush(stdout);
}

// ---- criterion bodies ------------------------------------------------------

void criterion1_lemma_cases(Outcome& out) {
  for (std::size_t k = 3; k <= 5; ++k) {
    const ReportBundle b = verify_lemma_cases(k);
    out.require(b.all_pass(), "dichotomy at k=" + std::to_string(k));
  }
  out.note("2^(k+1) patterns enumerated for k=3,4,5; good=3/4, bad<=5/8 exactly");
}

void criterion2_completeness(Outcome& out) {
  const Dyadic seven_eighths(7, 3);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::size_t n = 5 + (seed % 4);  // 5..8
    const std::size_t m = 3 + (seed % 4);  // 3..6
    Bits alpha(n, 0);
    alpha[seed % n] = 1;
    const HittingSetInstance inst = generate_random(n, m, 3, seed, alpha);
    const SelectorResult sel = build_selector(inst);
    const Dyadic v = eval_partial(sel.tree, assignment_to_partial(alpha, sel.layout));
    out.require(v == seven_eighths,
                "selector value " + v.to_string() + " at seed " + std::to_string(seed));
  }
  out.note("20 seeded planted instances, selector value = 7/8 exactly on each");
}

void criterion3_soundness_floor(Outcome& out) {
  // No certified instance fits the stated width cap: any width-3 instance
  // over up to 13 variables satisfies more than half its clauses (the
  // uniform distribution is the optimal clause strategy of the symmetric
  // game), so the smallest certified instance is all triples over 14
  // variables, at width 14 + 2*5 + 2 = 26.
  const auto below = max_sat_fraction_bruteforce(complete_instance(13, 3), 1, 24);
  out.require(below.fraction > BigRational(1, 2),
              "boundary witness: n=13 complete instance stays above 1/2");

  const HittingSetInstance inst = complete_instance(14, 3);
  BudgetOptions budget;
  budget.jobs = 4;
  const ReportBundle b = verify_soundness_bruteforce(inst, budget);
  bool saw_m_bound = false, saw_floor = false, saw_strict = false;
  for (const auto& r : b.reports) {
    if (r.claim_id == "soundness.slice-bound-m") {
      saw_m_bound = true;
      out.require(r.pass, "slice max <= 7/8 - m/2^(2l+5)");
    }
    if (r.claim_id == "soundness.slice-bound-floor") {
      saw_floor = true;
      out.require(r.pass, "slice max <= 7/8 - 1/128");
    }
    if (r.claim_id == "soundness.full-strict") {
      saw_strict = true;
      out.require(r.pass, "unrestricted max < 7/8");
      out.note("unrestricted max " + r.observed);
    }
  }
  out.require(saw_m_bound && saw_floor && saw_strict, "all three bounds reported");
  out.require(b.all_pass(), "soundness bundle");
  out.note("n=14 m=364 k=3 (width 26; no certified instance exists within width 22)");
}

void criterion4_oracle_equivalence(Outcome& out) {
  SeededRng rng(4001);
  std::size_t with_repeats = 0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 2 + rng.below(11);  // up to 12
    const DecisionTree t = random_tree(rng, n, 8);
    with_repeats += !t.read_once_per_path();
    for (int j = 0; j < 5; ++j) {
      const PartialInput y = random_partial(rng, n);
      const Dyadic fast = eval_partial(t, y);
      const Dyadic slow = eval_partial_bruteforce(t, y);
      out.require(fast == slow, "tree " + std::to_string(i) + " input " + y.to_string());
      if (!out.pass) return;
    }
  }
  out.require(with_repeats > 0, "corpus contains repeated-variable trees");
  out.note("200 trees x 5 partial inputs, " + std::to_string(with_repeats) +
           " trees with repeated variables");
}

void criterion5_t1_claims(Outcome& out) {
  const BigRational eps(1, 2);
  std::size_t side_a = 0, side_b = 0;

  auto classify_and_check = [&](const DecisionTree& t) {
    const ReportBundle b = verify_t1_claims(t, eps, 8);
    std::string side;
    for (const auto& r : b.reports)
      if (r.claim_id == "t1.side") side = r.observed.substr(0, 1);
    if (side == "A") ++side_a;
    if (side == "B") ++side_b;
    out.require(b.all_pass(), "t1 claims bundle (side " + side + ")");
  };

  // fixed corpus covering both sides
  TreeBuilder b1(2);
  classify_and_check(b1.take(b1.leaf(true)));
  TreeBuilder b2(1);
  classify_and_check(b2.take(b2.node(0, b2.leaf(false), b2.leaf(true))));
  TreeBuilder b3(3);
  NodeId acc = b3.leaf(true);
  for (std::size_t i = 3; i-- > 0;) acc = b3.node(i, acc, b3.leaf(false));
  classify_and_check(b3.take(acc));
  TreeBuilder b4(2);
  classify_and_check(b4.take(b4.leaf(false)));

  // plus random trees, whichever side they certify to
  SeededRng rng(5001);
  for (int i = 0; i < 12; ++i) classify_and_check(random_tree(rng, 2 + rng.below(3), 4));

  out.require(side_a >= 1, "at least one side-A tree");
  out.require(side_b >= 1, "at least one side-B tree");
  out.note("override m=8 with the size bound restated as m - log2(2/eps); sides A=" +
           std::to_string(side_a) + " B=" + std::to_string(side_b));
}

void criterion6_amplifier(Outcome& out) {
  // exact equality of direct evaluation and the Bernoulli tail for K <= 3
  const HittingSetInstance inst = make_instance(3, 2, {{0, 1}, {1, 2}});
  const SelectorResult sel = build_selector(inst);
  SeededRng rng(6001);
  for (std::uint64_t copies = 1; copies <= 3; ++copies) {
    for (std::uint64_t threshold = 1; threshold <= copies; ++threshold) {
      const AmplifierParams params{BigRational(1, 2), BigRational(1, 2), copies, threshold};
      const DecisionTree amp = amplify(sel.tree, params);
      const PartialInput y = random_partial(rng, sel.tree.num_vars());
      const Dyadic per = eval_partial(sel.tree, y);
      std::vector<Trit> cat;
      for (std::uint64_t c = 0; c < copies; ++c)
        for (std::size_t j = 0; j < y.size(); ++j) cat.push_back(y[j]);
      const Dyadic direct = eval_partial(amp, PartialInput(std::move(cat)));
      const Dyadic tail = binomial_tail(copies, threshold, per);
      out.require(direct == tail, "K=" + std::to_string(copies) +
                                      " t=" + std::to_string(threshold));
      // heterogeneous blocks against the Poisson-binomial recursion
      std::vector<Dyadic> values;
      std::vector<Trit> mixed;
      for (std::uint64_t c = 0; c < copies; ++c) {
        const PartialInput yc = random_partial(rng, sel.tree.num_vars());
        values.push_back(eval_partial(sel.tree, yc));
        for (std::size_t j = 0; j < yc.size(); ++j) mixed.push_back(yc[j]);
      }
      out.require(eval_partial(amp, PartialInput(std::move(mixed))) ==
                      amplifier_acceptance(values, threshold),
                  "heterogeneous blocks at K=" + std::to_string(copies));
    }
  }

  // canonical K reaches 1 - kappa, exactly
  const Dyadic seven_eighths(7, 3);
  {
    const AmplifierParams p = choose_params(BigRational(1, 4), BigRational(1, 2));
    out.require(p.copies == 17 && p.threshold_count == 11, "canonical parameter values");
    const Dyadic tail = binomial_tail(p.copies, p.threshold_count, seven_eighths);
    out.require(tail.compare(BigRational(3, 4)) >= 0, "completeness at K=17");
  }
  {
    // the 1/128 floor: tens of thousands of copies, still exact
    const AmplifierParams p = choose_params(BigRational(1, 2), BigRational(1, 128));
    const Dyadic tail = binomial_tail(p.copies, p.threshold_count, seven_eighths);
    out.require(tail.compare(BigRational(1, 2)) >= 0,
                "completeness at the floor gap (K=" + std::to_string(p.copies) + ")");
    out.note("floor-gap tail computed exactly at K=" + std::to_string(p.copies) +
             ", numerator ~" + std::to_string(tail.numerator().str().size()) + " digits");
  }
}

void criterion7_fat_words(Outcome& out) {
  for (std::size_t l = 1; l <= 10; ++l) {
    const std::size_t len = 2 * l + 1;
    BigInt fat_count = 0;
    for (std::size_t j = l + 1; j <= len; ++j) fat_count += binomial(len, j);
    out.require(fat_count == pow2(2 * l), "fat count 2^(2l) at l=" + std::to_string(l));

    const Dyadic expect = Dyadic::half() + Dyadic(binomial(2 * l, l), 2 * l + 1);
    out.require(fat_probability_exact(l, 1) == expect,
                "one-fixed fat probability at l=" + std::to_string(l));
  }
  for (std::size_t l = 1; l <= 8; ++l) {
    // direct enumeration of the 2^(2l) free completions with one pinned 1
    const std::size_t free_pos = 2 * l;
    std::uint64_t fat = 0;
    for (std::uint64_t w = 0; w < (std::uint64_t{1} << free_pos); ++w)
      fat += std::popcount(w) + 1 > static_cast<int>(l);
    out.require(fat_probability_exact(l, 1) == Dyadic(BigInt(fat), free_pos),
                "enumeration cross-check at l=" + std::to_string(l));
  }
  out.note("formulas certified for l <= 10, enumeration cross-checked for l <= 8");
}

void criterion8_solver(Outcome& out) {
  SeededRng rng(8001);
  const BigRational deltas[] = {BigRational(1, 4), BigRational(1, 2), BigRational(3, 4),
                                BigRational(1)};
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 2 + rng.below(7);  // up to 8
    const DecisionTree t = random_tree(rng, n, 6);
    const Bits x = random_bits(rng, n);
    for (const auto& delta : deltas) {
      const auto got = min_sr_exhaustive(t, x, delta);
      const auto expect = oracle_min_sr(t, x, delta, n);
      out.require(got.status == SearchStatus::kFound && expect &&
                      *got.set == *expect,
                  "tree " + std::to_string(i) + " delta " + format_rational(delta));
      if (!out.pass) return;
    }
  }

  // stored non-monotonicity witness: majority of three, x = 100, delta = 1/2
  const DecisionTree maj = majority3();
  const Bits x = {1, 0, 0};
  out.require(is_delta_sufficient(maj, x, FeatureSet(), BigRational(1, 2)),
              "witness: empty set is 1/2-sufficient");
  out.require(!is_delta_sufficient(maj, x, FeatureSet({0}), BigRational(1, 2)),
              "witness: adding coordinate 1 breaks 1/2-sufficiency");
  out.note("50 trees x 4 deltas against the all-subsets oracle; "
           "non-monotonicity witness regression held");
}

}  // namespace

int main() {
  std::printf("acceptance suite (exact arithmetic throughout)\n");
  run(1, "cases-lemma dichotomy k=3,4,5", criterion1_lemma_cases);
  run(2, "completeness 7/8 on 20 instances", criterion2_completeness);
  run(3, "soundness floor (certified inst)", criterion3_soundness_floor);
  run(4, "oracle equivalence 200x5", criterion4_oracle_equivalence);
  run(5, "lift reduction claims (m=8)", criterion5_t1_claims);
  run(6, "amplifier exactness + canonical K", criterion6_amplifier);
  run(7, "fat-word facts l<=10", criterion7_fat_words);
  run(8, "minimum-SR solver vs oracle", criterion8_solver);
  if (failures) {
    std::printf("%d criterion(s) FAILED\n", failures);
    return 1;
  }
  std::printf("all 8 criteria PASS\n");
  return 0;
}
