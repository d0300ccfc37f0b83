// dtsr: exact decision-tree explanation toolkit.
//
// Exit codes: 0 success / all claims pass, 1 claim failed or insufficient,
// 2 usage or input error, 3 budget exhausted.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dtsr/errors.hpp"
#include "dtsr/explanations.hpp"
#include "dtsr/harness.hpp"
#include "dtsr/instances.hpp"
#include "dtsr/reductions.hpp"
#include "dtsr/tree.hpp"
#include "dtsr/tree_io.hpp"

namespace {

using namespace dtsr;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitClaimFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

struct VerifyOutput {
  std::string format = "table";
  bool no_timing = false;

  int emit(ReportBundle bundle) const {
    bundle.sort_canonical();
    const bool ok = bundle.all_pass();
    const std::string summary = std::string(ok ? "all claims pass" : "CLAIM FAILURES") +
                                " (" + std::to_string(bundle.reports.size()) + " reports)";
    if (format == "records") {
      std::cout << to_records(bundle, !no_timing);
      std::cerr << summary << "\n";  // stdout stays strict JSON-lines
    } else {
      std::cout << to_table(bundle, !no_timing) << summary << "\n";
    }
    return ok ? kExitOk : kExitClaimFail;
  }
};

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << text;
}

json tree_summary(const DecisionTree& t) {
  return json{{"vars", t.num_vars()},
              {"depth", t.depth()},
              {"nodes", t.node_count()},
              {"read_once_per_path", t.read_once_per_path()}};
}

PartialInput parse_input_arg(const std::string& text, std::size_t expect) {
  const PartialInput y = PartialInput::parse(text);
  if (y.size() != expect)
    throw ShapeError("input has length " + std::to_string(y.size()) +
                     ", tree expects " + std::to_string(expect));
  return y;
}

// ---- subcommand bodies ----------------------------------------------------

int cmd_eval(const std::string& tree_path, const std::string& input) {
  const DecisionTree t = load_tree(tree_path);
  const PartialInput y = parse_input_arg(input, t.num_vars());
  const Dyadic v = eval_partial(t, y);
  json out{{"value", v.to_string()},
           {"decimal", v.to_decimal_string()},
           {"complete", y.is_complete()},
           {"undefined", y.undef_count()}};
  std::cout << out.dump() << "\n";
  return kExitOk;
}

int cmd_check_sr(const std::string& tree_path, const std::string& input,
                 const std::string& set_text, const std::string& delta_text) {
  const DecisionTree t = load_tree(tree_path);
  const PartialInput y = parse_input_arg(input, t.num_vars());
  if (!y.is_complete()) throw DomainError("check-sr needs a complete input");
  const FeatureSet s = FeatureSet::parse(set_text, t.num_vars());
  const BigRational delta = parse_rational(delta_text);
  const Dyadic agreement = agreement_probability(t, y.to_bits(), s);
  const bool sufficient = agreement.compare(delta) >= 0;
  json out{{"sufficient", sufficient},
           {"agreement", agreement.to_string()},
           {"agreement_decimal", agreement.to_decimal_string()},
           {"delta", format_rational(delta)},
           {"set", json::parse("[" + (set_text.empty() ? "" : set_text) + "]")}};
  std::cout << out.dump() << "\n";
  return sufficient ? kExitOk : kExitClaimFail;
}

int cmd_min_sr(const std::string& tree_path, const std::string& input,
               const std::string& delta_text, const std::string& method,
               std::optional<std::size_t> size_cap, std::uint64_t budget,
               unsigned jobs) {
  const DecisionTree t = load_tree(tree_path);
  const PartialInput y = parse_input_arg(input, t.num_vars());
  if (!y.is_complete()) throw DomainError("min-sr needs a complete input");
  const Bits x = y.to_bits();
  const BigRational delta = parse_rational(delta_text);

  MinSrResult r;
  if (method == "greedy") {
    r = min_sr_greedy(t, x, delta);
  } else if (method == "exhaustive") {
    MinSrOptions opts;
    opts.size_cap = size_cap;
    opts.max_subsets = budget;
    opts.jobs = jobs;
    r = min_sr_exhaustive(t, x, delta, opts);
  } else {
    throw DomainError("unknown method '" + method + "'");
  }

  json out;
  out["method"] = r.method;
  out["subsets_examined"] = r.subsets_examined;
  switch (r.status) {
    case SearchStatus::kFound: out["budget_status"] = "found"; break;
    case SearchStatus::kNoneWithinCap: out["budget_status"] = "none-within-cap"; break;
    case SearchStatus::kBudgetExceeded: out["budget_status"] = "budget-exceeded"; break;
  }
  if (r.set) {
    json arr = json::array();
    for (auto c : r.set->coords()) arr.push_back(c + 1);
    out["set"] = arr;
    out["set_text"] = r.set->to_string();
    out["size"] = r.set->size();
    out["agreement"] = r.agreement->to_string();
    out["agreement_decimal"] = r.agreement->to_decimal_string();
  }
  std::cout << out.dump() << "\n";
  return r.status == SearchStatus::kBudgetExceeded ? kExitBudget : kExitOk;
}

int cmd_gen(std::size_t vars, std::size_t clauses, std::size_t width,
            std::uint64_t seed, const std::string& planted, const std::string& out_path) {
  std::optional<Bits> alpha;
  if (!planted.empty()) alpha = parse_bits(planted);
  const HittingSetInstance inst = generate_random(vars, clauses, width, seed, alpha);
  write_text(out_path, emit_instance(inst));
  if (out_path != "-") {
    json out{{"output", out_path}, {"vars", vars},   {"clauses", clauses},
             {"width", width},     {"seed", seed},   {"planted", !planted.empty()}};
    std::cout << out.dump() << "\n";
  }
  return kExitOk;
}

int cmd_reduce_t1(const std::string& tree_path, const std::string& eps_text,
                  std::optional<std::size_t> m_override, const std::string& out_path,
                  const std::string& meta_path) {
  const DecisionTree t = load_tree(tree_path);
  const BigRational eps = parse_rational(eps_text);
  const LiftResult lift = conjunction_lift(t, eps, m_override);
  write_text(out_path, serialize(lift.tree));
  json meta{{"kind", "t1"},
            {"epsilon", format_rational(eps)},
            {"base_vars", t.num_vars()},
            {"fresh_vars", lift.fresh_vars},
            {"canonical", lift.canonical_m},
            {"tree", tree_summary(lift.tree)}};
  if (!meta_path.empty()) write_text(meta_path, meta.dump(2) + "\n");
  std::cout << meta.dump() << "\n";
  return kExitOk;
}

json layout_json(const SelectorLayout& layout) {
  return json{{"formula_vars", layout.num_formula_vars},
              {"half_width", layout.half_width},
              {"selector_width", layout.selector_width()},
              {"z_position", layout.z_position() + 1},
              {"total_width", layout.total_width()}};
}

int cmd_reduce_hardness(const std::string& inst_path, const std::string& kappa_text,
                        const std::string& gap_text, bool gap_floor, bool gap_measured,
                        const std::string& out_path, const std::string& meta_path,
                        std::size_t node_budget, unsigned jobs) {
  const HittingSetInstance inst = load_instance(inst_path);
  const BigRational kappa = parse_rational(kappa_text);
  const SelectorResult sel = build_selector(inst);

  BigRational gap;
  std::string gap_source;
  if (!gap_text.empty()) {
    gap = parse_rational(gap_text);
    gap_source = "explicit";
  } else if (gap_floor) {
    gap = BigRational(1, 128);
    gap_source = "floor";
  } else if (gap_measured) {
    BudgetOptions budget;
    budget.jobs = jobs;
    const SelectorScan scan = scan_selector_maximum(inst, sel, budget);
    gap = BigRational(7, 8) - scan.full_max.to_rational();
    if (gap <= 0)
      throw DomainError("measured gap is not positive; instance has no soundness gap");
    gap_source = "measured";
  } else {
    throw DomainError("choose a gap source: --gap, --gap-floor or --gap-measured");
  }

  const AmplifierParams params = choose_params(kappa, gap);
  const DecisionTree amplified = amplify(sel.tree, params, node_budget);
  write_text(out_path, serialize(amplified));
  json meta{{"kind", "hardness"},
            {"layout", layout_json(sel.layout)},
            {"params",
             {{"kappa", format_rational(params.kappa)},
              {"delta_gap", format_rational(params.delta_gap)},
              {"gap_source", gap_source},
              {"copies", params.copies},
              {"threshold", params.threshold_count}}},
            {"canonical", true},
            {"selector", tree_summary(sel.tree)},
            {"tree", tree_summary(amplified)}};
  if (!meta_path.empty()) write_text(meta_path, meta.dump(2) + "\n");
  std::cout << meta.dump() << "\n";
  return kExitOk;
}

int cmd_gadget_lc(std::size_t width, const std::string& clause_text,
                  std::optional<std::size_t> z_pos, std::optional<std::size_t> vars,
                  const std::string& out_path) {
  std::vector<std::size_t> positions;
  if (!clause_text.empty()) {
    const std::size_t n = vars.value_or(1024);
    for (auto c : FeatureSet::parse(clause_text, n).coords()) positions.push_back(c);
    if (positions.size() != width && width != 0)
      throw DomainError("--clause does not match --width");
  } else {
    for (std::size_t i = 0; i < width; ++i) positions.push_back(i);
  }
  if (positions.empty()) throw DomainError("need --width or --clause");
  const std::size_t z = z_pos ? *z_pos - 1 : positions.back() + 1;
  std::size_t n = vars.value_or(std::max(z, positions.back()) + 1);
  const DecisionTree g = clause_gadget(n, positions, z);
  write_text(out_path, serialize(g));
  if (out_path != "-")
    std::cout << json{{"output", out_path}, {"tree", tree_summary(g)}}.dump() << "\n";
  return kExitOk;
}

int cmd_gadget_l(const std::string& inst_path, const std::string& out_path,
                 const std::string& meta_path) {
  const HittingSetInstance inst = load_instance(inst_path);
  const SelectorResult sel = build_selector(inst);
  write_text(out_path, serialize(sel.tree));
  json meta{{"kind", "selector"},
            {"layout", layout_json(sel.layout)},
            {"tree", tree_summary(sel.tree)}};
  if (!meta_path.empty()) write_text(meta_path, meta.dump(2) + "\n");
  if (out_path != "-") std::cout << meta.dump() << "\n";
  return kExitOk;
}

int cmd_gadget_amplify(const std::string& tree_path, std::uint64_t copies,
                       std::uint64_t threshold, std::size_t node_budget,
                       const std::string& out_path) {
  const DecisionTree base = load_tree(tree_path);
  const AmplifierParams params{BigRational(1, 2), BigRational(1, 2), copies, threshold};
  const DecisionTree amp = amplify(base, params, node_budget);
  write_text(out_path, serialize(amp));
  if (out_path != "-")
    std::cout << json{{"output", out_path},
                      {"copies", copies},
                      {"threshold", threshold},
                      {"tree", tree_summary(amp)}}
                     .dump()
              << "\n";
  return kExitOk;
}

HittingSetInstance planted_instance(std::uint64_t seed) {
  Bits alpha(6, 0);
  alpha[seed % 6] = 1;
  return generate_random(6, 4, 3, seed, alpha);
}

int cmd_verify_all(const VerifyOutput& vo, unsigned jobs, bool skip_wide) {
  ReportBundle all;
  for (std::size_t k = 2; k <= 6; ++k) all.append(verify_lemma_cases(k));

  for (std::size_t l = 1; l <= 8; ++l) {
    const Dyadic expect = Dyadic::half() + Dyadic(binomial(2 * l, l), 2 * l + 1);
    const Dyadic got = fat_probability_exact(l, 1);
    all.reports.push_back({"fat-prob.one-fixed", "l=" + std::to_string(l),
                           "= 1/2 + C(2l,l)/2^(2l+1)", got.to_string(), got == expect, 0});
    const Dyadic base = fat_probability_exact(l, 0);
    all.reports.push_back({"fat-prob.unfixed", "l=" + std::to_string(l), "= 1/2",
                           base.to_string(), base == Dyadic::half(), 0});
  }

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Bits alpha(6, 0);
    alpha[seed % 6] = 1;
    all.append(verify_completeness(planted_instance(seed), alpha));
  }

  {
    PipelineOptions opts;
    opts.kappa = BigRational(1, 4);
    opts.gap = BigRational(1, 2);
    opts.budget.jobs = jobs;
    all.append(run_full_pipeline(planted_instance(1), opts));
  }

  {
    TreeBuilder b(1);
    const DecisionTree x1 = b.take(b.node(0, b.leaf(false), b.leaf(true)));
    all.append(verify_t1_claims(x1, BigRational(1, 2), 4));
    TreeBuilder b3(3);
    NodeId acc = b3.leaf(true);
    for (std::size_t i = 3; i-- > 0;) acc = b3.node(i, acc, b3.leaf(false));
    all.append(verify_t1_claims(b3.take(acc), BigRational(1, 2), 6));
  }

  if (!skip_wide) {
    BudgetOptions budget;
    budget.jobs = jobs;
    all.append(verify_soundness_bruteforce(complete_instance(14, 3), budget));
  }
  return vo.emit(std::move(all));
}

int run(int argc, char** argv) {
  CLI::App app{"exact sufficient-reason analysis and hardness gadgets for decision trees"};
  app.require_subcommand(1);

  // eval
  std::string tree_path, input_text;
  auto* eval = app.add_subcommand("eval", "evaluate a tree on a (partial) input");
  eval->add_option("tree", tree_path, "tree file")->required();
  eval->add_option("input", input_text, "input over {0,1,*}")->required();

  // check-sr
  std::string set_text, delta_text = "1";
  auto* check = app.add_subcommand("check-sr", "is a set a delta-sufficient reason?");
  check->add_option("tree", tree_path)->required();
  check->add_option("input", input_text, "complete input over {0,1}")->required();
  check->add_option("--set", set_text, "1-based indices, comma separated");
  check->add_option("--delta", delta_text, "threshold, p/q or decimal")->required();

  // min-sr
  std::string method = "exhaustive";
  std::optional<std::size_t> size_cap;
  std::uint64_t budget = 1ull << 24;
  unsigned jobs = 1;
  auto* minsr = app.add_subcommand("min-sr", "smallest delta-sufficient reason");
  minsr->add_option("tree", tree_path)->required();
  minsr->add_option("input", input_text)->required();
  minsr->add_option("--delta", delta_text)->required();
  minsr->add_option("--method", method)->check(CLI::IsMember({"exhaustive", "greedy"}));
  minsr->add_option("--size-cap", size_cap);
  minsr->add_option("--budget", budget, "max subsets to examine");
  minsr->add_option("--jobs", jobs);

  // gen
  std::size_t g_vars = 0, g_clauses = 0, g_width = 0;
  std::uint64_t g_seed = 0;
  std::string g_planted, out_path = "-";
  auto* gen = app.add_subcommand("gen", "generate a 1-in-k hitting set instance");
  gen->add_option("--vars", g_vars)->required();
  gen->add_option("--clauses", g_clauses)->required();
  gen->add_option("--width", g_width)->required();
  gen->add_option("--seed", g_seed)->required();
  gen->add_option("--planted", g_planted, "assignment to plant, over {0,1}");
  gen->add_option("-o,--output", out_path);

  // reduce {t1|hardness}
  auto* reduce = app.add_subcommand("reduce", "whole-reduction constructions");
  reduce->require_subcommand(1);
  std::string eps_text = "1/2", meta_path;
  std::optional<std::size_t> m_override;
  auto* t1 = reduce->add_subcommand("t1", "disjoin a fresh conjunction onto a tree");
  t1->add_option("--tree", tree_path)->required();
  t1->add_option("--epsilon", eps_text)->required();
  t1->add_option("--m-override", m_override, "non-canonical conjunction size");
  t1->add_option("-o,--output", out_path);
  t1->add_option("--meta", meta_path);

  std::string inst_path, kappa_text = "1/4", gap_text;
  bool gap_floor = false, gap_measured = false;
  std::size_t node_budget = 1u << 22;
  auto* hardness = reduce->add_subcommand("hardness", "instance to amplified tree");
  hardness->add_option("--instance", inst_path)->required();
  hardness->add_option("--kappa", kappa_text)->required();
  hardness->add_option("--gap", gap_text, "explicit delta_gap, p/q");
  hardness->add_flag("--gap-floor", gap_floor, "use the 1/128 floor");
  hardness->add_flag("--gap-measured", gap_measured, "measure the gap by scanning");
  hardness->add_option("-o,--output", out_path);
  hardness->add_option("--meta", meta_path);
  hardness->add_option("--node-budget", node_budget);
  hardness->add_option("--jobs", jobs);

  // gadget {lc|l|amplify}
  auto* gadget = app.add_subcommand("gadget", "individual gadget constructions");
  gadget->require_subcommand(1);
  std::size_t lc_width = 0;
  std::string lc_clause;
  std::optional<std::size_t> lc_z, lc_vars;
  auto* lc = gadget->add_subcommand("lc", "clause gadget");
  lc->add_option("--width", lc_width, "clause width; positions default to 1..k");
  lc->add_option("--clause", lc_clause, "explicit 1-based clause positions");
  lc->add_option("--z-pos", lc_z, "1-based z position");
  lc->add_option("--vars", lc_vars);
  lc->add_option("-o,--output", out_path);

  auto* gl = gadget->add_subcommand("l", "selector tree for an instance");
  gl->add_option("--instance", inst_path)->required();
  gl->add_option("-o,--output", out_path);
  gl->add_option("--meta", meta_path);

  std::uint64_t a_copies = 1, a_threshold = 1;
  auto* amp = gadget->add_subcommand("amplify", "threshold over copies of a tree");
  amp->add_option("--tree", tree_path)->required();
  amp->add_option("--copies", a_copies)->required();
  amp->add_option("--threshold", a_threshold)->required();
  amp->add_option("--node-budget", node_budget);
  amp->add_option("-o,--output", out_path);

  // verify {...}
  auto* verify = app.add_subcommand("verify", "check the quantitative claims");
  verify->require_subcommand(1);
  VerifyOutput vo;
  verify->add_option("--format", vo.format)->check(CLI::IsMember({"table", "records"}));
  verify->add_flag("--no-timing", vo.no_timing, "zero the millis field");

  std::size_t v_k = 3, v_l = 4;
  std::optional<std::size_t> v_fixed;
  std::string v_assignment;
  std::uint64_t v_budget = 1ull << 24;
  bool skip_wide = false;
  auto* vlemma = verify->add_subcommand("lemma-cases", "gadget value dichotomy");
  vlemma->add_option("--k", v_k)->required();

  auto* vcomp = verify->add_subcommand("completeness", "selector value on a satisfying assignment");
  vcomp->add_option("--instance", inst_path)->required();
  vcomp->add_option("--assignment", v_assignment, "satisfying assignment; brute-forced if omitted");
  vcomp->add_option("--kappa", kappa_text);
  vcomp->add_option("--gap", gap_text, "delta_gap for amplifier params");

  auto* vsound = verify->add_subcommand("soundness", "selector maxima on a certified instance");
  vsound->add_option("--instance", inst_path)->required();
  vsound->add_option("--budget", v_budget);
  vsound->add_option("--jobs", jobs);

  auto* vt1 = verify->add_subcommand("t1", "both sides of the lift reduction");
  vt1->add_option("--tree", tree_path)->required();
  vt1->add_option("--epsilon", eps_text)->required();
  vt1->add_option("--m-override", m_override);
  vt1->add_option("--budget", v_budget);

  auto* vfat = verify->add_subcommand("fat-prob", "exact fat-word probability");
  vfat->add_option("--l", v_l)->required();
  vfat->add_option("--fixed-ones", v_fixed);

  auto* vall = verify->add_subcommand("all", "the whole desk-scale suite");
  vall->add_option("--jobs", jobs);
  vall->add_flag("--skip-wide", skip_wide, "skip the 14-variable soundness instance");

  // --format / --no-timing live on `verify` but may follow the leaf
  for (auto* leaf : verify->get_subcommands(nullptr)) leaf->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints the message / help text
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*eval) return cmd_eval(tree_path, input_text);
  if (*check) return cmd_check_sr(tree_path, input_text, set_text, delta_text);
  if (*minsr)
    return cmd_min_sr(tree_path, input_text, delta_text, method, size_cap, budget, jobs);
  if (*gen) return cmd_gen(g_vars, g_clauses, g_width, g_seed, g_planted, out_path);
  if (*t1) return cmd_reduce_t1(tree_path, eps_text, m_override, out_path, meta_path);
  if (*hardness)
    return cmd_reduce_hardness(inst_path, kappa_text, gap_text, gap_floor, gap_measured,
                               out_path, meta_path, node_budget, jobs);
  if (*lc) return cmd_gadget_lc(lc_width, lc_clause, lc_z, lc_vars, out_path);
  if (*gl) return cmd_gadget_l(inst_path, out_path, meta_path);
  if (*amp) return cmd_gadget_amplify(tree_path, a_copies, a_threshold, node_budget, out_path);

  if (*vlemma) return vo.emit(verify_lemma_cases(v_k));
  if (*vcomp) {
    const HittingSetInstance inst = load_instance(inst_path);
    Bits alpha;
    if (!v_assignment.empty()) {
      alpha = parse_bits(v_assignment);
    } else {
      const auto ms = max_sat_fraction_bruteforce(inst);
      if (ms.fraction != 1)
        throw DomainError("instance is not satisfiable; max fraction " +
                          format_rational(ms.fraction));
      alpha = ms.witness;
    }
    std::optional<AmplifierParams> params;
    if (!gap_text.empty())
      params = choose_params(parse_rational(kappa_text), parse_rational(gap_text));
    return vo.emit(verify_completeness(inst, alpha, params));
  }
  if (*vsound) {
    BudgetOptions b;
    b.max_steps = v_budget;
    b.jobs = jobs;
    return vo.emit(verify_soundness_bruteforce(load_instance(inst_path), b));
  }
  if (*vt1) {
    BudgetOptions b;
    b.max_steps = v_budget;
    return vo.emit(
        verify_t1_claims(load_tree(tree_path), parse_rational(eps_text), m_override, b));
  }
  if (*vfat) {
    ReportBundle b;
    if (v_fixed) {
      const Dyadic v = fat_probability_exact(v_l, *v_fixed);
      b.reports.push_back({"fat-prob.value",
                           "l=" + std::to_string(v_l) + " fixed=" + std::to_string(*v_fixed),
                           "exact fat probability", v.to_string() + " ~ " + v.to_decimal_string(),
                           true, 0});
    } else {
      const Dyadic base = fat_probability_exact(v_l, 0);
      const Dyadic one = fat_probability_exact(v_l, 1);
      const Dyadic expect = Dyadic::half() + Dyadic(binomial(2 * v_l, v_l), 2 * v_l + 1);
      b.reports.push_back({"fat-prob.unfixed", "l=" + std::to_string(v_l), "= 1/2",
                           base.to_string(), base == Dyadic::half(), 0});
      b.reports.push_back({"fat-prob.one-fixed", "l=" + std::to_string(v_l),
                           "= 1/2 + C(2l,l)/2^(2l+1)", one.to_string(), one == expect, 0});
    }
    return vo.emit(std::move(b));
  }
  if (*vall) return cmd_verify_all(vo, jobs, skip_wide);

  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const BudgetError& e) {
    std::cerr << "budget: " << e.what() << "\n";
    return kExitBudget;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
