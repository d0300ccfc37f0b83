#include "dtsr/instances.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <sstream>

#include "dtsr/errors.hpp"
#include "dtsr/parallel.hpp"
#include "dtsr/rng.hpp"

namespace dtsr {

HittingSetInstance make_instance(std::size_t num_vars, std::size_t clause_width,
                                 std::vector<std::vector<std::uint32_t>> clauses) {
  if (num_vars == 0) throw DomainError("instance needs at least one variable");
  if (clause_width == 0 || clause_width > num_vars)
    throw DomainError("clause width must lie in 1..n");
  if (clauses.empty()) throw DomainError("instance needs at least one clause");
  for (auto& cl : clauses) {
    if (cl.size() != clause_width)
      throw DomainError("clause has " + std::to_string(cl.size()) +
                        " variables, expected " + std::to_string(clause_width));
    std::sort(cl.begin(), cl.end());
    if (std::adjacent_find(cl.begin(), cl.end()) != cl.end())
      throw DomainError("clause lists a variable twice");
    if (cl.back() >= num_vars) throw DomainError("clause variable out of range");
  }
  return HittingSetInstance{num_vars, clause_width, std::move(clauses)};
}

std::string emit_instance(const HittingSetInstance& inst) {
  std::ostringstream out;
  out << "p 1inkhs " << inst.num_vars << " " << inst.num_clauses() << " "
      << inst.clause_width << "\n";
  for (const auto& cl : inst.clauses) {
    for (auto v : cl) out << v + 1 << " ";
    out << "0\n";
  }
  return out.str();
}

HittingSetInstance parse_instance(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::size_t n = 0, m = 0, k = 0;
  bool saw_header = false;
  std::vector<std::vector<std::uint32_t>> clauses;

  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "c") continue;
    if (first == "p") {
      std::string kind;
      if (saw_header) throw ParseError("duplicate problem line", lineno);
      if (!(ls >> kind >> n >> m >> k) || kind != "1inkhs")
        throw ParseError("expected 'p 1inkhs <n> <m> <k>'", lineno);
      if (n == 0 || m == 0 || k == 0 || k > n)
        throw ParseError("invalid problem parameters", lineno);
      saw_header = true;
      continue;
    }
    if (!saw_header) throw ParseError("clause before problem line", lineno);
    std::vector<std::uint32_t> clause;
    std::istringstream cs(line);
    long long v = 0;
    bool terminated = false;
    while (cs >> v) {
      if (terminated) throw ParseError("tokens after terminating 0", lineno);
      if (v == 0) {
        terminated = true;
        continue;
      }
      if (v < 1 || static_cast<std::size_t>(v) > n)
        throw ParseError("variable " + std::to_string(v) + " out of range 1.." +
                         std::to_string(n), lineno);
      clause.push_back(static_cast<std::uint32_t>(v - 1));
    }
    if (!cs.eof()) throw ParseError("malformed clause token", lineno);
    if (!terminated) throw ParseError("clause not terminated by 0", lineno);
    if (clause.size() != k)
      throw ParseError("clause has " + std::to_string(clause.size()) +
                       " variables, expected " + std::to_string(k), lineno);
    std::sort(clause.begin(), clause.end());
    if (std::adjacent_find(clause.begin(), clause.end()) != clause.end())
      throw ParseError("clause lists a variable twice", lineno);
    clauses.push_back(std::move(clause));
  }
  if (!saw_header) throw ParseError("missing problem line");
  if (clauses.size() != m)
    throw ParseError("found " + std::to_string(clauses.size()) + " clauses, header says " +
                     std::to_string(m));
  return make_instance(n, k, std::move(clauses));
}

HittingSetInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

void save_instance(const HittingSetInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write instance file '" + path + "'");
  out << emit_instance(inst);
}

std::size_t count_satisfied(const HittingSetInstance& inst, const Bits& alpha) {
  if (alpha.size() != inst.num_vars)
    throw ShapeError("assignment length does not match instance");
  std::size_t sat = 0;
  for (const auto& cl : inst.clauses) {
    std::size_t ones = 0;
    for (auto v : cl) ones += alpha[v];
    sat += (ones == 1);
  }
  return sat;
}

namespace {

// alpha_1 is the most significant bit, so ascending counters enumerate
// assignments in ascending lexicographic order of the bit vector.
Bits counter_to_bits(std::uint64_t a, std::size_t n) {
  Bits bits(n);
  for (std::size_t i = 0; i < n; ++i) bits[i] = (a >> (n - 1 - i)) & 1;
  return bits;
}

}  // namespace

MaxSatResult max_sat_fraction_bruteforce(const HittingSetInstance& inst, unsigned jobs,
                                         std::size_t max_vars) {
  const std::size_t n = inst.num_vars;
  if (n > max_vars)
    throw BudgetError("brute-force maximum over " + std::to_string(n) +
                      " variables exceeds the cap of " + std::to_string(max_vars));
  std::vector<std::uint64_t> masks;
  masks.reserve(inst.num_clauses());
  for (const auto& cl : inst.clauses) {
    std::uint64_t msk = 0;
    for (auto v : cl) msk |= 1ull << (n - 1 - v);
    masks.push_back(msk);
  }

  struct Best {
    std::size_t count = 0;
    std::uint64_t arg = 0;
    bool any = false;
  };
  auto per_range = [&](std::uint64_t lo, std::uint64_t hi) {
    Best b;
    for (std::uint64_t a = lo; a < hi; ++a) {
      std::size_t sat = 0;
      for (auto msk : masks) sat += std::popcount(msk & a) == 1;
      if (!b.any || sat > b.count) {  // strict: keeps the first (lex-least) argmax
        b = {sat, a, true};
      }
    }
    return b;
  };
  auto fold = [](Best acc, Best piece) {
    if (!acc.any) return piece;
    if (piece.any && piece.count > acc.count) return piece;
    return acc;
  };
  const Best best = chunked_reduce(std::uint64_t{0}, std::uint64_t{1} << n,
                                   std::uint64_t{1} << 14, jobs, Best{}, per_range, fold);

  MaxSatResult r;
  r.best_count = best.count;
  r.fraction = BigRational(BigInt(best.count), BigInt(inst.num_clauses()));
  r.witness = counter_to_bits(best.arg, n);
  return r;
}

HittingSetInstance generate_random(std::size_t num_vars, std::size_t num_clauses,
                                   std::size_t clause_width, std::uint64_t seed,
                                   const std::optional<Bits>& planted) {
  if (clause_width == 0 || clause_width > num_vars)
    throw DomainError("clause width must lie in 1..n");
  SeededRng rng(seed);
  std::vector<std::vector<std::uint32_t>> clauses;
  clauses.reserve(num_clauses);

  if (planted) {
    if (planted->size() != num_vars)
      throw ShapeError("planted assignment length does not match n");
    std::vector<std::uint32_t> ones, zeros;
    for (std::size_t i = 0; i < num_vars; ++i)
      (planted->at(i) ? ones : zeros).push_back(static_cast<std::uint32_t>(i));
    if (ones.empty())
      throw DomainError("planted assignment has no variable set to 1");
    if (zeros.size() < clause_width - 1)
      throw DomainError("planted assignment has too few zeros for the clause width");
    for (std::size_t c = 0; c < num_clauses; ++c) {
      std::vector<std::uint32_t> clause;
      clause.push_back(ones[rng.below(ones.size())]);
      for (auto idx : rng.sample_distinct(static_cast<std::uint32_t>(zeros.size()),
                                          static_cast<std::uint32_t>(clause_width - 1)))
        clause.push_back(zeros[idx]);
      clauses.push_back(std::move(clause));
    }
  } else {
    for (std::size_t c = 0; c < num_clauses; ++c) {
      auto idxs = rng.sample_distinct(static_cast<std::uint32_t>(num_vars),
                                      static_cast<std::uint32_t>(clause_width));
      clauses.emplace_back(idxs.begin(), idxs.end());
    }
  }
  return make_instance(num_vars, clause_width, std::move(clauses));
}

HittingSetInstance complete_instance(std::size_t num_vars, std::size_t clause_width) {
  std::vector<std::vector<std::uint32_t>> clauses;
  std::vector<std::uint32_t> cur(clause_width);
  for (std::size_t i = 0; i < clause_width; ++i) cur[i] = static_cast<std::uint32_t>(i);
  for (;;) {
    clauses.push_back(cur);
    std::size_t i = clause_width;
    while (i > 0 && cur[i - 1] == num_vars - (clause_width - i) - 1) --i;
    if (i == 0) break;
    ++cur[i - 1];
    for (std::size_t j = i; j < clause_width; ++j) cur[j] = cur[j - 1] + 1;
  }
  return make_instance(num_vars, clause_width, std::move(clauses));
}

}  // namespace dtsr
