#include "dtsr/explanations.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <sstream>

#include "dtsr/errors.hpp"
#include "dtsr/parallel.hpp"

namespace dtsr {

FeatureSet::FeatureSet(std::vector<std::size_t> coords) : coords_(std::move(coords)) {
  std::sort(coords_.begin(), coords_.end());
  if (std::adjacent_find(coords_.begin(), coords_.end()) != coords_.end())
    throw DomainError("feature set contains a duplicate coordinate");
}

FeatureSet FeatureSet::full(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return FeatureSet(std::move(v));
}

FeatureSet FeatureSet::parse(const std::string& text, std::size_t num_vars) {
  std::vector<std::size_t> coords;
  if (!text.empty()) {
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
      std::size_t pos = 0;
      unsigned long long v = 0;
      try {
        v = std::stoull(item, &pos);
      } catch (...) {
        throw ParseError("malformed feature index '" + item + "'");
      }
      if (pos != item.size()) throw ParseError("malformed feature index '" + item + "'");
      if (v < 1 || v > num_vars)
        throw DomainError("feature index " + std::to_string(v) + " out of range 1.." +
                          std::to_string(num_vars));
      coords.push_back(static_cast<std::size_t>(v - 1));
    }
  }
  return FeatureSet(std::move(coords));
}

bool FeatureSet::contains(std::size_t coord) const {
  return std::binary_search(coords_.begin(), coords_.end(), coord);
}

FeatureSet FeatureSet::with(std::size_t coord) const {
  std::vector<std::size_t> v = coords_;
  v.push_back(coord);
  return FeatureSet(std::move(v));
}

std::string FeatureSet::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) s.push_back(',');
    s += std::to_string(coords_[i] + 1);
  }
  return s;
}

PartialInput restriction_of(const Bits& x, const FeatureSet& s) {
  PartialInput y = PartialInput::undef(x.size());
  for (std::size_t coord : s) {
    if (coord >= x.size())
      throw DomainError("feature index " + std::to_string(coord + 1) +
                        " out of range for input of length " + std::to_string(x.size()));
    y.set(coord, x[coord] ? Trit::One : Trit::Zero);
  }
  return y;
}

Dyadic agreement_probability(const DecisionTree& t, const Bits& x, const FeatureSet& s) {
  const std::uint8_t label = eval_complete(t, x);
  const Dyadic p = eval_partial(t, restriction_of(x, s));
  return label ? p : p.complement();
}

namespace {

void check_delta(const BigRational& delta) {
  if (delta < 0 || delta > 1) throw DomainError("delta must lie in [0, 1]");
}

}  // namespace

bool is_delta_sufficient(const DecisionTree& t, const Bits& x, const FeatureSet& s,
                         const BigRational& delta) {
  check_delta(delta);
  return agreement_probability(t, x, s).compare(delta) >= 0;
}

bool is_sufficient_reason(const DecisionTree& t, const Bits& x, const FeatureSet& s) {
  const std::uint8_t target = eval_complete(t, x);
  const PartialInput y = restriction_of(x, s);
  if (t.read_once_per_path()) {
    std::vector<std::uint8_t> ok(t.node_count());
    for (std::size_t i = 0; i < t.node_count(); ++i) {
      const TreeNode& nd = t.node(static_cast<NodeId>(i));
      if (nd.is_leaf()) {
        ok[i] = (nd.label == target);
      } else {
        switch (y[static_cast<std::size_t>(nd.var)]) {
          case Trit::Zero: ok[i] = ok[nd.zero_child]; break;
          case Trit::One: ok[i] = ok[nd.one_child]; break;
          case Trit::Undef: ok[i] = ok[nd.zero_child] && ok[nd.one_child]; break;
        }
      }
    }
    return ok[t.root()];
  }
  // Repeated variables: walk with the path assignment, early exit on the
  // first wrong leaf.
  std::vector<std::int8_t> env(t.num_vars(), -1);
  std::function<bool(NodeId)> walk = [&](NodeId id) -> bool {
    const TreeNode& nd = t.node(id);
    if (nd.is_leaf()) return nd.label == target;
    const std::size_t var = static_cast<std::size_t>(nd.var);
    if (y[var] == Trit::Zero) return walk(nd.zero_child);
    if (y[var] == Trit::One) return walk(nd.one_child);
    if (env[var] >= 0) return walk(env[var] ? nd.one_child : nd.zero_child);
    env[var] = 0;
    const bool zero_ok = walk(nd.zero_child);
    env[var] = -1;
    if (!zero_ok) return false;
    env[var] = 1;
    const bool one_ok = walk(nd.one_child);
    env[var] = -1;
    return one_ok;
  };
  return walk(t.root());
}

namespace {

// Binomials that fit in 64 bits; the search space is capped well below the
// point where they overflow.
std::uint64_t binom64(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t c = 1;
  for (std::size_t i = 0; i < k; ++i) {
    c = c * (n - i) / (i + 1);
  }
  return c;
}

// rank-th (0-based) size-s combination of {0..c-1} in lexicographic order.
std::vector<std::size_t> unrank_combination(std::uint64_t rank, std::size_t c,
                                            std::size_t s) {
  std::vector<std::size_t> out;
  out.reserve(s);
  std::size_t next = 0;
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t v = next;; ++v) {
      const std::uint64_t block = binom64(c - v - 1, s - i - 1);
      if (rank < block) {
        out.push_back(v);
        next = v + 1;
        break;
      }
      rank -= block;
    }
  }
  return out;
}

struct SizeClassHit {
  std::optional<std::uint64_t> rank;
  FeatureSet set;
  Dyadic agreement;
};

}  // namespace

MinSrResult min_sr_exhaustive(const DecisionTree& t, const Bits& x,
                              const BigRational& delta, const MinSrOptions& opts) {
  check_delta(delta);
  const std::uint8_t label = eval_complete(t, x);
  const std::vector<std::size_t> candidates = support(t);
  const std::size_t c = candidates.size();

  MinSrResult result;
  result.method = "exhaustive";
  if (t.num_vars() > opts.max_vars || c > 60) {  // 60: rank arithmetic stays in 64 bits
    result.status = SearchStatus::kBudgetExceeded;
    return result;
  }

  const std::size_t cap = std::min(opts.size_cap.value_or(t.num_vars()), c);
  auto agreement_of = [&](const std::vector<std::size_t>& idxs) {
    std::vector<std::size_t> coords;
    coords.reserve(idxs.size());
    for (std::size_t i : idxs) coords.push_back(candidates[i]);
    FeatureSet s(std::move(coords));
    const Dyadic p = eval_partial(t, restriction_of(x, s));
    return std::pair<FeatureSet, Dyadic>(std::move(s), label ? p : p.complement());
  };

  std::uint64_t remaining = opts.max_subsets;
  for (std::size_t s = 0; s <= cap; ++s) {
    const std::uint64_t total = binom64(c, s);
    const std::uint64_t visit = std::min(total, remaining);
    auto per_range = [&](std::uint64_t lo, std::uint64_t hi) -> SizeClassHit {
      std::vector<std::size_t> idxs = unrank_combination(lo, c, s);
      for (std::uint64_t r = lo; r < hi; ++r) {
        if (r != lo) {
          // advance to the next lexicographic combination
          std::size_t i = s;
          while (i > 0 && idxs[i - 1] == c - (s - i) - 1) --i;
          ++idxs[i - 1];
          for (std::size_t j = i; j < s; ++j) idxs[j] = idxs[j - 1] + 1;
        }
        auto [set, agree] = agreement_of(idxs);
        if (agree.compare(delta) >= 0)
          return SizeClassHit{r, std::move(set), std::move(agree)};
      }
      return SizeClassHit{};
    };
    auto fold = [](SizeClassHit acc, SizeClassHit piece) {
      if (!acc.rank) return piece;  // chunks folded in rank order
      return acc;
    };

    SizeClassHit hit;
    if (opts.jobs <= 1) {
      // Serial fast path: early exit inside the range.
      hit = per_range(0, visit);
      result.subsets_examined += hit.rank ? *hit.rank + 1 : visit;
    } else {
      // Waves of chunks; each wave is a fixed rank prefix, so the outcome
      // and the examined count match the serial path exactly.
      const std::uint64_t chunk = 1024;
      const std::uint64_t wave = chunk * opts.jobs * 4;
      std::uint64_t done = 0;
      while (done < visit && !hit.rank) {
        const std::uint64_t end = std::min(visit, done + wave);
        hit = chunked_reduce(done, end, chunk, opts.jobs, std::move(hit), per_range, fold);
        result.subsets_examined += hit.rank ? *hit.rank + 1 - done : end - done;
        done = end;
      }
    }
    if (hit.rank) {
      result.status = SearchStatus::kFound;
      result.set = std::move(hit.set);
      result.agreement = std::move(hit.agreement);
      return result;
    }
    if (visit < total) {
      result.status = SearchStatus::kBudgetExceeded;
      return result;
    }
    remaining -= visit;
  }
  result.status = SearchStatus::kNoneWithinCap;
  return result;
}

MinSrResult min_sr_greedy(const DecisionTree& t, const Bits& x, const BigRational& delta) {
  check_delta(delta);
  MinSrResult result;
  result.method = "greedy";
  result.status = SearchStatus::kFound;

  FeatureSet s;
  Dyadic agree = agreement_probability(t, x, s);
  ++result.subsets_examined;
  const std::vector<std::size_t> candidates = support(t);
  std::vector<bool> used(t.num_vars(), false);
  while (agree.compare(delta) < 0) {
    std::optional<std::size_t> best;
    std::optional<Dyadic> best_agree;
    for (std::size_t coord : candidates) {
      if (used[coord]) continue;
      Dyadic a = agreement_probability(t, x, s.with(coord));
      ++result.subsets_examined;
      if (!best_agree || a > *best_agree) {  // ties keep the smallest index
        best = coord;
        best_agree = std::move(a);
      }
    }
    // Adding the full support always reaches agreement 1 >= delta, so the
    // loop cannot run out of candidates before the threshold is met.
    s = s.with(*best);
    used[*best] = true;
    agree = std::move(*best_agree);
  }
  result.set = std::move(s);
  result.agreement = std::move(agree);
  return result;
}

}  // namespace dtsr
