#pragma once

// Consistent evaluation of property subsets.
//
// A poset is consistently evaluable iff it splits into N ranked maximal
// antichains such that every element sits on a maximal chain of length N.
// The split is unique when it exists. The W evaluator counts, per rank, how
// many members of a subset were satisfied and compares those counts with
// the highest rank most significant.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "specstruct/errors.hpp"
#include "specstruct/poset.hpp"

namespace specstruct {

/// Per-rank satisfaction counts. Stored rank-0 first; printed highest rank
/// first, e.g. "[1,0,2]" has one rank-2 member and two rank-0 members.
class EvalVector {
 public:
  EvalVector() = default;
  explicit EvalVector(std::vector<std::uint32_t> counts_rank0_first)
      : counts_(std::move(counts_rank0_first)) {}

  static EvalVector from_most_significant(std::vector<std::uint32_t> digits) {
    std::reverse(digits.begin(), digits.end());
    return EvalVector(std::move(digits));
  }

  std::size_t rank_count() const noexcept { return counts_.size(); }
  std::uint32_t count_at_rank(std::size_t r) const { return counts_.at(r); }
  const std::vector<std::uint32_t>& rank0_first() const noexcept { return counts_; }
  std::vector<std::uint32_t> most_significant_first() const {
    return {counts_.rbegin(), counts_.rend()};
  }
  bool is_zero() const {
    return std::all_of(counts_.begin(), counts_.end(), [](auto c) { return c == 0; });
  }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = counts_.size(); i-- > 0;) {
      s += std::to_string(counts_[i]);
      if (i != 0) s += ",";
    }
    return s + "]";
  }

  friend bool operator==(const EvalVector&, const EvalVector&) = default;

 private:
  std::vector<std::uint32_t> counts_;
};

/// Lexicographic comparison, highest rank first.
inline std::strong_ordering w_compare(const EvalVector& a, const EvalVector& b) {
  if (a.rank_count() != b.rank_count()) {
    throw RankMismatch("cannot compare " + a.to_string() + " with " + b.to_string() +
                       ": different rank counts");
  }
  for (std::size_t i = a.rank_count(); i-- > 0;) {
    if (auto c = a.count_at_rank(i) <=> b.count_at_rank(i); c != 0) return c;
  }
  return std::strong_ordering::equal;
}

inline std::strong_ordering operator<=>(const EvalVector& a, const EvalVector& b) {
  return w_compare(a, b);
}

inline const char* ordering_name(std::strong_ordering o) {
  if (o < 0) return "Less";
  if (o > 0) return "Greater";
  return "Equal";
}

/// The unique ranked maximal-antichain partition of an evaluable poset.
class RankPartition {
 public:
  RankPartition(Poset poset, std::vector<std::size_t> rank_of_index)
      : poset_(std::move(poset)), rank_of_(std::move(rank_of_index)) {
    std::size_t n = 0;
    for (auto r : rank_of_) n = std::max(n, r + 1);
    antichains_.assign(n, 0);
    for (std::size_t i = 0; i < rank_of_.size(); ++i) antichains_[rank_of_[i]] |= bit(i);
  }

  const Poset& poset() const noexcept { return poset_; }
  std::size_t rank_count() const noexcept { return antichains_.size(); }
  std::size_t rank_of(std::size_t index) const { return rank_of_.at(index); }
  std::size_t rank_of(const PropertyId& id) const { return rank_of_.at(poset_.require_index(id)); }
  const std::vector<std::size_t>& rank_indices() const noexcept { return rank_of_; }
  const std::vector<Mask>& antichain_masks() const noexcept { return antichains_; }
  Mask top_rank_mask() const { return antichains_.back(); }

  std::vector<Antichain> antichains() const {
    std::vector<Antichain> out;
    for (Mask m : antichains_) out.push_back(poset_.set_of(m));
    return out;
  }

  std::map<PropertyId, std::size_t> ranks() const {
    std::map<PropertyId, std::size_t> out;
    for (std::size_t i = 0; i < rank_of_.size(); ++i) out.emplace(poset_.id(i), rank_of_[i]);
    return out;
  }

 private:
  Poset poset_;
  std::vector<std::size_t> rank_of_;
  std::vector<Mask> antichains_;
};

/// Why a poset admits no consistent evaluator.
struct NotEvaluable {
  std::string reason;
  std::optional<PropertyId> witness;
};

namespace detail {

inline bool is_maximal_antichain(const Poset& p, Mask antichain) {
  for (std::size_t u = 0; u < p.size(); ++u) {
    if (antichain & bit(u)) continue;
    if ((p.comparable_with(u) & antichain) == 0) return false;
  }
  return true;
}

inline std::string describe(const Poset& p, Mask m) {
  std::string s = "{";
  bool first = true;
  for_each_bit(m, [&](std::size_t i) {
    if (!first) s += ",";
    s += p.id(i).str();
    first = false;
  });
  return s + "}";
}

}  // namespace detail

/// Exhaustive search over every order-respecting assignment of ranks to a
/// partition of the poset into maximal antichains; returns each assignment
/// (antichain masks listed by rank) that also meets the maximal-chain
/// criterion. Independent of the longest-chain construction used by
/// rank_partition, and exponential in the poset size.
inline std::vector<std::vector<Mask>> exhaustive_rank_partitions(const Poset& p) {
  const auto antichains = maximal_antichain_masks(p);
  const auto chains = maximal_chain_indices(p);
  std::vector<std::vector<Mask>> found;

  auto try_rankings = [&](const std::vector<Mask>& parts) {
    const std::size_t k = parts.size();
    std::vector<Mask> must_precede(k, 0);  // bit j in must_precede[i]: part j below part i
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        if (i == j) continue;
        bool below = false;
        for_each_bit(parts[i], [&](std::size_t b) {
          if (p.strictly_below(b) & parts[j]) below = true;
        });
        if (below) must_precede[i] |= bit(j);
      }
    }
    std::vector<Mask> ranked;
    auto place = [&](auto&& self, Mask placed) -> void {
      if (ranked.size() == k) {
        // Rank criterion holds by construction; check the chain criterion.
        Mask on_full_chain = 0;
        for (const auto& c : chains) {
          if (c.size() != k) continue;
          for (auto v : c) on_full_chain |= bit(v);
        }
        if (on_full_chain == p.all()) found.push_back(ranked);
        return;
      }
      for (std::size_t i = 0; i < k; ++i) {
        if (placed & bit(i)) continue;
        if ((must_precede[i] & ~placed) != 0) continue;
        ranked.push_back(parts[i]);
        self(self, placed | bit(i));
        ranked.pop_back();
      }
    };
    place(place, 0);
  };

  std::vector<Mask> chosen;
  auto cover = [&](auto&& self, Mask covered) -> void {
    if (covered == p.all()) {
      try_rankings(chosen);
      return;
    }
    const std::size_t e = static_cast<std::size_t>(std::countr_zero(~covered & p.all()));
    for (Mask a : antichains) {
      if (!(a & bit(e)) || (a & covered)) continue;
      chosen.push_back(a);
      self(self, covered | a);
      chosen.pop_back();
    }
  };
  cover(cover, 0);
  std::sort(found.begin(), found.end());
  return found;
}

/// Decides consistent evaluability and returns the rank partition when it
/// exists. Candidate ranks are longest-chain heights; both criteria are then
/// verified directly.
inline std::variant<RankPartition, NotEvaluable> rank_partition(const Poset& p) {
  const auto cp = chain_profile(p);
  std::vector<std::size_t> rank(p.size());
  std::size_t n = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    rank[i] = cp.longest_below[i] - 1;
    n = std::max(n, cp.longest_below[i]);
  }

  std::optional<NotEvaluable> failure;
  for (std::size_t v = 0; v < p.size() && !failure; ++v) {
    const std::size_t through = cp.longest_below[v] + cp.longest_above[v] - 1;
    if (through != n) {
      failure = NotEvaluable{"'" + p.id(v).str() + "' lies on no maximal chain of length " +
                                 std::to_string(n) + " (longest chain through it has length " +
                                 std::to_string(through) + ")",
                             p.id(v)};
    }
  }
  if (!failure) {
    RankPartition rp(p, rank);
    for (std::size_t r = 0; r < n && !failure; ++r) {
      const Mask level = rp.antichain_masks()[r];
      if (detail::is_maximal_antichain(p, level)) continue;
      for (std::size_t u = 0; u < p.size(); ++u) {
        if ((level & bit(u)) || (p.comparable_with(u) & level) != 0) continue;
        failure = NotEvaluable{"rank-" + std::to_string(r) + " antichain " +
                                   detail::describe(p, level) + " is not maximal: '" +
                                   p.id(u).str() + "' is incomparable to all of it",
                               p.id(u)};
        break;
      }
    }
    if (!failure) return rp;
  }
  if (p.size() <= 12) {
    if (!exhaustive_rank_partitions(p).empty()) {
      throw std::logic_error("exhaustive search found a rank partition the direct check missed");
    }
    failure->reason += "; no order-respecting maximal-antichain partition exists";
  }
  return *failure;
}

inline RankPartition require_rank_partition(const Poset& p) {
  auto result = rank_partition(p);
  if (auto* bad = std::get_if<NotEvaluable>(&result)) {
    throw NotEvaluableError("structure" + (p.name().empty() ? std::string{} : " '" + p.name() + "'") +
                            " is not consistently evaluable: " + bad->reason);
  }
  return std::get<RankPartition>(std::move(result));
}

inline bool is_consistently_evaluable(const Poset& p) {
  return std::holds_alternative<RankPartition>(rank_partition(p));
}

inline EvalVector w_evaluate(const RankPartition& rp, Mask subset) {
  if (subset & ~rp.poset().all()) throw UnknownElement("subset mask references unknown elements");
  std::vector<std::uint32_t> counts(rp.rank_count(), 0);
  for (std::size_t r = 0; r < rp.rank_count(); ++r) {
    counts[r] = static_cast<std::uint32_t>(std::popcount(subset & rp.antichain_masks()[r]));
  }
  return EvalVector(std::move(counts));
}

inline EvalVector w_evaluate(const RankPartition& rp, const std::vector<PropertyId>& subset) {
  return w_evaluate(rp, rp.poset().mask_of(subset));
}

/// Mixed-radix integer whose order matches the W order: digit r has radix
/// |antichain r| + 1. A display aid only.
inline std::uint64_t w_decimal(const RankPartition& rp, const EvalVector& v) {
  if (v.rank_count() != rp.rank_count()) throw RankMismatch("vector does not match partition");
  std::uint64_t value = 0, weight = 1;
  for (std::size_t r = 0; r < rp.rank_count(); ++r) {
    value += weight * v.count_at_rank(r);
    weight *= static_cast<std::uint64_t>(std::popcount(rp.antichain_masks()[r])) + 1;
  }
  return value;
}

/// Subsets sharing one W value.
struct SubsetClass {
  EvalVector value;
  std::vector<PropertySet> members;

  friend bool operator==(const SubsetClass&, const SubsetClass&) = default;
};

inline constexpr std::size_t kDefaultPowersetBound = 12;

/// The weak order W induces on the powerset, lowest class first.
inline std::vector<SubsetClass> powerset_order(const RankPartition& rp,
                                               std::size_t bound = kDefaultPowersetBound) {
  const Poset& p = rp.poset();
  if (p.size() > bound) {
    throw TooLarge("powerset of " + std::to_string(p.size()) + " elements exceeds bound " +
                   std::to_string(bound));
  }
  std::vector<std::pair<EvalVector, Mask>> all;
  for (Mask m = 0; m <= p.all(); ++m) all.emplace_back(w_evaluate(rp, m), m);
  std::sort(all.begin(), all.end(), [&](const auto& a, const auto& b) {
    auto c = w_compare(a.first, b.first);
    if (c != 0) return c < 0;
    return p.set_of(a.second) < p.set_of(b.second);
  });
  std::vector<SubsetClass> out;
  for (auto& [value, mask] : all) {
    if (out.empty() || out.back().value != value) out.push_back({value, {}});
    out.back().members.push_back(p.set_of(mask));
  }
  return out;
}

/// Drops every cover spanning two or more ranks. The result is graded and has
/// the same rank partition, so every subset keeps its W value.
inline Poset canonicalize(const Poset& p) {
  const RankPartition rp = require_rank_partition(p);
  std::vector<std::pair<std::size_t, std::size_t>> kept;
  for (auto [a, b] : p.cover_indices()) {
    if (rp.rank_of(b) == rp.rank_of(a) + 1) kept.emplace_back(a, b);
  }
  return Poset::from_index_relation(p.elements(), kept, p.name());
}

// ---------------------------------------------------------------------------
// Brute-force checking of arbitrary candidate evaluators.

/// A candidate evaluator given as an explicit score per subset.
class EvaluatorTable {
 public:
  static constexpr std::size_t kMaxElements = 20;

  explicit EvaluatorTable(const Poset& p) : poset_(p) {
    if (p.size() > kMaxElements) throw TooLarge("evaluator tables are limited to 20 elements");
    scores_.assign(std::size_t{1} << p.size(), std::nullopt);
  }

  static EvaluatorTable from_function(const Poset& p, const std::function<double(Mask)>& f) {
    EvaluatorTable t(p);
    for (Mask m = 0; m <= p.all(); ++m) t.set(m, f(m));
    return t;
  }

  const Poset& poset() const noexcept { return poset_; }
  void set(Mask subset, double score) { scores_.at(subset) = score; }
  void set(const PropertySet& subset, double score) { set(poset_.mask_of(subset), score); }
  bool has(Mask subset) const { return scores_.at(subset).has_value(); }

  double at(Mask subset) const {
    const auto& s = scores_.at(subset);
    if (!s) throw PartialTable("no score for subset " + detail::describe(poset_, subset));
    return *s;
  }

  std::optional<Mask> first_missing() const {
    for (Mask m = 0; m < scores_.size(); ++m) {
      if (!scores_[m]) return m;
    }
    return std::nullopt;
  }

 private:
  Poset poset_;
  std::vector<std::optional<double>> scores_;
};

/// W as a table of mixed-radix scores.
inline EvaluatorTable w_table(const RankPartition& rp) {
  return EvaluatorTable::from_function(
      rp.poset(), [&](Mask m) { return static_cast<double>(w_decimal(rp, w_evaluate(rp, m))); });
}

/// First failed requirement (1-5) of a candidate evaluator, with witnesses.
struct Violation {
  int requirement = 0;
  std::vector<PropertySet> subsets;
  std::vector<PropertyId> elements;
  std::string detail;
};

inline constexpr std::size_t kVerifyBound = 10;

namespace detail {

inline std::vector<double> singleton_scores(const EvaluatorTable& f) {
  std::vector<double> s(f.poset().size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = f.at(bit(i));
  return s;
}

inline std::optional<Violation> check_req1(const EvaluatorTable& f) {
  const Poset& p = f.poset();
  for (Mask m = 1; m <= p.all(); ++m) {
    if (!(f.at(0) < f.at(m))) {
      return Violation{1, {{}, p.set_of(m)}, {}, "f(empty) is not below f(" + describe(p, m) + ")"};
    }
  }
  return std::nullopt;
}

inline std::optional<Violation> check_req2(const EvaluatorTable& f) {
  const Poset& p = f.poset();
  const auto s = singleton_scores(f);
  for (Mask a = 1; a <= p.all(); ++a) {
    for (Mask b = 1; b <= p.all(); ++b) {
      if (!(f.at(a) <= f.at(b))) continue;
      std::optional<Violation> v;
      for_each_bit(a, [&](std::size_t p1) {
        if (v) return;
        for_each_bit(b, [&](std::size_t p2) {
          if (v || s[p1] != s[p2]) return;
          if (!(f.at(a & ~bit(p1)) <= f.at(b & ~bit(p2)))) {
            v = Violation{2,
                          {p.set_of(a), p.set_of(b)},
                          {p.id(p1), p.id(p2)},
                          "f(" + describe(p, a) + ") <= f(" + describe(p, b) +
                              ") but removing equally valued '" + p.id(p1).str() + "' and '" +
                              p.id(p2).str() + "' reverses the order"};
          }
        });
      });
      if (v) return v;
    }
  }
  return std::nullopt;
}

inline std::optional<Violation> check_req3(const EvaluatorTable& f) {
  const Poset& p = f.poset();
  const auto s = singleton_scores(f);
  const std::size_t n = p.size();
  std::vector<Mask> same_value(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (s[i] == s[j]) same_value[i] |= bit(j);
    }
  }
  auto max_score = [&](Mask m) {
    double best = -std::numeric_limits<double>::infinity();
    for_each_bit(m, [&](std::size_t i) { best = std::max(best, s[i]); });
    return best;
  };
  for (Mask a = 1; a <= p.all(); ++a) {
    Mask clash = 0;
    for_each_bit(a, [&](std::size_t i) { clash |= same_value[i]; });
    for (Mask b = 1; b <= p.all(); ++b) {
      if (b & clash) continue;
      if (max_score(a) < max_score(b) && !(f.at(a) < f.at(b))) {
        return Violation{3, {p.set_of(a), p.set_of(b)}, {},
                         "best member of " + describe(p, b) + " outranks every member of " +
                             describe(p, a) + " but f does not rank the set higher"};
      }
    }
  }
  return std::nullopt;
}

inline std::optional<Violation> check_req4(const EvaluatorTable& f) {
  const Poset& p = f.poset();
  const auto s = singleton_scores(f);
  for (std::size_t a = 0; a < p.size(); ++a) {
    std::optional<Violation> v;
    for_each_bit(p.strictly_above(a), [&](std::size_t b) {
      if (!v && !(s[a] < s[b])) {
        v = Violation{4, {}, {p.id(a), p.id(b)},
                      "'" + p.id(a).str() + "' is below '" + p.id(b).str() +
                          "' but not valued lower"};
      }
    });
    if (v) return v;
  }
  return std::nullopt;
}

inline std::optional<Violation> check_req5(const EvaluatorTable& f) {
  const Poset& p = f.poset();
  const auto s = singleton_scores(f);
  for (std::size_t a = 0; a < p.size(); ++a) {
    for (std::size_t b = 0; b < p.size(); ++b) {
      if (a == b || p.comparable(a, b) || !(s[a] < s[b])) continue;
      bool proxy_above = false, proxy_below = false;
      for_each_bit(p.strictly_above(a), [&](std::size_t up) { proxy_above |= s[up] == s[b]; });
      for_each_bit(p.strictly_below(b), [&](std::size_t down) { proxy_below |= s[down] == s[a]; });
      if (!proxy_above || !proxy_below) {
        return Violation{5, {}, {p.id(a), p.id(b)},
                         "incomparable '" + p.id(a).str() + "' < '" + p.id(b).str() +
                             "' without an equally valued proxy " +
                             (proxy_above ? "below '" + p.id(b).str() + "'"
                                          : "above '" + p.id(a).str() + "'")};
      }
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Checks a single requirement (1-5) exhaustively.
inline std::optional<Violation> check_requirement(const EvaluatorTable& f, int requirement) {
  if (auto missing = f.first_missing()) {
    throw PartialTable("evaluator table has no score for " +
                       detail::describe(f.poset(), *missing));
  }
  switch (requirement) {
    case 1: return detail::check_req1(f);
    case 2: return detail::check_req2(f);
    case 3: return detail::check_req3(f);
    case 4: return detail::check_req4(f);
    case 5: return detail::check_req5(f);
    default: throw std::invalid_argument("requirements are numbered 1 to 5");
  }
}

/// Checks all five requirements by exhaustive quantification and reports the
/// lowest-numbered one that fails.
inline std::optional<Violation> verify_consistent_evaluator(const Poset& p, const EvaluatorTable& f) {
  if (!(f.poset() == p)) throw std::invalid_argument("evaluator table belongs to another poset");
  if (p.size() > kVerifyBound) {
    throw TooLarge("exhaustive verification is limited to " + std::to_string(kVerifyBound) +
                   " elements");
  }
  for (int r = 1; r <= 5; ++r) {
    if (auto v = check_requirement(f, r)) return v;
  }
  return std::nullopt;
}

/// True iff both tables induce the same weak order on the powerset.
inline bool induce_same_order(const EvaluatorTable& a, const EvaluatorTable& b) {
  const Mask all = a.poset().all();
  for (Mask x = 0; x <= all; ++x) {
    for (Mask y = 0; y <= all; ++y) {
      if ((a.at(x) <= a.at(y)) != (b.at(x) <= b.at(y))) return false;
    }
  }
  return true;
}

}  // namespace specstruct
