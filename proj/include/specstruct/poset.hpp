#pragma once

// Finite posets of dimensional properties stored as Hasse diagrams, plus the
// order-theoretic primitives the rest of the library builds on.
//
// Elements are kept sorted by id and addressed internally by index; subsets
// are 64-bit masks over those indices. All enumeration routines are
// exponential and meant for desk-scale structures (a dozen or so elements).

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "specstruct/errors.hpp"

namespace specstruct {

using Mask = std::uint64_t;

inline constexpr Mask bit(std::size_t i) { return Mask{1} << i; }

inline constexpr Mask low_bits(std::size_t n) {
  return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1;
}

/// Calls `fn(index)` for each set bit of `m`, lowest first.
template <typename Fn>
void for_each_bit(Mask m, Fn&& fn) {
  while (m != 0) {
    fn(static_cast<std::size_t>(std::countr_zero(m)));
    m &= m - 1;
  }
}

/// Short identifier of a dimensional property ("safety", "ND", ...).
/// Non-empty and free of whitespace and of the list separator ','.
class PropertyId {
 public:
  PropertyId(std::string_view token) : token_(token) {  // NOLINT: implicit by intent
    if (token_.empty()) throw InvalidIdentifier("property id must be non-empty");
    for (char c : token_) {
      if (c == ',' || c == '#' || static_cast<unsigned char>(c) <= ' ') {
        throw InvalidIdentifier("invalid property id '" + token_ + "'");
      }
    }
  }
  PropertyId(const char* token) : PropertyId(std::string_view(token)) {}  // NOLINT
  PropertyId(const std::string& token) : PropertyId(std::string_view(token)) {}  // NOLINT

  const std::string& str() const noexcept { return token_; }

  friend auto operator<=>(const PropertyId&, const PropertyId&) = default;
  friend bool operator==(const PropertyId&, const PropertyId&) = default;

 private:
  std::string token_;
};

/// `lower` strictly below `upper`.
struct Relation {
  PropertyId lower;
  PropertyId upper;

  friend auto operator<=>(const Relation&, const Relation&) = default;
  friend bool operator==(const Relation&, const Relation&) = default;
};

/// Sorted, duplicate-free list of property ids.
using PropertySet = std::vector<PropertyId>;
/// Bottom-to-top.
using Chain = std::vector<PropertyId>;
/// Sorted by id.
using Antichain = std::vector<PropertyId>;

inline PropertySet make_property_set(std::vector<PropertyId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

/// Immutable finite strict partial order.
///
/// Construction accepts any acyclic relation and keeps both its transitive
/// closure (for order queries) and its transitive reduction (the covers).
class Poset {
 public:
  static constexpr std::size_t kMaxElements = 64;

  /// Builds from ids and an arbitrary relation set; the stored covers are the
  /// transitive reduction of the relation's transitive closure.
  static Poset build(std::vector<PropertyId> elements,
                     const std::vector<Relation>& relations,
                     std::string name = {}) {
    if (elements.empty()) throw EmptyPoset("a poset needs at least one element");
    if (elements.size() > kMaxElements) {
      throw TooLarge("posets are limited to " + std::to_string(kMaxElements) +
                     " elements");
    }
    std::sort(elements.begin(), elements.end());
    for (std::size_t i = 1; i < elements.size(); ++i) {
      if (elements[i] == elements[i - 1]) {
        throw DuplicateNode("duplicate property '" + elements[i].str() + "'");
      }
    }
    Poset p;
    p.name_ = std::move(name);
    p.elements_ = std::move(elements);
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    edges.reserve(relations.size());
    for (const auto& r : relations) {
      edges.emplace_back(p.require_index(r.lower), p.require_index(r.upper));
    }
    p.init(edges);
    return p;
  }

  /// Index-level constructor used by generators and search routines.
  static Poset from_index_relation(std::vector<PropertyId> sorted_elements,
                                   const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                   std::string name = {}) {
    if (sorted_elements.empty()) throw EmptyPoset("a poset needs at least one element");
    if (!std::is_sorted(sorted_elements.begin(), sorted_elements.end())) {
      throw std::logic_error("from_index_relation expects sorted elements");
    }
    Poset p;
    p.name_ = std::move(name);
    p.elements_ = std::move(sorted_elements);
    p.init(edges);
    return p;
  }

  /// Non-throwing variant for search loops: nullopt when `edges` has a cycle.
  static std::optional<Poset> try_from_index_relation(
      const std::vector<PropertyId>& sorted_elements,
      const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    Poset p;
    p.elements_ = sorted_elements;
    if (!p.init_closure(edges)) return std::nullopt;
    p.init_covers();
    return p;
  }

  const std::string& name() const noexcept { return name_; }
  Poset renamed(std::string name) const {
    Poset copy = *this;
    copy.name_ = std::move(name);
    return copy;
  }

  std::size_t size() const noexcept { return elements_.size(); }
  const std::vector<PropertyId>& elements() const noexcept { return elements_; }
  const PropertyId& id(std::size_t i) const { return elements_.at(i); }
  Mask all() const noexcept { return low_bits(size()); }

  std::optional<std::size_t> index_of(const PropertyId& id) const {
    auto it = std::lower_bound(elements_.begin(), elements_.end(), id);
    if (it == elements_.end() || *it != id) return std::nullopt;
    return static_cast<std::size_t>(it - elements_.begin());
  }

  std::size_t require_index(const PropertyId& id) const {
    if (auto i = index_of(id)) return *i;
    throw UnknownElement("unknown property '" + id.str() + "'" +
                         (name_.empty() ? std::string{} : " in structure '" + name_ + "'"));
  }

  bool contains(const PropertyId& id) const { return index_of(id).has_value(); }

  bool less(std::size_t a, std::size_t b) const { return (below_[b] & bit(a)) != 0; }
  bool leq(std::size_t a, std::size_t b) const { return a == b || less(a, b); }
  bool comparable(std::size_t a, std::size_t b) const { return leq(a, b) || leq(b, a); }
  bool covered_by(std::size_t a, std::size_t b) const { return (lower_covers_[b] & bit(a)) != 0; }

  Mask strictly_below(std::size_t i) const { return below_[i]; }
  Mask strictly_above(std::size_t i) const { return above_[i]; }
  Mask lower_covers(std::size_t i) const { return lower_covers_[i]; }
  Mask upper_covers(std::size_t i) const { return upper_covers_[i]; }
  Mask comparable_with(std::size_t i) const { return below_[i] | above_[i] | bit(i); }

  Mask minimal_elements() const {
    Mask m = 0;
    for (std::size_t i = 0; i < size(); ++i) {
      if (below_[i] == 0) m |= bit(i);
    }
    return m;
  }
  Mask maximal_elements() const {
    Mask m = 0;
    for (std::size_t i = 0; i < size(); ++i) {
      if (above_[i] == 0) m |= bit(i);
    }
    return m;
  }

  /// Cover pairs as indices, sorted.
  std::vector<std::pair<std::size_t, std::size_t>> cover_indices() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t b = 0; b < size(); ++b) {
      for_each_bit(lower_covers_[b], [&](std::size_t a) { out.emplace_back(a, b); });
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Cover pairs as ids, sorted.
  std::vector<Relation> covers() const {
    std::vector<Relation> out;
    for (auto [a, b] : cover_indices()) out.push_back({elements_[a], elements_[b]});
    std::sort(out.begin(), out.end());
    return out;
  }

  Mask mask_of(const std::vector<PropertyId>& ids) const {
    Mask m = 0;
    for (const auto& id : ids) m |= bit(require_index(id));
    return m;
  }

  PropertySet set_of(Mask m) const {
    PropertySet out;
    for_each_bit(m, [&](std::size_t i) { out.push_back(elements_[i]); });
    return out;
  }

  /// Same element ids and same cover set; the structure name is ignored.
  friend bool operator==(const Poset& a, const Poset& b) {
    return a.elements_ == b.elements_ && a.lower_covers_ == b.lower_covers_;
  }

 private:
  Poset() = default;

  void init(const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    if (!init_closure(edges)) {
      for (std::size_t i = 0; i < elements_.size(); ++i) {
        if (below_[i] & bit(i)) {
          throw CycleError("order relation contains a cycle through '" + elements_[i].str() + "'");
        }
      }
    }
    init_covers();
  }

  bool init_closure(const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    const std::size_t n = elements_.size();
    below_.assign(n, 0);
    for (auto [a, b] : edges) {
      if (a >= n || b >= n) throw std::out_of_range("relation index out of range");
      below_[b] |= bit(a);
    }
    // Warshall over bitsets: below_[j] absorbs below_[k] whenever k < j.
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) {
        if (below_[j] & bit(k)) below_[j] |= below_[k];
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (below_[i] & bit(i)) return false;
    }
    return true;
  }

  void init_covers() {
    const std::size_t n = elements_.size();
    above_.assign(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
      for_each_bit(below_[j], [&](std::size_t i) { above_[i] |= bit(j); });
    }
    lower_covers_.assign(n, 0);
    upper_covers_.assign(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
      for_each_bit(below_[j], [&](std::size_t i) {
        if ((above_[i] & below_[j]) == 0) {
          lower_covers_[j] |= bit(i);
          upper_covers_[i] |= bit(j);
        }
      });
    }
  }

  std::string name_;
  std::vector<PropertyId> elements_;
  std::vector<Mask> below_;
  std::vector<Mask> above_;
  std::vector<Mask> lower_covers_;
  std::vector<Mask> upper_covers_;
};

inline Poset build_poset(std::vector<PropertyId> elements,
                         const std::vector<Relation>& relations,
                         std::string name = {}) {
  return Poset::build(std::move(elements), relations, std::move(name));
}

/// Reflexive order test: true iff a == b or a lies strictly below b.
inline bool leq(const Poset& p, const PropertyId& a, const PropertyId& b) {
  return p.leq(p.require_index(a), p.require_index(b));
}

/// Every maximal chain as an index mask. Maximal chains of a finite poset are
/// exactly the Hasse-diagram paths from a minimal to a maximal element.
inline std::vector<std::vector<std::size_t>> maximal_chain_indices(const Poset& p) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> path;
  auto walk = [&](auto&& self, std::size_t v) -> void {
    path.push_back(v);
    if (p.upper_covers(v) == 0) {
      out.push_back(path);
    } else {
      for_each_bit(p.upper_covers(v), [&](std::size_t w) { self(self, w); });
    }
    path.pop_back();
  };
  for_each_bit(p.minimal_elements(), [&](std::size_t v) { walk(walk, v); });
  return out;
}

/// All maximal chains, each listed bottom-to-top, sorted lexicographically.
inline std::vector<Chain> maximal_chains(const Poset& p) {
  std::vector<Chain> out;
  for (const auto& path : maximal_chain_indices(p)) {
    Chain c;
    for (auto i : path) c.push_back(p.id(i));
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Maximal antichains as masks: maximal cliques of the incomparability graph
/// (Bron-Kerbosch with pivoting).
inline std::vector<Mask> maximal_antichain_masks(const Poset& p) {
  const std::size_t n = p.size();
  std::vector<Mask> incomparable(n);
  for (std::size_t i = 0; i < n; ++i) incomparable[i] = p.all() & ~p.comparable_with(i);
  std::vector<Mask> out;
  auto expand = [&](auto&& self, Mask r, Mask candidates, Mask excluded) -> void {
    if (candidates == 0 && excluded == 0) {
      out.push_back(r);
      return;
    }
    std::size_t pivot = static_cast<std::size_t>(std::countr_zero(candidates | excluded));
    for_each_bit(candidates & ~incomparable[pivot], [&](std::size_t v) {
      self(self, r | bit(v), candidates & incomparable[v], excluded & incomparable[v]);
      candidates &= ~bit(v);
      excluded |= bit(v);
    });
  };
  expand(expand, 0, p.all(), 0);
  std::sort(out.begin(), out.end());
  return out;
}

/// All maximal antichains, members sorted, list sorted.
inline std::vector<Antichain> maximal_antichains(const Poset& p) {
  std::vector<Antichain> out;
  for (Mask m : maximal_antichain_masks(p)) out.push_back(p.set_of(m));
  std::sort(out.begin(), out.end());
  return out;
}

/// Per-element lengths (in nodes) of the longest and shortest Hasse paths that
/// start at a minimal element and end at the element.
struct ChainProfile {
  std::vector<std::size_t> longest_below;
  std::vector<std::size_t> shortest_below;
  std::vector<std::size_t> longest_above;
};

inline std::vector<std::size_t> topological_order(const Poset& p) {
  std::vector<std::size_t> order(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::popcount(p.strictly_below(a)) < std::popcount(p.strictly_below(b));
  });
  return order;
}

inline ChainProfile chain_profile(const Poset& p) {
  const std::size_t n = p.size();
  ChainProfile cp{std::vector<std::size_t>(n, 1), std::vector<std::size_t>(n, 1),
                  std::vector<std::size_t>(n, 1)};
  const auto order = topological_order(p);
  for (std::size_t v : order) {
    if (p.lower_covers(v) == 0) continue;
    std::size_t lo = n + 1, hi = 0;
    for_each_bit(p.lower_covers(v), [&](std::size_t u) {
      lo = std::min(lo, cp.shortest_below[u]);
      hi = std::max(hi, cp.longest_below[u]);
    });
    cp.shortest_below[v] = lo + 1;
    cp.longest_below[v] = hi + 1;
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    std::size_t v = *it;
    std::size_t hi = 0;
    for_each_bit(p.upper_covers(v), [&](std::size_t w) { hi = std::max(hi, cp.longest_above[w]); });
    cp.longest_above[v] = hi + 1;
  }
  return cp;
}

/// Length in nodes of the longest chain.
inline std::size_t height(const Poset& p) {
  const auto cp = chain_profile(p);
  return *std::max_element(cp.longest_below.begin(), cp.longest_below.end());
}

/// True iff all maximal chains have the same length.
inline bool is_graded(const Poset& p) {
  const auto cp = chain_profile(p);
  std::optional<std::size_t> length;
  bool graded = true;
  for_each_bit(p.maximal_elements(), [&](std::size_t v) {
    if (cp.shortest_below[v] != cp.longest_below[v]) graded = false;
    if (length && *length != cp.longest_below[v]) graded = false;
    length = cp.longest_below[v];
  });
  return graded;
}

/// Rank of each element by index: minimal elements 0, covers add exactly 1.
inline std::vector<std::size_t> rank_indices(const Poset& p) {
  if (!is_graded(p)) {
    throw NotGraded("structure" + (p.name().empty() ? std::string{} : " '" + p.name() + "'") +
                    " is not graded: its maximal chains differ in length");
  }
  auto ranks = chain_profile(p).longest_below;
  for (auto& r : ranks) r -= 1;
  return ranks;
}

inline std::map<PropertyId, std::size_t> rank_function(const Poset& p) {
  const auto ranks = rank_indices(p);
  std::map<PropertyId, std::size_t> out;
  for (std::size_t i = 0; i < p.size(); ++i) out.emplace(p.id(i), ranks[i]);
  return out;
}

}  // namespace specstruct
