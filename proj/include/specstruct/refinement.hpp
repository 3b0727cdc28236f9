#pragma once

// Growing a specification structure one property or comparison at a time.
//
// An addition is accepted as-is when every maximal chain still has the same
// length. Otherwise `repair` searches for the fewest new comparisons that
// restore gradedness; covers made redundant by them drop out of the diagram.

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "specstruct/errors.hpp"
#include "specstruct/poset.hpp"

namespace specstruct {

/// A new property placed above every id in `below` and under every id in
/// `above`.
struct AddNode {
  PropertyId id;
  std::vector<PropertyId> below;
  std::vector<PropertyId> above;
};

/// A new comparison `lower` < `upper` between existing properties.
struct AddEdge {
  PropertyId lower;
  PropertyId upper;
};

using RefinementRequest = std::variant<AddNode, AddEdge>;

/// The addition broke gradedness; `shortest` and `longest` are maximal chains
/// of different lengths in the resulting poset.
struct NotGradedAfter {
  Poset result;
  Chain shortest;
  Chain longest;
};

struct RepairDiff {
  std::vector<Relation> removed_edges;
  std::vector<Relation> added_edges;

  std::size_t size() const { return removed_edges.size() + added_edges.size(); }
  bool empty() const { return size() == 0; }
  friend bool operator==(const RepairDiff&, const RepairDiff&) = default;
};

struct RepairResult {
  Poset poset;
  RepairDiff diff;
};

/// Relations the caller asked for, in terms of ids.
inline std::vector<Relation> requested_relations(const RefinementRequest& req) {
  std::vector<Relation> out;
  if (const auto* node = std::get_if<AddNode>(&req)) {
    for (const auto& b : node->below) out.push_back({b, node->id});
    for (const auto& a : node->above) out.push_back({node->id, a});
  } else {
    const auto& edge = std::get<AddEdge>(req);
    out.push_back({edge.lower, edge.upper});
  }
  return out;
}

/// The poset with the addition applied and renormalised, graded or not.
inline Poset apply_request(const Poset& p, const RefinementRequest& req) {
  std::vector<PropertyId> elements = p.elements();
  std::vector<Relation> relations = p.covers();
  if (const auto* node = std::get_if<AddNode>(&req)) {
    if (p.contains(node->id)) throw DuplicateNode("property '" + node->id.str() + "' already exists");
    for (const auto& id : node->below) p.require_index(id);
    for (const auto& id : node->above) p.require_index(id);
    elements.push_back(node->id);
  } else {
    const auto& edge = std::get<AddEdge>(req);
    const auto lo = p.require_index(edge.lower);
    const auto hi = p.require_index(edge.upper);
    if (lo == hi || p.less(hi, lo)) {
      throw CycleError("adding '" + edge.lower.str() + "' < '" + edge.upper.str() +
                       "' would create a cycle");
    }
  }
  for (auto& r : requested_relations(req)) relations.push_back(std::move(r));
  return Poset::build(std::move(elements), relations, p.name());
}

namespace detail {

inline std::pair<Chain, Chain> extreme_chains(const Poset& p) {
  auto chains = maximal_chains(p);
  auto by_length = [](const Chain& a, const Chain& b) { return a.size() < b.size(); };
  Chain shortest = *std::min_element(chains.begin(), chains.end(), by_length);
  Chain longest = *std::max_element(chains.begin(), chains.end(), by_length);
  return {std::move(shortest), std::move(longest)};
}

inline RepairDiff cover_diff(const Poset& before, const Poset& after) {
  const auto old_covers = before.covers();
  const auto new_covers = after.covers();
  RepairDiff diff;
  std::set_difference(old_covers.begin(), old_covers.end(), new_covers.begin(), new_covers.end(),
                      std::back_inserter(diff.removed_edges));
  std::set_difference(new_covers.begin(), new_covers.end(), old_covers.begin(), old_covers.end(),
                      std::back_inserter(diff.added_edges));
  return diff;
}

}  // namespace detail

inline void require_graded(const Poset& p) {
  if (!is_graded(p)) {
    throw NotGraded("structure" + (p.name().empty() ? std::string{} : " '" + p.name() + "'") +
                    " is not graded");
  }
}

/// Applies the addition if the result is still graded.
inline std::variant<Poset, NotGradedAfter> refine(const Poset& p, const RefinementRequest& req) {
  require_graded(p);
  Poset result = apply_request(p, req);
  if (is_graded(result)) return result;
  auto [shortest, longest] = detail::extreme_chains(result);
  return NotGradedAfter{std::move(result), std::move(shortest), std::move(longest)};
}

/// Applies the addition and, if needed, the cheapest repair that makes the
/// result graded again. A repair only adds comparisons between incomparable
/// elements; covers disappear only when a new comparison makes them
/// redundant, so every relation of the refined poset survives. Candidates are
/// ranked by number of added comparisons, then by how far the original
/// elements move in rank, then by cover-diff size, then by the
/// lexicographically smallest (removed, added) edge lists. A requested edge
/// between existing nodes is kept as a cover. The search is exponential in
/// the number of added comparisons and stops at `budget` (default twice the
/// element count).
inline RepairResult repair(const Poset& p, const RefinementRequest& req,
                           std::optional<std::size_t> budget = std::nullopt) {
  require_graded(p);
  const Poset post = apply_request(p, req);
  if (is_graded(post)) return {post, {}};

  const std::size_t n = post.size();
  const std::size_t max_edits = budget.value_or(2 * n);
  using Edge = std::pair<std::size_t, std::size_t>;

  std::optional<Edge> pinned;
  if (const auto* edge = std::get_if<AddEdge>(&req)) {
    pinned = Edge{post.require_index(edge->lower), post.require_index(edge->upper)};
  }

  const auto original_rank = rank_function(p);
  auto displacement = [&](const Poset& out) {
    const auto ranks = rank_indices(out);
    std::size_t total = 0;
    for (const auto& [id, r] : original_rank) {
      const std::size_t now = ranks[out.require_index(id)];
      total += now > r ? now - r : r - now;
    }
    return total;
  };

  const auto covers = post.cover_indices();
  std::vector<Edge> additions;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (u != v && !post.comparable(u, v)) additions.emplace_back(u, v);
    }
  }

  struct Candidate {
    std::size_t displacement;
    RepairResult result;
  };
  std::optional<Candidate> best;
  auto consider = [&](const std::vector<std::size_t>& picks) {
    std::vector<Edge> edges = covers;
    for (auto c : picks) edges.push_back(additions[c]);
    auto out = Poset::try_from_index_relation(post.elements(), edges);
    if (!out || !is_graded(*out)) return;
    if (pinned && !out->covered_by(pinned->first, pinned->second)) return;
    Poset result = out->renamed(post.name());
    RepairDiff diff = detail::cover_diff(post, result);
    const std::size_t moved = displacement(result);
    if (best) {
      const auto& b = best->result.diff;
      const std::size_t size = diff.size(), best_size = b.size();
      if (std::tie(moved, size, diff.removed_edges, diff.added_edges) >=
          std::tie(best->displacement, best_size, b.removed_edges, b.added_edges)) {
        return;
      }
    }
    best = Candidate{moved, RepairResult{std::move(result), std::move(diff)}};
  };

  std::vector<std::size_t> picks;
  auto choose = [&](auto&& self, std::size_t start, std::size_t left) -> void {
    if (left == 0) {
      consider(picks);
      return;
    }
    for (std::size_t c = start; c + left <= additions.size(); ++c) {
      picks.push_back(c);
      self(self, c + 1, left - 1);
      picks.pop_back();
    }
  };
  for (std::size_t k = 1; k <= max_edits && k <= additions.size(); ++k) {
    choose(choose, 0, k);
    if (best) return std::move(best->result);
  }
  throw Unrepairable("no set of at most " + std::to_string(max_edits) +
                     " new comparisons makes the refined structure graded");
}

}  // namespace specstruct
