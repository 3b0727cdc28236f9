#pragma once

// Assume-guarantee profiles over specification structures.
//
// An agent guarantees to act by one graded structure and assumes every other
// agent acts by some structure from an admissible family (by default: safety
// and lawfulness present, safety above everything). A group of agents is
// compatible when each guarantee falls inside every other agent's family.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "specstruct/errors.hpp"
#include "specstruct/evaluator.hpp"
#include "specstruct/poset.hpp"
#include "specstruct/refinement.hpp"

namespace specstruct {

/// Membership test for the family of structures an agent assumes of others.
struct AssumptionConstraint {
  PropertySet required_properties;
  PropertyId top_property;
  std::vector<Relation> extra_relative_orders;

  AssumptionConstraint(PropertySet required, PropertyId top, std::vector<Relation> orders)
      : required_properties(make_property_set(std::move(required))),
        top_property(std::move(top)),
        extra_relative_orders(std::move(orders)) {
    if (!std::binary_search(required_properties.begin(), required_properties.end(), top_property)) {
      required_properties.push_back(top_property);
      required_properties = make_property_set(std::move(required_properties));
    }
    std::sort(extra_relative_orders.begin(), extra_relative_orders.end());
  }

  /// Safety and lawfulness present, safety greatest, lawfulness below safety.
  static AssumptionConstraint road_default() {
    return AssumptionConstraint({"safety", "lawfulness"}, "safety", {{"lawfulness", "safety"}});
  }

  friend bool operator==(const AssumptionConstraint&, const AssumptionConstraint&) = default;
};

/// One agent's assumptions on others plus its own guarantee structure.
class AGProfile {
 public:
  AGProfile(std::string agent_id, AssumptionConstraint assumptions, Poset guarantee)
      : agent_id_(std::move(agent_id)),
        assumptions_(std::move(assumptions)),
        guarantee_(std::move(guarantee)) {
    if (!is_graded(guarantee_)) {
      throw NotGraded("guarantee of agent '" + agent_id_ + "' is not a graded structure");
    }
  }

  const std::string& agent_id() const noexcept { return agent_id_; }
  const AssumptionConstraint& assumptions() const noexcept { return assumptions_; }
  const Poset& guarantee() const noexcept { return guarantee_; }

 private:
  std::string agent_id_;
  AssumptionConstraint assumptions_;
  Poset guarantee_;
};

/// True iff `s` belongs to the family described by `c`.
inline bool satisfies_assumption(const Poset& s, const AssumptionConstraint& c) {
  require_graded(s);
  for (const auto& id : c.required_properties) {
    if (!s.contains(id)) return false;
  }
  const auto top = s.index_of(c.top_property);
  if (!top) return false;
  if ((s.strictly_below(*top) | bit(*top)) != s.all()) return false;
  for (const auto& r : c.extra_relative_orders) {
    auto lo = s.index_of(r.lower);
    auto hi = s.index_of(r.upper);
    if (!lo || !hi || !s.less(*lo, *hi)) return false;
  }
  return true;
}

/// (guarantor, assumer): the guarantor's structure is outside the assumer's
/// admissible family.
struct IncompatiblePair {
  std::string guarantor;
  std::string assumer;
  friend bool operator==(const IncompatiblePair&, const IncompatiblePair&) = default;
};

struct CompatibilityReport {
  std::vector<IncompatiblePair> failures;
  bool ok() const { return failures.empty(); }
};

inline CompatibilityReport compatible(const std::vector<AGProfile>& profiles) {
  if (profiles.size() < 2) {
    throw PreconditionError("compatibility needs at least two profiles");
  }
  CompatibilityReport report;
  for (const auto& j : profiles) {
    for (const auto& i : profiles) {
      if (&i == &j) continue;
      if (!satisfies_assumption(j.guarantee(), i.assumptions())) {
        report.failures.push_back({j.agent_id(), i.agent_id()});
      }
    }
  }
  return report;
}

struct BlameVerdict {
  std::string agent_id;
  bool blameworthy = false;
  std::string chosen_action;
  std::optional<std::string> dominating_action;
  EvalVector chosen_vector;
  std::optional<EvalVector> dominating_vector;
};

/// An agent is blameworthy when an available action scores strictly higher
/// under its own structure than the one it took. The reported dominating
/// action is the best available one (first by name among equals).
inline BlameVerdict assign_blame(const AGProfile& profile, const RankPartition& rp,
                                 const std::map<std::string, PropertySet>& available_actions,
                                 const std::string& chosen) {
  if (!(rp.poset() == profile.guarantee())) {
    throw std::invalid_argument("rank partition does not belong to the agent's guarantee");
  }
  auto it = available_actions.find(chosen);
  if (it == available_actions.end()) {
    throw UnknownAction("action '" + chosen + "' is not available to agent '" +
                        profile.agent_id() + "'");
  }
  BlameVerdict verdict;
  verdict.agent_id = profile.agent_id();
  verdict.chosen_action = chosen;
  verdict.chosen_vector = w_evaluate(rp, it->second);

  const std::pair<const std::string, PropertySet>* best = nullptr;
  EvalVector best_vector;
  for (const auto& entry : available_actions) {
    EvalVector v = w_evaluate(rp, entry.second);
    if (!best || w_compare(v, best_vector) > 0) {
      best = &entry;
      best_vector = std::move(v);
    }
  }
  if (w_compare(best_vector, verdict.chosen_vector) > 0) {
    verdict.blameworthy = true;
    verdict.dominating_action = best->first;
    verdict.dominating_vector = best_vector;
  }
  return verdict;
}

/// The two root structures for road agents: an assumed structure (left) and
/// a civilian guarantee (right). "safety" stands for no collision.
inline std::pair<Poset, Poset> axioms_root_structures() {
  Poset assumption = build_poset(
      {"safety", "no_delay", "well_being", "courtesy", "lawfulness"},
      {{"no_delay", "safety"},
       {"well_being", "safety"},
       {"courtesy", "no_delay"},
       {"courtesy", "well_being"},
       {"lawfulness", "courtesy"}},
      "axioms_assumption");
  Poset guarantee = build_poset(
      {"safety", "no_deadlock", "lawfulness", "comfort", "no_delay", "courtesy", "fuel_economy",
       "local_etiquette"},
      {{"no_deadlock", "safety"},
       {"lawfulness", "no_deadlock"},
       {"comfort", "lawfulness"},
       {"no_delay", "lawfulness"},
       {"courtesy", "lawfulness"},
       {"fuel_economy", "comfort"},
       {"local_etiquette", "no_delay"},
       {"local_etiquette", "courtesy"}},
      "axioms_guarantee");
  return {std::move(assumption), std::move(guarantee)};
}

}  // namespace specstruct
