#pragma once

// One-shot normal-form games between agents that rank outcomes with their own
// specification structures. Payoffs are W vectors, so "better" always means
// lexicographically greater per-rank satisfaction counts.
//
// Oracles are plain lookup tables: for each joint action profile, which of an
// agent's properties hold. Each agent may hold its own belief table; a
// ground-truth table, when present, decides what actually happens.

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

namespace specstruct {

/// One action name per agent, in scenario agent order.
using JointProfile = std::vector<std::string>;

inline std::string profile_to_string(const JointProfile& profile) {
  std::string s;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (i) s += ",";
    s += profile[i];
  }
  return s;
}

/// Cartesian product of per-agent action lists, first agent varying slowest.
inline std::vector<JointProfile> enumerate_profiles(
    const std::vector<std::vector<std::string>>& actions) {
  std::vector<JointProfile> out{{}};
  for (const auto& list : actions) {
    std::vector<JointProfile> next;
    for (const auto& prefix : out) {
      for (const auto& a : list) {
        JointProfile p = prefix;
        p.push_back(a);
        next.push_back(std::move(p));
      }
    }
    out = std::move(next);
  }
  return out;
}

/// Satisfied properties per (joint profile, agent).
class OracleTable {
 public:
  void set(const JointProfile& profile, const std::string& agent, PropertySet satisfied) {
    outcomes_[profile][agent] = make_property_set(std::move(satisfied));
  }

  const PropertySet* find(const JointProfile& profile, const std::string& agent) const {
    auto row = outcomes_.find(profile);
    if (row == outcomes_.end()) return nullptr;
    auto cell = row->second.find(agent);
    return cell == row->second.end() ? nullptr : &cell->second;
  }

  const std::map<JointProfile, std::map<std::string, PropertySet>>& entries() const noexcept {
    return outcomes_;
  }

 private:
  std::map<JointProfile, std::map<std::string, PropertySet>> outcomes_;
};

struct GameAgent {
  std::string id;
  Poset guarantee;
  RankPartition partition;
};

class GameScenario {
 public:
  GameScenario(std::string name, std::vector<GameAgent> agents,
               std::vector<std::vector<std::string>> actions)
      : name_(std::move(name)), agents_(std::move(agents)), actions_(std::move(actions)) {
    if (agents_.empty()) throw PreconditionError("a game needs at least one agent");
    if (actions_.size() != agents_.size()) {
      throw PreconditionError("game '" + name_ + "' needs one action list per agent");
    }
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      if (actions_[i].empty()) {
        throw PreconditionError("agent '" + agents_[i].id + "' has no actions");
      }
    }
  }

  const std::string& name() const noexcept { return name_; }
  const std::vector<GameAgent>& agents() const noexcept { return agents_; }
  const std::vector<std::vector<std::string>>& actions() const noexcept { return actions_; }

  std::size_t agent_index(const std::string& id) const {
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      if (agents_[i].id == id) return i;
    }
    throw UnknownElement("game '" + name_ + "' has no agent '" + id + "'");
  }

  std::optional<std::size_t> action_index(std::size_t agent, const std::string& action) const {
    const auto& list = actions_.at(agent);
    auto it = std::find(list.begin(), list.end(), action);
    if (it == list.end()) return std::nullopt;
    return static_cast<std::size_t>(it - list.begin());
  }

  /// All joint profiles, first agent's action varying slowest.
  std::vector<JointProfile> profiles() const {
    return enumerate_profiles(actions_);
  }

  void set_belief(const std::string& observer, OracleTable table) {
    agent_index(observer);
    beliefs_[observer] = std::move(table);
  }
  const std::map<std::string, OracleTable>& beliefs() const noexcept { return beliefs_; }

  void set_ground_truth(OracleTable table) { ground_truth_ = std::move(table); }
  const std::optional<OracleTable>& ground_truth() const noexcept { return ground_truth_; }

 private:
  std::string name_;
  std::vector<GameAgent> agents_;
  std::vector<std::vector<std::string>> actions_;
  std::map<std::string, OracleTable> beliefs_;
  std::optional<OracleTable> ground_truth_;
};

/// Per-profile, per-agent W vectors.
class PayoffMatrix {
 public:
  PayoffMatrix(std::vector<std::string> agent_ids, std::vector<std::vector<std::string>> actions)
      : agent_ids_(std::move(agent_ids)), actions_(std::move(actions)) {}

  const std::vector<std::string>& agent_ids() const noexcept { return agent_ids_; }
  const std::vector<std::vector<std::string>>& actions() const noexcept { return actions_; }

  void set(const JointProfile& profile, std::vector<EvalVector> payoff) {
    if (profile.size() != agent_ids_.size() || payoff.size() != agent_ids_.size()) {
      throw std::invalid_argument("payoff dimensions do not match the agent count");
    }
    payoffs_[profile] = std::move(payoff);
  }

  const std::vector<EvalVector>& at(const JointProfile& profile) const {
    auto it = payoffs_.find(profile);
    if (it == payoffs_.end()) {
      throw IncompleteOracle("no payoff for profile (" + profile_to_string(profile) + ")");
    }
    return it->second;
  }

  /// All joint profiles in canonical order (first agent slowest).
  std::vector<JointProfile> profiles() const {
    return enumerate_profiles(actions_);
  }

 private:
  std::vector<std::string> agent_ids_;
  std::vector<std::vector<std::string>> actions_;
  std::map<JointProfile, std::vector<EvalVector>> payoffs_;
};

/// Payoffs under an explicit oracle table.
inline PayoffMatrix payoffs_from_table(const GameScenario& sc, const OracleTable& table,
                                       const std::string& table_name) {
  std::vector<std::string> ids;
  for (const auto& a : sc.agents()) ids.push_back(a.id);
  PayoffMatrix pm(ids, sc.actions());
  for (const auto& profile : sc.profiles()) {
    std::vector<EvalVector> payoff;
    for (const auto& agent : sc.agents()) {
      const PropertySet* satisfied = table.find(profile, agent.id);
      if (!satisfied) {
        throw IncompleteOracle(table_name + " has no entry for agent '" + agent.id +
                               "' at profile (" + profile_to_string(profile) + ")");
      }
      payoff.push_back(w_evaluate(agent.partition, *satisfied));
    }
    pm.set(profile, std::move(payoff));
  }
  return pm;
}

/// Payoffs as seen by `belief_of`: every agent's satisfied set is read from
/// that agent's belief table.
inline PayoffMatrix build_payoffs(const GameScenario& sc, const std::string& belief_of) {
  sc.agent_index(belief_of);
  auto it = sc.beliefs().find(belief_of);
  if (it == sc.beliefs().end()) {
    throw IncompleteOracle("agent '" + belief_of + "' has no belief table in game '" +
                           sc.name() + "'");
  }
  return payoffs_from_table(sc, it->second, "belief of '" + belief_of + "'");
}

namespace detail {

/// Profiles reachable from `profile` by changing agent `agent`'s action only.
inline std::vector<JointProfile> deviations(const PayoffMatrix& pm, const JointProfile& profile,
                                            std::size_t agent) {
  std::vector<JointProfile> out;
  for (const auto& a : pm.actions()[agent]) {
    if (a == profile[agent]) continue;
    JointProfile d = profile;
    d[agent] = a;
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace detail

/// Profiles where no agent gains a strictly greater vector by deviating alone.
inline std::vector<JointProfile> pure_nash(const PayoffMatrix& pm) {
  std::vector<JointProfile> out;
  for (const auto& profile : pm.profiles()) {
    const auto& here = pm.at(profile);
    bool stable = true;
    for (std::size_t i = 0; i < pm.agent_ids().size() && stable; ++i) {
      for (const auto& d : detail::deviations(pm, profile, i)) {
        if (w_compare(pm.at(d)[i], here[i]) > 0) {
          stable = false;
          break;
        }
      }
    }
    if (stable) out.push_back(profile);
  }
  return out;
}

/// Profiles no other profile weakly improves for everyone and strictly for one.
inline std::vector<JointProfile> pareto_efficient(const PayoffMatrix& pm) {
  const auto all = pm.profiles();
  std::vector<JointProfile> out;
  for (const auto& x : all) {
    const auto& px = pm.at(x);
    bool dominated = false;
    for (const auto& y : all) {
      const auto& py = pm.at(y);
      bool weakly_better = true, strictly = false;
      for (std::size_t i = 0; i < px.size(); ++i) {
        auto c = w_compare(py[i], px[i]);
        if (c < 0) weakly_better = false;
        if (c > 0) strictly = true;
      }
      if (weakly_better && strictly) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.push_back(x);
  }
  return out;
}

enum class SelectionRule {
  Refuse,      // multiple equilibria are an error
  RiskAverse,  // maximin over the agent's own vector
  IndexOrder,  // first equilibrium in profile order
};

/// The action maximising the agent's worst-case vector; ties keep the earlier
/// action.
inline std::string maximin_action(const PayoffMatrix& pm, std::size_t agent) {
  std::optional<EvalVector> best_worst;
  std::string best_action;
  for (const auto& action : pm.actions()[agent]) {
    std::optional<EvalVector> worst;
    for (const auto& profile : pm.profiles()) {
      if (profile[agent] != action) continue;
      const EvalVector& v = pm.at(profile)[agent];
      if (!worst || w_compare(v, *worst) < 0) worst = v;
    }
    if (!best_worst || w_compare(*worst, *best_worst) > 0) {
      best_worst = worst;
      best_action = action;
    }
  }
  return best_action;
}

struct ConflictReport {
  bool has_ground_truth = false;
  /// Agents whose realized outcome leaves a top-rank property unsatisfied.
  std::vector<std::string> flagged_agents;
  std::vector<EvalVector> realized_vectors;

  bool conflict() const { return !flagged_agents.empty(); }
};

struct DivergenceOutcome {
  std::map<std::string, std::string> chosen_actions;
  JointProfile realized;
  std::map<std::string, std::vector<JointProfile>> belief_equilibria;
  ConflictReport report;
};

/// Each agent solves the game it believes in and plays its part of that
/// game's equilibrium; the realized joint profile is then scored against the
/// ground truth.
inline DivergenceOutcome resolve_divergent(const GameScenario& sc,
                                           SelectionRule rule = SelectionRule::Refuse) {
  DivergenceOutcome out;
  out.realized.resize(sc.agents().size());
  for (std::size_t i = 0; i < sc.agents().size(); ++i) {
    const std::string& id = sc.agents()[i].id;
    const PayoffMatrix pm = build_payoffs(sc, id);
    auto equilibria = pure_nash(pm);
    out.belief_equilibria[id] = equilibria;
    std::string action;
    if (rule == SelectionRule::RiskAverse) {
      action = maximin_action(pm, i);
    } else if (equilibria.empty()) {
      throw NoPureEquilibrium("the game believed by '" + id + "' has no pure equilibrium");
    } else if (equilibria.size() > 1 && rule == SelectionRule::Refuse) {
      std::string list;
      for (const auto& e : equilibria) list += " (" + profile_to_string(e) + ")";
      throw AmbiguousEquilibria("the game believed by '" + id + "' has " +
                                std::to_string(equilibria.size()) + " equilibria:" + list);
    } else {
      action = equilibria.front()[i];
    }
    out.chosen_actions[id] = action;
    out.realized[i] = action;
  }
  if (const auto& truth = sc.ground_truth()) {
    out.report.has_ground_truth = true;
    for (const auto& agent : sc.agents()) {
      const PropertySet* satisfied = truth->find(out.realized, agent.id);
      if (!satisfied) {
        throw IncompleteOracle("ground truth has no entry for agent '" + agent.id +
                               "' at profile (" + profile_to_string(out.realized) + ")");
      }
      EvalVector v = w_evaluate(agent.partition, *satisfied);
      const Mask top = agent.partition.top_rank_mask();
      if ((agent.guarantee.mask_of(*satisfied) & top) != top) {
        out.report.flagged_agents.push_back(agent.id);
      }
      out.report.realized_vectors.push_back(std::move(v));
    }
  }
  return out;
}

}  // namespace specstruct
