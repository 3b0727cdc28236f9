#pragma once

// Command dispatch behind the `specstruct` tool. Each command reads a parsed
// Workspace and produces a report, either as plain text or as JSON with
// stable keys. Exit codes: 0 success, 1 negative verdict, 2 bad input.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "specstruct/contracts.hpp"
#include "specstruct/errors.hpp"
#include "specstruct/evaluator.hpp"
#include "specstruct/game.hpp"
#include "specstruct/poset.hpp"
#include "specstruct/refinement.hpp"
#include "specstruct/text_format.hpp"

namespace specstruct {

enum ExitCode : int { kExitOk = 0, kExitNegative = 1, kExitInputError = 2 };

/// Where blame and game-solve read satisfied sets from.
enum class OracleSource { OwnBelief, Belief, Truth };

struct CommandRequest {
  std::string name;
  bool json = false;
  bool decimal = false;

  std::string structure;
  std::string scenario;
  std::vector<std::string> sets;  // comma-separated subsets ("" for empty)
  std::size_t order_bound = kDefaultPowersetBound;

  std::optional<std::string> add_node;
  std::vector<std::string> below;
  std::vector<std::string> above;
  std::optional<std::pair<std::string, std::string>> add_edge;
  bool repair = true;
  std::optional<std::size_t> budget;

  std::vector<std::string> profiles;  // contract-check; empty = all

  std::string play;  // blame: joint profile "a1,a2"
  OracleSource source = OracleSource::OwnBelief;
  std::string belief_agent;

  SelectionRule selection = SelectionRule::Refuse;

  std::string table_file;  // verify-evaluator
};

struct CommandOutcome {
  int exit_code = kExitOk;
  std::string output;
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "check",  "rank",     "order",          "eval",       "compare",
      "canonicalize", "refine", "contract-check", "blame", "game-solve",
      "game-divergent", "verify-evaluator", "emit"};
  return names;
}

namespace detail {

using Json = nlohmann::ordered_json;

struct Report {
  int exit_code = kExitOk;
  Json json = Json::object();
  std::string text;

  void line(const std::string& s) { text += s + "\n"; }
};

inline Json ids_json(const std::vector<PropertyId>& ids) {
  Json a = Json::array();
  for (const auto& id : ids) a.push_back(id.str());
  return a;
}

inline std::string braces(const std::vector<PropertyId>& ids) {
  std::string s = "{";
  for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? "," : "") + ids[i].str();
  return s + "}";
}

inline std::string spaced(const std::vector<PropertyId>& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? " " : "") + ids[i].str();
  return s;
}

inline Json vector_json(const EvalVector& v) {
  Json a = Json::array();
  for (auto c : v.most_significant_first()) a.push_back(c);
  return a;
}

inline Json relations_json(const std::vector<Relation>& rels) {
  Json a = Json::array();
  for (const auto& r : rels) a.push_back(Json::array({r.lower.str(), r.upper.str()}));
  return a;
}

inline Json structure_json(const Poset& p) {
  return Json{{"name", p.name()}, {"elements", ids_json(p.elements())},
              {"covers", relations_json(p.covers())}};
}

inline PropertySet parse_set(const Poset& p, const std::string& text) {
  std::vector<PropertyId> ids;
  if (!text.empty() && text != "empty" && text != "none") {
    for (const auto& item : split_list(text)) {
      ids.emplace_back(item);
      p.require_index(ids.back());
    }
  }
  return make_property_set(std::move(ids));
}

inline std::string vector_text(const RankPartition& rp, const EvalVector& v, bool decimal) {
  std::string s = v.to_string();
  if (decimal) s += " ~" + std::to_string(w_decimal(rp, v));
  return s;
}

inline void decimal_note(Report& r, bool decimal) {
  if (decimal) {
    r.line("# ~N is a mixed-radix rendering for reading only; order is by the tuple");
  }
}

inline void put_vector(Json& j, const RankPartition& rp, const EvalVector& v, bool decimal) {
  j["vector"] = vector_json(v);
  if (decimal) j["decimal"] = w_decimal(rp, v);
}

inline Report cmd_check(const Workspace& ws, const CommandRequest& req) {
  const Poset& p = ws.structure(req.structure);
  Report r;
  const bool graded = is_graded(p);
  auto rp = rank_partition(p);
  const bool evaluable = std::holds_alternative<RankPartition>(rp);
  r.json = Json{{"structure", p.name()}, {"elements", p.size()}, {"graded", graded},
                {"consistently_evaluable", evaluable}};
  r.line("structure " + p.name());
  r.line("elements " + std::to_string(p.size()));
  r.line(std::string("graded ") + (graded ? "true" : "false"));
  r.line(std::string("consistently_evaluable ") + (evaluable ? "true" : "false"));
  if (evaluable) {
    const auto n = std::get<RankPartition>(rp).rank_count();
    r.json["ranks"] = n;
    r.line("ranks " + std::to_string(n));
  } else {
    const auto& bad = std::get<NotEvaluable>(rp);
    r.json["witness"] = bad.witness ? Json(bad.witness->str()) : Json(nullptr);
    r.json["reason"] = bad.reason;
    r.line("witness " + (bad.witness ? bad.witness->str() : std::string("-")) + ": " + bad.reason);
  }
  if (!graded) {
    auto chains = maximal_chains(p);
    auto by_len = [](const Chain& a, const Chain& b) { return a.size() < b.size(); };
    const auto& lo = *std::min_element(chains.begin(), chains.end(), by_len);
    const auto& hi = *std::max_element(chains.begin(), chains.end(), by_len);
    r.json["chain_witness"] = Json::array({ids_json(lo), ids_json(hi)});
    r.line("shortest_chain " + spaced(lo));
    r.line("longest_chain " + spaced(hi));
  }
  r.exit_code = graded && evaluable ? kExitOk : kExitNegative;
  return r;
}

inline Report cmd_rank(const Workspace& ws, const CommandRequest& req) {
  const Poset& p = ws.structure(req.structure);
  Report r;
  auto result = rank_partition(p);
  if (auto* bad = std::get_if<NotEvaluable>(&result)) {
    r.exit_code = kExitNegative;
    r.json = Json{{"structure", p.name()}, {"consistently_evaluable", false},
                  {"reason", bad->reason}};
    r.line("structure " + p.name() + " is not consistently evaluable: " + bad->reason);
    return r;
  }
  const auto& rp = std::get<RankPartition>(result);
  Json ranks = Json::object();
  for (const auto& [id, rank] : rp.ranks()) ranks[id.str()] = rank;
  Json levels = Json::array();
  const auto antichains = rp.antichains();
  for (const auto& a : antichains) levels.push_back(ids_json(a));
  r.json = Json{{"structure", p.name()}, {"rank_count", rp.rank_count()}, {"ranks", ranks},
                {"antichains", levels}};
  for (std::size_t i = antichains.size(); i-- > 0;) {
    r.line("rank " + std::to_string(i) + ": " + spaced(antichains[i]));
  }
  return r;
}

inline Report cmd_order(const Workspace& ws, const CommandRequest& req) {
  const Poset& p = ws.structure(req.structure);
  const RankPartition rp = require_rank_partition(p);
  Report r;
  Json classes = Json::array();
  decimal_note(r, req.decimal);
  for (const auto& c : powerset_order(rp, req.order_bound)) {
    Json members = Json::array();
    std::string text;
    for (const auto& m : c.members) {
      members.push_back(ids_json(m));
      text += (text.empty() ? "" : " ") + braces(m);
    }
    Json entry{{"members", members}};
    put_vector(entry, rp, c.value, req.decimal);
    classes.push_back(entry);
    r.line(vector_text(rp, c.value, req.decimal) + ": " + text);
  }
  r.json = Json{{"structure", p.name()}, {"classes", classes}};
  return r;
}

inline Report cmd_eval(const Workspace& ws, const CommandRequest& req) {
  const Poset& p = ws.structure(req.structure);
  const RankPartition rp = require_rank_partition(p);
  if (req.sets.empty()) throw PreconditionError("eval needs at least one --set");
  Report r;
  Json results = Json::array();
  decimal_note(r, req.decimal);
  for (const auto& s : req.sets) {
    const auto set = parse_set(p, s);
    const auto v = w_evaluate(rp, set);
    Json entry{{"set", ids_json(set)}};
    put_vector(entry, rp, v, req.decimal);
    results.push_back(entry);
    r.line("W" + braces(set) + " = " + vector_text(rp, v, req.decimal));
  }
  r.json = Json{{"structure", p.name()}, {"results", results}};
  return r;
}

inline Report cmd_compare(const Workspace& ws, const CommandRequest& req) {
  const Poset& p = ws.structure(req.structure);
  const RankPartition rp = require_rank_partition(p);
  if (req.sets.size() != 2) throw PreconditionError("compare needs exactly two --set options");
  const auto a = parse_set(p, req.sets[0]);
  const auto b = parse_set(p, req.sets[1]);
  const auto va = w_evaluate(rp, a);
  const auto vb = w_evaluate(rp, b);
  const auto order = w_compare(va, vb);
  const std::string verdict =
      order > 0 ? "first dominates" : order < 0 ? "second dominates" : "equivalent";
  Report r;
  Json first{{"set", ids_json(a)}}, second{{"set", ids_json(b)}};
  put_vector(first, rp, va, req.decimal);
  put_vector(second, rp, vb, req.decimal);
  r.json = Json{{"structure", p.name()}, {"first", first}, {"second", second},
                {"comparison", ordering_name(order)}, {"verdict", verdict}};
  decimal_note(r, req.decimal);
  r.line("W" + braces(a) + " = " + vector_text(rp, va, req.decimal));
  r.line("W" + braces(b) + " = " + vector_text(rp, vb, req.decimal));
  r.line(std::string("comparison ") + ordering_name(order));
  r.line("verdict " + verdict);
  return r;
}

inline void diff_lines(Report& r, const RepairDiff& diff) {
  for (const auto& e : diff.removed_edges) r.line("-edge " + e.lower.str() + " " + e.upper.str());
  for (const auto& e : diff.added_edges) r.line("+edge " + e.lower.str() + " " + e.upper.str());
}

inline Report cmd_canonicalize(const Workspace& ws, const CommandRequest& req) {
  const Poset& p = ws.structure(req.structure);
  const Poset out = canonicalize(p);
  const RepairDiff diff = cover_diff(p, out);
  Report r;
  r.json = Json{{"structure", structure_json(out)},
                {"removed_edges", relations_json(diff.removed_edges)},
                {"graded", is_graded(out)}};
  diff_lines(r, diff);
  r.text += emit_structure(out);
  return r;
}

inline Report cmd_refine(const Workspace& ws, const CommandRequest& req) {
  const Poset& p = ws.structure(req.structure);
  RefinementRequest request = [&]() -> RefinementRequest {
    if (req.add_node && req.add_edge) throw PreconditionError("give either --add-node or --add-edge");
    if (req.add_node) {
      std::vector<PropertyId> below, above;
      for (const auto& s : req.below) for (const auto& id : split_list(s)) below.emplace_back(id);
      for (const auto& s : req.above) for (const auto& id : split_list(s)) above.emplace_back(id);
      return AddNode{*req.add_node, below, above};
    }
    if (req.add_edge) return AddEdge{req.add_edge->first, req.add_edge->second};
    throw PreconditionError("refine needs --add-node or --add-edge");
  }();
  Report r;
  auto plain = refine(p, request);
  if (auto* ok = std::get_if<Poset>(&plain)) {
    r.json = Json{{"graded_after_addition", true}, {"repaired", false},
                  {"removed_edges", Json::array()}, {"added_edges", Json::array()},
                  {"structure", structure_json(*ok)}};
    r.line("# addition keeps the structure graded");
    r.text += emit_structure(*ok);
    return r;
  }
  const auto& broken = std::get<NotGradedAfter>(plain);
  if (!req.repair) {
    r.exit_code = kExitNegative;
    r.json = Json{{"graded_after_addition", false},
                  {"chain_witness", Json::array({ids_json(broken.shortest), ids_json(broken.longest)})}};
    r.line("not graded after addition");
    r.line("shortest_chain " + spaced(broken.shortest));
    r.line("longest_chain " + spaced(broken.longest));
    return r;
  }
  const RepairResult fixed = repair(p, request, req.budget);
  r.json = Json{{"graded_after_addition", false}, {"repaired", true},
                {"removed_edges", relations_json(fixed.diff.removed_edges)},
                {"added_edges", relations_json(fixed.diff.added_edges)},
                {"structure", structure_json(fixed.poset)}};
  r.line("# addition broke gradedness; minimal repair:");
  diff_lines(r, fixed.diff);
  r.text += emit_structure(fixed.poset);
  return r;
}

inline Report cmd_contract_check(const Workspace& ws, const CommandRequest& req) {
  std::vector<AGProfile> profiles;
  if (req.profiles.empty()) {
    for (const auto& [name, prof] : ws.profiles) profiles.push_back(prof);
  } else {
    for (const auto& name : req.profiles) {
      auto it = ws.profiles.find(name);
      if (it == ws.profiles.end()) throw DanglingReference("no profile named '" + name + "'");
      profiles.push_back(it->second);
    }
  }
  const auto report = compatible(profiles);
  Report r;
  Json failures = Json::array();
  for (const auto& f : report.failures) {
    failures.push_back(Json{{"guarantor", f.guarantor}, {"assumer", f.assumer}});
    r.line("incompatible " + f.guarantor + " -> " + f.assumer);
  }
  r.json = Json{{"compatible", report.ok()}, {"incompatible", failures}};
  r.line(std::string("compatible ") + (report.ok() ? "true" : "false"));
  r.exit_code = report.ok() ? kExitOk : kExitNegative;
  return r;
}

inline const OracleTable& pick_table(const GameScenario& sc, const CommandRequest& req,
                                     const std::string& judged_agent, std::string& label) {
  if (req.source == OracleSource::Truth) {
    if (!sc.ground_truth()) throw IncompleteOracle("game '" + sc.name() + "' has no ground truth");
    label = "truth";
    return *sc.ground_truth();
  }
  const std::string& who = req.source == OracleSource::Belief ? req.belief_agent : judged_agent;
  sc.agent_index(who);
  auto it = sc.beliefs().find(who);
  if (it == sc.beliefs().end()) throw IncompleteOracle("agent '" + who + "' has no belief table");
  label = "belief:" + who;
  return it->second;
}

inline Report cmd_blame(const Workspace& ws, const CommandRequest& req) {
  const GameScenario& sc = ws.scenario(req.scenario);
  const JointProfile played = split_list(req.play);
  if (played.size() != sc.agents().size()) {
    throw PreconditionError("--play needs one action per agent");
  }
  Report r;
  Json verdicts = Json::array();
  bool any = false;
  for (std::size_t i = 0; i < sc.agents().size(); ++i) {
    const GameAgent& agent = sc.agents()[i];
    std::string label;
    const OracleTable& table = pick_table(sc, req, agent.id, label);
    std::map<std::string, PropertySet> available;
    for (const auto& action : sc.actions()[i]) {
      JointProfile alt = played;
      alt[i] = action;
      const PropertySet* satisfied = table.find(alt, agent.id);
      if (!satisfied) {
        throw IncompleteOracle(label + " has no entry for '" + agent.id + "' at (" +
                               profile_to_string(alt) + ")");
      }
      available[action] = *satisfied;
    }
    auto prof = ws.profiles.find(agent.id);
    AGProfile profile = prof != ws.profiles.end() && prof->second.guarantee() == agent.guarantee
                            ? prof->second
                            : AGProfile(agent.id, AssumptionConstraint::road_default(), agent.guarantee);
    const BlameVerdict v = assign_blame(profile, agent.partition, available, played[i]);
    any |= v.blameworthy;
    Json entry{{"agent", v.agent_id}, {"oracle", label}, {"blameworthy", v.blameworthy},
               {"chosen_action", v.chosen_action}, {"chosen_vector", vector_json(v.chosen_vector)}};
    std::string line = "agent " + v.agent_id + " chose " + v.chosen_action + " " +
                       v.chosen_vector.to_string();
    if (v.blameworthy) {
      entry["dominating_action"] = *v.dominating_action;
      entry["dominating_vector"] = vector_json(*v.dominating_vector);
      line += " blameworthy: " + *v.dominating_action + " " + v.dominating_vector->to_string() +
              " was available";
    } else {
      line += " not blameworthy";
    }
    verdicts.push_back(entry);
    r.line(line + " (" + label + ")");
  }
  r.json = Json{{"game", sc.name()}, {"play", played}, {"verdicts", verdicts}};
  r.exit_code = any ? kExitNegative : kExitOk;
  return r;
}

inline void solve_one(Report& r, Json& out, const GameScenario& sc, const PayoffMatrix& pm,
                      const std::string& label, bool decimal) {
  Json cells = Json::array();
  r.line("payoffs (" + label + ")");
  for (const auto& profile : pm.profiles()) {
    const auto& payoff = pm.at(profile);
    Json entry{{"profile", profile}};
    Json vectors = Json::object();
    std::string line = "  (" + profile_to_string(profile) + ")";
    for (std::size_t i = 0; i < payoff.size(); ++i) {
      const auto& rp = sc.agents()[i].partition;
      Json v{{"vector", vector_json(payoff[i])}};
      if (decimal) v["decimal"] = w_decimal(rp, payoff[i]);
      vectors[sc.agents()[i].id] = v;
      line += " " + sc.agents()[i].id + "=" + vector_text(rp, payoff[i], decimal);
    }
    entry["payoffs"] = vectors;
    cells.push_back(entry);
    r.line(line);
  }
  const auto nash = pure_nash(pm);
  const auto pareto = pareto_efficient(pm);
  auto list = [](const std::vector<JointProfile>& ps) {
    std::string s;
    for (const auto& p : ps) s += " (" + profile_to_string(p) + ")";
    return s;
  };
  r.line("nash" + list(nash));
  r.line("pareto" + list(pareto));
  out = Json{{"oracle", label}, {"payoffs", cells}, {"nash", nash}, {"pareto", pareto}};
}

inline Report cmd_game_solve(const Workspace& ws, const CommandRequest& req) {
  const GameScenario& sc = ws.scenario(req.scenario);
  Report r;
  Json solutions = Json::array();
  decimal_note(r, req.decimal);
  if (req.source == OracleSource::Truth) {
    if (!sc.ground_truth()) throw IncompleteOracle("game '" + sc.name() + "' has no ground truth");
    Json j;
    solve_one(r, j, sc, payoffs_from_table(sc, *sc.ground_truth(), "ground truth"), "truth", req.decimal);
    solutions.push_back(j);
  } else if (req.source == OracleSource::Belief) {
    Json j;
    solve_one(r, j, sc, build_payoffs(sc, req.belief_agent), "belief:" + req.belief_agent, req.decimal);
    solutions.push_back(j);
  } else {
    for (const auto& agent : sc.agents()) {
      if (!sc.beliefs().count(agent.id)) continue;
      Json j;
      solve_one(r, j, sc, build_payoffs(sc, agent.id), "belief:" + agent.id, req.decimal);
      solutions.push_back(j);
    }
    if (solutions.empty()) throw IncompleteOracle("game '" + sc.name() + "' has no belief tables");
  }
  r.json = Json{{"game", sc.name()}, {"solutions", solutions}};
  return r;
}

inline Report cmd_game_divergent(const Workspace& ws, const CommandRequest& req) {
  const GameScenario& sc = ws.scenario(req.scenario);
  Report r;
  DivergenceOutcome outcome;
  try {
    outcome = resolve_divergent(sc, req.selection);
  } catch (const AmbiguousEquilibria& e) {
    r.exit_code = kExitNegative;
    r.json = Json{{"game", sc.name()}, {"resolved", false}, {"reason", "ambiguous"}, {"message", e.what()}};
    r.line(std::string("unresolved: ") + e.what());
    return r;
  } catch (const NoPureEquilibrium& e) {
    r.exit_code = kExitNegative;
    r.json = Json{{"game", sc.name()}, {"resolved", false}, {"reason", "no-equilibrium"}, {"message", e.what()}};
    r.line(std::string("unresolved: ") + e.what());
    return r;
  }
  Json chosen = Json::object();
  for (const auto& agent : sc.agents()) {
    chosen[agent.id] = outcome.chosen_actions.at(agent.id);
    std::string eq;
    for (const auto& e : outcome.belief_equilibria.at(agent.id)) eq += " (" + profile_to_string(e) + ")";
    r.line("agent " + agent.id + " plays " + outcome.chosen_actions.at(agent.id) +
           " (its belief's equilibria:" + eq + ")");
  }
  r.line("realized (" + profile_to_string(outcome.realized) + ")");
  Json conflict{{"ground_truth", outcome.report.has_ground_truth},
                {"conflict", outcome.report.conflict()},
                {"flagged_agents", outcome.report.flagged_agents}};
  if (outcome.report.has_ground_truth) {
    Json vectors = Json::object();
    std::string line = "ground truth";
    for (std::size_t i = 0; i < sc.agents().size(); ++i) {
      vectors[sc.agents()[i].id] = vector_json(outcome.report.realized_vectors[i]);
      line += " " + sc.agents()[i].id + "=" + outcome.report.realized_vectors[i].to_string();
    }
    conflict["realized_vectors"] = vectors;
    r.line(line);
    if (outcome.report.conflict()) {
      std::string who;
      for (const auto& a : outcome.report.flagged_agents) who += " " + a;
      r.line("conflict: top-rank property violated for" + who);
    } else {
      r.line("no conflict");
    }
  } else {
    r.line("no ground truth; conflict not assessed");
  }
  r.json = Json{{"game", sc.name()}, {"resolved", true}, {"chosen", chosen},
                {"realized", outcome.realized}, {"report", conflict}};
  r.exit_code = outcome.report.conflict() ? kExitNegative : kExitOk;
  return r;
}

inline Report cmd_verify_evaluator(const Workspace& ws, const CommandRequest& req) {
  const Poset& p = ws.structure(req.structure);
  if (req.table_file.empty()) throw PreconditionError("verify-evaluator needs --table");
  const auto table = parse_evaluator_table(read_file(req.table_file), p, req.table_file);
  Report r;
  const auto v = verify_consistent_evaluator(p, table);
  if (!v) {
    r.json = Json{{"structure", p.name()}, {"consistent", true}};
    r.line("consistent evaluator");
    return r;
  }
  Json subsets = Json::array();
  for (const auto& s : v->subsets) subsets.push_back(ids_json(s));
  r.json = Json{{"structure", p.name()}, {"consistent", false}, {"requirement", v->requirement},
                {"subsets", subsets}, {"elements", ids_json(v->elements)}, {"detail", v->detail}};
  r.line("violation of requirement " + std::to_string(v->requirement) + ": " + v->detail);
  r.exit_code = kExitNegative;
  return r;
}

inline Report cmd_emit(const Workspace& ws, const CommandRequest& req) {
  const Poset& p = ws.structure(req.structure);
  Report r;
  r.json = Json{{"structure", structure_json(p)}};
  r.text = emit_structure(p);
  return r;
}

}  // namespace detail

inline CommandOutcome run_command(const Workspace& ws, const CommandRequest& req) {
  detail::Report report;
  try {
    const std::string& c = req.name;
    if (c == "check") report = detail::cmd_check(ws, req);
    else if (c == "rank") report = detail::cmd_rank(ws, req);
    else if (c == "order") report = detail::cmd_order(ws, req);
    else if (c == "eval") report = detail::cmd_eval(ws, req);
    else if (c == "compare") report = detail::cmd_compare(ws, req);
    else if (c == "canonicalize") report = detail::cmd_canonicalize(ws, req);
    else if (c == "refine") report = detail::cmd_refine(ws, req);
    else if (c == "contract-check") report = detail::cmd_contract_check(ws, req);
    else if (c == "blame") report = detail::cmd_blame(ws, req);
    else if (c == "game-solve") report = detail::cmd_game_solve(ws, req);
    else if (c == "game-divergent") report = detail::cmd_game_divergent(ws, req);
    else if (c == "verify-evaluator") report = detail::cmd_verify_evaluator(ws, req);
    else if (c == "emit") report = detail::cmd_emit(ws, req);
    else throw PreconditionError("unknown command '" + c + "'");
  } catch (const Error& e) {
    CommandOutcome out{kExitInputError, {}};
    if (req.json) {
      out.output = detail::Json{{"error", e.what()}}.dump(2) + "\n";
    } else {
      out.output = std::string("error: ") + e.what() + "\n";
    }
    return out;
  }
  return {report.exit_code, req.json ? report.json.dump(2) + "\n" : report.text};
}

}  // namespace specstruct
