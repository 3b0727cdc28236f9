#pragma once

// Line-oriented text formats for structures, profiles, game scenarios and
// evaluator tables. One directive per line; '#' starts a comment.
//
//   structure <name>            profile <agent>
//   prop <id>                   guarantee <structure>
//   rel <lower> <upper>         assume require|top <prop>
//                               assume order <lower> <upper>
//
//   game <name>
//   agent <id> structure <name>
//   actions <id> <a1> <a2> ...
//   belief <observer> <a1,a2> <agent> <p1,p2,...|none>
//   truth <a1,a2> <agent> <p1,p2,...|none>
//
//   eval <score> <p1,p2,...|empty>
//
// Files are parsed block by block, then cross-references are linked once all
// files are read, so a scenario may name a structure from another file.

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "specstruct/contracts.hpp"
#include "specstruct/errors.hpp"
#include "specstruct/evaluator.hpp"
#include "specstruct/game.hpp"
#include "specstruct/poset.hpp"

namespace specstruct {

struct Workspace {
  std::map<std::string, Poset> structures;
  std::map<std::string, AGProfile> profiles;
  std::map<std::string, GameScenario> scenarios;

  const Poset& structure(const std::string& name) const {
    auto it = structures.find(name);
    if (it == structures.end()) throw DanglingReference("no structure named '" + name + "'");
    return it->second;
  }
  const GameScenario& scenario(const std::string& name) const {
    auto it = scenarios.find(name);
    if (it == scenarios.end()) throw DanglingReference("no game named '" + name + "'");
    return it->second;
  }
};

/// In-memory source text, for callers that do not read from disk.
struct SourceText {
  std::string name;
  std::string text;
};

namespace detail {

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
};

inline std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::istringstream in{std::string(raw)};
    Line line{number, {}};
    for (std::string tok; in >> tok;) line.tokens.push_back(tok);
    if (!line.tokens.empty()) out.push_back(std::move(line));
    pos = end + 1;
  }
  return out;
}

inline std::vector<std::string> split_list(const std::string& token) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = token.find(',', start);
    out.push_back(token.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

struct Located {
  std::string file;
  std::size_t line;
};

struct RawStructure {
  Located at;
  std::string name;
  std::vector<std::pair<Located, std::string>> props;
  std::vector<std::pair<Located, Relation>> rels;
};

struct RawProfile {
  Located at;
  std::string agent;
  std::optional<std::pair<Located, std::string>> guarantee;
  std::vector<PropertyId> required;
  std::optional<PropertyId> top;
  std::vector<Relation> orders;
  bool any_assume = false;
};

struct RawOutcome {
  Located at;
  std::optional<std::string> observer;  // nullopt for ground truth
  std::vector<std::string> profile;
  std::string agent;
  std::vector<std::string> satisfied;
};

struct RawGame {
  Located at;
  std::string name;
  std::vector<std::pair<Located, std::pair<std::string, std::string>>> agents;
  std::map<std::string, std::pair<Located, std::vector<std::string>>> actions;
  std::vector<RawOutcome> outcomes;
};

struct RawWorkspace {
  std::vector<RawStructure> structures;
  std::vector<RawProfile> profiles;
  std::vector<RawGame> games;
};

[[noreturn]] inline void fail(const Located& at, const std::string& message) {
  throw ParseError(at.file, at.line, message);
}

inline void expect_arity(const Located& at, const Line& line, std::size_t n, const char* usage) {
  if (line.tokens.size() != n) fail(at, std::string("expected '") + usage + "'");
}

/// Converts identifier errors into located parse errors.
template <typename Fn>
auto located(const Located& at, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    fail(at, e.what());
  }
}

inline std::vector<std::string> parse_satisfied(const Located& at, const std::string& token) {
  if (token == "none") return {};
  auto items = split_list(token);
  for (const auto& item : items) located(at, [&] { return PropertyId(item); });
  return items;
}

inline void parse_source(const std::string& file, std::string_view text, RawWorkspace& ws) {
  enum class Block { None, Structure, Profile, Game } block = Block::None;
  for (const Line& line : tokenize(text)) {
    const Located at{file, line.number};
    const std::string& head = line.tokens[0];
    if (head == "structure") {
      expect_arity(at, line, 2, "structure <name>");
      ws.structures.push_back({at, line.tokens[1], {}, {}});
      block = Block::Structure;
    } else if (head == "profile") {
      expect_arity(at, line, 2, "profile <agent>");
      RawProfile p;
      p.at = at;
      p.agent = line.tokens[1];
      ws.profiles.push_back(std::move(p));
      block = Block::Profile;
    } else if (head == "game") {
      expect_arity(at, line, 2, "game <name>");
      RawGame g;
      g.at = at;
      g.name = line.tokens[1];
      ws.games.push_back(std::move(g));
      block = Block::Game;
    } else if (head == "prop" || head == "rel") {
      if (block != Block::Structure) fail(at, "'" + head + "' outside a structure block");
      auto& s = ws.structures.back();
      if (head == "prop") {
        expect_arity(at, line, 2, "prop <id>");
        located(at, [&] { return PropertyId(line.tokens[1]); });
        for (const auto& [where, existing] : s.props) {
          if (existing == line.tokens[1]) {
            fail(at, "duplicate prop '" + existing + "' (first declared on line " +
                         std::to_string(where.line) + ")");
          }
        }
        s.props.emplace_back(at, line.tokens[1]);
      } else {
        expect_arity(at, line, 3, "rel <lower> <upper>");
        s.rels.emplace_back(at, located(at, [&] {
                              return Relation{line.tokens[1], line.tokens[2]};
                            }));
      }
    } else if (head == "guarantee" || head == "assume") {
      if (block != Block::Profile) fail(at, "'" + head + "' outside a profile block");
      auto& p = ws.profiles.back();
      if (head == "guarantee") {
        expect_arity(at, line, 2, "guarantee <structure>");
        if (p.guarantee) fail(at, "profile '" + p.agent + "' already has a guarantee");
        p.guarantee = std::make_pair(at, line.tokens[1]);
      } else {
        if (line.tokens.size() < 2) fail(at, "expected 'assume require|top|order ...'");
        const std::string& kind = line.tokens[1];
        p.any_assume = true;
        if (kind == "require") {
          expect_arity(at, line, 3, "assume require <prop>");
          p.required.push_back(located(at, [&] { return PropertyId(line.tokens[2]); }));
        } else if (kind == "top") {
          expect_arity(at, line, 3, "assume top <prop>");
          if (p.top) fail(at, "profile '" + p.agent + "' already names a top property");
          p.top = located(at, [&] { return PropertyId(line.tokens[2]); });
        } else if (kind == "order") {
          expect_arity(at, line, 4, "assume order <lower> <upper>");
          p.orders.push_back(located(at, [&] { return Relation{line.tokens[2], line.tokens[3]}; }));
        } else {
          fail(at, "unknown assumption kind '" + kind + "'");
        }
      }
    } else if (head == "agent" || head == "actions" || head == "belief" || head == "truth") {
      if (block != Block::Game) fail(at, "'" + head + "' outside a game block");
      auto& g = ws.games.back();
      if (head == "agent") {
        if (line.tokens.size() != 4 || line.tokens[2] != "structure") {
          fail(at, "expected 'agent <id> structure <name>'");
        }
        for (const auto& [where, entry] : g.agents) {
          if (entry.first == line.tokens[1]) fail(at, "duplicate agent '" + entry.first + "'");
        }
        g.agents.emplace_back(at, std::make_pair(line.tokens[1], line.tokens[3]));
      } else if (head == "actions") {
        if (line.tokens.size() < 3) fail(at, "expected 'actions <agent> <a1> <a2> ...'");
        std::vector<std::string> list(line.tokens.begin() + 2, line.tokens.end());
        for (std::size_t i = 0; i < list.size(); ++i) {
          for (std::size_t j = 0; j < i; ++j) {
            if (list[i] == list[j]) fail(at, "duplicate action '" + list[i] + "'");
          }
          if (list[i].find(',') != std::string::npos) fail(at, "action names may not contain ','");
        }
        if (!g.actions.emplace(line.tokens[1], std::make_pair(at, list)).second) {
          fail(at, "actions for '" + line.tokens[1] + "' already listed");
        }
      } else {
        const bool truth = head == "truth";
        const std::size_t arity = truth ? 4 : 5;
        if (line.tokens.size() != arity) {
          fail(at, truth ? "expected 'truth <a1,a2> <agent> <p1,p2|none>'"
                         : "expected 'belief <observer> <a1,a2> <agent> <p1,p2|none>'");
        }
        const std::size_t base = truth ? 1 : 2;
        RawOutcome o;
        o.at = at;
        if (!truth) o.observer = line.tokens[1];
        o.profile = split_list(line.tokens[base]);
        o.agent = line.tokens[base + 1];
        o.satisfied = parse_satisfied(at, line.tokens[base + 2]);
        g.outcomes.push_back(std::move(o));
      }
    } else {
      fail(at, "unknown directive '" + head + "'");
    }
  }
}

inline Poset link_structure(const RawStructure& raw) {
  if (raw.props.empty()) fail(raw.at, "structure '" + raw.name + "' has no properties");
  std::vector<PropertyId> elements;
  for (const auto& [at, id] : raw.props) elements.emplace_back(id);
  std::sort(elements.begin(), elements.end());
  auto known = [&](const PropertyId& id) {
    return std::binary_search(elements.begin(), elements.end(), id);
  };
  std::vector<Relation> relations;
  for (const auto& [at, rel] : raw.rels) {
    for (const auto* id : {&rel.lower, &rel.upper}) {
      if (!known(*id)) {
        fail(at, "rel names '" + id->str() + "', which is not a prop of '" + raw.name + "'");
      }
    }
    relations.push_back(rel);
  }
  return located(raw.at, [&] { return build_poset(elements, relations, raw.name); });
}

inline std::string where(const Located& at) { return at.file + ":" + std::to_string(at.line) + ": "; }

inline Workspace link(const RawWorkspace& raw) {
  Workspace ws;
  for (const auto& s : raw.structures) {
    if (ws.structures.count(s.name)) fail(s.at, "duplicate structure '" + s.name + "'");
    ws.structures.emplace(s.name, link_structure(s));
  }

  for (const auto& p : raw.profiles) {
    if (ws.profiles.count(p.agent)) fail(p.at, "duplicate profile '" + p.agent + "'");
    if (!p.guarantee) fail(p.at, "profile '" + p.agent + "' has no guarantee");
    const auto& [gat, gname] = *p.guarantee;
    auto it = ws.structures.find(gname);
    if (it == ws.structures.end()) {
      throw DanglingReference(where(gat) + "profile '" + p.agent +
                              "' guarantees undefined structure '" + gname + "'");
    }
    AssumptionConstraint assumptions =
        p.any_assume ? AssumptionConstraint(p.required, p.top.value_or(PropertyId("safety")), p.orders)
                     : AssumptionConstraint::road_default();
    ws.profiles.emplace(p.agent, located(gat, [&] {
                          return AGProfile(p.agent, std::move(assumptions), it->second);
                        }));
  }

  for (const auto& g : raw.games) {
    if (ws.scenarios.count(g.name)) fail(g.at, "duplicate game '" + g.name + "'");
    if (g.agents.size() != 2) fail(g.at, "game '" + g.name + "' must declare exactly two agents");
    std::vector<GameAgent> agents;
    std::vector<std::vector<std::string>> actions;
    for (const auto& [at, entry] : g.agents) {
      const auto& [id, sname] = entry;
      auto it = ws.structures.find(sname);
      if (it == ws.structures.end()) {
        throw DanglingReference(where(at) + "agent '" + id + "' uses undefined structure '" +
                                sname + "'");
      }
      RankPartition rp = located(at, [&] { return require_rank_partition(it->second); });
      agents.push_back({id, it->second, std::move(rp)});
      auto acts = g.actions.find(id);
      if (acts == g.actions.end()) fail(at, "agent '" + id + "' has no 'actions' line");
      actions.push_back(acts->second.second);
    }
    for (const auto& [id, entry] : g.actions) {
      bool declared = false;
      for (const auto& a : agents) declared |= a.id == id;
      if (!declared) fail(entry.first, "actions for undeclared agent '" + id + "'");
    }

    GameScenario sc(g.name, std::move(agents), std::move(actions));
    std::map<std::string, OracleTable> beliefs;
    std::optional<OracleTable> truth;
    for (const auto& o : g.outcomes) {
      if (o.profile.size() != sc.agents().size()) {
        fail(o.at, "profile '" + profile_to_string(o.profile) + "' needs one action per agent");
      }
      for (std::size_t i = 0; i < o.profile.size(); ++i) {
        if (!sc.action_index(i, o.profile[i])) {
          fail(o.at, "'" + o.profile[i] + "' is not an action of agent '" + sc.agents()[i].id + "'");
        }
      }
      std::size_t agent = 0;
      located(o.at, [&] {
        agent = sc.agent_index(o.agent);
        if (o.observer) sc.agent_index(*o.observer);
        return 0;
      });
      PropertySet satisfied;
      for (const auto& id : o.satisfied) {
        if (!sc.agents()[agent].guarantee.contains(id)) {
          fail(o.at, "'" + id + "' is not a property of agent '" + o.agent + "'");
        }
        satisfied.emplace_back(id);
      }
      OracleTable& table = o.observer ? beliefs[*o.observer] : (truth ? *truth : truth.emplace());
      if (table.find(o.profile, o.agent)) {
        fail(o.at, "duplicate outcome for agent '" + o.agent + "' at (" +
                       profile_to_string(o.profile) + ")");
      }
      table.set(o.profile, o.agent, std::move(satisfied));
    }
    for (auto& [observer, table] : beliefs) sc.set_belief(observer, std::move(table));
    if (truth) sc.set_ground_truth(std::move(*truth));
    ws.scenarios.emplace(g.name, std::move(sc));
  }
  return ws;
}

}  // namespace detail

inline Workspace parse_sources(const std::vector<SourceText>& sources) {
  detail::RawWorkspace raw;
  for (const auto& s : sources) detail::parse_source(s.name, s.text, raw);
  return detail::link(raw);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Workspace parse_files(const std::vector<std::filesystem::path>& paths) {
  std::vector<SourceText> sources;
  for (const auto& p : paths) sources.push_back({p.string(), read_file(p)});
  return parse_sources(sources);
}

/// Structure text with sorted props and cover relations; parses back to an
/// equal poset.
inline std::string emit_structure(const Poset& p) {
  std::string out = "structure " + (p.name().empty() ? std::string("unnamed") : p.name()) + "\n";
  for (const auto& id : p.elements()) out += "prop " + id.str() + "\n";
  for (const auto& r : p.covers()) out += "rel " + r.lower.str() + " " + r.upper.str() + "\n";
  return out;
}

/// Reads `eval <score> <subset|empty>` lines into a table over `p`.
inline EvaluatorTable parse_evaluator_table(std::string_view text, const Poset& p,
                                            const std::string& file = "<table>") {
  EvaluatorTable table(p);
  for (const auto& line : detail::tokenize(text)) {
    const detail::Located at{file, line.number};
    if (line.tokens[0] != "eval") detail::fail(at, "unknown directive '" + line.tokens[0] + "'");
    detail::expect_arity(at, line, 3, "eval <score> <p1,p2,...|empty>");
    const std::string& score_text = line.tokens[1];
    double score = 0;
    auto [ptr, ec] = std::from_chars(score_text.data(), score_text.data() + score_text.size(), score);
    if (ec != std::errc{} || ptr != score_text.data() + score_text.size()) {
      detail::fail(at, "score '" + score_text + "' is not a number");
    }
    Mask subset = 0;
    if (line.tokens[2] != "empty") {
      for (const auto& id : detail::split_list(line.tokens[2])) {
        auto index = detail::located(at, [&] { return p.index_of(PropertyId(id)); });
        if (!index) detail::fail(at, "'" + id + "' is not a property of the structure");
        if (subset & bit(*index)) detail::fail(at, "'" + id + "' listed twice");
        subset |= bit(*index);
      }
    }
    if (table.has(subset)) detail::fail(at, "duplicate entry for " + detail::describe(p, subset));
    table.set(subset, score);
  }
  return table;
}

/// Inverse of parse_evaluator_table.
inline std::string emit_evaluator_table(const EvaluatorTable& table) {
  std::string out;
  const Poset& p = table.poset();
  for (Mask m = 0; m <= p.all(); ++m) {
    if (!table.has(m)) continue;
    std::ostringstream score;
    score << table.at(m);
    std::string subset;
    for (const auto& id : p.set_of(m)) subset += (subset.empty() ? "" : ",") + id.str();
    out += "eval " + score.str() + " " + (subset.empty() ? "empty" : subset) + "\n";
  }
  return out;
}

}  // namespace specstruct
