// specstruct: command-line front end over the specstruct headers.
//
//   specstruct check --structure road6 data/road6.structure
//   specstruct compare --structure road6 --set S,ND,FE --set S,Cf,C data/road6.structure
//   specstruct game-solve --game game1 data/game1.scenario data/game_structures.structure

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "specstruct/commands.hpp"
#include "specstruct/text_format.hpp"

namespace {

using specstruct::CommandRequest;

struct Inputs {
  std::vector<std::string> files;
};

void add_files(CLI::App* sub, Inputs& in) {
  sub->add_option("files", in.files, "structure, profile and scenario files")->required();
}

void add_output(CLI::App* sub, CommandRequest& req) {
  sub->add_flag("--json", req.json, "structured output");
}

void add_structure(CLI::App* sub, CommandRequest& req) {
  sub->add_option("-s,--structure", req.structure, "structure name")->required();
}

void add_game(CLI::App* sub, CommandRequest& req) {
  sub->add_option("-g,--game", req.scenario, "game name")->required();
}

void add_oracle(CLI::App* sub, std::string& belief, bool& truth) {
  sub->add_option("--belief", belief, "use this agent's belief table");
  sub->add_flag("--truth", truth, "use the ground-truth table");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Specification structures: ranking, refinement, contracts and games"};
  app.require_subcommand(1);

  CommandRequest req;
  Inputs in;
  std::string belief;
  bool truth = false;
  bool no_repair = false;
  std::vector<std::string> edge;
  std::string select = "refuse";

  auto* check = app.add_subcommand("check", "gradedness and evaluability verdicts");
  auto* rank = app.add_subcommand("rank", "rank table of a consistently evaluable structure");
  auto* order = app.add_subcommand("order", "powerset equivalence classes, ascending");
  auto* eval = app.add_subcommand("eval", "W vectors of property sets");
  auto* compare = app.add_subcommand("compare", "compare two property sets");
  auto* canon = app.add_subcommand("canonicalize", "drop covers that skip a rank");
  auto* refine = app.add_subcommand("refine", "add a property or comparison");
  auto* contract = app.add_subcommand("contract-check", "assume-guarantee compatibility");
  auto* blame = app.add_subcommand("blame", "blame verdicts for a joint play");
  auto* solve = app.add_subcommand("game-solve", "payoffs, pure Nash and Pareto sets");
  auto* divergent = app.add_subcommand("game-divergent", "play under each agent's own belief");
  auto* verify = app.add_subcommand("verify-evaluator", "check a scored table against the evaluator rules");
  auto* emit = app.add_subcommand("emit", "print a structure in normal form");

  for (auto* sub : {check, rank, order, eval, compare, canon, refine, contract, blame, solve,
                    divergent, verify, emit}) {
    add_files(sub, in);
    add_output(sub, req);
  }
  for (auto* sub : {check, rank, order, eval, compare, canon, refine, verify, emit}) {
    add_structure(sub, req);
  }
  for (auto* sub : {blame, solve, divergent}) add_game(sub, req);
  for (auto* sub : {order, eval, compare, solve}) {
    sub->add_flag("--decimal", req.decimal, "also show a mixed-radix number per vector");
  }

  order->add_option("--max", req.order_bound, "largest structure to enumerate")
      ->default_val(specstruct::kDefaultPowersetBound);
  eval->add_option("--set", req.sets, "comma-separated properties; 'empty' for none")->required();
  compare->add_option("--set", req.sets, "comma-separated properties; 'empty' for none")
      ->required()
      ->expected(2);

  auto* node_opt = refine->add_option("--add-node", req.add_node, "new property id");
  refine->add_option("--below", req.below, "properties under the new one")->needs(node_opt);
  refine->add_option("--above", req.above, "properties over the new one")->needs(node_opt);
  refine->add_option("--add-edge", edge, "lower upper")->expected(2)->excludes(node_opt);
  refine->add_flag("--no-repair", no_repair, "report instead of repairing");
  refine->add_option("--budget", req.budget, "largest edit count to search");

  contract->add_option("--profile", req.profiles, "profiles to check (default: all)");

  blame->add_option("--play", req.play, "joint profile, e.g. Move,Stay")->required();
  add_oracle(blame, belief, truth);
  add_oracle(solve, belief, truth);

  const std::map<std::string, specstruct::SelectionRule> rules = {
      {"refuse", specstruct::SelectionRule::Refuse},
      {"risk-averse", specstruct::SelectionRule::RiskAverse},
      {"index-order", specstruct::SelectionRule::IndexOrder}};
  divergent->add_option("--select", select, "equilibrium selection")
      ->check(CLI::IsMember({"refuse", "risk-averse", "index-order"}));

  verify->add_option("--table", req.table_file, "evaluator table file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : specstruct::kExitInputError;
  }

  req.name = app.get_subcommands().front()->get_name();
  if (edge.size() == 2) req.add_edge = std::make_pair(edge[0], edge[1]);
  req.repair = !no_repair;
  req.selection = rules.at(select);
  if (truth && !belief.empty()) {
    std::cerr << "error: --belief and --truth are exclusive\n";
    return specstruct::kExitInputError;
  }
  if (truth) {
    req.source = specstruct::OracleSource::Truth;
  } else if (!belief.empty()) {
    req.source = specstruct::OracleSource::Belief;
    req.belief_agent = belief;
  }

  specstruct::Workspace ws;
  try {
    std::vector<std::filesystem::path> paths(in.files.begin(), in.files.end());
    ws = specstruct::parse_files(paths);
  } catch (const specstruct::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return specstruct::kExitInputError;
  }

  const auto outcome = specstruct::run_command(ws, req);
  (outcome.exit_code == specstruct::kExitInputError ? std::cerr : std::cout) << outcome.output;
  return outcome.exit_code;
}
