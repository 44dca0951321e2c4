// ltlpm: command-line front end. Verdicts go to stdout, diagnostics to stderr.
//
// Exit codes: 0 ok, 2 syntax or usage error, 3 bad model or profile,
// 4 capacity exceeded, 5 unsupported construct, 1 anything else.

#include <cstddef>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "ltlpm/ltlpm.hpp"

namespace {

using nlohmann::json;

struct Options {
  std::size_t m = 1;
  bool json_out = false;
  std::string model_path;
  std::size_t pos = 0;
  std::string mode = "bounded";
  std::size_t depth = 2;
  std::size_t letters = 1;
  std::size_t node_budget = ltlpm::kDefaultNodeBudget;
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ltlpm::InvalidModel(path, "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ltlpm::InvalidModel(path, std::string("not valid JSON: ") + e.what());
  }
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

json truth_json(const ltlpm::TruthVector& tv) {
  return {{"offset", tv.offset}, {"prefix", tv.prefix_truth}, {"loop", tv.loop_truth}};
}

json witness_or_null(const std::optional<ltlpm::LassoWitness>& w) {
  return w ? ltlpm::to_json(*w) : json(nullptr);
}

int cmd_eval(const Options& o, const std::string& text) {
  const auto f = ltlpm::parse_formula(text);
  const auto model = ltlpm::model_from_json(read_json(o.model_path));
  const auto mode = o.mode == "unbounded" ? ltlpm::SinceMode::Unbounded : ltlpm::SinceMode::Bounded;
  const auto tv = ltlpm::truth_vector(model, f, mode);
  const bool value = tv.at(o.pos);
  if (o.json_out)
    print({{"formula", ltlpm::render(f)}, {"position", o.pos}, {"mode", o.mode}, {"value", value},
           {"truth_vector", truth_json(tv)}});
  else
    std::cout << (value ? "true" : "false") << "\n";
  return 0;
}

int cmd_sat(const Options& o, const std::string& text) {
  const auto f = ltlpm::parse_formula(text);
  const auto w = ltlpm::satisfiable(f, o.m, o.node_budget);
  if (o.json_out) {
    print({{"formula", ltlpm::render(f)}, {"m", o.m}, {"satisfiable", w.has_value()}, {"witness", witness_or_null(w)}});
  } else if (w) {
    std::cout << "SAT\n";
    print(ltlpm::to_json(*w));
  } else {
    std::cout << "UNSAT\n";
  }
  return 0;
}

int cmd_theorem(const Options& o, const std::string& text) {
  const auto f = ltlpm::parse_formula(text);
  const auto r = ltlpm::is_theorem(f, o.m, o.node_budget);
  if (o.json_out) {
    print({{"formula", ltlpm::render(f)}, {"m", o.m}, {"theorem", r.theorem},
           {"countermodel", witness_or_null(r.countermodel)}});
  } else {
    std::cout << (r.theorem ? "true" : "false") << "\n";
    if (r.countermodel) print(ltlpm::to_json(*r.countermodel));
  }
  return 0;
}

int cmd_rnf(const Options& o, const std::string& text) {
  const auto nf = ltlpm::rnf_transform(ltlpm::parse_rule(text));
  if (o.json_out) {
    print(ltlpm::to_json(nf));
    return 0;
  }
  std::cout << "variables:";
  for (const auto& v : nf.variables()) std::cout << " " << v;
  std::cout << "\nconclusion: " << nf.conclusion() << "\ndisjuncts: " << nf.disjunct_count() << "\n";
  if (nf.free_count() > 0) std::cout << "unconstrained since atoms: " << nf.free_count() << "\n";
  const auto rule = ltlpm::rnf_to_rule(nf);
  std::cout << ltlpm::render(rule) << "\n";
  return 0;
}

int cmd_rule_valid(const Options& o, const std::string& text) {
  const auto r = ltlpm::parse_rule(text);
  const auto w = ltlpm::frame_valid_rule(r, o.m, o.node_budget);
  if (o.json_out) {
    print({{"rule", ltlpm::render(r)}, {"m", o.m}, {"valid", !w}, {"countermodel", witness_or_null(w)}});
  } else {
    std::cout << (w ? "invalid" : "valid") << "\n";
    if (w) print(ltlpm::to_json(*w));
  }
  return 0;
}

int cmd_admissible(const Options& o, const std::string& text) {
  const auto r = ltlpm::parse_rule(text);
  const ltlpm::SearchBudget b{o.depth, o.letters, o.m, o.node_budget};
  const auto v = ltlpm::admissible_status(r, b);
  const json j = ltlpm::to_json(v);
  if (o.json_out) {
    print(j);
    return 0;
  }
  std::cout << j["verdict"].get<std::string>();
  if (v.certificate) std::cout << " (" << j["certificate"]["kind"].get<std::string>() << ")";
  if (v.witness) std::cout << " " << ltlpm::render(*v.witness);
  std::cout << "\n";
  print(j);
  return 0;
}

int cmd_know(const Options& o, const std::string& submode, const std::vector<std::string>& args) {
  const auto profile = ltlpm::profile_from_json(read_json(o.model_path));
  auto need = [&](std::size_t n) {
    if (args.size() != n)
      throw CLI::ValidationError("know " + submode, "expects " + std::to_string(n) + " formula argument(s)");
  };
  if (submode == "vote") {
    need(0);
    print(ltlpm::to_json(ltlpm::vote_model(profile)));
    return 0;
  }
  bool value = false;
  json j{{"position", o.pos}};
  if (submode == "voted-eval") {
    need(1);
    const auto f = ltlpm::parse_formula(args[0]);
    value = ltlpm::eval_voted_knowledge(profile, f, o.pos);
    j["formula"] = ltlpm::render(f);
  } else {
    need(2);
    const auto psi = ltlpm::parse_formula(args[0]);
    const auto phi = ltlpm::parse_formula(args[1]);
    value = ltlpm::eval_shared_knowledge(profile, psi, phi, o.pos);
    j["psi"] = ltlpm::render(psi);
    j["phi"] = ltlpm::render(phi);
  }
  j["value"] = value;
  if (o.json_out)
    print(j);
  else
    std::cout << (value ? "true" : "false") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded-Since past temporal logic toolkit", "ltlpm"};
  app.require_subcommand(1);
  Options o;
  std::string text, submode;
  std::vector<std::string> know_args;

  auto add_json = [&](CLI::App* s) { s->add_flag("--json", o.json_out, "Emit one JSON document"); };
  auto add_m = [&](CLI::App* s) {
    s->add_option("--m", o.m, "Since window width")->check(CLI::PositiveNumber);
    s->add_option("--node-budget", o.node_budget, "Window graph node limit")->check(CLI::PositiveNumber);
  };

  auto* eval = app.add_subcommand("eval", "Evaluate a formula on a model");
  eval->add_option("formula", text, "Formula")->required();
  eval->add_option("--model", o.model_path, "Model JSON file")->required();
  eval->add_option("--pos", o.pos, "State");
  eval->add_option("--mode", o.mode, "bounded or unbounded")->check(CLI::IsMember({"bounded", "unbounded"}));
  add_json(eval);

  auto* sat = app.add_subcommand("sat", "Decide satisfiability");
  sat->add_option("formula", text, "Formula")->required();
  add_m(sat);
  add_json(sat);

  auto* theorem = app.add_subcommand("theorem", "Decide theoremhood");
  theorem->add_option("formula", text, "Formula")->required();
  add_m(theorem);
  add_json(theorem);

  auto* rnf = app.add_subcommand("rnf", "Reduced normal form of a rule");
  rnf->add_option("rule", text, "Rule")->required();
  add_json(rnf);

  auto* valid = app.add_subcommand("rule-valid", "Decide frame validity of a rule");
  valid->add_option("rule", text, "Rule")->required();
  add_m(valid);
  add_json(valid);

  auto* adm = app.add_subcommand("admissible", "Classify a rule for admissibility");
  adm->add_option("rule", text, "Rule")->required();
  add_m(adm);
  adm->add_option("--depth", o.depth, "Substitution formula depth");
  adm->add_option("--letters", o.letters, "Fresh letters in substitutions");
  add_json(adm);

  auto* know = app.add_subcommand("know", "Multi-agent knowledge");
  know->add_option("submode", submode, "vote, voted-eval or shared")
      ->required()
      ->check(CLI::IsMember({"vote", "voted-eval", "shared"}));
  know->add_option("formulas", know_args, "FORMULA for voted-eval; PSI PHI for shared");
  know->add_option("--model,--profile", o.model_path, "Profile JSON file")->required();
  know->add_option("--pos", o.pos, "State");
  add_json(know);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*eval) return cmd_eval(o, text);
    if (*sat) return cmd_sat(o, text);
    if (*theorem) return cmd_theorem(o, text);
    if (*rnf) return cmd_rnf(o, text);
    if (*valid) return cmd_rule_valid(o, text);
    if (*adm) return cmd_admissible(o, text);
    if (*know) return cmd_know(o, submode, know_args);
  } catch (const ltlpm::SyntaxError& e) {
    std::cerr << "syntax error: " << e.what() << "\n";
    return 2;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ltlpm::InvalidModel& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 3;
  } catch (const ltlpm::UnknownAtom& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 3;
  } catch (const ltlpm::IncompatibleAgents& e) {
    std::cerr << "invalid profile: " << e.what() << "\n";
    return 3;
  } catch (const ltlpm::CapacityExceeded& e) {
    std::cerr << "capacity exceeded: " << e.what() << "\n";
    return 4;
  } catch (const ltlpm::NestedKnowledgeUnsupported& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
