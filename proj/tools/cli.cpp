#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "ciel/decide.hpp"
#include "ciel/errors.hpp"
#include "ciel/formula.hpp"
#include "ciel/mucalc.hpp"
#include "ciel/proofs.hpp"
#include "ciel/scenarios.hpp"
#include "ciel/semantics.hpp"
#include "ciel/translate.hpp"

namespace ciel::cli {

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;
constexpr int kResource = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelError("cannot write '" + path + "'");
  out << content;
}

// Formulas are accepted inline or, with a leading '@', from a file.
std::string formula_text(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') return read_file(arg.substr(1));
  return arg;
}

AgentTheory theory_from_flag(const std::string& path) {
  if (path.empty()) return {};
  return parse_theory(read_file(path));
}

struct Options {
  std::string formula;
  std::string theory_file;
  std::string model_file;
  std::string world;
  std::string witness_file;
  std::string dot_file;
  std::string mode;        // translate direction
  std::string proof_file;
  bool strict = false;
  bool drop_uncertainty = false;
  bool emit_formulas = false;
  bool check_inference = false;
  std::string emit_model;
  std::size_t cap_closure = 0;
  std::size_t cap_types = 0;
  std::size_t rows = 1, cols = 2, round = 1;
  std::string counters;
};

DecideCaps caps_from(const Options& opt) {
  DecideCaps caps;
  if (opt.cap_closure) {
    caps.sigma = opt.cap_closure;
    caps.closure = std::max(caps.closure, opt.cap_closure);
  }
  if (opt.cap_types) caps.types = opt.cap_types;
  return caps;
}

void maybe_emit_dot(const Options& opt, const CielModel& m) {
  if (!opt.dot_file.empty()) write_file(opt.dot_file, to_dot(m));
}

int cmd_parse(const Options& opt, const std::string& flavor, std::ostream& out) {
  std::string text = formula_text(opt.formula);
  if (flavor == "gel")
    out << parse_gel(text).to_string() << "\n";
  else if (flavor == "agent")
    out << parse_agent(text).to_string() << "\n";
  else
    out << parse_world(text).to_string() << "\n";
  return kOk;
}

int cmd_check(const Options& opt, std::ostream& out) {
  CielModel raw = load_model(read_file(opt.model_file));
  CielModel m = validate(raw, opt.strict ? ValidateMode::Strict
                                         : ValidateMode::Normalize);
  maybe_emit_dot(opt, m);
  WorldFormula f = parse_world(formula_text(opt.formula));
  bool holds = check(m, opt.world, f);
  out << (holds ? "true" : "false") << "\n";
  return holds ? kOk : kNegative;
}

int cmd_sat(const Options& opt, bool as_validity, std::ostream& out) {
  WorldFormula f = parse_world(formula_text(opt.formula));
  AgentTheory theory = theory_from_flag(opt.theory_file);
  DecideCaps caps = caps_from(opt);
  SatResult r = sat(as_validity ? nneg(f) : f, theory, caps);
  if (as_validity)
    out << (!r.satisfiable ? "VALID" : "INVALID") << "\n";
  else
    out << (r.satisfiable ? "SAT" : "UNSAT") << "\n";
  out << "sigma: " << r.stats.sigma_size << "  types: " << r.stats.type_count
      << "  surviving: " << r.stats.surviving
      << "  rounds: " << r.stats.rounds << "\n";
  if (r.satisfiable) {
    out << (as_validity ? "countermodel start: " : "start: ") << r.start_world
        << "\n";
    if (!opt.witness_file.empty()) {
      write_file(opt.witness_file, save_model(*r.witness));
      out << "witness written to: " << opt.witness_file << "\n";
    }
    maybe_emit_dot(opt, *r.witness);
  }
  bool positive = as_validity ? !r.satisfiable : r.satisfiable;
  return positive ? kOk : kNegative;
}

int cmd_translate(const Options& opt, std::ostream& out) {
  std::string text = formula_text(opt.formula);
  if (opt.mode == "gel2ciel") {
    out << gel_to_ciel(parse_gel(text)).to_string() << "\n";
  } else if (opt.mode == "ciel2gel") {
    WorldFormula f = parse_world(text);
    AgentTheory theory = theory_from_flag(opt.theory_file);
    FilteredAgentModel m =
        FilteredAgentModel::filtered(agent_subformulae(f), theory);
    out << ciel_to_gel(f, m).to_string() << "\n";
  } else if (opt.mode == "ciel2mu") {
    out << translate_t(parse_world(text)).to_string() << "\n";
  } else {
    throw ModelError("unknown translation '" + opt.mode +
                     "' (expected gel2ciel, ciel2gel or ciel2mu)");
  }
  return kOk;
}

int cmd_prove(const Options& opt, std::ostream& out) {
  Derivation d = parse_derivation(read_file(opt.proof_file));
  AgentTheory theory = theory_from_flag(opt.theory_file);
  CheckReport report = check_derivation(d, theory);
  if (report.accepted) {
    out << "accepted (" << d.lines.size() << " lines)\n";
    return kOk;
  }
  out << "rejected at line " << report.fail_line << ": " << report.message
      << "\n";
  return kNegative;
}

std::vector<std::size_t> parse_counters(const std::string& text,
                                        std::size_t rows) {
  std::vector<std::size_t> counters;
  if (text.empty()) return std::vector<std::size_t>(rows, 0);
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    counters.push_back(static_cast<std::size_t>(std::stoul(item)));
  return counters;
}

int cmd_muddy(const Options& opt, std::ostream& out) {
  PuzzleSpec spec{opt.rows, opt.cols, parse_counters(opt.counters, opt.rows)};
  spec.validate();
  if (opt.emit_formulas) {
    out << "visibility:  " << visibility_axiom(spec).to_string() << "\n";
    out << "initial:     " << initial_knowledge(spec).to_string() << "\n";
    out << "uncertainty: " << uncertainty_announcement(spec).to_string() << "\n";
    out << "invariant:   " << invariant_formula(spec).to_string() << "\n";
  }
  if (!opt.emit_model.empty() || !opt.dot_file.empty()) {
    CielModel m = build_puzzle_model(spec);
    if (!opt.emit_model.empty()) {
      if (opt.emit_model == "-")
        out << save_model(m) << "\n";
      else {
        write_file(opt.emit_model, save_model(m));
        out << "model written to: " << opt.emit_model << "\n";
      }
    }
    maybe_emit_dot(opt, m);
  }
  if (opt.check_inference) {
    bool holds =
        check_round_inference(spec, opt.round, !opt.drop_uncertainty);
    out << "round inference for row " << opt.round << ": "
        << (holds ? "holds" : "fails") << "\n";
    return holds ? kOk : kNegative;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"ciel - reasoning toolkit for abstract-group epistemic logic"};
  app.require_subcommand(1);
  Options opt;
  std::size_t seed = 0;
  app.add_option("--seed", seed,
                 "seed for randomized corpus generation (reserved; the "
                 "shipped subcommands are deterministic)");

  std::string parse_flavor = "world";
  CLI::App* parse_cmd = app.add_subcommand("parse", "parse a formula and echo its core form");
  parse_cmd->add_option("formula", opt.formula, "formula text or @file")->required();
  parse_cmd->add_flag_callback("--gel", [&] { parse_flavor = "gel"; },
                               "parse as a GEL formula");
  parse_cmd->add_flag_callback("--agent", [&] { parse_flavor = "agent"; },
                               "parse as an agent formula");

  CLI::App* check_cmd = app.add_subcommand("check", "model-check a formula at a world");
  check_cmd->add_option("formula", opt.formula)->required();
  check_cmd->add_option("--model", opt.model_file, "model JSON file")->required();
  check_cmd->add_option("--world", opt.world, "world identifier")->required();
  check_cmd->add_flag("--strict", opt.strict,
                      "reject relations that are not equivalences");
  check_cmd->add_option("--emit-dot", opt.dot_file, "write DOT of the model");

  CLI::App* sat_cmd = app.add_subcommand("sat", "decide satisfiability");
  CLI::App* valid_cmd = app.add_subcommand("valid", "decide validity");
  for (CLI::App* cmd : {sat_cmd, valid_cmd}) {
    cmd->add_option("formula", opt.formula)->required();
    cmd->add_option("--theory", opt.theory_file, "agent theory file");
    cmd->add_option("--witness", opt.witness_file,
                    "write the witness (or countermodel) model JSON here");
    cmd->add_option("--emit-dot", opt.dot_file, "write DOT of the witness");
    cmd->add_option("--cap-closure", opt.cap_closure, "closure size cap");
    cmd->add_option("--cap-types", opt.cap_types, "type count cap");
  }

  CLI::App* translate_cmd = app.add_subcommand("translate", "translate between logics");
  translate_cmd->add_option("direction", opt.mode, "gel2ciel | ciel2gel | ciel2mu")
      ->required();
  translate_cmd->add_option("formula", opt.formula)->required();
  translate_cmd->add_option("--theory", opt.theory_file, "agent theory file");

  CLI::App* prove_cmd = app.add_subcommand("prove", "check C5 derivations");
  prove_cmd->add_option("--check", opt.proof_file, "proof file")->required();
  prove_cmd->add_option("--theory", opt.theory_file, "agent theory file");

  CLI::App* muddy_cmd = app.add_subcommand("muddy", "muddy-children scenario");
  muddy_cmd->add_option("--n", opt.rows, "rows")->required();
  muddy_cmd->add_option("--k", opt.cols, "columns")->required();
  muddy_cmd->add_option("--counters", opt.counters, "x1,..,xn (default all 0)");
  muddy_cmd->add_option("--round", opt.round, "row to query (1-based)");
  muddy_cmd->add_flag("--emit-formulas", opt.emit_formulas, "print the formula families");
  muddy_cmd->add_option("--emit-model", opt.emit_model, "write the model JSON ('-' for stdout)");
  muddy_cmd->add_flag("--check", opt.check_inference, "check the per-round inference");
  muddy_cmd->add_flag("--drop-uncertainty", opt.drop_uncertainty,
                      "negative control: drop the uncertainty premise");
  muddy_cmd->add_option("--emit-dot", opt.dot_file, "write DOT of the model");

  std::vector<const char*> argv;
  argv.push_back("ciel");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*parse_cmd) return cmd_parse(opt, parse_flavor, out);
    if (*check_cmd) return cmd_check(opt, out);
    if (*sat_cmd) return cmd_sat(opt, false, out);
    if (*valid_cmd) return cmd_sat(opt, true, out);
    if (*translate_cmd) return cmd_translate(opt, out);
    if (*prove_cmd) return cmd_prove(opt, out);
    if (*muddy_cmd) return cmd_muddy(opt, out);
    err << "usage error: no subcommand\n";
    return kUsage;
  } catch (const ResourceLimitError& e) {
    err << "resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const CielError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace ciel::cli
