#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "zetares/error.hpp"
#include "zetares/experiment.hpp"

namespace {

struct Flag {
  const char* name;   // command-line spelling without dashes
  const char* field;  // config key
  const char* help;
};

const std::map<std::string, Flag> kFlags = {
    {"alpha", {"alpha", "alpha", "real part, in (1/2, 1)"}},
    {"T", {"T", "T", "height T"}},
    {"tau", {"tau", "tau", "level parameter, 0 < tau < (2 alpha - 1)^(1-alpha)/6"}},
    {"M", {"M", "M", "number of primes in the multiplicative set"}},
    {"R", {"R", "R", "distance; default from the floor formula"}},
    {"k", {"k", "k", "element index in B for restricted sums (default 0)"}},
    {"x", {"x", "x", "length of the corrected sum (default max(2|t|, 100))"}},
    {"t", {"t", "t", "imaginary part"}},
    {"t-start", {"t-start", "t_start", "grid start"}},
    {"t-stop", {"t-stop", "t_stop", "grid end (inclusive)"}},
    {"points", {"points", "points", "grid size"}},
    {"step", {"step", "step", "search grid step, at most 0.1 (default 0.05)"}},
    {"refine", {"refine", "refine", "golden-section iterations per candidate (default 30)"}},
    {"digits", {"digits", "digits", "reference precision in decimal digits (default 20)"}},
    {"method", {"method", "method", "truncated | corrected | reference (default reference)"}},
    {"mode", {"mode", "mode", "bruteforce | product | restricted | chain | compare (default product)"}},
    {"lemma", {"lemma", "lemma", "1 | 1a | 1b | 1c | 2 | 3 | 4"}},
    {"mn-limit", {"mn-limit", "mn_limit", "bound on m and n in the decomposition (default floor(T))"}},
    {"samples", {"samples", "samples", "number of Monte Carlo samples"}},
    {"seed", {"seed", "seed", "random seed (default 0)"}},
    {"set-out", {"set-out", "set_out", "write the serialized B (and D) to this JSON file"}},
    {"max-exact-M", {"max-exact-M", "caps.max_exact_M", "cap: largest M materialized exactly"}},
    {"max-elements", {"max-elements", "caps.max_elements", "cap: largest set size"}},
    {"max-pairs", {"max-pairs", "caps.max_pairs", "cap: pair count in separation and square-integral checks"}},
    {"max-operations", {"max-operations", "caps.max_operations", "cap: decomposition work"}},
    {"max-T", {"max-T", "caps.max_T", "cap: largest T for search and measure"}},
};

const std::map<std::string, std::vector<std::string>> kCommandFlags = {
    {"construct", {"alpha", "T", "M", "set-out", "max-exact-M", "max-elements"}},
    {"gcd-sum", {"alpha", "T", "M", "R", "k", "mode", "max-exact-M", "max-elements"}},
    {"lemma-check", {"lemma", "alpha", "T", "M", "R", "k", "points", "max-exact-M", "max-elements", "max-pairs"}},
    {"zeta", {"alpha", "t", "method", "T", "x", "digits", "t-start", "t-stop", "points"}},
    {"resonate", {"alpha", "T", "M", "R", "mn-limit", "max-exact-M", "max-elements", "max-pairs", "max-operations"}},
    {"search", {"alpha", "T", "step", "refine", "max-T"}},
    {"measure", {"alpha", "tau", "T", "samples", "seed", "max-T"}},
};

const std::map<std::string, std::string> kCommandHelp = {
    {"construct", "build the multiplicative set B and, with --T, the representative set D"},
    {"gcd-sum", "GCD sums over B: brute force, product form, distance-restricted, chain"},
    {"lemma-check", "exhaustive checks of the resonator lemmas"},
    {"zeta", "zeta(alpha + it) at a point or on a grid"},
    {"resonate", "frequency decomposition, resonant pairs and the square integral"},
    {"search", "maximum of |zeta(alpha + it)| on [0, T]"},
    {"measure", "Monte Carlo measure of the large-value set"},
};

void set_field(zr::json& doc, const std::string& field, const std::string& value) {
  const auto dot = field.find('.');
  if (dot == std::string::npos) {
    doc[field] = value;
  } else {
    doc[field.substr(0, dot)][field.substr(dot + 1)] = value;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zetares: large values of the Riemann zeta function in the critical strip"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::map<std::string, std::string> globals;
  app.add_option("--config", config_path, "JSON config file; command-line flags override its values");
  app.add_option("--threads", globals["threads"], "worker thread cap");
  app.add_option("--out", globals["out"], "write the JSON report here instead of stdout");
  app.add_option("--csv", globals["csv"], "write the grid-valued output as CSV");

  std::map<std::string, std::map<std::string, std::string>> values;
  for (const auto& [cmd, flags] : kCommandFlags) {
    CLI::App* sub = app.add_subcommand(cmd, kCommandHelp.at(cmd));
    for (const auto& name : flags) {
      const Flag& f = kFlags.at(name);
      sub->add_option(std::string("--") + f.name, values[cmd][f.field], f.help);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::string command;
  for (const CLI::App* sub : app.get_subcommands()) command = sub->get_name();

  zr::ExperimentConfig config;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw zr::InvalidArgument("cannot read config file '" + config_path + "'");
      config = zr::ExperimentConfig::from_json(zr::json::parse(in));
    }
    zr::json flags = zr::json::object();
    flags["command"] = command;
    for (const auto& [field, value] : globals) {
      if (app.count("--" + field) > 0) set_field(flags, field, value);
    }
    const CLI::App* sub = app.get_subcommand(command);
    for (const auto& name : kCommandFlags.at(command)) {
      const Flag& f = kFlags.at(name);
      if (sub->count(std::string("--") + f.name) > 0) set_field(flags, f.field, values[command][f.field]);
    }
    if (!config.command.empty() && config.command != command) {
      throw zr::InvalidArgument("config file is for '" + config.command + "' but the command is '" + command + "'");
    }
    config.merge(zr::ExperimentConfig::from_json(flags));
  } catch (const zr::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const zr::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  const zr::RunOutcome o = zr::execute(config);
  if (o.report && !config.out) std::cout << o.report->to_json().dump(2) << "\n";
  if (!o.message.empty()) std::cerr << (o.exit_code == 0 ? "" : "error: ") << o.message << "\n";
  return o.exit_code;
}
