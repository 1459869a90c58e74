#pragma once

// Experiment driver: a validated configuration, dispatch to the numeric
// modules, a JSON run report and CSV plot data.
//
// Precedence: built-in defaults < --config file < command-line flags.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zetares/serialize.hpp"

namespace zr {

std::string version();

inline const std::vector<std::string>& experiment_commands() {
  static const std::vector<std::string> c{"construct", "gcd-sum", "lemma-check", "zeta",
                                          "resonate",  "search",  "measure"};
  return c;
}

struct Caps {
  std::optional<int> max_exact_M;
  std::optional<std::uint64_t> max_elements;
  std::optional<std::uint64_t> max_pairs;
  std::optional<double> max_operations;
  std::optional<double> max_T;
};

struct ExperimentConfig {
  std::string command;
  std::optional<double> alpha;
  std::optional<double> T;
  std::optional<double> tau;
  std::optional<int> M;
  std::optional<int> R;
  std::optional<std::uint64_t> k;         // element index in B (restricted sums)
  std::optional<double> x;                // corrected-sum length
  std::optional<double> t;
  std::optional<double> t_start;          // zeta grid
  std::optional<double> t_stop;
  std::optional<std::uint64_t> points;    // zeta grid size, lemma 3/4 grid size
  std::optional<double> step;             // search grid step
  std::optional<int> refine;              // golden-section iterations
  std::optional<int> digits;              // reference precision
  std::optional<std::string> method;      // truncated | corrected | reference
  std::optional<std::string> mode;        // gcd-sum: bruteforce | product | restricted | chain | compare
  std::optional<std::string> lemma;       // 1 | 1a | 1b | 1c | 2 | 3 | 4
  std::optional<std::uint64_t> mn_limit;
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> out;         // JSON report
  std::optional<std::string> csv;         // plot data
  std::optional<std::string> set_out;     // construct: serialized B and D
  Caps caps;

  // Every key is optional (a config file may leave "command" to the CLI);
  // unknown keys are rejected. validate() insists on a known command.
  static ExperimentConfig from_json(const json& doc);
  json to_json() const;
  // Overrides every field that is set in `flags`.
  void merge(const ExperimentConfig& flags);
};

// Throws InvalidArgument naming the violated constraint.
void validate(const ExperimentConfig& config);

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct PlotGrid {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct RunReport {
  std::string command;
  std::string version;
  std::string wall_time_seconds;
  json config = json::object();
  std::vector<Check> checks;
  json outputs = json::object();   // decimal strings, integers, booleans, nested objects
  json flags = json::object();     // regime flags such as R_clamped
  std::optional<PlotGrid> grid;

  bool all_passed() const;
  json to_json() const;
  static RunReport from_json(const json& doc);
};

// Validates and dispatches; throws the module exceptions unchanged.
RunReport run(const ExperimentConfig& config);

// CSV with a header row, LF endings, values as stored in the grid.
// InvalidArgument when the report carries no grid.
void emit_plot_data(const RunReport& report, const std::string& path);
std::string plot_data_csv(const RunReport& report);

struct RunOutcome {
  int exit_code = 0;      // 0 ok, 1 invariant violation or failed check, 2 invalid config, 3 resource refusal
  std::optional<RunReport> report;
  std::string message;
};

// run() plus file output and the mapping from exceptions to exit codes.
RunOutcome execute(const ExperimentConfig& config);

}  // namespace zr
