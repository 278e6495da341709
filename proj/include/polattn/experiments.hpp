#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polattn/csv.hpp"
#include "polattn/scenario.hpp"

namespace polattn {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitMismatch = 4;

const char* tool_version() noexcept;

// Swept parameter: "mu", "xi", "eta" or "cost".
struct SweepAxis {
  std::string parameter;
  std::vector<double> values;
};

// Parses "name=v1,v2,..." or "name=lo:hi:step" (inclusive, step > 0).
SweepAxis parse_sweep_axis(const std::string& text);

struct RunManifest {
  std::string command;
  std::string target;  // reproduce target
  std::optional<std::string> scenario_path;
  std::vector<SweepAxis> sweeps;
  std::string output_dir;  // empty: write to stdout
  std::uint64_t seed = 0;
  unsigned threads = 1;
  double tolerance = 0.002;
  std::optional<double> voter;
  double scan_step = 0.005;
  std::optional<double> xi_prime;
  bool verify = false;

  void validate() const;
};

struct Artifact {
  std::string name;  // file stem
  CsvTable table;
};

struct RunOutcome {
  int exit_code = kExitOk;
  std::string scenario_hash;
  std::vector<Artifact> artifacts;
  std::vector<std::string> messages;
};

// Executes one command. Library errors map to exit codes instead of escaping.
RunOutcome run(const RunManifest& manifest);

// Writes artifacts to manifest.output_dir, or to stdout when it is empty.
void emit(const RunManifest& manifest, const RunOutcome& outcome);

// Long format: parameter, value, statistic, record, result.
CsvTable sweep(const Scenario& scenario, const std::vector<SweepAxis>& axes,
               std::optional<double> voter, unsigned threads = 1);

// Presets.
Scenario table1_scenario();
Scenario figure2_scenario(double mu = 10.0);
Scenario figure3_scenario(double xi);
Scenario example3_scenario(double eta, double mu);

// Reference outcomes for the reproduction targets.
struct Reproduction {
  std::vector<Artifact> artifacts;
  std::vector<std::string> mismatches;
  bool ok() const noexcept { return mismatches.empty(); }
};

Reproduction reproduce_table1(double tolerance);
Reproduction reproduce_table2(double tolerance);
Reproduction reproduce_figure2(double scan_step = 0.005, unsigned threads = 1);
Reproduction reproduce_figure3(unsigned threads = 1);

// The slant levels used for the three-panel noisy reproduction.
std::vector<double> figure3_slants();

}  // namespace polattn
