// Command-line front end. All numbers come from the library; this file only
// parses flags and routes output.
#include <iostream>

#include <CLI11.hpp>

#include "polattn/errors.hpp"
#include "polattn/experiments.hpp"

int main(int argc, char** argv) {
  using namespace polattn;
  CLI::App app{"Rational-inattention electoral competition solver"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);

  RunManifest m;
  std::string scenario;
  std::vector<std::string> sweeps;
  double voter = 0.0, xi_prime = 0.0;

  auto common = [&](CLI::App* sub, bool needs_scenario) {
    auto* opt = sub->add_option("--scenario", scenario, "Scenario JSON file");
    if (needs_scenario) opt->required();
    sub->add_option("--out", m.output_dir, "Output directory (default: stdout)");
    sub->add_option("--seed", m.seed, "Seed recorded in every CSV header");
    sub->add_option("--threads", m.threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--tolerance", m.tolerance, "Reproduction tolerance");
    sub->add_option("--voter", voter, "Voter type for attention statistics");
  };

  auto* validate = app.add_subcommand("validate", "Parse and audit a scenario");
  common(validate, true);
  auto* solve = app.add_subcommand("solve-attention", "Optimal attention for the scenario's assignment");
  common(solve, true);
  auto* enumerate = app.add_subcommand("enumerate", "Enumerate pure symmetric equilibria");
  common(enumerate, true);
  enumerate->add_flag("--verify", m.verify, "Check that aggregated attention rationalizes the Downsian matrix");
  auto* aset = app.add_subcommand("attention-set", "Scan the two-type attention set over the policy grid");
  common(aset, true);
  auto* garble = app.add_subcommand("garble", "Garble a slant news technology to a higher slant");
  common(garble, true);
  garble->add_option("--xi-prime", xi_prime, "Target slant")->required();
  auto* sweep = app.add_subcommand("sweep", "Long-format parameter sweep");
  common(sweep, true);
  sweep->add_option("--sweep", sweeps, "name=v1,v2 or name=lo:hi:step (mu, xi, eta, cost)")->required();
  auto* reproduce = app.add_subcommand("reproduce", "Reproduce a reference table or figure");
  common(reproduce, false);
  reproduce->add_option("target", m.target, "table1, table2, figure2 or figure3")
      ->required()
      ->check(CLI::IsMember({"table1", "table2", "figure2", "figure3"}));
  reproduce->add_option("--step", m.scan_step, "Frontier scan step for figure2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  CLI::App* sub = app.get_subcommands().front();
  m.command = sub->get_name();
  if (!scenario.empty()) m.scenario_path = scenario;
  if (sub->count("--voter")) m.voter = voter;
  if (m.command == "garble") m.xi_prime = xi_prime;
  try {
    for (const auto& s : sweeps) m.sweeps.push_back(parse_sweep_axis(s));
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  }

  const RunOutcome out = run(m);
  for (const auto& msg : out.messages) std::cerr << msg << '\n';
  try {
    emit(m, out);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  }
  return out.exit_code;
}
