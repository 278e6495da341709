#include "polattn/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

#include "parallel.hpp"
#include "polattn/core.hpp"
#include "polattn/election.hpp"
#include "polattn/errors.hpp"
#include "polattn/extensions.hpp"
#include "polattn/news.hpp"
#include "polattn/ri_solver.hpp"
#include "polattn/scenario_io.hpp"
#include "polattn/technology.hpp"

namespace polattn {

const char* tool_version() noexcept { return POLATTN_VERSION; }

namespace {

const std::set<std::string> kCommands = {"validate", "solve-attention", "enumerate", "attention-set",
                                         "garble",   "sweep",           "reproduce"};
const std::set<std::string> kTargets = {"table1", "table2", "figure2", "figure3"};
const std::set<std::string> kSweepable = {"mu", "xi", "eta", "cost"};

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double parse_double(const std::string& s, const std::string& context) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ValidationError(context + ": '" + s + "' is not a number");
  }
  if (used != s.size()) throw ValidationError(context + ": '" + s + "' is not a number");
  return x;
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ";" : "") + format_number(xs[i]);
  return out;
}

std::vector<double> beta_grid(const Scenario& s) {
  return {s.beta_policies.values().begin(), s.beta_policies.values().end()};
}

// Pro-alpha voter closest to the center, the group whose attention the examples track.
double default_voter(const Scenario& s) {
  std::optional<double> best;
  for (const auto& g : s.electorate.groups())
    if (g.type < 0.0 && (!best || g.type > *best)) best = g.type;
  if (!best) throw ValidationError("no pro-alpha voter group; pass --voter");
  return *best;
}

bool member(const Scenario& s, const StrategyAssignment& a, double t) {
  return s.news ? attention_set_member_noisy(s, a, t) : attention_set_member(s, a, t);
}

std::vector<EquilibriumRecord> equilibria(const Scenario& s, unsigned threads, bool verify = false) {
  EnumerationOptions opt;
  opt.threads = threads;
  opt.verify_rationalization = verify && !s.news;
  return s.news ? enumerate_equilibria_noisy(s, opt) : enumerate_equilibria(s, opt);
}

std::vector<double> linspace_mid(int n) {
  std::vector<double> g;
  for (int i = 1; i <= n; ++i) g.push_back((i - 0.5) / n);
  return g;
}

void check_close(std::vector<std::string>& mismatches, CsvTable& check, const std::string& row,
                 const std::string& quantity, double computed, double printed, double tol) {
  const double diff = std::abs(computed - printed);
  const bool ok = diff <= tol;
  check.add_row({row, quantity, computed, printed, diff, static_cast<long long>(ok)});
  if (!ok)
    mismatches.push_back(row + " " + quantity + ": computed " + format_number(computed) + ", printed " +
                         format_number(printed) + " (|diff| " + format_number(diff) + " > " + format_number(tol) +
                         ")");
}

CsvTable check_table() { return CsvTable({"row", "quantity", "computed", "printed", "abs_diff", "pass"}); }

const char* profile_names[4] = {"m(-.01,.01)", "m(-.01,.4)", "m(-.4,.01)", "m(-.4,.4)"};

}  // namespace

SweepAxis parse_sweep_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ValidationError("sweep '" + text + "': expected name=values");
  SweepAxis axis;
  axis.parameter = text.substr(0, eq);
  if (!kSweepable.count(axis.parameter))
    throw ValidationError("sweep parameter '" + axis.parameter + "' is not one of mu, xi, eta, cost");
  const std::string rest = text.substr(eq + 1);
  if (rest.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(rest);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw ValidationError("sweep range '" + rest + "': expected lo:hi:step");
    const double lo = parse_double(parts[0], "sweep"), hi = parse_double(parts[1], "sweep"),
                 step = parse_double(parts[2], "sweep");
    if (!(step > 0.0) || hi < lo) throw ValidationError("sweep range '" + rest + "' is empty or has step <= 0");
    const auto n = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
    for (long long k = 0; k <= n; ++k) axis.values.push_back(lo + static_cast<double>(k) * step);
  } else {
    std::stringstream ss(rest);
    for (std::string p; std::getline(ss, p, ',');) axis.values.push_back(parse_double(p, "sweep"));
  }
  if (axis.values.empty()) throw ValidationError("sweep '" + text + "' has no values");
  return axis;
}

void RunManifest::validate() const {
  if (!kCommands.count(command)) throw ValidationError("unknown command '" + command + "'");
  if (command == "reproduce") {
    if (!kTargets.count(target)) throw ValidationError("unknown reproduce target '" + target + "'");
  } else if (!scenario_path) {
    throw ValidationError(command + " needs --scenario");
  }
  if (command == "sweep" && sweeps.empty()) throw ValidationError("sweep needs at least one --sweep axis");
  for (const auto& s : sweeps)
    if (s.values.empty()) throw ValidationError("sweep list for " + s.parameter + " is empty");
  if (threads == 0) throw ValidationError("--threads must be at least 1");
  if (!(tolerance > 0.0)) throw ValidationError("--tolerance must be positive");
  if (!(scan_step > 0.0 && scan_step <= 0.5)) throw ValidationError("--step must lie in (0, 0.5]");
  if (!output_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(output_dir, ec);
    if (ec || !std::filesystem::is_directory(output_dir))
      throw ValidationError("output directory '" + output_dir + "' is not writable");
  }
}

// ---- presets ----

Scenario table1_scenario() {
  CandidateParams cp{8.0, 12.0, 1.0, -1};
  Scenario s = make_symmetric_scenario({0.01, 0.4}, UtilitySpec::absolute_loss(cp), {{0.3, 0.5}, {0.8, 0.5}},
                                       {{-0.2, 0.2}, {-0.05, 0.2}, {0.0, 0.2}, {0.05, 0.2}, {0.2, 0.2}}, 0.09);
  s.assignment = std::vector<double>{0.01, 0.4};
  s.validate();
  return s;
}

Scenario figure2_scenario(double mu) {
  CandidateParams cp{8.0, 12.0, 1.0, -1};
  const double third = 1.0 / 3.0;
  return make_symmetric_scenario({0.01, 0.2, 0.4}, UtilitySpec::absolute_loss(cp), {{0.3, 0.5}, {0.8, 0.5}},
                                 {{-0.001, third}, {0.0, third}, {0.001, third}}, mu);
}

Scenario figure3_scenario(double xi) {
  CandidateParams cp{8.0, 3.0, 1.0, -1};
  const double third = 1.0 / 3.0;
  Scenario s = make_symmetric_scenario(linspace_mid(50), UtilitySpec::absolute_loss(cp), {{0.25, 0.5}, {0.75, 0.5}},
                                       {{-0.001, third}, {0.0, third}, {0.001, third}}, 1.0);
  s.news = NewsTechnology::slant(xi, beta_grid(s));
  s.validate();
  return s;
}

Scenario example3_scenario(double eta, double mu) { return with_commitment(figure2_scenario(mu), eta); }

std::vector<double> figure3_slants() { return {0.6, 0.65, 0.7}; }

// ---- reproductions ----

Reproduction reproduce_table1(double tolerance) {
  const Scenario s = table1_scenario();
  const StrategyAssignment a{*s.assignment};
  // Printed rows: t, I, then m over (-.01,.01), (-.01,.4), (-.4,.01), (-.4,.4).
  struct Row {
    double t, info, m[4];
  };
  const Row printed[] = {{-0.2, 0.0, {0, 0, 0, 0}},
                         {-0.05, 0.315, {0.296, 0.006, 0.930, 0.148}},
                         {0.0, 0.312, {0.500, 0.012, 0.987, 0.500}}};
  Reproduction rep;
  CsvTable out({"t", "regime", "I", profile_names[0], profile_names[1], profile_names[2], profile_names[3]});
  CsvTable check = check_table();
  for (const Row& r : printed) {
    const AttentionSolution sol = solve_attention(profile_belief(s, a, r.t), s.mu);
    out.add_row({r.t, std::string(to_string(sol.regime)), sol.information, sol.m[0], sol.m[1], sol.m[2], sol.m[3]});
    const std::string label = "t=" + format_number(r.t);
    check_close(rep.mismatches, check, label, "I", sol.information, r.info, tolerance);
    for (int k = 0; k < 4; ++k) check_close(rep.mismatches, check, label, profile_names[k], sol.m[k], r.m[k], tolerance);
  }
  rep.artifacts.push_back({"table1", std::move(out)});
  rep.artifacts.push_back({"table1_check", std::move(check)});
  return rep;
}

Reproduction reproduce_table2(double tolerance) {
  Scenario s = table1_scenario();
  const StrategyAssignment a{*s.assignment};
  const double t = -0.05;
  struct Row {
    double mu, mbar, m[4];
  };
  const Row printed[] = {{0.01, 0.261, {0.046, 0.000, 1.0, 0.000}},
                         {0.10, 0.344, {0.300, 0.009, 0.905, 0.162}},
                         {0.20, 0.283, {0.263, 0.048, 0.627, 0.148}}};
  Reproduction rep;
  CsvTable out({"mu", "regime", "mbar", profile_names[0], profile_names[1], profile_names[2], profile_names[3]});
  CsvTable check = check_table();
  for (const Row& r : printed) {
    const AttentionSolution sol = solve_attention(profile_belief(s, a, t), r.mu);
    out.add_row({r.mu, std::string(to_string(sol.regime)), sol.mbar, sol.m[0], sol.m[1], sol.m[2], sol.m[3]});
    const std::string label = "mu=" + format_number(r.mu);
    check_close(rep.mismatches, check, label, "mbar", sol.mbar, r.mbar, tolerance);
    for (int k = 0; k < 4; ++k) check_close(rep.mismatches, check, label, profile_names[k], sol.m[k], r.m[k], tolerance);
  }
  rep.artifacts.push_back({"table2", std::move(out)});
  rep.artifacts.push_back({"table2_check", std::move(check)});
  return rep;
}

Reproduction reproduce_figure2(double scan_step, unsigned threads) {
  Reproduction rep;
  const double tau = 0.001;
  const std::set<std::vector<double>> expected = {{0.01, 0.2}, {0.01, 0.4}};

  CsvTable eq({"mu", "source", "a1", "a2", "ea_member", "boundary_margin"});
  for (double mu : {0.1, 1.0, 10.0, 100.0}) {
    const Scenario s = figure2_scenario(mu);
    for (WinSource src : {WinSource::Downsian, WinSource::Rationalized}) {
      EnumerationOptions opt;
      opt.threads = threads;
      opt.source = src;
      const auto recs = enumerate_equilibria(s, opt);
      std::set<std::vector<double>> found;
      for (const auto& r : recs) {
        const auto& p = r.assignment.beta_policy;
        found.insert(p);
        const bool ea = attention_set_member(s, r.assignment, -tau);
        const double margin = commitment_boundary_margin(1.0, p[0], p[1], 0.3, 0.8, tau, mu);
        eq.add_row({mu, std::string(src == WinSource::Downsian ? "downsian" : "rationalized"), p[0], p[1],
                    static_cast<long long>(ea), margin});
        if (ea != (margin >= -kTolerance))
          rep.mismatches.push_back("mu=" + format_number(mu) + " (" + join(p) +
                                   "): attention membership disagrees with the closed-form bound");
      }
      if (found != expected) {
        std::string got;
        for (const auto& p : found) got += " (" + join(p) + ")";
        rep.mismatches.push_back("mu=" + format_number(mu) + " " +
                                 (src == WinSource::Downsian ? "downsian" : "rationalized") +
                                 ": equilibrium set differs from {(.01,.2),(.01,.4)}; got" + got);
      }
    }
  }
  rep.artifacts.push_back({"figure2_equilibria", std::move(eq)});

  // Frontier at tau = .001, mu = 10: closed form against a membership scan.
  const double mu = 10.0;
  Scenario s = figure2_scenario(mu);
  std::vector<double> grid;
  for (long long k = 1; static_cast<double>(k) * scan_step <= 1.0 + 1e-12; ++k)
    grid.push_back(static_cast<double>(k) * scan_step);
  const AttentionScan scan = scan_membership(
      grid, [&](double a1, double a2) { return attention_set_member(s, StrategyAssignment{{a1, a2}}, -tau); },
      threads);
  const double hurdle = mu * gamma_inverse(4.0 * std::exp(2.0 * tau / mu) - 2.0);
  CsvTable fr({"a1", "bound_a2", "scanned_a2"});
  std::size_t f = 0;
  for (double a1 : grid) {
    double scanned = kNan;
    if (f < scan.frontier.size() && scan.frontier[f].alpha == a1) scanned = scan.frontier[f++].beta;
    const double bound = a1 + hurdle;
    fr.add_row({a1, bound, scanned});
    if (!std::isnan(scanned) && scanned < bound - kTolerance)
      rep.mismatches.push_back("a1=" + format_number(a1) + ": scanned frontier " + format_number(scanned) +
                               " lies below the closed-form bound " + format_number(bound));
  }
  rep.artifacts.push_back({"figure2_frontier", std::move(fr)});
  return rep;
}

Reproduction reproduce_figure3(unsigned threads) {
  Reproduction rep;
  const double tau = 0.001;
  CsvTable eq({"xi", "a1", "a2", "ea_member"});
  CsvTable fr({"xi", "a1", "a2"});
  CsvTable sz({"xi", "attention_set_size", "equilibria"});
  std::vector<std::vector<std::vector<double>>> eqs;
  std::vector<AttentionScan> scans;
  for (double xi : figure3_slants()) {
    const Scenario s = figure3_scenario(xi);
    const auto recs = equilibria(s, threads);
    std::vector<std::vector<double>> pts;
    for (const auto& r : recs) {
      const auto& p = r.assignment.beta_policy;
      pts.push_back(p);
      eq.add_row({xi, p[0], p[1], static_cast<long long>(attention_set_member_noisy(s, r.assignment, -tau))});
    }
    eqs.push_back(pts);
    const auto grid = beta_grid(s);
    scans.push_back(scan_attention_set_noisy(s, -tau, grid, threads));
    long long size = 0;
    for (signed char c : scans.back().member.data()) size += c == 1;
    for (const auto& p : scans.back().frontier) fr.add_row({xi, p.alpha, p.beta});
    sz.add_row({xi, size, static_cast<long long>(pts.size())});
    if (pts.empty()) rep.mismatches.push_back("xi=" + format_number(xi) + ": no equilibrium found");
  }
  const auto slants = figure3_slants();
  for (std::size_t k = 1; k < scans.size(); ++k) {
    const auto& lo = scans[k - 1].member.data();
    const auto& hi = scans[k].member.data();
    bool subset = true, strict = false;
    for (std::size_t c = 0; c < lo.size(); ++c) {
      if (hi[c] == 1 && lo[c] != 1) subset = false;
      if (lo[c] == 1 && hi[c] != 1) strict = true;
    }
    if (!subset || !strict)
      rep.mismatches.push_back("attention set at xi=" + format_number(slants[k]) +
                               " is not strictly nested in the one at xi=" + format_number(slants[k - 1]));
    // Every equilibrium moves weakly closer to (1/4, 3/4) in each coordinate.
    for (const auto& p : eqs[k])
      for (const auto& q : eqs[k - 1]) {
        const double dp = std::hypot(p[0] - 0.25, p[1] - 0.75), dq = std::hypot(q[0] - 0.25, q[1] - 0.75);
        const bool closer = std::abs(p[0] - 0.25) <= std::abs(q[0] - 0.25) + 1e-12 &&
                            std::abs(p[1] - 0.75) <= std::abs(q[1] - 0.75) + 1e-12 &&
                            (dp < dq - 1e-12 || (dp == 0.0 && dq == 0.0));
        if (!closer)
          rep.mismatches.push_back("equilibrium (" + join(p) + ") at xi=" + format_number(slants[k]) +
                                   " is not closer to (1/4,3/4) than (" + join(q) + ")");
      }
  }
  rep.artifacts.push_back({"figure3_equilibria", std::move(eq)});
  rep.artifacts.push_back({"figure3_frontier", std::move(fr)});
  rep.artifacts.push_back({"figure3_summary", std::move(sz)});
  return rep;
}

// ---- sweeps ----

namespace {

Scenario apply_axis(const Scenario& base, const std::string& parameter, double value) {
  Scenario s = base;
  if (parameter == "mu") {
    s.mu = value;
  } else if (parameter == "xi") {
    std::vector<double> signals{1.0 / 3.0, 2.0 / 3.0};
    if (s.news && s.news->slant_parameter()) signals.assign(s.news->signals().begin(), s.news->signals().end());
    s.news = NewsTechnology::slant(value, beta_grid(s), signals);
  } else if (parameter == "eta") {
    return with_commitment(s, value);
  } else if (parameter == "cost") {
    s.dissemination_cost = value;
  }
  s.validate();
  return s;
}

std::vector<std::vector<CsvCell>> point_rows(const Scenario& s, const std::string& parameter, double value,
                                             double voter) {
  std::vector<std::vector<CsvCell>> rows;
  auto row = [&](const std::string& stat, long long record, double result) {
    rows.push_back({parameter, value, stat, record, result});
  };
  const auto recs = equilibria(s, 1);
  row("equilibria", -1, static_cast<double>(recs.size()));

  long long ea = 0;
  double min_diff = kNan;
  for (std::size_t r = 0; r < recs.size(); ++r) {
    const bool in = member(s, recs[r].assignment, voter);
    const auto& p = recs[r].assignment.beta_policy;
    for (std::size_t k = 0; k < p.size(); ++k)
      row("a" + std::to_string(k + 1), static_cast<long long>(r), p[k]);
    row("ea_member", static_cast<long long>(r), in ? 1.0 : 0.0);
    row("total_information", static_cast<long long>(r), recs[r].total_information());
    if (parameter == "eta" && p.size() == 2) {
      const auto types = s.beta_candidate.types();
      row("boundary_margin", static_cast<long long>(r),
          commitment_boundary_margin(s.eta, p[0], p[1], types[0].type, types[1].type, std::abs(voter), s.mu));
    }
    if (in) {
      ++ea;
      const auto& lv = recs[r].triple.levels;
      const double d = voter_utility(s.utility, lv.front(), 0.0) - voter_utility(s.utility, lv.back(), 0.0);
      if (std::isnan(min_diff) || d < min_diff) min_diff = d;
    }
  }
  row("ea_size", -1, static_cast<double>(ea));
  row("min_differential", -1, min_diff);
  // The configured assignment is tracked whether or not it is an equilibrium.
  if (s.assignment) {
    const StrategyAssignment a{*s.assignment};
    row("assignment_member", -1, member(s, a, voter) ? 1.0 : 0.0);
    if (parameter == "eta" && a.beta_policy.size() == 2) {
      const auto types = s.beta_candidate.types();
      row("assignment_boundary_margin", -1,
          commitment_boundary_margin(s.eta, a.beta_policy[0], a.beta_policy[1], types[0].type, types[1].type,
                                     std::abs(voter), s.mu));
    }
  }
  if (s.dissemination_cost) {
    const auto res = dissemination_filter(recs, s, *s.dissemination_cost);
    row("kept", -1, static_cast<double>(res.kept.size()));
    row("cost_out_of_range", -1, res.cost_out_of_range ? 1.0 : 0.0);
  }
  return rows;
}

}  // namespace

CsvTable sweep(const Scenario& scenario, const std::vector<SweepAxis>& axes, std::optional<double> voter,
               unsigned threads) {
  const double t = voter ? *voter : default_voter(scenario);
  struct Point {
    std::string parameter;
    double value;
  };
  std::vector<Point> points;
  for (const auto& ax : axes)
    for (double v : ax.values) points.push_back({ax.parameter, v});
  std::vector<std::vector<std::vector<CsvCell>>> results(points.size());
  detail::parallel_for(points.size(), threads, [&](std::size_t i) {
    results[i] = point_rows(apply_axis(scenario, points[i].parameter, points[i].value), points[i].parameter,
                            points[i].value, t);
  });
  CsvTable out({"parameter", "value", "statistic", "record", "result"});
  for (auto& rs : results)
    for (auto& r : rs) out.add_row(std::move(r));
  return out;
}

// ---- commands ----

namespace {

void cmd_validate(const Scenario& s, RunOutcome& out) {
  CsvTable t({"check", "passed", "detail"});
  const auto sym = s.symmetry();
  std::string reasons;
  for (const auto& r : sym.reasons) reasons += (reasons.empty() ? "" : "; ") + r;
  t.add_row({std::string("scenario_symmetry"), static_cast<long long>(sym.symmetric), reasons});
  const auto audit = audit_utility(s.utility, s.alpha_policies, s.beta_policies, s.electorate);
  for (const auto& f : audit.findings) t.add_row({f.check, static_cast<long long>(f.passed), f.detail});
  if (s.news) {
    const auto lsm = check_log_supermodularity(*s.news);
    t.add_row({std::string("news_log_supermodular"), static_cast<long long>(lsm.passed()),
               std::string(to_string(lsm.status)) + (lsm.detail.empty() ? "" : ": " + lsm.detail)});
  }
  if (s.issues) {
    const auto grid_n = s.issues->grid_points;
    std::vector<double> grid, types;
    for (int i = 0; i < grid_n; ++i) grid.push_back(-1.0 + 2.0 * i / (grid_n - 1));
    for (const auto& g : s.electorate.groups()) types.push_back(g.type);
    std::sort(types.begin(), types.end());
    types.erase(std::unique(types.begin(), types.end()), types.end());
    const auto res = multi_issue_reduce(utility2_from_spec(*s.issues), frontier_from_spec(*s.issues), grid, types,
                                        s.utility.candidate());
    for (const auto& item : res.audit)
      t.add_row({"issues_" + item.check, static_cast<long long>(!item.applicable || item.passed),
                 std::string(item.applicable ? "" : "not applicable: ") + item.detail});
    if (!res.ok()) out.exit_code = kExitValidation;
  }
  if (!audit.ok()) {
    out.exit_code = kExitValidation;
    out.messages.push_back(audit.failure_summary());
  }
  out.artifacts.push_back({"validate", std::move(t)});
}

StrategyAssignment scenario_assignment(const Scenario& s, const std::string& command) {
  if (!s.assignment) throw ValidationError(command + " needs an 'assignment' section in the scenario");
  return StrategyAssignment{*s.assignment};
}

void cmd_solve(const Scenario& s, std::optional<double> voter, RunOutcome& out) {
  const StrategyAssignment a = scenario_assignment(s, "solve-attention");
  std::vector<double> voters;
  if (voter) voters.push_back(*voter);
  else
    for (const auto& g : s.electorate.groups()) voters.push_back(g.type);
  CsvTable sum({"voter", "regime", "mbar", "likelihood_ratio", "information", "residual", "iterations"});
  CsvTable prof({"voter", "profile", "a_alpha", "a_beta", "prob", "value", "m"});
  for (double t : voters) {
    const Belief b = s.news ? news_belief(s, a, t) : profile_belief(s, a, t);
    const AttentionSolution sol = solve_attention(b, s.mu);
    sum.add_row({t, std::string(to_string(sol.regime)), sol.mbar, sol.likelihood_ratio, sol.information, sol.residual,
                 static_cast<long long>(sol.iterations)});
    for (std::size_t k = 0; k < b.size(); ++k)
      prof.add_row({t, static_cast<long long>(k), b.support[k].alpha, b.support[k].beta, b.probs[k], b.values[k],
                    sol.m[k]});
  }
  out.artifacts.push_back({"attention", std::move(sum)});
  out.artifacts.push_back({"attention_profiles", std::move(prof)});
}

void cmd_enumerate(const Scenario& s, const RunManifest& m, RunOutcome& out) {
  const auto recs = equilibria(s, m.threads, m.verify);
  const double voter = m.voter ? *m.voter : default_voter(s);
  std::optional<DisseminationResult> filt;
  if (s.dissemination_cost) filt = dissemination_filter(recs, s, *s.dissemination_cost);
  CsvTable eq({"record", "policies", "levels", "min_gap", "total_information", "ea_member", "kept", "verified"});
  CsvTable att({"record", "voter", "weight", "regime", "mbar", "information", "attentive"});
  for (std::size_t r = 0; r < recs.size(); ++r) {
    const auto& rec = recs[r];
    bool kept = true;
    if (filt) kept = rec.total_information() >= *s.dissemination_cost - kProbTolerance;
    const long long verified = rec.rationalization_verified ? (*rec.rationalization_verified ? 1 : 0) : -1;
    eq.add_row({static_cast<long long>(r), join(rec.assignment.beta_policy), join(rec.triple.levels), rec.ic.min_gap,
                rec.total_information(), static_cast<long long>(member(s, rec.assignment, voter)),
                static_cast<long long>(kept), verified});
    for (const auto& g : rec.attention)
      att.add_row({static_cast<long long>(r), g.group.type, g.group.weight, std::string(to_string(g.solution.regime)),
                   g.solution.mbar, g.solution.information, static_cast<long long>(g.attentive)});
    if (verified == 0) {
      out.exit_code = kExitMismatch;
      out.messages.push_back("record " + std::to_string(r) + ": rationalized winning matrix differs from the Downsian one");
    }
  }
  if (filt && filt->cost_out_of_range)
    out.messages.push_back("warning: dissemination cost lies outside (0, H(Sigma)) for some record");
  out.artifacts.push_back({"equilibria", std::move(eq)});
  out.artifacts.push_back({"equilibrium_attention", std::move(att)});
}

void cmd_attention_set(const Scenario& s, const RunManifest& m, RunOutcome& out) {
  const double voter = m.voter ? *m.voter : default_voter(s);
  const auto grid = beta_grid(s);
  const AttentionScan scan =
      s.news ? scan_attention_set_noisy(s, voter, grid, m.threads)
             : scan_membership(
                   grid, [&](double a1, double a2) { return attention_set_member(s, StrategyAssignment{{a1, a2}}, voter); },
                   m.threads);
  CsvTable set({"a1", "a2", "member"});
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = i + 1; j < grid.size(); ++j)
      set.add_row({grid[i], grid[j], static_cast<long long>(scan.member(i, j))});
  CsvTable fr({"a1", "a2"});
  for (const auto& p : scan.frontier) fr.add_row({p.alpha, p.beta});
  out.artifacts.push_back({"attention_set", std::move(set)});
  out.artifacts.push_back({"attention_frontier", std::move(fr)});
}

void cmd_garble(const Scenario& s, const RunManifest& m, RunOutcome& out) {
  if (!s.news || !s.news->slant_parameter())
    throw ValidationError("garble needs a slant news technology in the scenario");
  if (!m.xi_prime) throw ValidationError("garble needs --xi-prime");
  const double xi = *s.news->slant_parameter();
  const MarkovKernel rho = slant_garbling_kernel(xi, *m.xi_prime);
  const NewsTechnology g = garble(*s.news, rho);

  CsvTable rows({"technology", "policy", "signal", "prob"});
  for (const auto* f : {&*s.news, &g}) {
    const std::string name = f == &g ? "garbled" : "original";
    for (double a : f->policies())
      for (std::size_t k = 0; k < f->signal_count(); ++k) rows.add_row({name, a, f->signals()[k], f->prob(k, a)});
  }
  out.artifacts.push_back({"garbled_news", std::move(rows)});

  if (s.assignment) {
    const StrategyAssignment a{*s.assignment};
    const double voter = m.voter ? *m.voter : default_voter(s);
    Scenario sg = s;
    sg.news = g;
    const auto x = scenario_experiment(s, a);
    const auto xg = scenario_experiment(sg, a);
    const Belief states = profile_belief(s, a, voter);
    const Belief median = profile_belief(s, a, 0.0);
    auto moments = [&](const SignalExperiment& e) {
      const Belief b = news_belief(e, states.values);
      double mean = 0.0, mexp = 0.0;
      for (std::size_t k = 0; k < b.size(); ++k) {
        mean += b.probs[k] * b.values[k];
        mexp += b.probs[k] * std::exp(b.values[k] / s.mu);
      }
      return std::pair{mean, mexp};
    };
    const auto [m0, e0] = moments(x);
    const auto [m1, e1] = moments(xg);
    CsvTable cmp({"quantity", "original", "garbled"});
    cmp.add_row({std::string("mean_posterior_value"), m0, m1});
    cmp.add_row({std::string("mean_exp_posterior_value"), e0, e1});
    cmp.add_row({std::string("extreme_signal_median_value"), extreme_signal_value(x, median.values),
                 extreme_signal_value(xg, median.values)});
    cmp.add_row({std::string("attention_member"), static_cast<double>(attention_set_member_noisy(s, a, voter)),
                 static_cast<double>(attention_set_member_noisy(sg, a, voter))});
    out.artifacts.push_back({"garble_comparison", std::move(cmp)});
  }
}

}  // namespace

RunOutcome run(const RunManifest& manifest) {
  RunOutcome out;
  try {
    manifest.validate();
    if (manifest.command == "reproduce") {
      Reproduction rep;
      if (manifest.target == "table1") {
        out.scenario_hash = scenario_hash(table1_scenario());
        rep = reproduce_table1(manifest.tolerance);
      } else if (manifest.target == "table2") {
        out.scenario_hash = scenario_hash(table1_scenario());
        rep = reproduce_table2(manifest.tolerance);
      } else if (manifest.target == "figure2") {
        out.scenario_hash = scenario_hash(figure2_scenario());
        rep = reproduce_figure2(manifest.scan_step, manifest.threads);
      } else {
        out.scenario_hash = scenario_hash(figure3_scenario(figure3_slants().front()));
        rep = reproduce_figure3(manifest.threads);
      }
      out.artifacts = std::move(rep.artifacts);
      for (auto& m : rep.mismatches) out.messages.push_back("mismatch: " + m);
      if (!rep.ok()) out.exit_code = kExitMismatch;
      return out;
    }

    const Scenario s = load_scenario(*manifest.scenario_path);
    out.scenario_hash = scenario_hash(s);
    if (manifest.command == "validate") cmd_validate(s, out);
    else if (manifest.command == "solve-attention") cmd_solve(s, manifest.voter, out);
    else if (manifest.command == "enumerate") cmd_enumerate(s, manifest, out);
    else if (manifest.command == "attention-set") cmd_attention_set(s, manifest, out);
    else if (manifest.command == "garble") cmd_garble(s, manifest, out);
    else out.artifacts.push_back({"sweep", sweep(s, manifest.sweeps, manifest.voter, manifest.threads)});
  } catch (const NumericError& e) {
    out.exit_code = kExitNumeric;
    out.artifacts.clear();
    out.messages.push_back(std::string("numeric error: ") + e.what());
  } catch (const ValidationError& e) {
    out.exit_code = kExitValidation;
    out.artifacts.clear();
    out.messages.push_back(std::string("validation error: ") + e.what());
  } catch (const std::domain_error& e) {
    out.exit_code = kExitValidation;
    out.artifacts.clear();
    out.messages.push_back(std::string("domain error: ") + e.what());
  } catch (const std::out_of_range& e) {
    out.exit_code = kExitValidation;
    out.artifacts.clear();
    out.messages.push_back(std::string("lookup error: ") + e.what());
  }
  return out;
}

void emit(const RunManifest& manifest, const RunOutcome& outcome) {
  CsvMeta meta;
  meta.tool_version = tool_version();
  meta.scenario_hash = outcome.scenario_hash;
  meta.seed = manifest.seed;
  meta.command = manifest.command + (manifest.command == "reproduce" ? " " + manifest.target : "");
  if (manifest.output_dir.empty()) {
    bool first = true;
    for (const auto& a : outcome.artifacts) {
      if (!first) std::cout << '\n';
      first = false;
      std::cout << "# artifact=" << a.name << '\n';
      write_csv(std::cout, a.table, meta);
    }
    return;
  }
  for (const auto& a : outcome.artifacts) {
    const auto path = std::filesystem::path(manifest.output_dir) / (a.name + ".csv");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot write " + path.string());
    write_csv(f, a.table, meta);
  }
}

}  // namespace polattn
