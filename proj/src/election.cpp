#include "polattn/election.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "parallel.hpp"
#include "polattn/errors.hpp"

namespace polattn {

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// Distinct sorted policy levels and the level index of each beta type.
struct Levels {
  std::vector<double> values;
  std::vector<std::size_t> of_type;
  std::vector<double> mass;
};

Levels make_levels(const Scenario& s, const StrategyAssignment& a) {
  const auto types = s.beta_candidate.types();
  if (a.beta_policy.size() != types.size())
    throw ValidationError("assignment has " + std::to_string(a.beta_policy.size()) +
                          " policies for " + std::to_string(types.size()) + " candidate types");
  Levels lv;
  lv.values = a.beta_policy;
  std::sort(lv.values.begin(), lv.values.end());
  lv.values.erase(std::unique(lv.values.begin(), lv.values.end()), lv.values.end());
  for (double x : lv.values)
    if (!(x > 0.0 && x <= 1.0)) throw ValidationError("assignment policy " + num(x) + " outside (0,1]");
  lv.mass.assign(lv.values.size(), 0.0);
  for (std::size_t k = 0; k < types.size(); ++k) {
    const auto it = std::lower_bound(lv.values.begin(), lv.values.end(), a.beta_policy[k]);
    const std::size_t i = static_cast<std::size_t>(it - lv.values.begin());
    lv.of_type.push_back(i);
    lv.mass[i] += types[k].prob;
  }
  if (s.eta < 1.0) {
    for (std::size_t k = 1; k < a.beta_policy.size(); ++k)
      if (!(a.beta_policy[k] > a.beta_policy[k - 1]))
        throw ValidationError("limited commitment needs a strictly increasing type-to-policy map");
  }
  return lv;
}

// Off-path vote of a fully informed voter: 1 if beta is better, 1/2 if indifferent.
double informed_vote(double v) {
  if (v > 1e-12) return 1.0;
  if (v < -1e-12) return 0.0;
  return 0.5;
}

std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) return std::numeric_limits<std::size_t>::max();
  return a * b;
}

}  // namespace

std::vector<double> StrategyAssignment::alpha_policy() const {
  std::vector<double> out(beta_policy.size());
  for (std::size_t k = 0; k < beta_policy.size(); ++k) out[k] = -beta_policy[k];
  return out;
}

double MatrixTriple::diagonal_mass() const {
  double d = 0.0;
  for (std::size_t i = 0; i < order(); ++i) d += sigma(i, i);
  return d;
}

void MatrixTriple::validate() const {
  const std::size_t n = order();
  if (n == 0) throw ValidationError("matrix triple has no levels");
  if (sigma.rows() != n || sigma.cols() != n || winning.rows() != n || winning.cols() != n)
    throw ValidationError("matrix triple dimensions disagree");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(levels[i] > 0.0 && levels[i] <= 1.0)) throw ValidationError("matrix triple level outside (0,1]");
    if (i > 0 && !(levels[i] > levels[i - 1])) throw ValidationError("matrix triple levels not increasing");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!(sigma(i, j) > 0.0)) throw ValidationError("probability matrix has a non-positive entry");
      if (std::abs(sigma(i, j) - sigma(j, i)) > kProbTolerance)
        throw ValidationError("probability matrix is not symmetric");
      const double w = winning(i, j);
      if (w != 0.0 && w != 0.5 && w != 1.0) throw ValidationError("winning matrix entry outside {0,1/2,1}");
      total += sigma(i, j);
    }
  if (std::abs(total - 1.0) > kProbTolerance) throw ValidationError("probability matrix does not sum to 1");
}

double downsian_winner(const UtilitySpec& spec, double a_alpha, double a_beta) {
  const double ub = voter_utility(spec, a_beta, 0.0);
  const double ua = voter_utility(spec, a_alpha, 0.0);
  if (std::abs(ub - ua) <= 1e-12) return 0.5;
  return ub > ua ? 1.0 : 0.0;
}

Matrix<double> downsian_matrix(const UtilitySpec& spec, std::span<const double> levels) {
  const std::size_t n = levels.size();
  Matrix<double> w(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) w(i, j) = downsian_winner(spec, -levels[i], levels[j]);
  return w;
}

void validate_assignment(const Scenario& scenario, const StrategyAssignment& assignment) {
  (void)make_levels(scenario, assignment);
  for (double a : assignment.beta_policy)
    if (!scenario.beta_policies.contains(a))
      throw ValidationError("assignment policy " + num(a) + " is not on the beta grid");
}

MatrixTriple matrix_triple(const Scenario& scenario, const StrategyAssignment& assignment) {
  const Levels lv = make_levels(scenario, assignment);
  MatrixTriple m;
  m.levels = lv.values;
  const std::size_t n = lv.values.size();
  m.sigma = Matrix<double>(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m.sigma(i, j) = lv.mass[i] * lv.mass[j];
  m.winning = downsian_matrix(scenario.utility, m.levels);
  return m;
}

Belief triple_belief(const UtilitySpec& spec, const MatrixTriple& triple, double t) {
  Belief b;
  const std::size_t n = triple.order();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Profile p = triple.profile(i, j);
      b.support.push_back(p);
      b.probs.push_back(triple.sigma(i, j));
      b.values.push_back(differential_utility(spec, p, t));
    }
  return b;
}

Belief profile_belief(const Scenario& scenario, const StrategyAssignment& assignment, double t) {
  const Levels lv = make_levels(scenario, assignment);
  const MatrixTriple triple = matrix_triple(scenario, assignment);
  Belief b = triple_belief(scenario.utility, triple, t);
  if (scenario.eta == 1.0) return b;

  // Type behind each level; the map is a bijection when strictly increasing.
  std::vector<double> level_type(lv.values.size());
  const auto types = scenario.beta_candidate.types();
  for (std::size_t k = 0; k < types.size(); ++k) level_type[lv.of_type[k]] = types[k].type;
  const std::size_t n = triple.order();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double v_type = differential_utility(scenario.utility, {-level_type[i], level_type[j]}, t);
      double& v = b.values[i * n + j];
      v = scenario.eta * v + (1.0 - scenario.eta) * v_type;
    }
  return b;
}

bool attentive(const Belief& belief, double mu) {
  Belief mirrored = belief;
  for (double& v : mirrored.values) v = -v;
  return attention_membership(belief, mu) && attention_membership(mirrored, mu);
}

double WinningMatrix::at(double a_alpha, double a_beta) const {
  auto find = [](const std::vector<double>& xs, double x) -> std::size_t {
    auto it = std::lower_bound(xs.begin(), xs.end(), x - 1e-12);
    if (it == xs.end() || std::abs(*it - x) > 1e-12) throw LookupError("winning matrix has no policy " + num(x));
    return static_cast<std::size_t>(it - xs.begin());
  };
  return w(find(alpha_policies, a_alpha), find(beta_policies, a_beta));
}

double share_to_win(double share) {
  if (std::abs(share - 0.5) <= kTolerance) return 0.5;
  return share > 0.5 ? 1.0 : 0.0;
}

WinningMatrix aggregate_and_rationalize(const Scenario& scenario, const StrategyAssignment& assignment) {
  scenario.require_symmetric("aggregate_and_rationalize");
  validate_assignment(scenario, assignment);
  const MatrixTriple triple = matrix_triple(scenario, assignment);
  const std::size_t n = triple.order();

  const auto groups = scenario.electorate.groups();
  std::vector<AttentionSolution> sols;
  for (const auto& g : groups) sols.push_back(solve_attention(profile_belief(scenario, assignment, g.type), scenario.mu));

  WinningMatrix wm;
  wm.alpha_policies.assign(scenario.alpha_policies.values().begin(), scenario.alpha_policies.values().end());
  wm.beta_policies.assign(scenario.beta_policies.values().begin(), scenario.beta_policies.values().end());
  const std::size_t na = wm.alpha_policies.size(), nb = wm.beta_policies.size();
  wm.w = Matrix<double>(na, nb);
  wm.on_path = Matrix<char>(na, nb, 0);

  for (std::size_t r = 0; r < na; ++r)
    for (std::size_t c = 0; c < nb; ++c) {
      const Profile p{wm.alpha_policies[r], wm.beta_policies[c]};
      double share = 0.0;
      for (const auto& g : groups) share += g.weight * informed_vote(differential_utility(scenario.utility, p, g.type));
      wm.w(r, c) = share_to_win(share);
    }

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double share = 0.0;
      for (std::size_t g = 0; g < groups.size(); ++g) share += groups[g].weight * sols[g].m[i * n + j];
      wm.vote_share_on_path.push_back(share);
      const auto r = scenario.alpha_policies.find(-triple.levels[i]);
      const auto c = scenario.beta_policies.find(triple.levels[j]);
      wm.w(*r, *c) = share_to_win(share);
      wm.on_path(*r, *c) = 1;
    }
  return wm;
}

IcReport check_ic(const Scenario& scenario, const StrategyAssignment& assignment, const WinFunction& win) {
  validate_assignment(scenario, assignment);
  const auto types = scenario.beta_candidate.types();
  const double eta = scenario.eta;
  const auto& spec = scenario.utility;

  auto payoff = [&](double a, std::size_t k) {
    const double tk = types[k].type;
    double v = 0.0;
    for (std::size_t l = 0; l < types.size(); ++l) {
      const double opp = -assignment.beta_policy[l];
      const double opp_type = -types[l].type;
      const double w = win(opp, a);
      const StagePayoffs own = candidate_stage_payoffs(spec, a, opp, tk);
      double win_value = own.win_value;
      double lose_value = own.lose_value;
      if (eta < 1.0) {
        // The winner keeps the promise with probability eta, else plays his type.
        win_value = eta * win_value + (1.0 - eta) * candidate_stage_payoffs(spec, tk, opp, tk).win_value;
        lose_value = eta * lose_value + (1.0 - eta) * candidate_stage_payoffs(spec, a, opp_type, tk).lose_value;
      }
      v += types[l].prob * (w * win_value + (1.0 - w) * lose_value);
    }
    return v;
  };

  IcReport rep;
  rep.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < types.size(); ++k) {
    const double own = payoff(assignment.beta_policy[k], k);
    double best_alt = -std::numeric_limits<double>::infinity();
    for (double a : scenario.beta_policies.values()) {
      if (a == assignment.beta_policy[k]) continue;
      best_alt = std::max(best_alt, payoff(a, k));
    }
    const double gap = own - best_alt;
    rep.type_gaps.push_back(gap);
    rep.min_gap = std::min(rep.min_gap, gap);
  }
  rep.incentive_compatible = rep.min_gap >= -kTolerance;
  return rep;
}

IcReport check_ic(const Scenario& scenario, const StrategyAssignment& assignment, WinSource source) {
  if (source == WinSource::Downsian) {
    const auto& spec = scenario.utility;
    return check_ic(scenario, assignment, [&spec](double aa, double ab) { return downsian_winner(spec, aa, ab); });
  }
  const WinningMatrix wm = aggregate_and_rationalize(scenario, assignment);
  return check_ic(scenario, assignment, [&wm](double aa, double ab) { return wm.at(aa, ab); });
}

double EquilibriumRecord::total_information() const {
  double s = 0.0;
  for (const auto& g : attention) s += g.group.weight * g.solution.information;
  return s;
}

std::size_t assignment_space_size(const Scenario& scenario) {
  const std::size_t g = scenario.beta_policies.size();
  const std::size_t k = scenario.beta_candidate.size();
  if (scenario.eta < 1.0) {
    if (k > g) return 0;
    // C(g, k) with saturation.
    std::size_t c = 1;
    for (std::size_t i = 1; i <= k; ++i) {
      c = saturating_mul(c, g - k + i);
      if (c == std::numeric_limits<std::size_t>::max()) return c;
      c /= i;
    }
    return c;
  }
  std::size_t n = 1;
  for (std::size_t i = 0; i < k; ++i) n = saturating_mul(n, g);
  return n;
}

void for_each_assignment(const Scenario& scenario, const std::function<void(const StrategyAssignment&)>& fn) {
  const auto grid = scenario.beta_policies.values();
  const std::size_t g = grid.size(), k = scenario.beta_candidate.size();
  const bool increasing = scenario.eta < 1.0;
  if (k == 0 || (increasing && k > g)) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = increasing ? i : 0;
  StrategyAssignment a;
  a.beta_policy.resize(k);
  for (;;) {
    for (std::size_t i = 0; i < k; ++i) a.beta_policy[i] = grid[idx[i]];
    fn(a);
    // Odometer, last type least significant.
    std::size_t pos = k;
    while (pos > 0) {
      --pos;
      const std::size_t limit = increasing ? g - (k - pos) : g - 1;
      if (idx[pos] < limit) {
        ++idx[pos];
        for (std::size_t j = pos + 1; j < k; ++j) idx[j] = increasing ? idx[j - 1] + 1 : 0;
        break;
      }
      if (pos == 0) return;
    }
  }
}

std::vector<GroupAttention> group_attention(const Scenario& scenario, const StrategyAssignment& assignment) {
  std::vector<GroupAttention> out;
  for (const auto& g : scenario.electorate.groups()) {
    const Belief b = profile_belief(scenario, assignment, g.type);
    out.push_back({g, solve_attention(b, scenario.mu), attentive(b, scenario.mu)});
  }
  return out;
}

std::vector<EquilibriumRecord> enumerate_equilibria(const Scenario& scenario, const EnumerationOptions& options) {
  scenario.validate();
  scenario.require_symmetric("enumerate_equilibria");
  const std::size_t space = assignment_space_size(scenario);
  if (space > options.max_assignments)
    throw ValidationError("enumerate_equilibria: " + std::to_string(space) + " assignments exceed the cap of " +
                          std::to_string(options.max_assignments) + "; refusing");

  std::vector<StrategyAssignment> all;
  all.reserve(space);
  for_each_assignment(scenario, [&](const StrategyAssignment& a) { all.push_back(a); });

  std::vector<char> keep(all.size(), 0);
  std::vector<IcReport> reports(all.size());
  detail::parallel_for(all.size(), options.threads, [&](std::size_t i) {
    reports[i] = check_ic(scenario, all[i], options.source);
    keep[i] = reports[i].incentive_compatible ? 1 : 0;
  });

  std::vector<EquilibriumRecord> out;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (!keep[i]) continue;
    EquilibriumRecord rec;
    rec.assignment = all[i];
    rec.triple = matrix_triple(scenario, all[i]);
    rec.attention = group_attention(scenario, all[i]);
    rec.ic = reports[i];
    if (options.verify_rationalization) {
      const WinningMatrix wm = aggregate_and_rationalize(scenario, all[i]);
      bool agree = true;
      const std::size_t n = rec.triple.order();
      for (std::size_t r = 0; r < n && agree; ++r)
        for (std::size_t c = 0; c < n && agree; ++c)
          agree = wm.at(-rec.triple.levels[r], rec.triple.levels[c]) == rec.triple.winning(r, c);
      rec.rationalization_verified = agree;
    }
    out.push_back(std::move(rec));
  }
  return out;
}

bool attention_set_member(const Scenario& scenario, const StrategyAssignment& assignment, double t) {
  Belief b = profile_belief(scenario, assignment, t);
  if (t < 0.0) return attention_membership(b, scenario.mu);
  if (t > 0.0) {
    for (double& v : b.values) v = -v;
    return attention_membership(b, scenario.mu);
  }
  return attentive(b, scenario.mu);
}

AttentionScan scan_membership(std::span<const double> grid, const std::function<bool(double, double)>& member,
                              unsigned threads) {
  AttentionScan scan;
  scan.grid.assign(grid.begin(), grid.end());
  const std::size_t n = grid.size();
  scan.member = Matrix<signed char>(n, n, -1);
  detail::parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) scan.member(i, j) = member(grid[i], grid[j]) ? 1 : 0;
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (scan.member(i, j) == 1) {
        scan.frontier.push_back({grid[i], grid[j]});
        break;
      }
  return scan;
}

AttentionScan scan_attention_set(const Scenario& scenario, double t, std::span<const double> grid) {
  if (scenario.beta_candidate.size() != 2)
    throw ValidationError("attention-set scans need exactly two candidate types");
  return scan_membership(grid, [&](double a1, double a2) {
    return attention_set_member(scenario, StrategyAssignment{{a1, a2}}, t);
  });
}

TruncationResult truncation_statistic(const Scenario& scenario, std::span<const EquilibriumRecord> records,
                                      double t, double mu) {
  Scenario s = scenario;
  s.mu = mu;
  TruncationResult out;
  for (std::size_t r = 0; r < records.size(); ++r) {
    if (!attention_set_member(s, records[r].assignment, t)) continue;
    out.members.push_back(r);
    const auto& lv = records[r].triple.levels;
    const double d = voter_utility(s.utility, lv.front(), 0.0) - voter_utility(s.utility, lv.back(), 0.0);
    if (!out.min_differential || d < *out.min_differential) out.min_differential = d;
  }
  return out;
}

}  // namespace polattn
