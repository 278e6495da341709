#include "polattn/news.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "parallel.hpp"
#include "polattn/errors.hpp"

namespace polattn {

std::vector<double> SignalExperiment::signal_marginal() const {
  std::vector<double> p(signals.size(), 0.0);
  for (std::size_t k = 0; k < states.size(); ++k)
    for (std::size_t s = 0; s < signals.size(); ++s) p[s] += prior[k] * likelihood(k, s);
  return p;
}

std::size_t SignalExperiment::side_count() const {
  const auto k = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(signals.size()))));
  return k;
}

std::size_t SignalExperiment::signal_index(std::size_t m, std::size_t n) const {
  const std::size_t k = side_count();
  if (m >= k || n >= k) throw LookupError("signal index out of range");
  return m * k + n;
}

SignalExperiment make_experiment(const NewsTechnology& f, const MatrixTriple& triple) {
  SignalExperiment x;
  const std::size_t n = triple.order(), k = f.signal_count();
  std::vector<std::vector<double>> pmf(n);
  for (std::size_t i = 0; i < n; ++i) pmf[i] = f.pmf(triple.levels[i]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      x.states.push_back(triple.profile(i, j));
      x.prior.push_back(triple.sigma(i, j));
    }
  for (std::size_t m = 0; m < k; ++m)
    for (std::size_t q = 0; q < k; ++q) x.signals.push_back({-f.signals()[m], f.signals()[q]});
  x.likelihood = Matrix<double>(n * n, k * k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t m = 0; m < k; ++m)
        for (std::size_t q = 0; q < k; ++q) x.likelihood(i * n + j, m * k + q) = pmf[i][m] * pmf[j][q];
  return x;
}

Matrix<double> product_kernel(const MarkovKernel& rho) {
  const std::size_t k = rho.source_size(), kp = rho.target_size();
  Matrix<double> joint(k * k, kp * kp);
  for (std::size_t m = 0; m < k; ++m)
    for (std::size_t n = 0; n < k; ++n)
      for (std::size_t mp = 0; mp < kp; ++mp)
        for (std::size_t np = 0; np < kp; ++np) joint(m * k + n, mp * kp + np) = rho(m, mp) * rho(n, np);
  return joint;
}

SignalExperiment garble_experiment(const SignalExperiment& x, const Matrix<double>& joint_kernel,
                                   std::vector<Profile> target_signals) {
  if (joint_kernel.rows() != x.signals.size() || joint_kernel.cols() != target_signals.size())
    throw ValidationError("garble_experiment: kernel dimensions do not conform");
  (void)MarkovKernel(joint_kernel);  // validates row-stochasticity
  SignalExperiment y;
  y.states = x.states;
  y.prior = x.prior;
  y.signals = std::move(target_signals);
  y.likelihood = Matrix<double>(x.states.size(), y.signals.size(), 0.0);
  for (std::size_t k = 0; k < x.states.size(); ++k)
    for (std::size_t to = 0; to < y.signals.size(); ++to) {
      double s = 0.0;
      for (std::size_t from = 0; from < x.signals.size(); ++from) s += x.likelihood(k, from) * joint_kernel(from, to);
      y.likelihood(k, to) = s;
    }
  return y;
}

Matrix<double> garbling_weights(const SignalExperiment& x, const Matrix<double>& joint_kernel) {
  const auto p = x.signal_marginal();
  const std::size_t ns = x.signals.size(), nt = joint_kernel.cols();
  if (joint_kernel.rows() != ns) throw ValidationError("garbling_weights: kernel dimensions do not conform");
  Matrix<double> pi(nt, ns, 0.0);
  for (std::size_t to = 0; to < nt; ++to) {
    double total = 0.0;
    for (std::size_t from = 0; from < ns; ++from) total += p[from] * joint_kernel(from, to);
    if (!(total > 0.0)) continue;
    for (std::size_t from = 0; from < ns; ++from) pi(to, from) = p[from] * joint_kernel(from, to) / total;
  }
  return pi;
}

double posterior_value(const SignalExperiment& x, std::span<const double> state_values, std::size_t signal) {
  if (state_values.size() != x.states.size()) throw ValidationError("posterior_value: one value per state required");
  if (signal >= x.signals.size()) throw LookupError("posterior_value: signal index out of range");
  double total = 0.0;
  for (std::size_t k = 0; k < x.states.size(); ++k) total += x.prior[k] * x.likelihood(k, signal);
  if (!(total > 0.0)) {
    std::ostringstream os;
    os << "posterior undefined: signal (" << x.signals[signal].alpha << ", " << x.signals[signal].beta
       << ") has zero probability";
    throw UndefinedPosteriorError(os.str());
  }
  // Normalised weights first so a single-state posterior returns the value exactly.
  double nu = 0.0;
  for (std::size_t k = 0; k < x.states.size(); ++k) {
    const double pi = x.prior[k] * x.likelihood(k, signal) / total;
    nu += pi * state_values[k];
  }
  return nu;
}

Belief news_belief(const SignalExperiment& x, std::span<const double> state_values, std::size_t* dropped) {
  const auto p = x.signal_marginal();
  Belief b;
  std::size_t skipped = 0;
  for (std::size_t s = 0; s < x.signals.size(); ++s) {
    if (!(p[s] > 0.0)) {
      ++skipped;
      continue;
    }
    b.support.push_back(x.signals[s]);
    b.probs.push_back(p[s]);
    b.values.push_back(posterior_value(x, state_values, s));
  }
  if (dropped) *dropped = skipped;
  return b;
}

SignalExperiment scenario_experiment(const Scenario& scenario, const StrategyAssignment& assignment) {
  if (!scenario.news) throw ValidationError("scenario has no news technology");
  return make_experiment(*scenario.news, matrix_triple(scenario, assignment));
}

Belief news_belief(const Scenario& scenario, const StrategyAssignment& assignment, double t) {
  const SignalExperiment x = scenario_experiment(scenario, assignment);
  const Belief states = profile_belief(scenario, assignment, t);
  return news_belief(x, states.values);
}

AttentionSolution solve_attention_noisy(const Scenario& scenario, const StrategyAssignment& assignment, double t,
                                        double mu) {
  return solve_attention(news_belief(scenario, assignment, t), mu);
}

bool attention_set_member_noisy(const Scenario& scenario, const StrategyAssignment& assignment, double t) {
  Belief b = news_belief(scenario, assignment, t);
  if (t < 0.0) return attention_membership(b, scenario.mu);
  if (t > 0.0) {
    for (double& v : b.values) v = -v;
    return attention_membership(b, scenario.mu);
  }
  return attentive(b, scenario.mu);
}

AttentionScan scan_attention_set_noisy(const Scenario& scenario, double t, std::span<const double> grid,
                                       unsigned threads) {
  if (scenario.beta_candidate.size() != 2)
    throw ValidationError("attention-set scans need exactly two candidate types");
  return scan_membership(
      grid,
      [&](double a1, double a2) { return attention_set_member_noisy(scenario, StrategyAssignment{{a1, a2}}, t); },
      threads);
}

double extreme_signal_value(const SignalExperiment& x, std::span<const double> median_values) {
  const std::size_t k = x.side_count();
  return posterior_value(x, median_values, x.signal_index(k - 1, 0));
}

double noisy_win_probability(const NewsTechnology& f, double a_alpha, double a_beta,
                             std::optional<double> degenerate_level) {
  const std::size_t k = f.signal_count();
  const auto pa = f.pmf(-a_alpha);
  const auto pb = f.pmf(a_beta);
  std::vector<double> on_path;
  if (degenerate_level) on_path = f.pmf(*degenerate_level);
  double w = 0.0;
  for (std::size_t m = 0; m < k; ++m)
    for (std::size_t n = 0; n < k; ++n) {
      double hat = n < m ? 1.0 : (n == m ? 0.5 : 0.0);
      if (degenerate_level && on_path[m] > 0.0 && on_path[n] > 0.0) hat = 0.5;
      w += hat * pa[m] * pb[n];
    }
  return w;
}

Matrix<double> noisy_winning_matrix(const NewsTechnology& f, std::span<const double> levels) {
  const std::size_t n = levels.size();
  Matrix<double> w(n, n);
  std::optional<double> degenerate;
  if (n == 1) degenerate = levels[0];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) w(i, j) = noisy_win_probability(f, -levels[i], levels[j], degenerate);
  return w;
}

IcReport check_ic_noisy(const Scenario& scenario, const StrategyAssignment& assignment) {
  if (!scenario.news) throw ValidationError("check_ic_noisy: scenario has no news technology");
  const auto& f = *scenario.news;
  std::optional<double> degenerate;
  const auto& bp = assignment.beta_policy;
  if (!bp.empty() && std::all_of(bp.begin(), bp.end(), [&](double a) { return a == bp.front(); }))
    degenerate = bp.front();
  return check_ic(scenario, assignment,
                  [&](double aa, double ab) { return noisy_win_probability(f, aa, ab, degenerate); });
}

std::vector<GroupAttention> group_attention_noisy(const Scenario& scenario, const StrategyAssignment& assignment) {
  std::vector<GroupAttention> out;
  for (const auto& g : scenario.electorate.groups()) {
    const Belief b = news_belief(scenario, assignment, g.type);
    out.push_back({g, solve_attention(b, scenario.mu), attentive(b, scenario.mu)});
  }
  return out;
}

std::vector<EquilibriumRecord> enumerate_equilibria_noisy(const Scenario& scenario,
                                                          const EnumerationOptions& options) {
  scenario.validate();
  scenario.require_symmetric("enumerate_equilibria_noisy");
  if (!scenario.news) throw ValidationError("enumerate_equilibria_noisy: scenario has no news technology");
  const auto& f = *scenario.news;
  if (!f.is_fully_revealing()) {
    const auto lsm = check_log_supermodularity(f);
    if (!lsm.passed())
      throw ValidationError(std::string("enumerate_equilibria_noisy: news technology is not strictly "
                                        "log-supermodular (") +
                            to_string(lsm.status) + "): " + lsm.detail);
  }
  const std::size_t space = assignment_space_size(scenario);
  if (space > options.max_assignments)
    throw ValidationError("enumerate_equilibria_noisy: " + std::to_string(space) +
                          " assignments exceed the cap of " + std::to_string(options.max_assignments) +
                          "; refusing");

  std::vector<StrategyAssignment> all;
  all.reserve(space);
  for_each_assignment(scenario, [&](const StrategyAssignment& a) { all.push_back(a); });
  std::vector<IcReport> reports(all.size());
  detail::parallel_for(all.size(), options.threads,
                       [&](std::size_t i) { reports[i] = check_ic_noisy(scenario, all[i]); });

  std::vector<EquilibriumRecord> out;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (!reports[i].incentive_compatible) continue;
    EquilibriumRecord rec;
    rec.assignment = all[i];
    rec.triple = matrix_triple(scenario, all[i]);
    rec.triple.winning = noisy_winning_matrix(f, rec.triple.levels);
    rec.attention = group_attention_noisy(scenario, all[i]);
    rec.ic = reports[i];
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace polattn
