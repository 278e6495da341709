#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "polattn/election.hpp"
#include "polattn/matrix.hpp"
#include "polattn/ri_solver.hpp"
#include "polattn/scenario.hpp"
#include "polattn/technology.hpp"

namespace polattn {

// Joint model of policy profiles and news profiles for one (A, Sigma, f).
// Signals are w_mn = (-w_m, w_n), stored row-major in (m, n).
struct SignalExperiment {
  std::vector<Profile> states;
  std::vector<double> prior;
  std::vector<Profile> signals;
  Matrix<double> likelihood;  // states x signals

  std::vector<double> signal_marginal() const;
  std::size_t signal_index(std::size_t m, std::size_t n) const;
  std::size_t side_count() const;  // K
};

SignalExperiment make_experiment(const NewsTechnology& f, const MatrixTriple& triple);

// Joint kernel on the product signal space from a per-candidate kernel.
Matrix<double> product_kernel(const MarkovKernel& rho);

// Post-composition of the likelihood with a joint kernel (rows: source signals).
SignalExperiment garble_experiment(const SignalExperiment& x, const Matrix<double>& joint_kernel,
                                   std::vector<Profile> target_signals);

// pi(w', w) = P_x(w) rho(w'|w) / P_x'(w'). Rows index w'. Rows of zero-probability w' are zero.
Matrix<double> garbling_weights(const SignalExperiment& x, const Matrix<double>& joint_kernel);

// E[v | signal]. Throws UndefinedPosteriorError on a zero-probability signal.
double posterior_value(const SignalExperiment& x, std::span<const double> state_values,
                       std::size_t signal);

// Belief over positive-probability signals with values nu. dropped counts excluded cells.
Belief news_belief(const SignalExperiment& x, std::span<const double> state_values,
                   std::size_t* dropped = nullptr);

// Uses scenario.news; values follow profile_belief (commitment-aware).
SignalExperiment scenario_experiment(const Scenario& scenario, const StrategyAssignment& assignment);
Belief news_belief(const Scenario& scenario, const StrategyAssignment& assignment, double t);

AttentionSolution solve_attention_noisy(const Scenario& scenario,
                                        const StrategyAssignment& assignment, double t, double mu);

bool attention_set_member_noisy(const Scenario& scenario, const StrategyAssignment& assignment,
                                double t);

AttentionScan scan_attention_set_noisy(const Scenario& scenario, double t,
                                       std::span<const double> grid, unsigned threads = 1);

// Posterior value at the news profile (-w_K, w_1): most extreme alpha report,
// most centrist beta report. Pass median-voter values for the usual statistic.
double extreme_signal_value(const SignalExperiment& x, std::span<const double> median_values);

// Beta's expected winning probability when policies (a_alpha, a_beta) are reported
// through f and the winner is decided by the reports. When degenerate_level is set,
// reports that are possible under that common level tie at 1/2.
double noisy_win_probability(const NewsTechnology& f, double a_alpha, double a_beta,
                             std::optional<double> degenerate_level = std::nullopt);

// Expected winning matrix over the assignment's levels.
Matrix<double> noisy_winning_matrix(const NewsTechnology& f, std::span<const double> levels);

IcReport check_ic_noisy(const Scenario& scenario, const StrategyAssignment& assignment);

std::vector<GroupAttention> group_attention_noisy(const Scenario& scenario,
                                                  const StrategyAssignment& assignment);

// Refuses (ValidationError) unless the scenario is symmetric and f is strictly
// log-supermodular or fully revealing.
std::vector<EquilibriumRecord> enumerate_equilibria_noisy(const Scenario& scenario,
                                                          const EnumerationOptions& options = {});

}  // namespace polattn
