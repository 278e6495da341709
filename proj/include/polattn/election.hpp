#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "polattn/core.hpp"
#include "polattn/matrix.hpp"
#include "polattn/ri_solver.hpp"
#include "polattn/scenario.hpp"

namespace polattn {

// Pure symmetric strategy: beta type k proposes beta_policy[k], alpha type -t_k
// proposes -beta_policy[k].
struct StrategyAssignment {
  std::vector<double> beta_policy;

  std::vector<double> alpha_policy() const;
  friend bool operator==(const StrategyAssignment&, const StrategyAssignment&) = default;
  friend auto operator<=>(const StrategyAssignment&, const StrategyAssignment&) = default;
};

// Policy levels a_1 < ... < a_N, probability matrix and winning matrix.
// Entry (i,j) is the profile (-a_i, a_j).
struct MatrixTriple {
  std::vector<double> levels;
  Matrix<double> sigma;
  Matrix<double> winning;

  std::size_t order() const noexcept { return levels.size(); }
  Profile profile(std::size_t i, std::size_t j) const { return {-levels[i], levels[j]}; }
  double diagonal_mass() const;
  // Positive, symmetric, summing to one; winning entries in {0, 1/2, 1}.
  void validate() const;
};

// Closer-to-center candidate wins, ties split. Returns beta's winning probability.
double downsian_winner(const UtilitySpec& spec, double a_alpha, double a_beta);

// Downsian matrix for arbitrary levels.
Matrix<double> downsian_matrix(const UtilitySpec& spec, std::span<const double> levels);

// Policy level of every beta type. Under eta < 1 the map must be strictly increasing.
void validate_assignment(const Scenario& scenario, const StrategyAssignment& assignment);

// Sigma from the candidate type probabilities and W = downsian matrix.
MatrixTriple matrix_triple(const Scenario& scenario, const StrategyAssignment& assignment);

// Voter t's belief over on-path profiles. Values are v, or the commitment-adjusted
// value when scenario.eta < 1.
Belief profile_belief(const Scenario& scenario, const StrategyAssignment& assignment, double t);

// Belief for an arbitrary (A, Sigma), values v(a_ij, t).
Belief triple_belief(const UtilitySpec& spec, const MatrixTriple& triple, double t);

// Attention on both sides: E[exp(v/mu)] >= 1 and E[exp(-v/mu)] >= 1 (interior regime).
bool attentive(const Belief& belief, double mu);

// Winning probability of beta on the full grid A_alpha x A_beta.
struct WinningMatrix {
  std::vector<double> alpha_policies;
  std::vector<double> beta_policies;
  Matrix<double> w;
  Matrix<char> on_path;
  std::vector<double> vote_share_on_path;  // row-major over on-path cells

  double at(double a_alpha, double a_beta) const;
};

// Vote share -> {0, 1/2, 1} with tolerance 1e-9 around 1/2.
double share_to_win(double share);

WinningMatrix aggregate_and_rationalize(const Scenario& scenario,
                                        const StrategyAssignment& assignment);

enum class WinSource { Rationalized, Downsian };

struct IcReport {
  bool incentive_compatible = false;
  double min_gap = 0.0;
  // Per beta type: assigned payoff minus the best alternative payoff.
  std::vector<double> type_gaps;
};

// Beta side; alpha follows by symmetry.
IcReport check_ic(const Scenario& scenario, const StrategyAssignment& assignment,
                  WinSource source);

// Same check with a caller-supplied winning probability w(a_alpha, a_beta).
using WinFunction = std::function<double(double, double)>;
IcReport check_ic(const Scenario& scenario, const StrategyAssignment& assignment,
                  const WinFunction& win);

struct GroupAttention {
  VoterGroup group;
  AttentionSolution solution;
  bool attentive = false;
};

struct EquilibriumRecord {
  StrategyAssignment assignment;
  MatrixTriple triple;
  std::vector<GroupAttention> attention;
  IcReport ic;
  // Set in verify mode: rationalized on-path W equals the Downsian matrix.
  std::optional<bool> rationalization_verified;

  // Sum over groups of weight * I.
  double total_information() const;
};

struct EnumerationOptions {
  std::size_t max_assignments = 2'000'000;
  unsigned threads = 1;
  bool verify_rationalization = false;
  WinSource source = WinSource::Downsian;
};

// Number of pure symmetric maps the enumerator would visit.
std::size_t assignment_space_size(const Scenario& scenario);

// Calls fn on every candidate assignment in lexicographic order.
void for_each_assignment(const Scenario& scenario,
                         const std::function<void(const StrategyAssignment&)>& fn);

std::vector<GroupAttention> group_attention(const Scenario& scenario,
                                            const StrategyAssignment& assignment);

std::vector<EquilibriumRecord> enumerate_equilibria(const Scenario& scenario,
                                                    const EnumerationOptions& options = {});

// Membership of voter t in the attention set of the given assignment.
bool attention_set_member(const Scenario& scenario, const StrategyAssignment& assignment,
                          double t);

struct AttentionScan {
  std::vector<double> grid;
  // member(i, j) for a1 = grid[i] < a2 = grid[j]; -1 where a2 <= a1.
  Matrix<signed char> member;
  // Polyline: for each a1 with some member, the smallest member a2.
  std::vector<Profile> frontier;  // alpha field holds a1, beta field holds a2
};

// Two-type scan: assignment {a1, a2} over all a1 < a2 in grid.
AttentionScan scan_attention_set(const Scenario& scenario, double t, std::span<const double> grid);

// Scan with an arbitrary membership predicate.
AttentionScan scan_membership(std::span<const double> grid,
                              const std::function<bool(double, double)>& member,
                              unsigned threads = 1);

struct TruncationResult {
  std::vector<std::size_t> members;  // indices into the record list
  std::optional<double> min_differential;
};

TruncationResult truncation_statistic(const Scenario& scenario,
                                      std::span<const EquilibriumRecord> records, double t,
                                      double mu);

}  // namespace polattn
