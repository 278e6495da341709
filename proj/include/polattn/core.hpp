#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace polattn {

// Absolute tolerance for threshold comparisons unless an operation says otherwise.
inline constexpr double kTolerance = 1e-9;
// Tolerance for probability vectors summing to one.
inline constexpr double kProbTolerance = 1e-12;

enum class Side { Alpha, Beta };

const char* to_string(Side side) noexcept;

// (a_alpha, a_beta). Also used for news profiles (-omega_m, omega_n).
struct Profile {
  double alpha = 0.0;
  double beta = 0.0;
  friend bool operator==(const Profile&, const Profile&) = default;
};

// Finite policy grid of one candidate. Alpha grids live in [-1,0), beta grids in (0,1].
class PolicyAxis {
 public:
  PolicyAxis() = default;
  PolicyAxis(Side side, std::vector<double> values);

  static PolicyAxis mirror_of(const PolicyAxis& other);

  Side side() const noexcept { return side_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_.at(i); }

  std::optional<std::size_t> find(double value, double tol = 1e-12) const;
  bool contains(double value, double tol = 1e-12) const { return find(value, tol).has_value(); }

  // True when this grid is the exact element-wise negation of other.
  bool mirrors(const PolicyAxis& other) const;

 private:
  Side side_ = Side::Beta;
  std::vector<double> values_;
};

// Voter utility on a finite (policy, type) lattice.
class UtilityTable {
 public:
  // values is row-major: policies.size() rows, types.size() columns.
  UtilityTable(std::vector<double> policies, std::vector<double> types, std::vector<double> values);

  double at(double a, double t) const;
  std::span<const double> policies() const noexcept { return policies_; }
  std::span<const double> types() const noexcept { return types_; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> policies_;
  std::vector<double> types_;
  std::vector<double> values_;
};

enum class VoterFamily { AbsoluteLoss, Quadratic, Tabulated };

const char* to_string(VoterFamily family) noexcept;

// Candidate payoffs: winner gets R - delta_plus*|t-a|, loser gets
// loser_sign * delta_minus * |t - a'| where a' is the winning policy.
struct CandidateParams {
  double office_rent = 0.0;
  double winner_weight = 0.0;
  double loser_weight = 0.0;
  int loser_sign = -1;

  friend bool operator==(const CandidateParams&, const CandidateParams&) = default;
};

class UtilitySpec {
 public:
  UtilitySpec() = default;

  static UtilitySpec absolute_loss(CandidateParams params = {});
  static UtilitySpec quadratic(CandidateParams params = {});
  static UtilitySpec tabulated(UtilityTable table, CandidateParams params = {});

  VoterFamily family() const noexcept { return family_; }
  const CandidateParams& candidate() const noexcept { return candidate_; }
  const UtilityTable* table() const noexcept { return table_.get(); }
  bool builtin() const noexcept { return family_ != VoterFamily::Tabulated; }

  UtilitySpec with_candidate(CandidateParams params) const;

 private:
  VoterFamily family_ = VoterFamily::AbsoluteLoss;
  CandidateParams candidate_{};
  std::shared_ptr<const UtilityTable> table_;
};

struct CandidateType {
  double type = 0.0;
  double prob = 0.0;
  friend bool operator==(const CandidateType&, const CandidateType&) = default;
};

class CandidateSpec {
 public:
  CandidateSpec() = default;
  // Types must be strictly increasing; alpha types in [-1,0], beta types in [0,1].
  CandidateSpec(Side side, std::vector<CandidateType> types);

  static CandidateSpec mirror_of(const CandidateSpec& other);

  Side side() const noexcept { return side_; }
  std::span<const CandidateType> types() const noexcept { return types_; }
  std::size_t size() const noexcept { return types_.size(); }
  bool mirrors(const CandidateSpec& other) const;

 private:
  Side side_ = Side::Beta;
  std::vector<CandidateType> types_;
};

struct VoterGroup {
  double type = 0.0;
  double weight = 0.0;
  friend bool operator==(const VoterGroup&, const VoterGroup&) = default;
};

class Electorate {
 public:
  Electorate() = default;
  explicit Electorate(std::vector<VoterGroup> groups);

  std::span<const VoterGroup> groups() const noexcept { return groups_; }
  std::size_t size() const noexcept { return groups_.size(); }
  bool symmetric() const;

 private:
  std::vector<VoterGroup> groups_;
};

double voter_utility(const UtilitySpec& spec, double a, double t);

// v(a,t) = u(a_beta,t) - u(a_alpha,t).
double differential_utility(const UtilitySpec& spec, Profile profile, double t);

struct StagePayoffs {
  double win_value = 0.0;
  double lose_value = 0.0;
};

StagePayoffs candidate_stage_payoffs(const UtilitySpec& spec, double own_policy,
                                     double opponent_policy, double own_type);

// Smallest kappa with v(a,t) - v(a,0) >= kappa*t over every configured positive
// voter type and every profile of the two grids. Empty when no positive group exists.
std::optional<double> derive_kappa(const UtilitySpec& spec, const PolicyAxis& alpha,
                                   const PolicyAxis& beta, const Electorate& electorate);

struct AuditFinding {
  std::string check;
  bool passed = true;
  std::string detail;
};

struct UtilityAudit {
  std::vector<AuditFinding> findings;
  std::optional<double> kappa;
  bool ok() const;
  std::string failure_summary() const;
};

// Symmetry, single-peakedness, concavity, strict increasing differences and the
// kappa condition, all on the configured grids and voter types.
UtilityAudit audit_utility(const UtilitySpec& spec, const PolicyAxis& alpha,
                           const PolicyAxis& beta, const Electorate& electorate,
                           std::span<const double> extra_types = {});

}  // namespace polattn
