#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polattn/core.hpp"
#include "polattn/technology.hpp"

namespace polattn {

// Two-issue configuration. The augmented single-issue utility is derived from it.
struct IssuesSpec {
  // "quarter_circle" or "tabulated".
  std::string frontier = "quarter_circle";
  // (a, B(a)) knots for the tabulated frontier, a strictly increasing.
  std::vector<std::pair<double, double>> frontier_points;
  // "weighted_exponential": u(a,b,t) = (1-t)(1-e^{-a}) + (1+t)(1-e^{-b}).
  std::string utility2 = "weighted_exponential";
  // Sample size for audits and the tabulated augmented utility.
  int grid_points = 200;

  friend bool operator==(const IssuesSpec&, const IssuesSpec&) = default;
};

struct SymmetryReport {
  bool symmetric = true;
  std::vector<std::string> reasons;
};

// Full game description. Plain aggregate; call validate() after editing.
struct Scenario {
  PolicyAxis alpha_policies;
  PolicyAxis beta_policies;
  UtilitySpec utility;
  CandidateSpec alpha_candidate;
  CandidateSpec beta_candidate;
  Electorate electorate;
  double mu = 1.0;
  std::optional<NewsTechnology> news;
  double eta = 1.0;
  std::optional<double> dissemination_cost;
  std::optional<IssuesSpec> issues;
  // Beta policy for each beta candidate type, in type order. Alpha mirrors it.
  std::optional<std::vector<double>> assignment;

  void validate() const;
  SymmetryReport symmetry() const;
  // Throws ValidationError naming the operation when the scenario is asymmetric.
  void require_symmetric(const std::string& operation) const;
};

// Builds a scenario with mirrored alpha grid and candidate from the beta side.
Scenario make_symmetric_scenario(std::vector<double> beta_policies, UtilitySpec utility,
                                 std::vector<CandidateType> beta_types,
                                 std::vector<VoterGroup> groups, double mu);

}  // namespace polattn
