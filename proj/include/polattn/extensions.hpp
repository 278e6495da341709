#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "polattn/core.hpp"
#include "polattn/election.hpp"
#include "polattn/scenario.hpp"

namespace polattn {

// ---- costly dissemination ----

struct DisseminationResult {
  std::vector<EquilibriumRecord> kept;
  std::vector<double> total_information;  // per input record
  bool cost_out_of_range = false;         // C outside (0, H(Sigma)) for some record
};

// Keeps records whose weighted total mutual information covers the cost.
DisseminationResult dissemination_filter(std::span<const EquilibriumRecord> records,
                                         const Scenario& scenario, double cost);

// ---- limited commitment ----

// eta * v_policy + (1 - eta) * v_type.
double commitment_value(double eta, double v_policy, double v_type);

// Copy of the scenario with eta set; the election pipeline reads eta directly.
Scenario with_commitment(const Scenario& scenario, double eta);

// Left side minus right side of the two-type boundary
// eta (a2 - a1) + (1 - eta)(t_e - t_c) >= mu gamma^{-1}(4 exp(2 tau/mu) - 2).
double commitment_boundary_margin(double eta, double a1, double a2, double t_c, double t_e,
                                  double tau, double mu);

// ---- multiple issues ----

class Frontier {
 public:
  // B(a) = -1 + sqrt(4 - (a+1)^2).
  static Frontier quarter_circle();
  // Piecewise-linear through knots (shape preserving for concave data).
  static Frontier tabulated(std::vector<std::pair<double, double>> knots);

  double operator()(double a) const { return value_(a); }
  double derivative(double a) const { return slope_(a); }
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
  std::function<double(double)> value_;
  std::function<double(double)> slope_;
};

// Two-issue voter utility u(a, b, t) with partial derivatives.
struct TwoIssueUtility {
  std::string name;
  std::function<double(double, double, double)> u;
  std::function<double(double, double, double)> u_a;
  std::function<double(double, double, double)> u_b;

  // u = (1-t)(1-e^{-a}) + (1+t)(1-e^{-b}).
  static TwoIssueUtility weighted_exponential();
};

struct IssueAuditItem {
  std::string check;
  bool applicable = true;
  bool passed = true;
  std::string detail;
};

struct MultiIssueResult {
  UtilitySpec augmented;            // tabulated u_hat on grid x types
  std::vector<double> grid;
  std::vector<double> types;
  std::vector<double> tangency;     // a_circ(t) per type
  std::vector<IssueAuditItem> audit;
  bool ok() const;
};

// Golden-section maximiser of u_hat(., t) on [-1, 1].
double tangency_point(const TwoIssueUtility& u2, const Frontier& frontier, double t,
                      double tol = 1e-10);

// Audits the single-crossing and concavity assumptions on the sample, then
// tabulates u_hat(a, t) = u(a, B(a), t). Throws ValidationError on a failed
// single-crossing audit, naming the violating pair.
MultiIssueResult multi_issue_reduce(const TwoIssueUtility& u2, const Frontier& frontier,
                                    std::span<const double> grid, std::span<const double> types,
                                    CandidateParams params = {});

Frontier frontier_from_spec(const IssuesSpec& spec);
TwoIssueUtility utility2_from_spec(const IssuesSpec& spec);

}  // namespace polattn
