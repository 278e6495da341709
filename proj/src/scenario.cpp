#include "polattn/scenario.hpp"

#include <cmath>

#include "polattn/errors.hpp"

namespace polattn {

void Scenario::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw ValidationError("attention.mu must be positive");
  if (!(eta >= 0.0 && eta <= 1.0)) throw ValidationError("commitment.eta must lie in [0,1]");
  if (alpha_policies.side() != Side::Alpha || alpha_policies.size() == 0)
    throw ValidationError("alpha policy grid missing");
  if (beta_policies.side() != Side::Beta || beta_policies.size() == 0)
    throw ValidationError("beta policy grid missing");
  if (alpha_candidate.side() != Side::Alpha || alpha_candidate.size() == 0)
    throw ValidationError("alpha candidate missing");
  if (beta_candidate.side() != Side::Beta || beta_candidate.size() == 0)
    throw ValidationError("beta candidate missing");
  if (electorate.size() == 0) throw ValidationError("electorate missing");

  const auto& c = utility.candidate();
  if (c.office_rent < 0.0 || c.winner_weight < 0.0 || c.loser_weight < 0.0)
    throw ValidationError("candidate payoff parameters must be nonnegative");
  if (c.loser_sign != 1 && c.loser_sign != -1) throw ValidationError("loser_sign must be +1 or -1");

  if (dissemination_cost && !(*dissemination_cost >= 0.0))
    throw ValidationError("dissemination.cost must be nonnegative");

  if (news) {
    for (double a : beta_policies.values()) {
      try {
        (void)news->prob(0, a);
      } catch (const LookupError&) {
        throw ValidationError("news technology has no row for beta policy " + std::to_string(a));
      }
    }
  }

  if (assignment) {
    if (assignment->size() != beta_candidate.size())
      throw ValidationError("assignment needs one policy per beta candidate type");
    for (double a : *assignment)
      if (!beta_policies.contains(a))
        throw ValidationError("assignment policy " + std::to_string(a) + " is not on the beta grid");
  }

  if (utility.family() == VoterFamily::Tabulated) {
    // Every configured voter type and every grid policy must resolve.
    for (const auto& g : electorate.groups()) {
      for (double a : beta_policies.values()) (void)voter_utility(utility, a, g.type);
      for (double a : alpha_policies.values()) (void)voter_utility(utility, a, g.type);
    }
  }
}

SymmetryReport Scenario::symmetry() const {
  SymmetryReport r;
  if (!alpha_policies.mirrors(beta_policies)) r.reasons.push_back("policy grids are not mirror images");
  if (!alpha_candidate.mirrors(beta_candidate)) r.reasons.push_back("candidate type distributions are not mirror images");
  if (!electorate.symmetric()) r.reasons.push_back("electorate is not symmetric around 0");
  if (!utility.builtin()) {
    auto table_symmetric = [&] {
      for (double a : beta_policies.values())
        for (const auto& g : electorate.groups())
          if (voter_utility(utility, a, g.type) != voter_utility(utility, -a, -g.type)) return false;
      return true;
    };
    try {
      if (!table_symmetric()) r.reasons.push_back("tabulated utility violates u(a,t)=u(-a,-t)");
    } catch (const LookupError& e) {
      r.reasons.push_back(std::string("tabulated utility incomplete: ") + e.what());
    }
  }
  r.symmetric = r.reasons.empty();
  return r;
}

void Scenario::require_symmetric(const std::string& operation) const {
  const auto r = symmetry();
  if (r.symmetric) return;
  std::string msg = operation + " requires a symmetric scenario:";
  for (const auto& s : r.reasons) msg += " " + s + ";";
  throw ValidationError(msg);
}

Scenario make_symmetric_scenario(std::vector<double> beta_policies, UtilitySpec utility,
                                 std::vector<CandidateType> beta_types,
                                 std::vector<VoterGroup> groups, double mu) {
  Scenario s;
  s.beta_policies = PolicyAxis(Side::Beta, std::move(beta_policies));
  s.alpha_policies = PolicyAxis::mirror_of(s.beta_policies);
  s.utility = std::move(utility);
  s.beta_candidate = CandidateSpec(Side::Beta, std::move(beta_types));
  s.alpha_candidate = CandidateSpec::mirror_of(s.beta_candidate);
  s.electorate = Electorate(std::move(groups));
  s.mu = mu;
  s.validate();
  return s;
}

}  // namespace polattn
