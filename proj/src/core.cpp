#include "polattn/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "polattn/errors.hpp"

namespace polattn {

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

bool in_half_interval(Side side, double x) {
  return side == Side::Alpha ? (x >= -1.0 && x < 0.0) : (x > 0.0 && x <= 1.0);
}

std::optional<std::size_t> find_close(std::span<const double> xs, double x, double tol) {
  auto it = std::lower_bound(xs.begin(), xs.end(), x - tol);
  if (it != xs.end() && std::abs(*it - x) <= tol) return static_cast<std::size_t>(it - xs.begin());
  return std::nullopt;
}

void check_probabilities(std::span<const double> probs, const char* what) {
  double total = 0.0;
  for (double p : probs) {
    if (!(p > 0.0) || !std::isfinite(p))
      throw ValidationError(std::string(what) + ": probabilities must be positive, got " + num(p));
    total += p;
  }
  if (std::abs(total - 1.0) > kProbTolerance)
    throw ValidationError(std::string(what) + ": probabilities sum to " + num(total) + ", not 1");
}

}  // namespace

const char* to_string(Side side) noexcept { return side == Side::Alpha ? "alpha" : "beta"; }

const char* to_string(VoterFamily family) noexcept {
  switch (family) {
    case VoterFamily::AbsoluteLoss: return "absolute_loss";
    case VoterFamily::Quadratic: return "quadratic";
    case VoterFamily::Tabulated: return "table";
  }
  return "?";
}

// ---- PolicyAxis ----

PolicyAxis::PolicyAxis(Side side, std::vector<double> values) : side_(side), values_(std::move(values)) {
  if (values_.empty()) throw ValidationError(std::string(to_string(side)) + " policy grid is empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!in_half_interval(side, values_[i]))
      throw ValidationError(std::string(to_string(side)) + " policy " + num(values_[i]) +
                            " outside its half-interval");
    if (i > 0 && !(values_[i] > values_[i - 1]))
      throw ValidationError(std::string(to_string(side)) + " policy grid is not strictly increasing");
  }
}

PolicyAxis PolicyAxis::mirror_of(const PolicyAxis& other) {
  std::vector<double> v(other.values_.rbegin(), other.values_.rend());
  for (double& x : v) x = -x;
  return PolicyAxis(other.side_ == Side::Alpha ? Side::Beta : Side::Alpha, std::move(v));
}

std::optional<std::size_t> PolicyAxis::find(double value, double tol) const {
  return find_close(values_, value, tol);
}

bool PolicyAxis::mirrors(const PolicyAxis& other) const {
  if (side_ == other.side_ || values_.size() != other.values_.size()) return false;
  const std::size_t n = values_.size();
  for (std::size_t i = 0; i < n; ++i)
    if (values_[i] != -other.values_[n - 1 - i]) return false;
  return true;
}

// ---- UtilityTable ----

UtilityTable::UtilityTable(std::vector<double> policies, std::vector<double> types,
                           std::vector<double> values)
    : policies_(std::move(policies)), types_(std::move(types)), values_(std::move(values)) {
  if (policies_.empty() || types_.empty()) throw ValidationError("utility table has an empty axis");
  if (values_.size() != policies_.size() * types_.size())
    throw ValidationError("utility table has " + std::to_string(values_.size()) + " values, expected " +
                          std::to_string(policies_.size() * types_.size()));
  auto check_axis = [](const std::vector<double>& xs, const char* what) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (xs[i] < -1.0 || xs[i] > 1.0)
        throw ValidationError(std::string("utility table ") + what + " " + num(xs[i]) + " outside [-1,1]");
      if (i > 0 && !(xs[i] > xs[i - 1]))
        throw ValidationError(std::string("utility table ") + what + " not strictly increasing");
    }
  };
  check_axis(policies_, "policies");
  check_axis(types_, "types");
  for (double v : values_)
    if (!std::isfinite(v)) throw ValidationError("utility table contains a non-finite value");
}

double UtilityTable::at(double a, double t) const {
  auto i = find_close(policies_, a, 1e-12);
  auto j = find_close(types_, t, 1e-12);
  if (!i || !j) throw LookupError("utility table has no entry for (a=" + num(a) + ", t=" + num(t) + ")");
  return values_[*i * types_.size() + *j];
}

// ---- UtilitySpec ----

UtilitySpec UtilitySpec::absolute_loss(CandidateParams params) {
  UtilitySpec s;
  s.family_ = VoterFamily::AbsoluteLoss;
  s.candidate_ = params;
  return s;
}

UtilitySpec UtilitySpec::quadratic(CandidateParams params) {
  UtilitySpec s;
  s.family_ = VoterFamily::Quadratic;
  s.candidate_ = params;
  return s;
}

UtilitySpec UtilitySpec::tabulated(UtilityTable table, CandidateParams params) {
  UtilitySpec s;
  s.family_ = VoterFamily::Tabulated;
  s.candidate_ = params;
  s.table_ = std::make_shared<const UtilityTable>(std::move(table));
  return s;
}

UtilitySpec UtilitySpec::with_candidate(CandidateParams params) const {
  UtilitySpec s = *this;
  s.candidate_ = params;
  return s;
}

// ---- CandidateSpec ----

CandidateSpec::CandidateSpec(Side side, std::vector<CandidateType> types)
    : side_(side), types_(std::move(types)) {
  if (types_.empty()) throw ValidationError(std::string(to_string(side)) + " candidate has no types");
  std::vector<double> probs;
  for (std::size_t i = 0; i < types_.size(); ++i) {
    const double t = types_[i].type;
    const bool ok = side == Side::Alpha ? (t >= -1.0 && t <= 0.0) : (t >= 0.0 && t <= 1.0);
    if (!ok)
      throw ValidationError(std::string(to_string(side)) + " candidate type " + num(t) +
                            " outside its half-interval");
    if (i > 0 && !(t > types_[i - 1].type))
      throw ValidationError(std::string(to_string(side)) + " candidate types not strictly increasing");
    probs.push_back(types_[i].prob);
  }
  check_probabilities(probs, (std::string(to_string(side)) + " candidate").c_str());
}

CandidateSpec CandidateSpec::mirror_of(const CandidateSpec& other) {
  std::vector<CandidateType> v(other.types_.rbegin(), other.types_.rend());
  for (auto& c : v) c.type = -c.type;
  return CandidateSpec(other.side_ == Side::Alpha ? Side::Beta : Side::Alpha, std::move(v));
}

bool CandidateSpec::mirrors(const CandidateSpec& other) const {
  if (side_ == other.side_ || types_.size() != other.types_.size()) return false;
  const std::size_t n = types_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = types_[i];
    const auto& b = other.types_[n - 1 - i];
    if (a.type != -b.type || a.prob != b.prob) return false;
  }
  return true;
}

// ---- Electorate ----

Electorate::Electorate(std::vector<VoterGroup> groups) : groups_(std::move(groups)) {
  if (groups_.empty()) throw ValidationError("electorate has no voter groups");
  std::vector<double> w;
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    const double t = groups_[i].type;
    if (t < -1.0 || t > 1.0) throw ValidationError("voter type " + num(t) + " outside [-1,1]");
    if (i > 0 && !(t > groups_[i - 1].type))
      throw ValidationError("voter group types not strictly increasing");
    w.push_back(groups_[i].weight);
  }
  check_probabilities(w, "electorate");
}

bool Electorate::symmetric() const {
  const std::size_t n = groups_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = groups_[i];
    const auto& b = groups_[n - 1 - i];
    if (a.type != -b.type || std::abs(a.weight - b.weight) > kProbTolerance) return false;
  }
  return true;
}

// ---- payoffs ----

double voter_utility(const UtilitySpec& spec, double a, double t) {
  switch (spec.family()) {
    case VoterFamily::AbsoluteLoss: return -std::abs(t - a);
    case VoterFamily::Quadratic: return -(t - a) * (t - a);
    case VoterFamily::Tabulated: return spec.table()->at(a, t);
  }
  return 0.0;
}

double differential_utility(const UtilitySpec& spec, Profile profile, double t) {
  return voter_utility(spec, profile.beta, t) - voter_utility(spec, profile.alpha, t);
}

StagePayoffs candidate_stage_payoffs(const UtilitySpec& spec, double own_policy,
                                     double opponent_policy, double own_type) {
  const auto& c = spec.candidate();
  StagePayoffs p;
  p.win_value = c.office_rent - c.winner_weight * std::abs(own_type - own_policy);
  p.lose_value = c.loser_sign * c.loser_weight * std::abs(own_type - opponent_policy);
  return p;
}

// ---- audits ----

std::optional<double> derive_kappa(const UtilitySpec& spec, const PolicyAxis& alpha,
                                   const PolicyAxis& beta, const Electorate& electorate) {
  std::optional<double> kappa;
  for (const auto& g : electorate.groups()) {
    if (!(g.type > 0.0)) continue;
    for (double aa : alpha.values())
      for (double ab : beta.values()) {
        const Profile p{aa, ab};
        const double k = (differential_utility(spec, p, g.type) - differential_utility(spec, p, 0.0)) / g.type;
        if (!kappa || k < *kappa) kappa = k;
      }
  }
  return kappa;
}

bool UtilityAudit::ok() const {
  return std::all_of(findings.begin(), findings.end(), [](const AuditFinding& f) { return f.passed; });
}

std::string UtilityAudit::failure_summary() const {
  std::string out;
  for (const auto& f : findings)
    if (!f.passed) {
      if (!out.empty()) out += "; ";
      out += f.check + ": " + f.detail;
    }
  return out;
}

UtilityAudit audit_utility(const UtilitySpec& spec, const PolicyAxis& alpha, const PolicyAxis& beta,
                           const Electorate& electorate, std::span<const double> extra_types) {
  UtilityAudit audit;

  std::set<double> policy_set(alpha.values().begin(), alpha.values().end());
  policy_set.insert(beta.values().begin(), beta.values().end());
  const std::vector<double> policies(policy_set.begin(), policy_set.end());

  std::set<double> type_set;
  for (const auto& g : electorate.groups()) type_set.insert(g.type);
  type_set.insert(extra_types.begin(), extra_types.end());
  const std::vector<double> types(type_set.begin(), type_set.end());

  auto u = [&](double a, double t) { return voter_utility(spec, a, t); };

  // Symmetry u(a,t) = u(-a,-t). Exact for the built-in families.
  {
    AuditFinding f{"symmetry", true, ""};
    const double tol = spec.builtin() ? 0.0 : kProbTolerance;
    for (double a : policies) {
      for (double t : types) {
        double lhs, rhs;
        try {
          lhs = u(a, t);
          rhs = u(-a, -t);
        } catch (const LookupError& e) {
          f.passed = false;
          f.detail = e.what();
          break;
        }
        if (std::abs(lhs - rhs) > tol) {
          f.passed = false;
          f.detail = "u(" + num(a) + "," + num(t) + ") != u(" + num(-a) + "," + num(-t) + ")";
          break;
        }
      }
      if (!f.passed) break;
    }
    audit.findings.push_back(f);
  }

  // Single-peakedness and discrete concavity of u(., t) on the policy grid.
  {
    AuditFinding peak{"single_peaked", true, ""};
    AuditFinding conc{"concavity", true, ""};
    for (double t : types) {
      std::vector<double> vals;
      for (double a : policies) vals.push_back(u(a, t));
      for (std::size_t i = 1; i < policies.size() && peak.passed; ++i) {
        const double a0 = policies[i - 1], a1 = policies[i];
        if (a1 <= t && !(vals[i] > vals[i - 1] - kTolerance)) {
          peak.passed = false;
          peak.detail = "u(.," + num(t) + ") decreases below the peak at a=" + num(a1);
        }
        if (a0 >= t && !(vals[i] < vals[i - 1] + kTolerance)) {
          peak.passed = false;
          peak.detail = "u(.," + num(t) + ") increases above the peak at a=" + num(a1);
        }
      }
      for (std::size_t i = 2; i < policies.size() && conc.passed; ++i) {
        const double s0 = (vals[i - 1] - vals[i - 2]) / (policies[i - 1] - policies[i - 2]);
        const double s1 = (vals[i] - vals[i - 1]) / (policies[i] - policies[i - 1]);
        if (s1 > s0 + kTolerance) {
          conc.passed = false;
          conc.detail = "slope of u(.," + num(t) + ") rises at a=" + num(policies[i - 1]);
        }
      }
    }
    audit.findings.push_back(peak);
    audit.findings.push_back(conc);
  }

  // Increasing differences on every grid pair. A negative difference fails the
  // audit; zero differences are counted because absolute loss is only weakly
  // supermodular when both types sit on the same side of both policies.
  {
    AuditFinding f{"increasing_differences", true, ""};
    std::size_t flat = 0, total = 0;
    for (std::size_t i = 0; i < policies.size() && f.passed; ++i)
      for (std::size_t j = i + 1; j < policies.size() && f.passed; ++j)
        for (std::size_t k = 0; k < types.size() && f.passed; ++k)
          for (std::size_t l = k + 1; l < types.size() && f.passed; ++l) {
            const double a = policies[i], ap = policies[j], t = types[k], tp = types[l];
            const double d = (u(ap, tp) - u(a, tp)) - (u(ap, t) - u(a, t));
            ++total;
            if (d < -kTolerance) {
              f.passed = false;
              f.detail = "decreasing at a=" + num(a) + ", a'=" + num(ap) + ", t=" + num(t) +
                         ", t'=" + num(tp);
            } else if (!(d > kTolerance)) {
              ++flat;
            }
          }
    if (f.passed) f.detail = std::to_string(flat) + " of " + std::to_string(total) + " pairs flat";
    audit.findings.push_back(f);
  }

  // Kappa condition, checked on the configured positive groups only.
  {
    audit.kappa = derive_kappa(spec, alpha, beta, electorate);
    AuditFinding f{"kappa", true, ""};
    if (audit.kappa && !(*audit.kappa > 0.0)) {
      f.passed = false;
      f.detail = "derived kappa " + num(*audit.kappa) + " is not positive";
    } else if (!audit.kappa) {
      f.detail = "no positive voter group configured";
    } else {
      f.detail = "kappa=" + num(*audit.kappa);
    }
    audit.findings.push_back(f);
  }
  return audit;
}

}  // namespace polattn
