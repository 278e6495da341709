#include "polattn/extensions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "polattn/errors.hpp"
#include "polattn/ri_solver.hpp"

namespace polattn {

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

}  // namespace

// ---- costly dissemination ----

DisseminationResult dissemination_filter(std::span<const EquilibriumRecord> records, const Scenario& scenario,
                                         double cost) {
  (void)scenario;
  DisseminationResult out;
  for (const auto& rec : records) {
    const double total = rec.total_information();
    out.total_information.push_back(total);
    const double h = entropy(rec.triple.sigma.data());
    if (!(cost > 0.0) || !(cost < h)) out.cost_out_of_range = true;
    if (total >= cost - kProbTolerance) out.kept.push_back(rec);
  }
  return out;
}

// ---- limited commitment ----

double commitment_value(double eta, double v_policy, double v_type) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("commitment_value: eta outside [0,1]");
  return eta * v_policy + (1.0 - eta) * v_type;
}

Scenario with_commitment(const Scenario& scenario, double eta) {
  Scenario s = scenario;
  s.eta = eta;
  for (const auto& c : s.beta_candidate.types())
    if (c.type < -1.0 || c.type > 1.0) throw DomainError("candidate type outside [-1,1] cannot serve as a policy");
  s.validate();
  return s;
}

double commitment_boundary_margin(double eta, double a1, double a2, double t_c, double t_e, double tau, double mu) {
  // mu * gamma^{-1}(4 exp(2 tau/mu) - 2) is delta(mu) with kappa|t| = 2 tau and diagonal mass 1/2.
  const double hurdle = attention_threshold_delta(mu, tau, 2.0, 0.5);
  return eta * (a2 - a1) + (1.0 - eta) * (t_e - t_c) - hurdle;
}

// ---- multiple issues ----

Frontier Frontier::quarter_circle() {
  Frontier f;
  f.name_ = "quarter_circle";
  f.value_ = [](double a) { return -1.0 + std::sqrt(std::max(0.0, 4.0 - (a + 1.0) * (a + 1.0))); };
  f.slope_ = [](double a) {
    const double r = 4.0 - (a + 1.0) * (a + 1.0);
    if (r <= 0.0) return -std::numeric_limits<double>::infinity();
    return -(a + 1.0) / std::sqrt(r);
  };
  return f;
}

Frontier Frontier::tabulated(std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 3) throw ValidationError("tabulated frontier needs at least three knots");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i].first > knots[i - 1].first)) throw ValidationError("frontier knots not strictly increasing in a");
    if (!(knots[i].second < knots[i - 1].second)) throw ValidationError("tabulated frontier is not strictly decreasing");
  }
  if (knots.front().first > -1.0 || knots.back().first < 1.0)
    throw ValidationError("tabulated frontier must span [-1,1]");
  for (std::size_t i = 2; i < knots.size(); ++i) {
    const double s0 = (knots[i - 1].second - knots[i - 2].second) / (knots[i - 1].first - knots[i - 2].first);
    const double s1 = (knots[i].second - knots[i - 1].second) / (knots[i].first - knots[i - 1].first);
    if (!(s1 < s0)) throw ValidationError("tabulated frontier is not strictly concave at a=" + num(knots[i - 1].first));
  }
  auto segment = [knots](double a) {
    auto it = std::upper_bound(knots.begin(), knots.end(), a,
                               [](double x, const std::pair<double, double>& k) { return x < k.first; });
    std::size_t hi = static_cast<std::size_t>(it - knots.begin());
    hi = std::clamp<std::size_t>(hi, 1, knots.size() - 1);
    return hi;
  };
  Frontier f;
  f.name_ = "tabulated";
  f.value_ = [knots, segment](double a) {
    const std::size_t hi = segment(a);
    const auto& [x0, y0] = knots[hi - 1];
    const auto& [x1, y1] = knots[hi];
    return y0 + (y1 - y0) * (a - x0) / (x1 - x0);
  };
  f.slope_ = [knots, segment](double a) {
    const std::size_t hi = segment(a);
    return (knots[hi].second - knots[hi - 1].second) / (knots[hi].first - knots[hi - 1].first);
  };
  return f;
}

TwoIssueUtility TwoIssueUtility::weighted_exponential() {
  TwoIssueUtility u;
  u.name = "weighted_exponential";
  u.u = [](double a, double b, double t) { return (1.0 - t) * -std::expm1(-a) + (1.0 + t) * -std::expm1(-b); };
  u.u_a = [](double a, double, double t) { return (1.0 - t) * std::exp(-a); };
  u.u_b = [](double, double b, double t) { return (1.0 + t) * std::exp(-b); };
  return u;
}

bool MultiIssueResult::ok() const {
  return std::all_of(audit.begin(), audit.end(), [](const IssueAuditItem& i) { return !i.applicable || i.passed; });
}

double tangency_point(const TwoIssueUtility& u2, const Frontier& frontier, double t, double tol) {
  auto uhat = [&](double a) { return u2.u(a, frontier(a), t); };
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = -1.0, hi = 1.0;
  double c = hi - invphi * (hi - lo), d = lo + invphi * (hi - lo);
  double fc = uhat(c), fd = uhat(d);
  while (hi - lo > tol) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - invphi * (hi - lo);
      fc = uhat(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + invphi * (hi - lo);
      fd = uhat(d);
    }
  }
  const double mid = 0.5 * (lo + hi);
  // The maximiser may sit on an endpoint.
  double best = mid, fbest = uhat(mid);
  for (double e : {-1.0, 1.0})
    if (uhat(e) > fbest) best = e, fbest = uhat(e);
  return best;
}

MultiIssueResult multi_issue_reduce(const TwoIssueUtility& u2, const Frontier& frontier, std::span<const double> grid,
                                    std::span<const double> types, CandidateParams params) {
  if (grid.size() < 3) throw ValidationError("multi_issue_reduce: grid needs at least three points");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw ValidationError("multi_issue_reduce: grid not strictly increasing");
  std::vector<double> ts(types.begin(), types.end());
  if (ts.size() < 2) throw ValidationError("multi_issue_reduce: need at least two types");
  for (std::size_t i = 1; i < ts.size(); ++i)
    if (!(ts[i] > ts[i - 1])) throw ValidationError("multi_issue_reduce: types not strictly increasing");

  MultiIssueResult out;
  out.grid.assign(grid.begin(), grid.end());
  out.types = ts;

  // Single crossing: -u_a/u_b strictly increasing in t on sampled (a,b). Refuses on failure.
  {
    const std::size_t stride = std::max<std::size_t>(1, grid.size() / 40);
    for (std::size_t i = 0; i < grid.size(); i += stride)
      for (std::size_t j = 0; j < grid.size(); j += stride)
        for (std::size_t k = 1; k < ts.size(); ++k) {
          const double a = grid[i], b = grid[j];
          const double r0 = -u2.u_a(a, b, ts[k - 1]) / u2.u_b(a, b, ts[k - 1]);
          const double r1 = -u2.u_a(a, b, ts[k]) / u2.u_b(a, b, ts[k]);
          if (!(r1 > r0))
            throw ValidationError("single-crossing audit failed at (a=" + num(a) + ", b=" + num(b) + ") between t=" +
                                  num(ts[k - 1]) + " and t=" + num(ts[k]));
        }
    out.audit.push_back({"single_crossing", true, true, "-u_a/u_b strictly increasing in t on the sample"});
  }

  // Strict concavity of u in (a,b): negative definite finite-difference Hessian.
  {
    IssueAuditItem item{"two_issue_concavity", true, true, ""};
    const double h = 1e-4;
    for (double t : ts) {
      for (std::size_t i = 1; i + 1 < grid.size() && item.passed; i += 7)
        for (std::size_t j = 1; j + 1 < grid.size() && item.passed; j += 7) {
          const double a = grid[i], b = grid[j];
          const double uaa = (u2.u_a(a + h, b, t) - u2.u_a(a - h, b, t)) / (2 * h);
          const double ubb = (u2.u_b(a, b + h, t) - u2.u_b(a, b - h, t)) / (2 * h);
          const double uab = (u2.u_a(a, b + h, t) - u2.u_a(a, b - h, t)) / (2 * h);
          if (!(uaa < 0.0 && uaa * ubb - uab * uab > 0.0)) {
            item.passed = false;
            item.detail = "Hessian not negative definite at (" + num(a) + ", " + num(b) + ", t=" + num(t) + ")";
          }
        }
    }
    out.audit.push_back(item);
  }

  // Frontier shape and endpoint slopes.
  {
    IssueAuditItem shape{"frontier_shape", true, true, ""};
    for (std::size_t i = 1; i < grid.size() && shape.passed; ++i)
      if (!(frontier(grid[i]) < frontier(grid[i - 1]))) {
        shape.passed = false;
        shape.detail = "frontier not strictly decreasing at a=" + num(grid[i]);
      }
    for (std::size_t i = 2; i < grid.size() && shape.passed; ++i) {
      const double s0 = (frontier(grid[i - 1]) - frontier(grid[i - 2])) / (grid[i - 1] - grid[i - 2]);
      const double s1 = (frontier(grid[i]) - frontier(grid[i - 1])) / (grid[i] - grid[i - 1]);
      if (!(s1 < s0)) {
        shape.passed = false;
        shape.detail = "frontier not strictly concave at a=" + num(grid[i - 1]);
      }
    }
    out.audit.push_back(shape);
    IssueAuditItem inada{"frontier_inada", true, true, ""};
    const double left = frontier.derivative(-1.0);
    const double right = frontier.derivative(grid.back() - 1e-9);
    inada.detail = "B'(-1)=" + num(left) + ", B'(1-)=" + num(right);
    inada.passed = std::abs(left) <= 1e-6 && right < -1e3;
    out.audit.push_back(inada);
  }

  // Tangency points and the tabulated augmented utility.
  for (double t : ts) out.tangency.push_back(tangency_point(u2, frontier, t));
  {
    IssueAuditItem item{"tangency_decreasing", true, true, ""};
    for (std::size_t k = 1; k < ts.size() && item.passed; ++k)
      if (!(out.tangency[k] < out.tangency[k - 1])) {
        item.passed = false;
        item.detail = "a_circ(" + num(ts[k]) + ") >= a_circ(" + num(ts[k - 1]) + ")";
      }
    out.audit.push_back(item);
  }

  std::vector<double> values(grid.size() * ts.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t k = 0; k < ts.size(); ++k) values[i * ts.size() + k] = u2.u(grid[i], frontier(grid[i]), ts[k]);
  auto uhat = [&](std::size_t i, std::size_t k) { return values[i * ts.size() + k]; };

  {
    IssueAuditItem mono{"augmented_single_peaked", true, true, ""};
    IssueAuditItem conc{"augmented_concavity", true, true, ""};
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const double peak = out.tangency[k];
      for (std::size_t i = 1; i < grid.size() && mono.passed; ++i) {
        if (grid[i] <= peak && !(uhat(i, k) > uhat(i - 1, k))) {
          mono.passed = false;
          mono.detail = "not increasing below a_circ at a=" + num(grid[i]) + ", t=" + num(ts[k]);
        }
        if (grid[i - 1] >= peak && !(uhat(i, k) < uhat(i - 1, k))) {
          mono.passed = false;
          mono.detail = "not decreasing above a_circ at a=" + num(grid[i]) + ", t=" + num(ts[k]);
        }
      }
      for (std::size_t i = 2; i < grid.size() && conc.passed; ++i) {
        const double s0 = (uhat(i - 1, k) - uhat(i - 2, k)) / (grid[i - 1] - grid[i - 2]);
        const double s1 = (uhat(i, k) - uhat(i - 1, k)) / (grid[i] - grid[i - 1]);
        if (!(s1 < s0)) {
          conc.passed = false;
          conc.detail = "second difference not negative at a=" + num(grid[i - 1]) + ", t=" + num(ts[k]);
        }
      }
    }
    out.audit.push_back(mono);
    out.audit.push_back(conc);
  }

  // Increasing differences is only claimed under u_at >= 0 and u_bt <= 0.
  {
    IssueAuditItem item{"augmented_increasing_differences", true, true, ""};
    const double h = 1e-5;
    bool at_nonneg = true, bt_nonpos = true, strict = false;
    for (std::size_t i = 0; i < grid.size(); i += 5)
      for (double t : ts) {
        const double a = grid[i], b = frontier(a);
        const double uat = (u2.u_a(a, b, t + h) - u2.u_a(a, b, t - h)) / (2 * h);
        const double ubt = (u2.u_b(a, b, t + h) - u2.u_b(a, b, t - h)) / (2 * h);
        at_nonneg = at_nonneg && uat >= -1e-9;
        bt_nonpos = bt_nonpos && ubt <= 1e-9;
        strict = strict || uat > 1e-9 || ubt < -1e-9;
      }
    if (!(at_nonneg && bt_nonpos && strict)) {
      item.applicable = false;
      item.detail = "sign conditions on u_at, u_bt do not hold on the sample; not asserted";
    } else {
      for (std::size_t i = 0; i + 1 < grid.size() && item.passed; ++i)
        for (std::size_t k = 0; k + 1 < ts.size() && item.passed; ++k) {
          const double d = (uhat(i + 1, k + 1) - uhat(i, k + 1)) - (uhat(i + 1, k) - uhat(i, k));
          if (!(d > 0.0)) {
            item.passed = false;
            item.detail = "flat or decreasing at a=" + num(grid[i]) + ", t=" + num(ts[k]);
          }
        }
    }
    out.audit.push_back(item);
  }

  std::vector<double> g(grid.begin(), grid.end());
  out.augmented = UtilitySpec::tabulated(UtilityTable(g, ts, values), params);
  return out;
}

Frontier frontier_from_spec(const IssuesSpec& spec) {
  if (spec.frontier == "quarter_circle") return Frontier::quarter_circle();
  if (spec.frontier == "tabulated") return Frontier::tabulated(spec.frontier_points);
  throw ValidationError("unknown frontier family '" + spec.frontier + "'");
}

TwoIssueUtility utility2_from_spec(const IssuesSpec& spec) {
  if (spec.utility2 == "weighted_exponential") return TwoIssueUtility::weighted_exponential();
  throw ValidationError("unknown two-issue utility '" + spec.utility2 + "'");
}

}  // namespace polattn
