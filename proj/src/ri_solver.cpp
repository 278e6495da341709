#include "polattn/ri_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

#include "polattn/errors.hpp"

namespace polattn {

namespace {

constexpr double kCornerTol = 1e-12;
constexpr double kResidualTol = 1e-12;
constexpr double kMbarFloor = 1e-12;
constexpr int kMaxIterations = 200;

double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// e^x / (mbar e^x + 1 - mbar) without overflow.
double consistency_term(double x, double mbar) {
  if (x >= 0.0) return 1.0 / (mbar + (1.0 - mbar) * std::exp(-x));
  const double e = std::exp(x);
  return e / (mbar * e + (1.0 - mbar));
}

double consistency_residual(std::span<const double> probs, std::span<const double> x, double mbar) {
  double s = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) s += probs[k] * consistency_term(x[k], mbar);
  return s - 1.0;
}

}  // namespace

const char* to_string(Regime regime) noexcept {
  switch (regime) {
    case Regime::CornerZero: return "corner_zero";
    case Regime::CornerOne: return "corner_one";
    case Regime::Interior: return "interior";
  }
  return "?";
}

void Belief::validate() const {
  if (probs.empty()) throw ValidationError("belief has empty support");
  if (probs.size() != values.size() || probs.size() != support.size())
    throw ValidationError("belief support, probs and values differ in length");
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw ValidationError("belief has a negative or non-finite probability");
    total += p;
  }
  if (std::abs(total - 1.0) > kProbTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "belief probabilities sum to " << total;
    throw ValidationError(os.str());
  }
  for (double v : values)
    if (!std::isfinite(v)) throw NumericError("belief has a non-finite value");
  auto key = [](const Profile& p) { return std::make_pair(p.alpha, p.beta); };
  std::set<std::pair<double, double>> seen;
  for (const auto& s : support)
    if (!seen.insert(key(s)).second) throw ValidationError("belief support points are not distinct");
}

double entropy(std::span<const double> probs) {
  double total = 0.0, h = 0.0;
  for (double p : probs) {
    if (p < 0.0) throw DomainError("entropy: negative probability");
    total += p;
    if (p > 0.0) h -= p * std::log(p);
  }
  if (std::abs(total - 1.0) > kTolerance) throw DomainError("entropy: probabilities do not sum to 1");
  return std::max(h, 0.0);
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log(p) - (1.0 - p) * std::log1p(-p);
}

double mutual_information(std::span<const double> m, std::span<const double> probs) {
  if (m.size() != probs.size()) throw ValidationError("mutual_information: size mismatch");
  double mbar = 0.0, cond = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (m[k] < 0.0 || m[k] > 1.0) throw DomainError("mutual_information: m outside [0,1]");
    mbar += probs[k] * m[k];
    cond += probs[k] * binary_entropy(m[k]);
  }
  return std::max(0.0, binary_entropy(std::clamp(mbar, 0.0, 1.0)) - cond);
}

double log_expected_exp(std::span<const double> probs, std::span<const double> values, double mu) {
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < probs.size(); ++k)
    if (probs[k] > 0.0) top = std::max(top, values[k] / mu);
  if (!std::isfinite(top)) throw NumericError("log_expected_exp: non-finite v/mu");
  double s = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k)
    if (probs[k] > 0.0) s += probs[k] * std::exp(values[k] / mu - top);
  return top + std::log(s);
}

AttentionSolution solve_attention(const Belief& belief, double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw ValidationError("solve_attention: mu must be positive");
  belief.validate();

  const std::size_t n = belief.size();
  std::vector<double> x(n), neg(n);
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = belief.values[k] / mu;
    if (!std::isfinite(x[k])) throw NumericError("solve_attention: non-finite v/mu");
    neg[k] = -belief.values[k];
  }

  AttentionSolution sol;
  const double log_floor = std::log1p(-kCornerTol);
  if (log_expected_exp(belief.probs, belief.values, mu) < log_floor) {
    sol.regime = Regime::CornerZero;
    sol.mbar = 0.0;
    sol.likelihood_ratio = 0.0;
    sol.m.assign(n, 0.0);
    return sol;
  }
  if (log_expected_exp(belief.probs, neg, mu) < log_floor) {
    sol.regime = Regime::CornerOne;
    sol.mbar = 1.0;
    sol.likelihood_ratio = std::numeric_limits<double>::infinity();
    sol.m.assign(n, 1.0);
    return sol;
  }

  // Residual is strictly decreasing in mbar; the first midpoint is exactly 1/2.
  double lo = 0.0, hi = 1.0, mbar = 0.5, res = 0.0;
  int it = 0;
  for (; it < kMaxIterations; ++it) {
    mbar = std::clamp(0.5 * (lo + hi), kMbarFloor, 1.0 - kMbarFloor);
    res = consistency_residual(belief.probs, x, mbar);
    if (!std::isfinite(res)) throw NumericError("solve_attention: non-finite consistency residual");
    if (std::abs(res) <= kResidualTol) break;
    if (res > 0.0) lo = mbar; else hi = mbar;
    const double next = 0.5 * (lo + hi);
    if (next == lo || next == hi) break;  // bracket collapsed to adjacent doubles
  }
  if (std::abs(res) > 1e-8) {
    std::ostringstream os;
    os << "solve_attention: bisection stalled with residual " << res;
    throw NumericError(os.str());
  }

  sol.regime = Regime::Interior;
  sol.mbar = mbar;
  sol.likelihood_ratio = mbar / (1.0 - mbar);
  sol.residual = std::abs(res);
  sol.iterations = it + 1;
  const double log_lambda = std::log(mbar) - std::log1p(-mbar);
  sol.m.resize(n);
  for (std::size_t k = 0; k < n; ++k) sol.m[k] = logistic(log_lambda + x[k]);
  sol.information = mutual_information(sol.m, belief.probs);
  return sol;
}

bool attention_membership(const Belief& belief, double mu) {
  if (!(mu > 0.0)) throw ValidationError("attention_membership: mu must be positive");
  return log_expected_exp(belief.probs, belief.values, mu) >= std::log1p(-kCornerTol);
}

double attention_objective(const Belief& belief, std::span<const double> m, double mu) {
  double v = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) v += belief.probs[k] * m[k] * belief.values[k];
  return v - mu * mutual_information(m, belief.probs);
}

double gamma(double x) { return std::exp(x) + std::exp(-x); }

double gamma_inverse(double y) {
  if (!(y >= 2.0)) throw DomainError("gamma_inverse: argument below 2");
  const double b = 0.5 * y;
  return std::log(b + std::sqrt((b - 1.0) * (b + 1.0)));
}

double attention_threshold_delta(double mu, double t, double kappa, double diag_mass) {
  if (!(diag_mass >= 0.0) || !(diag_mass < 1.0))
    throw DomainError("attention_threshold_delta: diagonal mass must lie in [0,1)");
  if (t == 0.0) throw DomainError("attention_threshold_delta: t must be non-zero");
  if (!(mu > 0.0) || !(kappa > 0.0)) throw DomainError("attention_threshold_delta: mu and kappa must be positive");
  const double s = kappa * std::abs(t) / mu;
  if (s < 600.0) {
    const double b = (std::exp(s) - diag_mass) / (1.0 - diag_mass);
    return mu * gamma_inverse(2.0 * b);
  }
  // b is astronomically large: acosh(b) = log(2b) to double precision.
  const double log_b = s + std::log1p(-diag_mass * std::exp(-s)) - std::log1p(-diag_mass);
  return mu * (std::log(2.0) + log_b);
}

}  // namespace polattn
