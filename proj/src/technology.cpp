#include "polattn/technology.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "polattn/errors.hpp"

namespace polattn {

namespace {

constexpr double kRowTol = 1e-12;

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void check_stochastic(const Matrix<double>& m, const char* what) {
  if (m.rows() == 0 || m.cols() == 0) throw ValidationError(std::string(what) + " is empty");
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const double x = m(i, j);
      if (!(x >= 0.0) || !std::isfinite(x))
        throw ValidationError(std::string(what) + " row " + std::to_string(i) + " has a negative entry");
      s += x;
    }
    if (std::abs(s - 1.0) > kRowTol)
      throw ValidationError(std::string(what) + " row " + std::to_string(i) + " sums to " + num(s));
  }
}

void check_signal_grid(const std::vector<double>& signals) {
  if (signals.size() < 2) throw ValidationError("news signal grid needs at least two signals");
  for (std::size_t i = 0; i < signals.size(); ++i) {
    if (!(signals[i] > 0.0) || signals[i] > 1.0)
      throw ValidationError("news signal " + num(signals[i]) + " outside (0,1]");
    if (i > 0 && !(signals[i] > signals[i - 1]))
      throw ValidationError("news signal grid not strictly increasing");
  }
}

}  // namespace

// ---- MarkovKernel ----

MarkovKernel::MarkovKernel(Matrix<double> rho) : rho_(std::move(rho)) {
  check_stochastic(rho_, "Markov kernel");
}

MarkovKernel MarkovKernel::identity(std::size_t k) {
  Matrix<double> m(k, k, 0.0);
  for (std::size_t i = 0; i < k; ++i) m(i, i) = 1.0;
  return MarkovKernel(std::move(m));
}

MarkovKernel MarkovKernel::constant(std::span<const double> target_pmf, std::size_t source_size) {
  Matrix<double> m(source_size, target_pmf.size());
  for (std::size_t i = 0; i < source_size; ++i)
    for (std::size_t j = 0; j < target_pmf.size(); ++j) m(i, j) = target_pmf[j];
  return MarkovKernel(std::move(m));
}

// ---- NewsTechnology ----

NewsTechnology::NewsTechnology(std::vector<double> signals, std::vector<double> policies, Matrix<double> rows)
    : signals_(std::move(signals)), policies_(std::move(policies)), rows_(std::move(rows)) {
  check_signal_grid(signals_);
  if (policies_.empty()) throw ValidationError("news technology has no policies");
  for (std::size_t i = 0; i < policies_.size(); ++i) {
    if (!(policies_[i] > 0.0) || policies_[i] > 1.0)
      throw ValidationError("news policy " + num(policies_[i]) + " outside (0,1]");
    if (i > 0 && !(policies_[i] > policies_[i - 1]))
      throw ValidationError("news policy grid not strictly increasing");
  }
  if (rows_.rows() != policies_.size() || rows_.cols() != signals_.size())
    throw ValidationError("news rows must be " + std::to_string(policies_.size()) + " x " +
                          std::to_string(signals_.size()));
  check_stochastic(rows_, "news technology");
}

NewsTechnology NewsTechnology::slant(double xi, std::vector<double> policies, std::vector<double> signals) {
  if (!(xi > 0.0 && xi < 1.0)) throw ValidationError("slant parameter xi must lie in (0,1)");
  if (signals.size() != 2) throw ValidationError("slant family has exactly two signals");
  Matrix<double> rows(policies.size(), 2);
  for (std::size_t i = 0; i < policies.size(); ++i) {
    const double hi = policies[i] + xi * (1.0 - policies[i]);
    rows(i, 1) = hi;
    rows(i, 0) = 1.0 - hi;
  }
  NewsTechnology f(std::move(signals), std::move(policies), std::move(rows));
  f.xi_ = xi;
  return f;
}

NewsTechnology NewsTechnology::fully_revealing(std::vector<double> policies) {
  const std::size_t n = policies.size();
  Matrix<double> rows(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) rows(i, i) = 1.0;
  std::vector<double> signals = policies;
  return NewsTechnology(std::move(signals), std::move(policies), std::move(rows));
}

double NewsTechnology::prob(std::size_t signal, double policy) const {
  if (signal >= signals_.size()) throw LookupError("news signal index out of range");
  if (xi_) {
    const double hi = policy + *xi_ * (1.0 - policy);
    return signal == 1 ? hi : 1.0 - hi;
  }
  auto it = std::lower_bound(policies_.begin(), policies_.end(), policy - 1e-12);
  if (it == policies_.end() || std::abs(*it - policy) > 1e-12)
    throw LookupError("news technology has no row for policy " + num(policy));
  return rows_(static_cast<std::size_t>(it - policies_.begin()), signal);
}

std::vector<double> NewsTechnology::pmf(double policy) const {
  std::vector<double> out(signals_.size());
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = prob(n, policy);
  return out;
}

bool NewsTechnology::is_fully_revealing() const {
  if (signals_.size() != policies_.size()) return false;
  for (std::size_t i = 0; i < rows_.rows(); ++i)
    for (std::size_t j = 0; j < rows_.cols(); ++j)
      if (rows_(i, j) != (i == j ? 1.0 : 0.0)) return false;
  return true;
}

std::size_t NewsTechnology::zero_entries() const {
  return static_cast<std::size_t>(
      std::count(rows_.data().begin(), rows_.data().end(), 0.0));
}

NewsTechnology garble(const NewsTechnology& f, const MarkovKernel& rho,
                      std::optional<std::vector<double>> target_signals) {
  if (rho.source_size() != f.signal_count())
    throw ValidationError("garble: kernel has " + std::to_string(rho.source_size()) +
                          " source signals, technology has " + std::to_string(f.signal_count()));
  std::vector<double> signals;
  if (target_signals) {
    signals = std::move(*target_signals);
  } else if (rho.target_size() == f.signal_count()) {
    signals.assign(f.signals().begin(), f.signals().end());
  } else {
    throw ValidationError("garble: target signal grid required when the kernel changes K");
  }
  if (signals.size() != rho.target_size()) throw ValidationError("garble: target grid size mismatch");

  const auto& src = f.rows();
  Matrix<double> rows(src.rows(), rho.target_size(), 0.0);
  for (std::size_t i = 0; i < src.rows(); ++i)
    for (std::size_t to = 0; to < rho.target_size(); ++to) {
      double s = 0.0;
      for (std::size_t from = 0; from < rho.source_size(); ++from) s += src(i, from) * rho(from, to);
      rows(i, to) = s;
    }
  std::vector<double> policies(f.policies().begin(), f.policies().end());
  return NewsTechnology(std::move(signals), std::move(policies), std::move(rows));
}

MarkovKernel slant_garbling_kernel(double xi, double xi_prime) {
  if (!(xi > 0.0 && xi < 1.0) || !(xi_prime >= xi && xi_prime < 1.0))
    throw ValidationError("slant garbling needs 0 < xi <= xi' < 1");
  const double lambda = (xi_prime - xi) / (1.0 - xi);
  Matrix<double> m(2, 2);
  m(0, 0) = 1.0 - lambda;
  m(0, 1) = lambda;
  m(1, 0) = 0.0;
  m(1, 1) = 1.0;
  return MarkovKernel(std::move(m));
}

const char* to_string(SupermodularityStatus status) noexcept {
  switch (status) {
    case SupermodularityStatus::Pass: return "pass";
    case SupermodularityStatus::Fail: return "fail";
    case SupermodularityStatus::Indeterminate: return "indeterminate";
  }
  return "?";
}

SupermodularityReport check_log_supermodularity(const NewsTechnology& f) {
  SupermodularityReport rep;
  const auto& r = f.rows();
  const std::size_t np = r.rows(), ns = r.cols();
  std::optional<SupermodularityReport> zero_hit;
  for (std::size_t i = 0; i < np; ++i)
    for (std::size_t ip = i + 1; ip < np; ++ip)
      for (std::size_t n = 0; n < ns; ++n)
        for (std::size_t nq = n + 1; nq < ns; ++nq) {
          const double a = r(ip, nq), b = r(i, n), c = r(i, nq), d = r(ip, n);
          if (a == 0.0 || b == 0.0 || c == 0.0 || d == 0.0) {
            if (!zero_hit) {
              SupermodularityReport z;
              z.status = SupermodularityStatus::Indeterminate;
              z.policy_lo = i, z.policy_hi = ip, z.signal_lo = n, z.signal_hi = nq;
              z.detail = "zero probability in compared cells";
              zero_hit = z;
            }
            continue;
          }
          const double minor = (std::log(a) + std::log(b)) - (std::log(c) + std::log(d));
          if (!(minor > 1e-12)) {
            rep.status = SupermodularityStatus::Fail;
            rep.policy_lo = i, rep.policy_hi = ip, rep.signal_lo = n, rep.signal_hi = nq;
            rep.minor = minor;
            rep.detail = "policies (" + num(f.policies()[i]) + ", " + num(f.policies()[ip]) +
                         "), signals (" + num(f.signals()[n]) + ", " + num(f.signals()[nq]) +
                         "): log minor " + num(minor);
            return rep;
          }
        }
  if (zero_hit) return *zero_hit;
  return rep;
}

}  // namespace polattn
