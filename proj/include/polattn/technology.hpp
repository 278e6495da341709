#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polattn/matrix.hpp"

namespace polattn {

// Row-stochastic kernel rho(w'|w). Rows index the source signal.
class MarkovKernel {
 public:
  MarkovKernel() = default;
  explicit MarkovKernel(Matrix<double> rho);

  static MarkovKernel identity(std::size_t k);
  // Every source row equal to target_pmf.
  static MarkovKernel constant(std::span<const double> target_pmf, std::size_t source_size);

  const Matrix<double>& matrix() const noexcept { return rho_; }
  std::size_t source_size() const noexcept { return rho_.rows(); }
  std::size_t target_size() const noexcept { return rho_.cols(); }
  double operator()(std::size_t from, std::size_t to) const { return rho_(from, to); }

 private:
  Matrix<double> rho_;
};

// Beta-side news pmf f_beta(w_n | a_i) over a positive signal grid. The alpha side is
// the mirror image f_alpha(-w | -a) = f_beta(w | a), so symmetry holds by construction.
class NewsTechnology {
 public:
  NewsTechnology() = default;
  // rows: policies.size() x signals.size().
  NewsTechnology(std::vector<double> signals, std::vector<double> policies, Matrix<double> rows);

  // Two signals; f(w2 | a) = a + xi (1 - a). Evaluates at any policy in [0,1].
  static NewsTechnology slant(double xi, std::vector<double> policies,
                              std::vector<double> signals = {1.0 / 3.0, 2.0 / 3.0});
  // Signal grid equals the policy grid, identity rows.
  static NewsTechnology fully_revealing(std::vector<double> policies);

  std::span<const double> signals() const noexcept { return signals_; }
  std::span<const double> policies() const noexcept { return policies_; }
  const Matrix<double>& rows() const noexcept { return rows_; }
  std::size_t signal_count() const noexcept { return signals_.size(); }
  std::optional<double> slant_parameter() const noexcept { return xi_; }

  // f_beta(w_n | a). Off-grid policies are allowed only for the slant family.
  double prob(std::size_t signal, double policy) const;
  std::vector<double> pmf(double policy) const;

  bool is_fully_revealing() const;
  std::size_t zero_entries() const;

 private:
  std::vector<double> signals_;
  std::vector<double> policies_;
  Matrix<double> rows_;
  std::optional<double> xi_;
};

// f'(w' | a) = sum_w f(w | a) rho(w' | w), per candidate.
NewsTechnology garble(const NewsTechnology& f, const MarkovKernel& rho,
                      std::optional<std::vector<double>> target_signals = std::nullopt);

// Kernel that carries the slant family from xi to xi_prime >= xi.
MarkovKernel slant_garbling_kernel(double xi, double xi_prime);

enum class SupermodularityStatus { Pass, Fail, Indeterminate };

const char* to_string(SupermodularityStatus status) noexcept;

struct SupermodularityReport {
  SupermodularityStatus status = SupermodularityStatus::Pass;
  // First offending quadruple (policy indices i<i', signal indices n<n').
  std::size_t policy_lo = 0, policy_hi = 0, signal_lo = 0, signal_hi = 0;
  double minor = 0.0;
  std::string detail;

  bool passed() const noexcept { return status == SupermodularityStatus::Pass; }
};

// Strict log-supermodularity of f_beta on its grid:
// f(n'|i') f(n|i) > f(n'|i) f(n|i') for all i<i', n<n', with log tolerance 1e-12.
SupermodularityReport check_log_supermodularity(const NewsTechnology& f);

}  // namespace polattn
