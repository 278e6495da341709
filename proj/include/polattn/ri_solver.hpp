#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "polattn/core.hpp"

namespace polattn {

// Distribution over policy (or news) profiles with the voter's value at each point.
struct Belief {
  std::vector<Profile> support;
  std::vector<double> probs;
  std::vector<double> values;

  std::size_t size() const noexcept { return probs.size(); }
  // Throws ValidationError on mismatched sizes, negative or non-normalised probs,
  // or repeated support points.
  void validate() const;
};

enum class Regime { CornerZero, CornerOne, Interior };

const char* to_string(Regime regime) noexcept;

struct AttentionSolution {
  Regime regime = Regime::Interior;
  double mbar = 0.0;
  double likelihood_ratio = 0.0;  // mbar / (1 - mbar), +inf for CornerOne
  std::vector<double> m;
  double information = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

// Shannon entropy in nats; 0 log 0 = 0.
double entropy(std::span<const double> probs);

// Binary entropy h(p) in nats.
double binary_entropy(double p);

// I = h(mbar) - sum_a sigma(a) h(m(a)), clamped at zero.
double mutual_information(std::span<const double> m, std::span<const double> probs);

// log E[exp(values / mu)] with max shifting.
double log_expected_exp(std::span<const double> probs, std::span<const double> values,
                        double mu);

AttentionSolution solve_attention(const Belief& belief, double mu);

// Definition of paying attention: E[exp(v/mu)] >= 1 - 1e-12.
bool attention_membership(const Belief& belief, double mu);

// V - mu*I for an arbitrary attention strategy.
double attention_objective(const Belief& belief, std::span<const double> m, double mu);

double gamma(double x);
double gamma_inverse(double y);

// delta(mu) = mu * gamma_inverse(2b), b = (exp(kappa|t|/mu) - D) / (1 - D).
double attention_threshold_delta(double mu, double t, double kappa, double diag_mass);

}  // namespace polattn
