#include <cmath>
#include <vector>

#include "doctest.h"
#include "polattn/errors.hpp"
#include "polattn/technology.hpp"

using namespace polattn;

namespace {

double max_abs_diff(const Matrix<double>& a, const Matrix<double>& b) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  double d = 0;
  for (std::size_t i = 0; i < a.data().size(); ++i) d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
  return d;
}

}  // namespace

TEST_CASE("slant family rows") {
  const auto f = NewsTechnology::slant(0.6, {0.02, 0.5, 0.98});
  CHECK(f.prob(1, 0.5) == doctest::Approx(0.5 + 0.6 * 0.5));
  CHECK(f.prob(0, 0.5) == doctest::Approx(1 - 0.8));
  // Off-grid policy is fine for the slant family.
  CHECK(f.prob(1, 0.25) == doctest::Approx(0.25 + 0.6 * 0.75));
  CHECK(f.slant_parameter().value() == 0.6);
  CHECK_THROWS_AS(NewsTechnology::slant(1.0, {0.5}), ValidationError);
}

TEST_CASE("fully revealing technology") {
  const auto f = NewsTechnology::fully_revealing({0.01, 0.2, 0.4});
  CHECK(f.is_fully_revealing());
  CHECK(f.prob(1, 0.2) == 1.0);
  CHECK(f.prob(0, 0.2) == 0.0);
  CHECK_THROWS_AS(f.prob(0, 0.3), LookupError);
  CHECK(f.zero_entries() == 6);
}

TEST_CASE("rows must be stochastic") {
  Matrix<double> rows(2, 2);
  rows(0, 0) = 0.5, rows(0, 1) = 0.6, rows(1, 0) = 0.5, rows(1, 1) = 0.5;
  CHECK_THROWS_AS(NewsTechnology({0.3, 0.6}, {0.1, 0.9}, rows), ValidationError);
  Matrix<double> k(2, 2);
  k(0, 0) = 1.2, k(0, 1) = -0.2, k(1, 1) = 1.0;
  CHECK_THROWS_AS(MarkovKernel{k}, ValidationError);
}

TEST_CASE("garbling by identity and constant kernels") {
  const auto f = NewsTechnology::slant(0.3, {0.1, 0.4, 0.9});
  const auto same = garble(f, MarkovKernel::identity(2));
  CHECK(max_abs_diff(same.rows(), f.rows()) == 0.0);
  const std::vector<double> target{0.2, 0.8};
  const auto flat = garble(f, MarkovKernel::constant(target, 2));
  for (double a : {0.1, 0.4, 0.9}) {
    CHECK(flat.prob(0, a) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(flat.prob(1, a) == doctest::Approx(0.8).epsilon(1e-15));
  }
}

TEST_CASE("slant garbling kernel reproduces the noisier slant") {
  const std::vector<double> grid{0.01, 0.25, 0.5, 0.75, 0.99};
  for (double xi : {0.1, 0.5, 0.6})
    for (double xp : {xi, 0.65, 0.7, 0.95}) {
      if (xp < xi) continue;
      const auto f = NewsTechnology::slant(xi, grid);
      const auto g = garble(f, slant_garbling_kernel(xi, xp));
      const auto direct = NewsTechnology::slant(xp, grid);
      CHECK(max_abs_diff(g.rows(), direct.rows()) <= 1e-14);
      const double lambda = (xp - xi) / (1 - xi);
      const auto k = slant_garbling_kernel(xi, xp);
      CHECK(k(0, 1) == doctest::Approx(lambda).epsilon(1e-15));
      CHECK(k(1, 1) == 1.0);
    }
  CHECK_THROWS_AS(slant_garbling_kernel(0.7, 0.6), ValidationError);
}

TEST_CASE("log-supermodularity") {
  for (double xi : {0.05, 0.5, 0.95}) CHECK(check_log_supermodularity(NewsTechnology::slant(xi, {0.1, 0.3, 0.8})).passed());

  Matrix<double> same(2, 2, 0.5);
  const auto flat = check_log_supermodularity(NewsTechnology({0.3, 0.6}, {0.2, 0.7}, same));
  CHECK(flat.status == SupermodularityStatus::Fail);

  // Swap the entries of an increasing 2x2 to reverse the order.
  Matrix<double> rows(3, 2);
  rows(0, 0) = 0.7, rows(0, 1) = 0.3;
  rows(1, 0) = 0.4, rows(1, 1) = 0.6;
  rows(2, 0) = 0.6, rows(2, 1) = 0.4;
  const auto bad = check_log_supermodularity(NewsTechnology({0.3, 0.6}, {0.1, 0.5, 0.9}, rows));
  CHECK(bad.status == SupermodularityStatus::Fail);
  CHECK(bad.policy_lo == 1);
  CHECK(bad.policy_hi == 2);
  CHECK(bad.signal_lo == 0);
  CHECK(bad.signal_hi == 1);

  const auto fr = check_log_supermodularity(NewsTechnology::fully_revealing({0.1, 0.5}));
  CHECK(fr.status == SupermodularityStatus::Indeterminate);
}
