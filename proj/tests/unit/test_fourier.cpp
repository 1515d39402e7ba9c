#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hecke/fourier.hpp"
#include "test_util.hpp"

using namespace hecke;
using hecke::test::from_rows;

namespace {
constexpr double kPi = std::numbers::pi;
const Complex kI(0.0, 1.0);
}  // namespace

TEST_CASE("fourier on monomials: examples") {
  MultilinearPolynomial one(1);
  one.add_monomial(0, 1.0);
  CHECK(MultilinearPolynomial::max_coefficient_difference(fourier_monomial_gaussian(one), one) == 0.0);

  MultilinearPolynomial x(2);
  x.add_term({{0, 0}}, 1.0);
  CHECK(fourier_monomial_gaussian(x).terms().at(1) == kI);

  const auto t = fourier_monomial_gaussian(delta_W_polynomial(1));
  CHECK(t.terms().at(0) == Complex(1.0));
  CHECK(t.terms().at(1) == kI);
  const double y = 0.37;
  CHECK(std::abs(t.evaluate(from_rows(1, {y})) - (1.0 + kI * y)) == 0.0);
}

TEST_CASE("modified Gaussian identity is exact") {
  for (int n = 1; n <= 4; ++n) CHECK(verify_modified_gaussian_identity(n) <= 1e-12);
  CHECK(verify_modified_gaussian_identity(1) == 0.0);
  CHECK(verify_modified_gaussian_identity(2) == 0.0);
  CHECK_THROWS_AS(verify_modified_gaussian_identity(5), PreconditionError);
}

TEST_CASE("degree counting and double transform") {
  std::mt19937_64 rng(101);
  std::normal_distribution<double> z;
  for (int n = 1; n <= 4; ++n) {
    const auto poly = delta_W_polynomial(n);
    const auto once = fourier_monomial_gaussian(poly);
    const auto twice = fourier_monomial_gaussian(once);
    for (const auto& [mask, coeff] : poly.terms()) {
      const double parity = MultilinearPolynomial::degree(mask) % 2 == 0 ? 1.0 : -1.0;
      CHECK(twice.terms().at(mask) == coeff * parity);
    }
    for (int trial = 0; trial < 10; ++trial) {
      RealSquareMatrix g(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) g(i, j) = z(rng);
      }
      const Eigen::MatrixXcd ig = kI * g.cast<Complex>();
      const Complex expected = poly.evaluate(ig);
      CHECK(std::abs(once.evaluate(g) - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST_CASE("numeric 1d transforms") {
  for (double y : {0.0, 0.7, -1.3}) {
    const Complex gauss = std::exp(-kPi * y * y);
    CHECK(std::abs(fourier_numeric_1d(FourierProfile::kGaussian, y, 0.0).value - gauss) <= 1e-6);
    CHECK(std::abs(fourier_numeric_1d(FourierProfile::kXGaussian, y, 0.0).value - kI * y * gauss) <= 1e-6);
  }
  const auto f = fourier_numeric_1d(FourierProfile::kFeynman, 0.0, 1e-3);
  CHECK(std::abs(f.value - std::exp(-kI * kPi / 4.0)) <= 1e-2);
  CHECK(f.cutoff == doctest::Approx(8.0 / std::sqrt(1e-3)));
  CHECK(f.tail_bound < 1e-20);
  // Closed form of the regularized integral: sqrt(pi/a) e^{-pi^2 y^2/a}, a = eps + i pi.
  const double eps = 1e-2, y = 0.4;
  const Complex a(eps, kPi);
  const Complex exact = std::sqrt(kPi / a) * std::exp(-kPi * kPi * y * y / a);
  CHECK(std::abs(fourier_numeric_1d(FourierProfile::kFeynman, y, eps).value - exact) <= 1e-8);
  CHECK(std::abs(fourier_numeric_1d(FourierProfile::kXFeynman, y, eps).value - (kI * kPi * y / a) * exact) <= 1e-8);
  CHECK_THROWS_AS(fourier_numeric_1d(FourierProfile::kFeynman, 0.0, 0.0), PreconditionError);
}

TEST_CASE("Feynman phase") {
  const auto one = feynman_phase_check(1, 1e-3, {from_rows(1, {0.0}), from_rows(1, {0.6})});
  CHECK(std::abs(one.phase - std::exp(-kI * kPi / 4.0)) < 1e-15);
  CHECK(one.pass);
  const auto two = feynman_phase_check(2, 1e-3, {from_rows(2, {0.3, -0.2, 0.5, 0.1})});
  CHECK(std::abs(two.phase + 1.0) < 1e-15);
  CHECK(two.pass);
  CHECK(two.max_error <= 1e-2);
  CHECK_THROWS_AS(feynman_phase_check(3, 1e-3, {RealSquareMatrix::Identity(3, 3)}), PreconditionError);
}
