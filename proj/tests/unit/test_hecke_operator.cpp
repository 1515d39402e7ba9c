#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hecke/hecke_operator.hpp"
#include "hecke/quadrature.hpp"
#include "test_util.hpp"

using namespace hecke;
using hecke::test::from_rows;

namespace {

constexpr double kPi = std::numbers::pi;

SpectralParams params(Complex s, std::initializer_list<double> gamma, const char* eps, double c = 1.0) {
  RealVector g(static_cast<Eigen::Index>(gamma.size()));
  int i = 0;
  for (double x : gamma) g(i++) = x;
  return SpectralParams::make(s, c, g, Signature::parse(eps));
}

}  // namespace

TEST_CASE("q_s and q_hat: examples") {
  CHECK(std::abs(q_s(from_rows(1, {1.0}), 2.0, 1.0) - std::exp(-1.0)) < 1e-15);
  CHECK(std::abs(q_s(RealSquareMatrix::Identity(2, 2), 0.0, kPi) - std::exp(-2.0 * kPi)) < 1e-15);
  CHECK(std::abs(q_hat(RealSquareMatrix::Identity(2, 2), 0.0, kPi) - 6.0 * std::exp(-2.0 * kPi)) < 1e-14);
  const double x = -0.8;
  const Complex s(1.5, 0.7);
  const Complex expected = (1.0 + x) * std::exp(s * std::log(std::abs(x))) * std::exp(-2.0 * x * x);
  CHECK(std::abs(q_hat(from_rows(1, {x}), s, 2.0) - expected) < 1e-15);
}

TEST_CASE("q_s bi-invariance and q_hat Ad-M invariance") {
  std::mt19937_64 rng(81);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 4;
    const RealSquareMatrix g = test::random_well_conditioned(n, rng);
    const RealSquareMatrix k1 = test::random_orthogonal(n, rng);
    const RealSquareMatrix k2 = test::random_orthogonal(n, rng);
    const Complex s(2.0, 0.3);
    const Complex base = q_s(g, s, 0.7);
    CHECK(std::abs(q_s(RealSquareMatrix(k1 * g * k2), s, 0.7) - base) <= 1e-12 * std::max(1e-300, std::abs(base)));
    const Complex hat = q_hat(g, s, 0.7);
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
      const RealSquareMatrix sm = test::sign_matrix(n, m);
      CHECK(std::abs(q_hat(RealSquareMatrix(sm * g * sm), s, 0.7) - hat) <= 1e-12 * std::abs(hat) + 1e-300);
    }
  }
}

TEST_CASE("measure constants") {
  CHECK(haar_normalization(1) == doctest::Approx(1.0));
  CHECK(haar_normalization(2) == doctest::Approx(kPi));
  CHECK(haar_normalization(3) == doctest::Approx(2.0 * kPi * kPi));
  CHECK(weyl_fiber_order(1) == 2.0);
  CHECK(weyl_fiber_order(2) == 8.0);
  CHECK(weyl_fiber_order(3) == 48.0);
  CHECK(cartan_measure_factor(1) == doctest::Approx(4.0));
  CHECK(cartan_measure_factor(2) == doctest::Approx(16.0 * kPi));
}

// int e^{-tr g^T g} dg = pi^{n^2/2}. Along the Cartan route dg = kappa_n |det g|^n dmu and
// dmu = (C_n/|W^M|) |Delta(a)| dk1 (da/a) dk2, leaving an integral over a in R_+^n.
TEST_CASE("Cartan measure constant reproduces the Gaussian integral") {
  auto radial = [](const RealVector& a) {
    const int n = static_cast<int>(a.size());
    double v = weyl_discriminant(a) * std::exp(-a.squaredNorm());
    for (int i = 0; i < n; ++i) v *= std::pow(a(i), n - 1);  // a^n da/a
    return v;
  };
  auto constant = [](int n) { return haar_normalization(n) * cartan_measure_factor(n) / weyl_fiber_order(n); };

  QuadratureOptions q;
  q.rel_tol = 1e-10;
  q.abs_tol = 0.0;
  q.initial_panels = 16;
  const double one = integrate_adaptive([&](double a) { return Complex(radial(RealVector::Constant(1, a))); }, 0.0,
                                        12.0, q)
                         .value.real();
  CHECK(constant(1) * one == doctest::Approx(std::sqrt(kPi)).epsilon(1e-9));

  q.rel_tol = 1e-9;
  const double two =
      integrate_adaptive(
          [&](double a1) {
            QuadratureOptions inner;
            inner.rel_tol = 1e-11;
            inner.abs_tol = 0.0;
            inner.initial_panels = 8;
            // The kink at a2 = a1 is split out by integrating the two sides separately.
            auto f = [&](double a2) {
              RealVector a(2);
              a << a1, a2;
              return Complex(radial(a));
            };
            return integrate_adaptive(f, 0.0, a1, inner).value + integrate_adaptive(f, a1, 12.0, inner).value;
          },
          0.0, 12.0, q)
          .value.real();
  CHECK(constant(2) * two == doctest::Approx(kPi * kPi).epsilon(1e-7));

  // n = 3 by Monte Carlo over a ~ half-normal.
  const RandomStream r(82);
  const auto three = mc_expectation(
      [&](const RealVector& a) {
        double density = 1.0;
        for (int i = 0; i < 3; ++i) density *= std::sqrt(2.0 / kPi) * std::exp(-0.5 * a(i) * a(i));
        return constant(3) * radial(a) / density;
      },
      [](RandomStream& s) {
        RealVector a(3);
        for (int i = 0; i < 3; ++i) a(i) = std::abs(s.normal());
        return a;
      },
      400000, r);
  CHECK(three.agrees_with(std::pow(kPi, 4.5), 4.0));
}

TEST_CASE("convolve_vector: rank-1 closed forms") {
  const RandomStream r(83);
  const RealSquareMatrix gt = from_rows(1, {1.4});
  for (const char* eps : {"0", "1"}) {
    const auto p = params(2.5, {0.3}, eps);
    const auto est = convolve_vector(p, gt, 400000, r);
    const Complex phi = epsilon_spherical(p, gt);
    // L(s|eps,gamma) = 2 int (da/a) a^{s + eps - i gamma} e^{-c a^2}, by quadrature.
    const Complex x = p.s + static_cast<double>(p.epsilon[0]) - Complex(0.0, 0.3);
    const Complex oracle = 2.0 * gamma_integral_oracle(x, 1.0);
    CHECK(est.value.agrees_with(oracle * phi, 4.0));
    CHECK(est.discarded == 0);
  }
  // Real for real s and gamma = 0 at the identity.
  const auto real = convolve_vector(params(3.0, {0.0}, "0"), from_rows(1, {1.0}), 100000, r);
  CHECK(std::abs(real.value.mean.imag()) == 0.0);
}

TEST_CASE("convolve_vector: Lebesgue normalization scales by kappa_n") {
  const RandomStream r(84);
  const auto p = params(Complex(3.0, 0.5), {0.3, -0.7}, "01");
  const RealSquareMatrix gt = from_rows(2, {1.1, 0.3, -0.4, 0.9});
  ConvolutionOptions leb;
  leb.normalization = HaarNormalization::kLebesgue;
  const auto raw = convolve_vector(p, gt, 300000, r, leb);
  const auto flag = convolve_vector(p, gt, 300000, r);
  CHECK(std::abs(raw.value.mean - flag.value.mean * kPi) <= 1e-14 * std::abs(raw.value.mean));
  const Complex expected = kPi * l_factor(p).value * epsilon_spherical(p, gt);
  CHECK(raw.value.agrees_with(expected, 4.0));
}

TEST_CASE("convolve_vector: preconditions") {
  const RandomStream r(85);
  CHECK_THROWS_AS(convolve_vector(params(1.0, {0.0, 0.0}, "00"), RealSquareMatrix::Identity(2, 2), 1000, r),
                  PreconditionError);
  CHECK_THROWS_AS(convolve_vector(params(3.0, {0.0, 0.0}, "00"), from_rows(2, {1, 2, 2, 4}), 1000, r),
                  SingularMatrixError);
  CHECK_THROWS_AS(convolve_vector(params(3.0, {0.0, 0.0}, "00"), RealSquareMatrix::Identity(3, 3), 1000, r),
                  PreconditionError);
}

TEST_CASE("eigenvalue_check: trivial data and degenerate phi") {
  const RandomStream r(86);
  const auto p = params(2.0, {0.0, 0.0}, "00");
  const auto rep = eigenvalue_check(p, {from_rows(2, {1.2, 0.1, -0.3, 0.8})}, 300000, r);
  CHECK(std::abs(rep.reference.value - 1.0) < 1e-14);
  CHECK(rep.all_pass());

  const auto q = params(2.5, {0.0, 0.0}, "10");
  const RealSquareMatrix quarter = from_rows(2, {0, -1, 1, 0});
  CHECK_THROWS_AS(eigenvalue_check(q, {quarter}, 1000, r), PreconditionError);
}

TEST_CASE("eigenvalue_check: eigenfunction property and signature discrimination") {
  const RandomStream r(87);
  std::mt19937_64 rng(88);
  const auto p = params(Complex(3.0, 0.5), {0.3, -0.7}, "01");
  std::vector<RealSquareMatrix> points;
  for (int i = 0; i < 3; ++i) points.push_back(test::random_well_conditioned(2, rng));
  const auto rep = eigenvalue_check(p, points, 300000, r);
  CHECK(rep.all_pass());
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) CHECK(z_between(rep.points[i].ratio, rep.points[j].ratio) <= 4.0);
  }
  const Complex wrong = l_factor(params(Complex(3.0, 0.5), {0.3, -0.7}, "10")).value;
  CHECK(rep.points[0].ratio.z_score(wrong) > 10.0);
}

TEST_CASE("spherical kernel without Delta_W on phi_0") {
  const RandomStream r(89);
  ConvolutionOptions plain;
  plain.include_delta_w = false;
  for (int n : {1, 2}) {
    const auto p = n == 1 ? params(2.5, {0.3}, "0") : params(3.0, {0.3, -0.7}, "00");
    const RealSquareMatrix gt = n == 1 ? from_rows(1, {0.9}) : from_rows(2, {1.0, 0.2, 0.1, 1.1});
    const auto with = eigenvalue_check(p, {gt}, 300000, r);
    const auto without = eigenvalue_check(p, {gt}, 300000, r.substream(1), 4.0, plain);
    CHECK(with.all_pass());
    CHECK(without.all_pass());
  }
}

TEST_CASE("sequential application commutes") {
  const RandomStream r(90);
  const RealSquareMatrix gt = from_rows(2, {0.9, -0.2, 0.3, 1.2});
  const auto p1 = params(2.5, {0.2, -0.1}, "10");
  const auto p2 = params(Complex(3.5, -0.4), {0.2, -0.1}, "10");
  const auto a = eigenvalue_check(p1, {gt}, 200000, r);
  const auto b = eigenvalue_check(p2, {gt}, 200000, r.substream(1));
  CHECK(a.all_pass());
  CHECK(b.all_pass());
  const Complex ab = a.reference.value * b.reference.value;
  const Complex ba = b.reference.value * a.reference.value;
  CHECK(std::abs(ab - ba) <= 1e-15 * std::abs(ab));
  const Complex product = a.points[0].ratio.mean * b.points[0].ratio.mean;
  const double sigma = std::abs(b.points[0].ratio.mean) * a.points[0].ratio.std_error +
                       std::abs(a.points[0].ratio.mean) * b.points[0].ratio.std_error;
  CHECK(std::abs(product - ab) <= 4.0 * sigma);
}

TEST_CASE("cartan estimator") {
  const RandomStream r(91);
  for (const char* eps : {"0", "1"}) {
    const auto p = params(2.5, {0.3}, eps);
    CHECK(cartan_eigenvalue_estimate(p, 300000, r).agrees_with(l_factor(p).value, 4.0));
  }
  const auto p = params(Complex(3.0, 0.5), {0.3, -0.7}, "11");
  const auto cartan = cartan_eigenvalue_estimate(p, 200000, r.substream(1));
  const auto direct = eigenvalue_check(p, {from_rows(2, {1.1, 0.3, -0.4, 0.9})}, 200000, r.substream(2));
  CHECK(cartan.agrees_with(l_factor(p).value, 4.0));
  CHECK(z_between(cartan, direct.points[0].ratio) <= 4.0);
  CHECK_THROWS_AS(cartan_eigenvalue_estimate(params(0.9, {0.0, 0.0}, "00"), 1000, r), PreconditionError);
}

TEST_CASE("spherical function at the identity") {
  const RandomStream r(92);
  std::uint64_t idx = 0;
  for (int n : {2, 3}) {
    RealVector gamma = RealVector::LinSpaced(n, -0.4, 0.5);
    for (int w = 0; w <= n; ++w) {
      const auto p = SpectralParams::make(2.0, 1.0, gamma, Signature::of_weight(n, w).front());
      const auto est = spherical_function(p, RealSquareMatrix::Identity(n, n), 100000, r.substream(idx++));
      CHECK(est.agrees_with(1.0 / static_cast<double>(graded_dimension(n, w)), 4.0));
    }
  }
  const auto p0 = SpectralParams::make(2.0, 1.0, RealVector::Zero(2), Signature::zeros(2));
  CHECK(std::abs(spherical_function(p0, RealSquareMatrix::Identity(2, 2), 1000, r).mean - 1.0) < 1e-14);
}

TEST_CASE("ramified convolution law") {
  const RandomStream r(93);
  const RadialProfile f{2.0, 1.0};
  const RadialProfile g{0.5, 0.8};
  const RealSquareMatrix gt = from_rows(2, {0.9, 0.4, -0.3, 1.1});
  const Signature e10 = Signature::parse("10"), e01 = Signature::parse("01"), e00 = Signature::zeros(2);

  const auto match = ramified_convolution_check(f, g, e10, e01, e01, e10, gt, 400000, r);
  CHECK(match.factor == Complex(gt(0, 0) / 2.0));
  CHECK(match.pass);
  CHECK(std::abs(match.ratio - 1.0) <= 4.0 * match.difference.std_error / std::abs(match.predicted));

  const auto vanish = ramified_convolution_check(f, g, e10, e01, e10, e10, gt, 400000, r.substream(1));
  CHECK(vanish.factor == Complex(0.0));
  CHECK(vanish.left.agrees_with(0.0, 4.0));
  CHECK(vanish.pass);

  const auto trivial = ramified_convolution_check(f, g, e00, e00, e00, e00, gt, 10000, r.substream(2));
  CHECK(trivial.left.mean == trivial.scalar.mean);
  CHECK(trivial.difference.std_error == 0.0);
  CHECK(trivial.pass);

  CHECK_THROWS_AS(ramified_convolution_check(RadialProfile{1.0, 1.0}, g, e10, e01, e01, e10, gt, 1000, r),
                  PreconditionError);
  CHECK_THROWS_AS(ramified_convolution_check(f, g, e10, e00, e01, e10, gt, 1000, r), PreconditionError);
}
