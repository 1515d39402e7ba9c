#include <cmath>
#include <random>

#include "doctest.h"
#include "hecke/decompositions.hpp"
#include "test_util.hpp"

using namespace hecke;
using hecke::test::from_rows;

namespace {

// Oracle: reverse Cholesky. With J the exchange matrix, J (g^T g) J = L L^T
// gives g^T g = b^T b for b = J L^T J lower triangular with positive diagonal.
RealSquareMatrix reverse_cholesky(const RealSquareMatrix& g) {
  const RealSquareMatrix m = g.transpose() * g;
  const RealSquareMatrix flipped = m.reverse();
  const Eigen::LLT<RealSquareMatrix> llt(flipped);
  const RealSquareMatrix l = llt.matrixL();
  return RealSquareMatrix(l.transpose()).reverse();
}

void check_iwasawa_invariants(const RealSquareMatrix& g, const IwasawaFactors<double>& f) {
  const int n = static_cast<int>(g.rows());
  CHECK((f.k.transpose() * f.k - RealSquareMatrix::Identity(n, n)).norm() <= 1e-12);
  CHECK(f.a.minCoeff() > 0.0);
  for (int i = 0; i < n; ++i) {
    CHECK(f.n(i, i) == 1.0);
    for (int j = i + 1; j < n; ++j) CHECK(f.n(i, j) == 0.0);
  }
  CHECK((f.reconstruct() - g).norm() <= 1e-12 * g.norm());
}

}  // namespace

TEST_CASE("iwasawa: identity and permutation") {
  const auto id = iwasawa_decompose(RealSquareMatrix::Identity(3, 3));
  CHECK((id.k - RealSquareMatrix::Identity(3, 3)).norm() < 1e-15);
  CHECK((id.a.array() - 1.0).abs().maxCoeff() < 1e-15);
  CHECK((id.n - RealSquareMatrix::Identity(3, 3)).norm() < 1e-15);

  const RealSquareMatrix swap = from_rows(2, {0, 1, 1, 0});
  const auto f = iwasawa_decompose(swap);
  CHECK((f.k - swap).norm() < 1e-15);
  CHECK((f.a.array() - 1.0).abs().maxCoeff() < 1e-15);
  CHECK((f.n - RealSquareMatrix::Identity(2, 2)).norm() < 1e-15);
}

TEST_CASE("iwasawa: shear against reverse-Cholesky oracle") {
  const RealSquareMatrix g = from_rows(2, {1, 1, 0, 1});
  const auto f = iwasawa_decompose(g);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(f.a(0) == doctest::Approx(r).epsilon(1e-14));
  CHECK(f.a(1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(f.n(1, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK((f.k - from_rows(2, {r, r, -r, r})).norm() < 1e-14);

  const RealSquareMatrix b = reverse_cholesky(g);
  CHECK((b.diagonal() - f.a).norm() < 1e-14);
}

TEST_CASE("iwasawa: random matrices match the oracle and reconstruct") {
  std::mt19937_64 rng(7);
  for (int n = 1; n <= 4; ++n) {
    for (int trial = 0; trial < 250; ++trial) {
      const RealSquareMatrix g = test::random_well_conditioned(n, rng);
      const auto f = iwasawa_decompose(g);
      check_iwasawa_invariants(g, f);
      const RealSquareMatrix b = reverse_cholesky(g);
      const RealSquareMatrix b_ours = f.a.asDiagonal() * f.n;
      CHECK((b - b_ours).norm() <= 1e-9 * b.norm());
    }
  }
}

TEST_CASE("iwasawa: uniqueness round trip and left O-invariance of a") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> la(-1.0, 1.0), u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 4;
    const RealSquareMatrix k = test::random_orthogonal(n, rng);
    RealVector a(n);
    RealSquareMatrix nn = RealSquareMatrix::Identity(n, n);
    for (int i = 0; i < n; ++i) {
      a(i) = std::exp(la(rng));
      for (int j = 0; j < i; ++j) nn(i, j) = u(rng);
    }
    const RealSquareMatrix g = k * a.asDiagonal() * nn;
    const auto f = iwasawa_decompose(g);
    CHECK((f.k - k).norm() <= 1e-10);
    CHECK((f.a - a).norm() <= 1e-10);
    CHECK((f.n - nn).norm() <= 1e-10);

    const RealSquareMatrix q = test::random_orthogonal(n, rng);
    CHECK((iwasawa_decompose(RealSquareMatrix(q * g)).a - a).norm() <= 1e-10);
  }
}

TEST_CASE("iwasawa: fixed-size instantiation agrees with dynamic") {
  std::mt19937_64 rng(3);
  const RealSquareMatrix g = test::random_well_conditioned(3, rng);
  const Eigen::Matrix3d g3 = g;
  const auto f3 = iwasawa_decompose(g3);
  const auto f = iwasawa_decompose(g);
  CHECK((RealSquareMatrix(f3.k) - f.k).norm() < 1e-14);
  CHECK((RealVector(f3.a) - f.a).norm() < 1e-14);
}

TEST_CASE("iwasawa: errors") {
  CHECK_THROWS_AS(iwasawa_decompose(from_rows(2, {1, 2, 2, 4})), SingularMatrixError);
  RealSquareMatrix bad = RealSquareMatrix::Identity(2, 2);
  bad(0, 1) = std::nan("");
  CHECK_THROWS_AS(iwasawa_decompose(bad), NonFiniteError);
  CHECK_THROWS_AS(iwasawa_decompose(RealSquareMatrix(2, 3)), PreconditionError);
}

TEST_CASE("cartan: examples") {
  const auto id = cartan_decompose(RealSquareMatrix::Identity(3, 3));
  CHECK((id.k1 - RealSquareMatrix::Identity(3, 3)).norm() < 1e-14);
  CHECK((id.k2 - RealSquareMatrix::Identity(3, 3)).norm() < 1e-14);
  CHECK((id.a.array() - 1.0).abs().maxCoeff() < 1e-14);

  const auto d = cartan_decompose(from_rows(2, {3, 0, 0, 2}));
  CHECK(d.a(0) == doctest::Approx(3.0));
  CHECK(d.a(1) == doctest::Approx(2.0));
  CHECK((d.k1 * d.k2 - RealSquareMatrix::Identity(2, 2)).norm() < 1e-14);
  CHECK((d.k1.cwiseAbs() - RealSquareMatrix::Identity(2, 2)).norm() < 1e-14);

  std::mt19937_64 rng(5);
  const RealSquareMatrix q = test::random_orthogonal(3, rng);
  const auto o = cartan_decompose(q);
  CHECK((o.a.array() - 1.0).abs().maxCoeff() < 1e-12);
  CHECK((o.k1 * o.k2 - q).norm() < 1e-12);
}

TEST_CASE("cartan: random reconstruction and singular-value oracle") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + trial % 4;
    const RealSquareMatrix g = test::random_well_conditioned(n, rng);
    const auto f = cartan_decompose(g);
    CHECK((f.reconstruct() - g).norm() <= 1e-12 * g.norm());
    CHECK((f.k1.transpose() * f.k1 - RealSquareMatrix::Identity(n, n)).norm() <= 1e-12);
    CHECK((f.k2.transpose() * f.k2 - RealSquareMatrix::Identity(n, n)).norm() <= 1e-12);
    for (int i = 0; i + 1 < n; ++i) CHECK(f.a(i) >= f.a(i + 1));
    // Oracle: eigenvalues of g^T g are the squared singular values.
    Eigen::SelfAdjointEigenSolver<RealSquareMatrix> es(g.transpose() * g);
    RealVector sv = es.eigenvalues().cwiseSqrt().reverse();
    CHECK((sv - f.a).norm() <= 1e-10 * sv(0));
  }
}

TEST_CASE("borel character") {
  RealVector gamma(2);
  gamma << 0.0, 0.0;
  const auto p = SpectralParams::make(2.0, 1.0, gamma, Signature::parse("10"));
  CHECK(std::abs(borel_character(p, RealSquareMatrix::Identity(2, 2)) - 1.0) < 1e-15);
  CHECK(std::abs(borel_character(p, from_rows(2, {-1, 0, 0, 1})) + 1.0) < 1e-15);

  RealVector g2(2);
  g2 << 0.4, -1.3;
  const auto q = SpectralParams::make(2.0, 1.0, g2, Signature::zeros(2));
  const double a1 = 1.7, a2 = 0.6;
  const Complex expected = std::pow(a1, Complex(0.5, 0.4)) * std::pow(a2, Complex(-0.5, -1.3));
  CHECK(std::abs(borel_character(q, from_rows(2, {a1, 0, 0.3, a2})) - expected) < 1e-14);

  CHECK_THROWS_AS(borel_character(q, from_rows(2, {1, 0.1, 0, 1})), PreconditionError);
  CHECK_THROWS_AS(borel_character(q, from_rows(2, {0, 0, 1, 1})), PreconditionError);
}

TEST_CASE("borel character is multiplicative") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 4;
    RealVector gamma(n);
    for (int i = 0; i < n; ++i) gamma(i) = u(rng);
    const auto p = SpectralParams::make(2.0, 1.0, gamma, Signature(n, static_cast<std::uint32_t>(trial) % (1u << n)));
    const RealSquareMatrix b1 = test::random_lower_triangular(n, rng);
    const RealSquareMatrix b2 = test::random_lower_triangular(n, rng);
    const Complex lhs = borel_character(p, RealSquareMatrix(b1 * b2));
    const Complex rhs = borel_character(p, b1) * borel_character(p, b2);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("spectral params and rho") {
  const RealVector rho = rho_vector(3);
  CHECK(rho(0) == 1.0);
  CHECK(rho(1) == 0.0);
  CHECK(rho(2) == -1.0);
  CHECK(rho_vector(2)(0) == 0.5);
  CHECK_THROWS_AS(SpectralParams::make(2.0, 0.0, RealVector::Zero(1), Signature::zeros(1)), PreconditionError);
  CHECK_THROWS_AS(SpectralParams::make(2.0, 1.0, RealVector::Zero(2), Signature::zeros(1)), PreconditionError);
}
