#pragma once

// Iwasawa (g = k a n, n lower unipotent) and polar Cartan (g = k1 a k2)
// decompositions of GL_n(R), and the Borel character.

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "hecke/types.hpp"

namespace hecke {

template <typename Scalar, int Dim = Eigen::Dynamic>
struct IwasawaFactors {
  SquareMatrix<Scalar, Dim> k;  // orthogonal
  ColumnVector<Scalar, Dim> a;  // strictly positive diagonal of A
  SquareMatrix<Scalar, Dim> n;  // lower triangular, unit diagonal

  SquareMatrix<Scalar, Dim> reconstruct() const { return k * a.asDiagonal() * n; }
};

template <typename Scalar, int Dim = Eigen::Dynamic>
struct CartanFactors {
  SquareMatrix<Scalar, Dim> k1;
  ColumnVector<Scalar, Dim> a;  // singular values, non-increasing
  SquareMatrix<Scalar, Dim> k2;

  SquareMatrix<Scalar, Dim> reconstruct() const { return k1 * a.asDiagonal() * k2; }
};

/// Relative singularity threshold: |det g| < kSingularTolerance * max|g_ij|^n.
inline constexpr double kSingularTolerance = 1e-12;

namespace detail {

template <typename Derived>
void require_square_finite(const Eigen::MatrixBase<Derived>& g, const char* op) {
  if (g.rows() != g.cols() || g.rows() < 1) {
    throw PreconditionError(std::string(op) + ": matrix must be square and non-empty, got " +
                            std::to_string(g.rows()) + "x" + std::to_string(g.cols()));
  }
  if (!g.allFinite()) throw NonFiniteError(std::string(op) + ": matrix has non-finite entries");
}

template <typename Derived>
void require_invertible(const Eigen::MatrixBase<Derived>& g, const char* op) {
  const double scale = g.cwiseAbs().maxCoeff();
  const double det = std::abs(static_cast<double>(g.determinant()));
  if (!(det > kSingularTolerance * std::pow(scale, static_cast<double>(g.rows())))) {
    throw SingularMatrixError(std::string(op) + ": matrix is singular to tolerance (|det| = " +
                              std::to_string(det) + ")");
  }
}

}  // namespace detail

/// g = k * diag(a) * n with k orthogonal, a > 0 and n lower unipotent.
///
/// Computed from a Householder QR of g with its columns reversed:
/// g J = Q R gives g = (Q J)(J R J), and J R J is lower triangular.
template <typename Derived>
auto iwasawa_decompose(const Eigen::MatrixBase<Derived>& g)
    -> IwasawaFactors<typename Derived::Scalar, Derived::RowsAtCompileTime> {
  using Scalar = typename Derived::Scalar;
  constexpr int Dim = Derived::RowsAtCompileTime;
  using Mat = SquareMatrix<Scalar, Dim>;

  detail::require_square_finite(g, "iwasawa_decompose");
  detail::require_invertible(g, "iwasawa_decompose");

  const Mat flipped = g.rowwise().reverse();
  const Eigen::HouseholderQR<Mat> qr(flipped);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().template triangularView<Eigen::Upper>();

  IwasawaFactors<Scalar, Dim> out;
  out.k = q.rowwise().reverse();
  Mat b = r.reverse();  // lower triangular
  for (Eigen::Index i = 0; i < b.rows(); ++i) {
    if (b(i, i) < Scalar(0)) {
      b.row(i) *= Scalar(-1);
      out.k.col(i) *= Scalar(-1);
    }
  }
  out.a = b.diagonal();
  out.n = out.a.cwiseInverse().asDiagonal() * b;
  out.n.diagonal().setOnes();
  return out;
}

/// g = k1 * diag(a) * k2 with a the singular values in non-increasing order.
///
/// The sign ambiguity of each singular pair is fixed by making the largest
/// entry of every column of k1 positive; the compensating sign lands in k2.
template <typename Derived>
auto cartan_decompose(const Eigen::MatrixBase<Derived>& g)
    -> CartanFactors<typename Derived::Scalar, Derived::RowsAtCompileTime> {
  using Scalar = typename Derived::Scalar;
  constexpr int Dim = Derived::RowsAtCompileTime;
  using Mat = SquareMatrix<Scalar, Dim>;

  detail::require_square_finite(g, "cartan_decompose");
  detail::require_invertible(g, "cartan_decompose");

  const Eigen::JacobiSVD<Mat> svd(g.eval(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat u = svd.matrixU();
  Mat v = svd.matrixV();
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    Eigen::Index imax = 0;
    u.col(j).cwiseAbs().maxCoeff(&imax);
    if (u(imax, j) < Scalar(0)) {
      u.col(j) *= Scalar(-1);
      v.col(j) *= Scalar(-1);
    }
  }
  return CartanFactors<Scalar, Dim>{u, svd.singularValues(), v.transpose()};
}

/// prod_j a_j^{i gamma_j + rho_j} for a > 0: the epsilon = 0 Borel character on A.
template <typename Derived>
Complex torus_character(const SpectralParams& p, const Eigen::MatrixBase<Derived>& a) {
  const int n = p.dimension();
  const double ell = n - 1;
  Complex log_sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const double rho = ell / 2.0 + 1.0 - (j + 1);
    log_sum += Complex(rho, p.gamma(j)) * std::log(static_cast<double>(a(j)));
  }
  return std::exp(log_sum);
}

/// chi^B_{eps,gamma}(b) = prod_j sign(b_jj)^{eps_j} |b_jj|^{i gamma_j + rho_j}.
template <typename Derived>
Complex borel_character(const SpectralParams& p, const Eigen::MatrixBase<Derived>& b) {
  detail::require_square_finite(b, "borel_character");
  const int n = static_cast<int>(b.rows());
  if (n != p.dimension()) {
    throw PreconditionError("borel_character: matrix is " + std::to_string(n) + "x" + std::to_string(n) +
                            " but parameters have dimension " + std::to_string(p.dimension()));
  }
  const double scale = b.cwiseAbs().maxCoeff();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(b(i, j)) > 1e-14 * scale) {
        throw PreconditionError("borel_character: matrix is not lower triangular");
      }
    }
  }
  const double ell = n - 1;
  Complex log_sum = 0.0;
  int sign = 1;
  for (int j = 0; j < n; ++j) {
    const double d = b(j, j);
    if (d == 0.0) {
      throw PreconditionError("borel_character: zero diagonal entry at " + std::to_string(j + 1));
    }
    if (d < 0.0 && p.epsilon[j]) sign = -sign;
    const double rho = ell / 2.0 + 1.0 - (j + 1);
    log_sum += Complex(rho, p.gamma(j)) * std::log(std::abs(d));
  }
  return static_cast<double>(sign) * std::exp(log_sum);
}

}  // namespace hecke
