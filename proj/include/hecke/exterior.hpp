#pragma once

// The representation W = (+)_k Wedge^k C^n of GL_n(R) in the wedge basis
// v_eps, its matrix elements (minors), the projector prefactor Delta_W and
// the eps-spherical vectors built from them.

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <utility>

#include <Eigen/Dense>

#include "hecke/decompositions.hpp"
#include "hecke/types.hpp"

namespace hecke {

namespace detail {

template <typename Scalar>
using MinorBuffer = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDimension, kMaxDimension>;

inline int support_indices(std::uint32_t bits, int size, std::array<int, kMaxDimension>& idx) {
  int k = 0;
  for (int i = 0; i < size; ++i) {
    if ((bits >> i) & 1u) idx[k++] = i;
  }
  return k;
}

}  // namespace detail

/// (v_row, pi_W(g) v_col): the minor of g on rows `row` and columns `col`,
/// both in ascending order. Zero when the weights differ, one at grade zero.
template <typename Derived>
typename Derived::Scalar minor_matrix_element(const Signature& row, const Signature& col,
                                              const Eigen::MatrixBase<Derived>& g) {
  using Scalar = typename Derived::Scalar;
  if (row.size() != g.rows() || col.size() != g.cols()) {
    throw PreconditionError("minor_matrix_element: signature length " + std::to_string(row.size()) + "/" +
                            std::to_string(col.size()) + " does not match a " + std::to_string(g.rows()) +
                            "x" + std::to_string(g.cols()) + " matrix");
  }
  std::array<int, kMaxDimension> ri{};
  std::array<int, kMaxDimension> ci{};
  const int k = detail::support_indices(row.bits(), row.size(), ri);
  if (detail::support_indices(col.bits(), col.size(), ci) != k) return Scalar(0);
  switch (k) {
    case 0:
      return Scalar(1);
    case 1:
      return g(ri[0], ci[0]);
    case 2:
      return g(ri[0], ci[0]) * g(ri[1], ci[1]) - g(ri[0], ci[1]) * g(ri[1], ci[0]);
    default: {
      detail::MinorBuffer<Scalar> sub(k, k);
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) sub(i, j) = g(ri[i], ci[j]);
      }
      return sub.partialPivLu().determinant();
    }
  }
}

/// Delta_eps(g), the principal minor on the support of eps.
template <typename Derived>
typename Derived::Scalar principal_minor(const Signature& eps, const Eigen::MatrixBase<Derived>& g) {
  return minor_matrix_element(eps, eps, g);
}

/// Delta_W(g) = sum_eps d_{|eps|} Delta_eps(g).
template <typename Derived>
typename Derived::Scalar delta_W(const Eigen::MatrixBase<Derived>& g) {
  using Scalar = typename Derived::Scalar;
  const int n = static_cast<int>(g.rows());
  if (n != g.cols() || n < 1 || n > kMaxDimension) {
    throw PreconditionError("delta_W: expected a square matrix of size 1.." + std::to_string(kMaxDimension));
  }
  Scalar sum(0);
  for (std::uint32_t b = 0; b < (1u << n); ++b) {
    const Signature eps(n, b);
    sum += static_cast<double>(graded_dimension(n, eps.weight())) * principal_minor(eps, g);
  }
  return sum;
}

/// Independent route to Delta_W: sum_k d_k e_k(g), where e_k are the
/// coefficients of det(tI + g), obtained by the Faddeev-LeVerrier recursion.
template <typename Derived>
typename Derived::Scalar delta_W_charpoly_oracle(const Eigen::MatrixBase<Derived>& g) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const int n = static_cast<int>(g.rows());
  const Mat a = g;
  const Mat id = Mat::Identity(n, n);
  // det(tI - A) = sum_k c[k] t^k, with c[n] = 1.
  std::vector<Scalar> c(n + 1, Scalar(0));
  c[n] = Scalar(1);
  Mat m = Mat::Zero(n, n);
  for (int k = 1; k <= n; ++k) {
    m = a * m + c[n - k + 1] * id;
    c[n - k] = -(a * m).trace() / static_cast<double>(k);
  }
  Scalar sum(0);
  for (int k = 0; k <= n; ++k) {
    // e_k(A) = (-1)^k c[n-k]
    const Scalar ek = (k % 2 == 0 ? 1.0 : -1.0) * c[n - k];
    sum += static_cast<double>(graded_dimension(n, k)) * ek;
  }
  return sum;
}

/// Finite sum of squarefree monomials in the entries g_ij of an n x n matrix.
/// A monomial is stored as a bit mask with bit i*n + j standing for g_ij.
class MultilinearPolynomial {
 public:
  using Monomial = std::uint64_t;
  using Entry = std::pair<int, int>;

  explicit MultilinearPolynomial(int dimension);

  int dimension() const { return n_; }
  const std::map<Monomial, Complex>& terms() const { return terms_; }

  /// Adds coeff * prod g_ij over `entries` (0-based). Throws PreconditionError
  /// if an entry repeats, which would make the monomial non-squarefree.
  void add_term(std::span<const Entry> entries, Complex coeff);
  void add_term(std::initializer_list<Entry> entries, Complex coeff) {
    add_term(std::span<const Entry>(entries.begin(), entries.size()), coeff);
  }
  void add_monomial(Monomial mask, Complex coeff);

  static int degree(Monomial mask);
  std::vector<Entry> entries(Monomial mask) const;

  template <typename Derived>
  Complex evaluate(const Eigen::MatrixBase<Derived>& g) const {
    if (g.rows() != n_ || g.cols() != n_) throw PreconditionError("MultilinearPolynomial: dimension mismatch");
    Complex sum = 0.0;
    for (const auto& [mask, coeff] : terms_) {
      Complex prod = coeff;
      for (int bit = 0; bit < n_ * n_; ++bit) {
        if ((mask >> bit) & 1u) prod *= static_cast<Complex>(g(bit / n_, bit % n_));
      }
      sum += prod;
    }
    return sum;
  }

  /// max over monomials of |coefficient difference|.
  static double max_coefficient_difference(const MultilinearPolynomial& a, const MultilinearPolynomial& b);

 private:
  int n_;
  std::map<Monomial, Complex> terms_;
};

/// Exact signed-monomial expansion of Delta_W on n x n matrices, n <= 8.
MultilinearPolynomial delta_W_polynomial(int n);

/// phi^{row}_{eps,gamma}(g) = (v_row, pi_W(k) v_eps) chi_gamma(a) with g = k a n.
template <typename Derived>
Complex phi_basis(const Signature& row, const SpectralParams& p, const Eigen::MatrixBase<Derived>& g) {
  if (row.weight() != p.epsilon.weight()) {
    throw PreconditionError("phi_basis: row signature " + row.to_string() + " and epsilon " +
                            p.epsilon.to_string() + " have different weights");
  }
  const auto f = iwasawa_decompose(g);
  return minor_matrix_element(row, p.epsilon, f.k) * torus_character(p, f.a);
}

/// The eps-spherical vector phi_eps(g) = Delta_eps(k(g)) chi_gamma(a(g)).
template <typename Derived>
Complex epsilon_spherical(const SpectralParams& p, const Eigen::MatrixBase<Derived>& g) {
  return phi_basis(p.epsilon, p, g);
}

}  // namespace hecke
