#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace hecke {

using Complex = std::complex<double>;

template <typename Scalar, int Dim = Eigen::Dynamic>
using SquareMatrix = Eigen::Matrix<Scalar, Dim, Dim>;

template <typename Scalar, int Dim = Eigen::Dynamic>
using ColumnVector = Eigen::Matrix<Scalar, Dim, 1>;

/// Group element of GL_n(R) at runtime dimension.
using RealSquareMatrix = SquareMatrix<double>;
using RealVector = ColumnVector<double>;

/// Largest supported dimension n = ell + 1.
inline constexpr int kMaxDimension = 8;

// Error hierarchy. Everything thrown by the library derives from Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

class NonFiniteError : public Error {
 public:
  using Error::Error;
};

class PoleError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Bit vector eps in {0,1}^n. Bit i (0-based) is eps_{i+1}.
///
/// A signature labels both a character of the sign group M and the wedge
/// basis vector v_eps = e_{i_1} ^ ... ^ e_{i_k} with i_1 < ... < i_k taken
/// in ascending order.
class Signature {
 public:
  Signature() = default;
  Signature(int size, std::uint32_t bits);

  /// Parses "101" or "1,0,1".
  static Signature parse(std::string_view text);
  static Signature zeros(int size) { return Signature(size, 0u); }
  static Signature ones(int size) { return Signature(size, (1u << size) - 1u); }

  /// All 2^n signatures in increasing bit order.
  static std::vector<Signature> all(int size);
  /// Signatures of a fixed weight, in increasing bit order.
  static std::vector<Signature> of_weight(int size, int weight);

  int size() const { return size_; }
  std::uint32_t bits() const { return bits_; }
  int weight() const;
  bool operator[](int i) const { return (bits_ >> i) & 1u; }

  /// Indices i with eps_{i+1} = 1, ascending.
  std::vector<int> support() const;

  std::string to_string() const;

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  int size_ = 0;
  std::uint32_t bits_ = 0;
};

/// Binomial coefficient C(n, k); 0 outside 0 <= k <= n.
std::int64_t binomial(int n, int k);

/// d_k = dim of the k-th exterior power of C^n.
inline std::int64_t graded_dimension(int n, int k) { return binomial(n, k); }

/// rho_j = ell/2 + 1 - j for j = 1..n.
RealVector rho_vector(int n);

/// Data of a principal series representation and its L-factor.
struct SpectralParams {
  Complex s{2.0, 0.0};
  double c = 1.0;
  RealVector gamma;
  Signature epsilon;

  /// Validates c > 0 and |gamma| == |epsilon|.
  static SpectralParams make(Complex s, double c, RealVector gamma, Signature epsilon);

  int dimension() const { return static_cast<int>(gamma.size()); }
  int ell() const { return dimension() - 1; }
  RealVector rho() const { return rho_vector(dimension()); }
};

}  // namespace hecke
