#pragma once

// The Hecke-Baxter kernels Q_s and Q^_s = Delta_W Q_s, their convolution
// action on eps-spherical vectors, and the two Monte Carlo routes to the
// eigenvalue (direct Haar integral and polar Cartan coordinates).

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "hecke/exterior.hpp"
#include "hecke/monte_carlo.hpp"
#include "hecke/special_functions.hpp"
#include "hecke/types.hpp"

namespace hecke {

/// Normalization of the Haar measure on GL_n(R).
///
/// kUnitFlagVolume: dmu = |det g|^{-n} dg / kappa_n, the measure for which
///   dmu = delta_N(a) dk da dn with the flag manifold O(n)/M of unit volume
///   and M counted discretely. The eigenvalue of Q^_s is exactly L(s|eps,gamma)
///   in this normalization.
/// kLebesgue: dmu = |det g|^{-n} dg; eigenvalues come out as kappa_n * L.
enum class HaarNormalization { kUnitFlagVolume, kLebesgue };

/// kappa_n = prod_{k=1}^n pi^{k/2} / Gamma(k/2) = vol(O(n)) / 2^n in the
/// Lebesgue-induced volume. kappa_1 = 1, kappa_2 = pi, kappa_3 = 2 pi^2.
double haar_normalization(int n);

/// |W^M| = 2^n n!, the fiber of the polar Cartan covering O(n) x A x O(n) -> GL_n.
double weyl_fiber_order(int n);

/// Constant C_n with  C_n (1/|W^M|) |Delta(a)| dk1 da dk2 = dmu (unit-flag
/// normalization, dk normalized). Obtained from the Laguerre-Selberg integral.
double cartan_measure_factor(int n);

/// |Delta(a)| = prod_{i<j} |a_i/a_j - a_j/a_i|.
template <typename Derived>
double weyl_discriminant(const Eigen::MatrixBase<Derived>& a) {
  double prod = 1.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    for (Eigen::Index j = i + 1; j < a.size(); ++j) prod *= std::abs(a(i) / a(j) - a(j) / a(i));
  }
  return prod;
}

/// (c/pi)^{ell(ell+1)/4}.
inline double kernel_prefactor(int n, double c) {
  const double ell = n - 1;
  return std::pow(c / std::numbers::pi, ell * (ell + 1.0) / 4.0);
}

/// Q_s(g) = (c/pi)^{ell(ell+1)/4} |det g|^{s + ell/2} exp(-c tr g^T g).
template <typename Derived>
Complex q_s(const Eigen::MatrixBase<Derived>& g, Complex s, double c) {
  detail::require_square_finite(g, "q_s");
  const int n = static_cast<int>(g.rows());
  const double ell = n - 1;
  const double det = std::abs(g.determinant());
  const double gauss = std::exp(-c * g.squaredNorm());
  const Complex power = s + ell / 2.0;
  if (det == 0.0) return power.real() > 0.0 ? Complex(0.0) : Complex(std::numeric_limits<double>::infinity());
  return kernel_prefactor(n, c) * std::exp(power * std::log(det)) * gauss;
}

/// Q^_s(g) = Delta_W(g) Q_s(g).
template <typename Derived>
Complex q_hat(const Eigen::MatrixBase<Derived>& g, Complex s, double c) {
  return delta_W(g) * q_s(g, s, c);
}

struct ConvolutionOptions {
  McOptions mc;
  HaarNormalization normalization = HaarNormalization::kUnitFlagVolume;
  /// false convolves with the plain spherical kernel Q_s instead of Q^_s.
  bool include_delta_w = true;
};

struct ConvolutionEstimate {
  MCEstimate value;
  std::size_t discarded = 0;  // samples with |det g| < 1e-12, given weight 0
};

/// Samples with |det g| below this are assigned weight zero.
inline constexpr double kDeterminantFloor = 1e-12;
/// The run fails when more than this fraction of samples is discarded.
inline constexpr double kMaxDiscardFraction = 1e-3;

/// Importance-sampled (Q^_s * phi_eps)(g_tilde) = int dmu(g) Q^_s(g) phi_eps(g^{-1} g_tilde),
/// sampling g from the matrix Gaussian at the kernel's own rate c.
/// Requires Re(s) > (ell+1)/2 so that the weight is square integrable.
ConvolutionEstimate convolve_vector(const SpectralParams& p, const RealSquareMatrix& g_tilde,
                                    std::size_t n_samples, const RandomStream& r,
                                    const ConvolutionOptions& opts = {});

struct PointVerdict {
  RealSquareMatrix point;
  Complex phi;                  // phi_eps(point)
  ConvolutionEstimate convolution;
  MCEstimate ratio;             // convolution / phi
  double z_score = 0.0;         // |ratio - L| / stderr
  bool pass = false;
};

struct EigencheckReport {
  SpectralParams params;
  LFactorValue reference;
  double tol_sigma = 4.0;
  double haar_normalization = 1.0;
  std::vector<PointVerdict> points;

  bool all_pass() const;
};

/// |phi_eps(g_tilde)| must exceed this at every evaluation point.
inline constexpr double kMinPhiMagnitude = 1e-6;

/// Convolves at each point (point i draws from r.substream(i)) and compares
/// convolution / phi_eps against L(s|eps,gamma).
EigencheckReport eigenvalue_check(const SpectralParams& p, const std::vector<RealSquareMatrix>& points,
                                  std::size_t n_samples, const RandomStream& r, double tol_sigma = 4.0,
                                  const ConvolutionOptions& opts = {});

/// Eigenvalue through polar Cartan coordinates:
///   (C_n/|W^M|) int dk1 da |Delta(a)| Q_s(a) chi_gamma(a((k1 a)^{-1}))
///               (v_eps, pi_W(k1 a k((k1 a)^{-1})) v_eps),
/// with k1 ~ Haar O(n) and log a_i ~ N(0,1) as the proposal.
MCEstimate cartan_eigenvalue_estimate(const SpectralParams& p, std::size_t n_samples, const RandomStream& r,
                                      const McOptions& opts = {});

/// Phi_{eps,gamma}(g) = int dk conj(phi_eps(k)) phi_eps(g^{-1} k).
MCEstimate spherical_function(const SpectralParams& p, const RealSquareMatrix& g, std::size_t n_samples,
                              const RandomStream& r, const McOptions& opts = {});

/// O(n)-bi-invariant profile F(g) = |det g|^t exp(-rate tr g^T g).
struct RadialProfile {
  double t = 0.0;
  double rate = 1.0;

  template <typename Derived>
  double operator()(const Eigen::MatrixBase<Derived>& g) const {
    const double det = std::abs(g.determinant());
    const double gauss = std::exp(-rate * g.squaredNorm());
    if (det == 0.0) return t > 0.0 ? 0.0 : (t == 0.0 ? gauss : std::numeric_limits<double>::infinity());
    return std::pow(det, t) * gauss;
  }
};

struct RamifiedConvolutionReport {
  MCEstimate left;        // (F_{e1,e1p} * G_{e2,e2p})(g_tilde)
  MCEstimate scalar;      // (F * G)(g_tilde)
  Complex factor;         // delta_{e1p,e2}/d * (v_e1, pi_W(g_tilde) v_e2p)
  Complex predicted;      // factor * scalar.mean
  MCEstimate difference;  // per-sample left - factor * scalar
  Complex ratio;          // left / predicted (NaN when predicted vanishes)
  double z_score = 0.0;
  bool pass = false;
};

/// Checks (F_{e1,e1p} * G_{e2,e2p})(g) = delta_{e1p,e2}/dim W * (v_e1, pi_W(g) v_e2p) (F*G)(g)
/// with both sides drawn from common samples g ~ Gaussian(F.rate).
/// Requires F.t > n - 1/2 for finite variance.
RamifiedConvolutionReport ramified_convolution_check(const RadialProfile& f, const RadialProfile& g,
                                                     const Signature& e1, const Signature& e1p,
                                                     const Signature& e2, const Signature& e2p,
                                                     const RealSquareMatrix& g_tilde, std::size_t n_samples,
                                                     const RandomStream& r, double tol_sigma = 4.0,
                                                     const McOptions& opts = {});

}  // namespace hecke
