#include "hecke/hecke_operator.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace hecke {
namespace {

constexpr double kPi = std::numbers::pi;

void require_spherical_guard(const SpectralParams& p, const char* op) {
  const double bound = (p.ell() + 1) / 2.0;
  if (!(p.s.real() > bound)) {
    throw PreconditionError(std::string(op) + ": Re(s) = " + std::to_string(p.s.real()) +
                            " must exceed (ell+1)/2 = " + std::to_string(bound) +
                            " for a finite-variance estimator");
  }
}

void require_point(const SpectralParams& p, const RealSquareMatrix& g, const char* op) {
  detail::require_square_finite(g, op);
  if (g.rows() != p.dimension()) {
    throw PreconditionError(std::string(op) + ": point is " + std::to_string(g.rows()) + "x" +
                            std::to_string(g.cols()) + " but parameters have dimension " +
                            std::to_string(p.dimension()));
  }
  detail::require_invertible(g, op);
}

// Per-coordinate proposal for log a_i in the Cartan estimator: a 0.9/0.1
// mixture of N(0,1) and the standard logistic law. The logistic tail keeps
// the weight's second moment finite as a_i -> 0, where a pure Gaussian
// proposal would not.
constexpr double kGaussianShare = 0.9;

double sample_log_radius(RandomStream& r) {
  if (r.uniform() < kGaussianShare) return r.normal();
  double u = 0.0;
  while (u == 0.0) u = r.uniform();
  return std::log(u) - std::log1p(-u);
}

double log_radius_density(double x) {
  const double gauss = std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
  const double e = std::exp(-std::abs(x));
  const double logistic = e / ((1.0 + e) * (1.0 + e));
  return kGaussianShare * gauss + (1.0 - kGaussianShare) * logistic;
}

}  // namespace

double haar_normalization(int n) {
  if (n < 1) throw PreconditionError("haar_normalization: n must be positive");
  double log_kappa = 0.0;
  for (int k = 1; k <= n; ++k) log_kappa += 0.5 * k * std::log(kPi) - std::lgamma(0.5 * k);
  return std::exp(log_kappa);
}

double weyl_fiber_order(int n) {
  if (n < 1) throw PreconditionError("weyl_fiber_order: n must be positive");
  double out = 1.0;
  for (int k = 1; k <= n; ++k) out *= 2.0 * k;
  return out;
}

double cartan_measure_factor(int n) {
  if (n < 1) throw PreconditionError("cartan_measure_factor: n must be positive");
  // 4^n n! Gamma(3/2)^n pi^{n^2/2 - n(n+1)/4} / prod_{k=3}^{n+2} Gamma(k/2)
  const double nn = n;
  double log_c = nn * std::log(4.0) + std::lgamma(nn + 1.0) + nn * std::lgamma(1.5) +
                 (nn * nn / 2.0 - nn * (nn + 1.0) / 4.0) * std::log(kPi);
  for (int k = 3; k <= n + 2; ++k) log_c -= std::lgamma(0.5 * k);
  return std::exp(log_c);
}

ConvolutionEstimate convolve_vector(const SpectralParams& p, const RealSquareMatrix& g_tilde,
                                    std::size_t n_samples, const RandomStream& r,
                                    const ConvolutionOptions& opts) {
  require_point(p, g_tilde, "convolve_vector");
  require_spherical_guard(p, "convolve_vector");
  const int n = p.dimension();
  const double ell = p.ell();
  const double c = p.c;
  const double norm = opts.normalization == HaarNormalization::kUnitFlagVolume ? haar_normalization(n) : 1.0;
  // Q_s prefactor times the inverse Gaussian proposal density.
  const double prefactor = kernel_prefactor(n, c) * std::pow(kPi / c, n * n / 2.0) / norm;
  const Complex power = p.s + ell / 2.0 - static_cast<double>(n);
  const bool with_delta = opts.include_delta_w;

  const auto estimates = dispatch_dimension(n, [&](auto dim) {
    constexpr int Dim = decltype(dim)::value;
    using Mat = SquareMatrix<double, Dim>;
    const Mat gt = g_tilde;
    return mc_expectation_vector(
        2,
        [&](const Mat& g, std::span<Complex> out) {
          const double det = std::abs(g.determinant());
          if (det < kDeterminantFloor) {
            out[1] = 1.0;
            return;
          }
          const Mat h = g.partialPivLu().solve(gt);
          Complex phi;
          try {
            phi = epsilon_spherical(p, h);
          } catch (const SingularMatrixError&) {
            out[1] = 1.0;
            return;
          }
          const double dw = with_delta ? delta_W(g) : 1.0;
          out[0] = dw * prefactor * std::exp(power * std::log(det)) * phi;
        },
        [n, c](RandomStream& s) { return sample_gaussian_matrix<Dim>(n, c, s); }, n_samples, r, opts.mc);
  });

  ConvolutionEstimate out;
  out.value = estimates[0];
  out.discarded = static_cast<std::size_t>(std::llround(estimates[1].mean.real() * static_cast<double>(n_samples)));
  if (static_cast<double>(out.discarded) > kMaxDiscardFraction * static_cast<double>(n_samples)) {
    throw NonFiniteError("convolve_vector: " + std::to_string(out.discarded) + " of " +
                         std::to_string(n_samples) + " samples were numerically singular");
  }
  return out;
}

bool EigencheckReport::all_pass() const {
  for (const auto& pt : points) {
    if (!pt.pass) return false;
  }
  return !points.empty();
}

EigencheckReport eigenvalue_check(const SpectralParams& p, const std::vector<RealSquareMatrix>& points,
                                  std::size_t n_samples, const RandomStream& r, double tol_sigma,
                                  const ConvolutionOptions& opts) {
  if (points.empty()) throw PreconditionError("eigenvalue_check: need at least one evaluation point");
  if (!(tol_sigma > 0.0)) throw PreconditionError("eigenvalue_check: tol_sigma must be positive");
  EigencheckReport report;
  report.params = p;
  report.reference = l_factor(p);
  report.tol_sigma = tol_sigma;
  report.haar_normalization =
      opts.normalization == HaarNormalization::kUnitFlagVolume ? 1.0 : haar_normalization(p.dimension());
  const Complex expected = report.reference.value * report.haar_normalization;

  // Validate every point before spending samples on any of them.
  std::vector<Complex> phis;
  for (std::size_t i = 0; i < points.size(); ++i) {
    require_point(p, points[i], "eigenvalue_check");
    const Complex phi = epsilon_spherical(p, points[i]);
    if (!(std::abs(phi) > kMinPhiMagnitude)) {
      throw PreconditionError("eigenvalue_check: |phi_eps| = " + std::to_string(std::abs(phi)) +
                              " at point " + std::to_string(i) + " is degenerate; choose another point");
    }
    phis.push_back(phi);
  }

  for (std::size_t i = 0; i < points.size(); ++i) {
    PointVerdict v;
    v.point = points[i];
    v.phi = phis[i];
    v.convolution = convolve_vector(p, points[i], n_samples, r.substream(i), opts);
    v.ratio = v.convolution.value.scaled(1.0 / v.phi);
    v.z_score = v.ratio.z_score(expected);
    v.pass = v.z_score <= tol_sigma;
    report.points.push_back(std::move(v));
  }
  return report;
}

MCEstimate cartan_eigenvalue_estimate(const SpectralParams& p, std::size_t n_samples, const RandomStream& r,
                                      const McOptions& opts) {
  require_spherical_guard(p, "cartan_eigenvalue_estimate");
  const int n = p.dimension();
  const double ell = p.ell();
  const double c = p.c;
  const double constant = kernel_prefactor(n, c) * cartan_measure_factor(n) / weyl_fiber_order(n);
  const Complex power = p.s + ell / 2.0;
  const Signature eps = p.epsilon;

  return dispatch_dimension(n, [&](auto dim) {
    constexpr int Dim = decltype(dim)::value;
    using Mat = SquareMatrix<double, Dim>;
    using Vec = ColumnVector<double, Dim>;
    struct Draw {
      Mat k1;
      Vec x;
    };
    return mc_expectation(
        [&](const Draw& d) -> Complex {
          const Vec a = d.x.array().exp();
          double density = 1.0;
          for (int i = 0; i < n; ++i) density *= log_radius_density(d.x(i));
          const Complex q = std::exp(power * d.x.sum() - c * a.squaredNorm());
          const Mat h = a.cwiseInverse().asDiagonal() * d.k1.transpose();
          const auto f = iwasawa_decompose(h);
          const Mat ka = d.k1 * a.asDiagonal() * f.k;
          const Complex chi = torus_character(p, f.a);
          const double me = minor_matrix_element(eps, eps, ka);
          return constant * weyl_discriminant(a) * q * chi * me / density;
        },
        [n](RandomStream& s) {
          Draw d{sample_orthogonal<Dim>(n, s), Vec(n)};
          for (int i = 0; i < n; ++i) d.x(i) = sample_log_radius(s);
          return d;
        },
        n_samples, r, opts);
  });
}

MCEstimate spherical_function(const SpectralParams& p, const RealSquareMatrix& g, std::size_t n_samples,
                              const RandomStream& r, const McOptions& opts) {
  require_point(p, g, "spherical_function");
  const int n = p.dimension();
  return dispatch_dimension(n, [&](auto dim) {
    constexpr int Dim = decltype(dim)::value;
    using Mat = SquareMatrix<double, Dim>;
    const Mat g_fixed = g;
    const auto lu = g_fixed.partialPivLu();
    return mc_expectation(
        [&](const Mat& k) {
          const Mat h = lu.solve(k);
          return std::conj(epsilon_spherical(p, k)) * epsilon_spherical(p, h);
        },
        [n](RandomStream& s) { return sample_orthogonal<Dim>(n, s); }, n_samples, r, opts);
  });
}

RamifiedConvolutionReport ramified_convolution_check(const RadialProfile& f, const RadialProfile& g,
                                                     const Signature& e1, const Signature& e1p,
                                                     const Signature& e2, const Signature& e2p,
                                                     const RealSquareMatrix& g_tilde, std::size_t n_samples,
                                                     const RandomStream& r, double tol_sigma,
                                                     const McOptions& opts) {
  detail::require_square_finite(g_tilde, "ramified_convolution_check");
  detail::require_invertible(g_tilde, "ramified_convolution_check");
  const int n = static_cast<int>(g_tilde.rows());
  for (const Signature* e : {&e1, &e1p, &e2, &e2p}) {
    if (e->size() != n) {
      throw PreconditionError("ramified_convolution_check: signature " + e->to_string() +
                              " does not match dimension " + std::to_string(n));
    }
  }
  if (e1.weight() != e1p.weight() || e2.weight() != e2p.weight()) {
    throw PreconditionError("ramified_convolution_check: each signature pair must have a common weight");
  }
  if (!(f.rate > 0.0) || !(g.rate > 0.0)) {
    throw PreconditionError("ramified_convolution_check: Gaussian rates must be positive");
  }
  if (!(f.t > n - 0.5)) {
    throw PreconditionError("ramified_convolution_check: F exponent t = " + std::to_string(f.t) +
                            " must exceed n - 1/2 = " + std::to_string(n - 0.5));
  }

  RamifiedConvolutionReport out;
  const double dim_w = static_cast<double>(graded_dimension(n, e1p.weight()));
  out.factor = (e1p == e2) ? minor_matrix_element(e1, e2p, g_tilde) / dim_w : 0.0;

  // F(g) dmu(g) = |det g|^{t-n} exp(-rate tr g^T g) dg / kappa_n: importance
  // sample g from the rate-F Gaussian.
  const double prefactor = std::pow(kPi / f.rate, n * n / 2.0) / haar_normalization(n);
  const double exponent = f.t - n;
  const Complex factor = out.factor;

  const auto est = dispatch_dimension(n, [&](auto dim) {
    constexpr int Dim = decltype(dim)::value;
    using Mat = SquareMatrix<double, Dim>;
    const Mat gt = g_tilde;
    return mc_expectation_vector(
        3,
        [&](const Mat& x, std::span<Complex> v) {
          const double det = std::abs(x.determinant());
          if (det < kDeterminantFloor) return;
          const Mat h = x.partialPivLu().solve(gt);
          const double scalar = prefactor * std::pow(det, exponent) * g(h);
          const double left = scalar * minor_matrix_element(e1, e1p, x) * minor_matrix_element(e2, e2p, h);
          v[0] = left;
          v[1] = scalar;
          v[2] = left - factor * scalar;
        },
        [n, rate = f.rate](RandomStream& s) { return sample_gaussian_matrix<Dim>(n, rate, s); }, n_samples, r,
        opts);
  });

  out.left = est[0];
  out.scalar = est[1];
  out.difference = est[2];
  out.predicted = out.factor * out.scalar.mean;
  out.ratio = std::abs(out.predicted) > 0.0 ? out.left.mean / out.predicted
                                            : Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  out.z_score = out.difference.z_score(0.0);
  out.pass = out.z_score <= tol_sigma;
  return out;
}

}  // namespace hecke
