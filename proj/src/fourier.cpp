#include "hecke/fourier.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "hecke/quadrature.hpp"

namespace hecke {
namespace {

constexpr double kPi = std::numbers::pi;

// i^d, exactly.
Complex i_power(int d) {
  static constexpr std::array<std::pair<double, double>, 4> table = {{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};
  const auto [re, im] = table[static_cast<std::size_t>(d % 4)];
  return Complex(re, im);
}

bool is_feynman(FourierProfile f) { return f == FourierProfile::kFeynman || f == FourierProfile::kXFeynman; }

}  // namespace

MultilinearPolynomial fourier_monomial_gaussian(const MultilinearPolynomial& poly) {
  MultilinearPolynomial out(poly.dimension());
  for (const auto& [mask, coeff] : poly.terms()) {
    out.add_monomial(mask, coeff * i_power(MultilinearPolynomial::degree(mask)));
  }
  return out;
}

double verify_modified_gaussian_identity(int n) {
  if (n < 1 || n > 4) throw PreconditionError("verify_modified_gaussian_identity: n must be in 1..4");
  const MultilinearPolynomial delta = delta_W_polynomial(n);
  const MultilinearPolynomial transformed = fourier_monomial_gaussian(delta);
  // Delta_W(i y): substitute i y_jk entrywise and expand with complex powers.
  MultilinearPolynomial rotated(n);
  for (const auto& [mask, coeff] : delta.terms()) {
    rotated.add_monomial(mask, coeff * std::pow(Complex(0.0, 1.0), MultilinearPolynomial::degree(mask)));
  }
  return MultilinearPolynomial::max_coefficient_difference(transformed, rotated);
}

FourierValue fourier_numeric_1d(FourierProfile f, double y, double eps_reg) {
  if (!std::isfinite(y)) throw NonFiniteError("fourier_numeric_1d: non-finite y");
  if (!(eps_reg >= 0.0)) throw PreconditionError("fourier_numeric_1d: eps_reg must be non-negative");
  if (is_feynman(f) && !(eps_reg > 0.0)) {
    throw PreconditionError("fourier_numeric_1d: Feynman profiles need eps_reg > 0");
  }
  const bool odd = f == FourierProfile::kXGaussian || f == FourierProfile::kXFeynman;
  const Complex a = is_feynman(f) ? Complex(eps_reg, kPi) : Complex(kPi + eps_reg, 0.0);
  const double cutoff = is_feynman(f) ? 8.0 / std::sqrt(eps_reg) : 8.0;

  // Fold x -> -x: the even part keeps cos(2 pi x y), the odd part i x sin(2 pi x y).
  auto integrand = [&](double x) -> Complex {
    const Complex envelope = std::exp(-a * (x * x));
    return odd ? Complex(0.0, 2.0) * x * std::sin(2.0 * kPi * x * y) * envelope
               : 2.0 * std::cos(2.0 * kPi * x * y) * envelope;
  };

  QuadratureOptions opts;
  opts.abs_tol = 1e-10;
  opts.rel_tol = 1e-10;
  // Roughly two panels per oscillation of the chirp e^{-i pi x^2} (and of the
  // Fourier kernel) so the adaptive phase starts from a resolved partition.
  const double cycles = cutoff * (cutoff / 2.0 + std::abs(y));
  opts.initial_panels = std::max(16, static_cast<int>(std::ceil(2.0 * cycles)));
  opts.max_intervals = 8 * opts.initial_panels + 200000;
  const QuadratureResult q = integrate_adaptive(integrand, 0.0, cutoff, opts);

  // |tail| <= 2 int_L^inf x^m e^{-Re(a) x^2} dx, in closed form for m = 1 and bounded for m = 0.
  const double re_a = a.real();
  const double tail = std::exp(-re_a * cutoff * cutoff) * (odd ? 1.0 / re_a : 1.0 / (re_a * cutoff));
  return FourierValue{q.value, q.error_estimate, tail, cutoff};
}

FeynmanReport feynman_phase_check(int n, double eps_reg, const std::vector<RealSquareMatrix>& points,
                                  double tolerance) {
  if (n < 1 || n > 2) throw PreconditionError("feynman_phase_check: numeric route supports n in {1, 2}");
  if (!(eps_reg > 0.0)) throw PreconditionError("feynman_phase_check: eps_reg must be positive");
  if (points.empty()) throw PreconditionError("feynman_phase_check: need at least one sample point");

  FeynmanReport report;
  report.n = n;
  report.eps_reg = eps_reg;
  report.tolerance = tolerance;
  report.phase = std::exp(Complex(0.0, -kPi * n * n / 4.0));
  const MultilinearPolynomial delta = delta_W_polynomial(n);

  // F[Delta_W e^{-(eps + i pi) tr}](y) from the entrywise transforms.
  auto transform_at = [&](const RealSquareMatrix& y, double eps) {
    std::vector<Complex> even(n * n), odd(n * n);
    for (int bit = 0; bit < n * n; ++bit) {
      const double yy = y(bit / n, bit % n);
      even[bit] = fourier_numeric_1d(FourierProfile::kFeynman, yy, eps).value;
      odd[bit] = fourier_numeric_1d(FourierProfile::kXFeynman, yy, eps).value;
    }
    Complex sum = 0.0;
    for (const auto& [mask, coeff] : delta.terms()) {
      Complex prod = coeff;
      for (int bit = 0; bit < n * n; ++bit) prod *= ((mask >> bit) & 1u) ? odd[bit] : even[bit];
      sum += prod;
    }
    return sum;
  };

  for (const auto& y : points) {
    detail::require_square_finite(y, "feynman_phase_check");
    if (y.rows() != n) throw PreconditionError("feynman_phase_check: sample point has the wrong dimension");
    FeynmanPoint pt;
    pt.y = y;
    pt.raw = transform_at(y, eps_reg);
    const Complex coarse = transform_at(y, 10.0 * eps_reg);
    // The regularized value is analytic in eps; drop the linear term.
    pt.transform = (10.0 * pt.raw - coarse) / 9.0;
    const Complex g = delta.evaluate(y) * std::exp(Complex(0.0, -kPi * y.squaredNorm()));
    pt.predicted = report.phase * std::conj(g);
    pt.error = std::abs(pt.transform - pt.predicted);
    report.max_error = std::max(report.max_error, pt.error);
    report.points.push_back(pt);
  }
  report.pass = report.max_error <= tolerance;
  return report;
}

}  // namespace hecke
