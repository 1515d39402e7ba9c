#include "hecke/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "hecke/quadrature.hpp"

namespace hecke {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoefficients = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_nonpositive_integer(Complex z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

// log sin(pi z) modulo 2 pi i, stable for large |Im z|.
Complex log_sin_pi(Complex z) {
  const Complex i(0.0, 1.0);
  if (z.imag() > 20.0) {
    return -i * kPi * z + std::log(0.5 * i) + std::log(1.0 - std::exp(2.0 * i * kPi * z));
  }
  if (z.imag() < -20.0) {
    return i * kPi * z + std::log(-0.5 * i) + std::log(1.0 - std::exp(-2.0 * i * kPi * z));
  }
  return std::log(std::sin(kPi * z));
}

}  // namespace

Complex log_gamma(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw NonFiniteError("log_gamma: non-finite argument");
  if (is_nonpositive_integer(z)) {
    throw PoleError("log_gamma: pole at z = " + std::to_string(z.real()));
  }
  if (z.real() < 0.5) {
    return std::log(kPi) - log_sin_pi(z) - log_gamma(1.0 - z);
  }
  z -= 1.0;
  Complex series = kLanczosCoefficients[0];
  for (std::size_t i = 1; i < kLanczosCoefficients.size(); ++i) {
    series += kLanczosCoefficients[i] / (z + static_cast<double>(i));
  }
  const Complex t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(series);
}

Complex gamma_fn(Complex z) { return std::exp(log_gamma(z)); }

Complex log_l_factor(const SpectralParams& p) {
  const double log_c = std::log(p.c);
  Complex sum = 0.0;
  for (int j = 0; j < p.dimension(); ++j) {
    const Complex zj = 0.5 * (p.s + static_cast<double>(p.epsilon[j]) - Complex(0.0, p.gamma(j)));
    if (is_nonpositive_integer(zj)) {
      throw PoleError("l_factor: Gamma pole in factor j = " + std::to_string(j + 1) +
                      " (argument " + std::to_string(zj.real()) + ")");
    }
    sum += -zj * log_c + log_gamma(zj);
  }
  return sum;
}

LFactorValue l_factor(const SpectralParams& p) { return LFactorValue{std::exp(log_l_factor(p)), p}; }

Complex gl_c_l_factor(Complex s, double c, const RealVector& gamma) {
  const int n = static_cast<int>(gamma.size());
  const auto spherical = SpectralParams::make(s, c, gamma, Signature::zeros(n));
  const auto twisted = SpectralParams::make(s, c, gamma, Signature::ones(n));
  return std::exp(log_l_factor(spherical) + log_l_factor(twisted));
}

Complex gamma_integral_oracle(Complex x, double c) {
  if (!(x.real() > 0.0)) {
    throw ConvergenceError("gamma_integral_oracle: integral diverges for Re(x) = " + std::to_string(x.real()));
  }
  if (!(c > 0.0)) throw PreconditionError("gamma_integral_oracle: c must be positive");
  // a = e^u: the integrand is exp(x u - c e^{2u}); exponential decay as
  // u -> -inf at rate Re(x), double-exponential as u -> +inf.
  const double lo = -45.0 / x.real();
  const double hi = 0.5 * std::log((80.0 + 2.0 * std::abs(x)) / c);
  QuadratureOptions opts;
  opts.abs_tol = 0.0;
  opts.rel_tol = 1e-13;
  opts.initial_panels = 64;
  const auto result =
      integrate_adaptive([&](double u) { return std::exp(x * u - c * std::exp(2.0 * u)); }, lo, hi, opts);
  return result.value;
}

}  // namespace hecke
