#pragma once

#include "hecke/types.hpp"

namespace hecke {

/// Principal-branch log Gamma(z) via a g = 7, 9-term Lanczos series, with
/// reflection for Re(z) < 1/2. Throws PoleError at non-positive integers.
Complex log_gamma(Complex z);

/// Gamma(z) = exp(log_gamma(z)).
Complex gamma_fn(Complex z);

struct LFactorValue {
  Complex value;
  SpectralParams params;
};

/// L(s, c | eps, gamma) = prod_j c^{-z_j} Gamma(z_j), z_j = (s + eps_j - i gamma_j)/2,
/// accumulated in log space.
LFactorValue l_factor(const SpectralParams& p);

/// log L(s, c | eps, gamma), defined modulo 2 pi i.
Complex log_l_factor(const SpectralParams& p);

/// L^{GL(C)}(s | gamma) = L(s | 0, gamma) * L(s | (1,...,1), gamma).
Complex gl_c_l_factor(Complex s, double c, const RealVector& gamma);

/// Quadrature of int_0^inf (da/a) a^x exp(-c a^2) = 1/2 c^{-x/2} Gamma(x/2)
/// after the substitution a = e^u. Requires Re(x) > 0.
Complex gamma_integral_oracle(Complex x, double c);

}  // namespace hecke
