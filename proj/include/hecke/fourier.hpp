#pragma once

// Fourier transform  (F f)(y) = int e^{2 pi i tr(x^T y)} f(x) dx  on
// Gaussian, Delta_W-modified Gaussian and Feynman (imaginary Gaussian) measures.

#include <vector>

#include "hecke/exterior.hpp"
#include "hecke/types.hpp"

namespace hecke {

/// F[p(x) e^{-pi tr x^T x}] = p'(y) e^{-pi tr y^T y} for squarefree p: every
/// degree-d monomial picks up i^d (entries transform independently).
MultilinearPolynomial fourier_monomial_gaussian(const MultilinearPolynomial& poly);

/// max |coefficient| difference between F[Delta_W e^{-pi tr}] and Delta_W(i y)
/// (the latter as degree-d coefficients times i^d). Requires n <= 4.
double verify_modified_gaussian_identity(int n);

enum class FourierProfile {
  kGaussian,   // e^{-pi x^2}
  kXGaussian,  // x e^{-pi x^2}
  kFeynman,    // e^{-i pi x^2}
  kXFeynman,   // x e^{-i pi x^2}
};

struct FourierValue {
  Complex value;
  double quadrature_error = 0.0;  // estimate from the adaptive rule
  double tail_bound = 0.0;        // bound on the truncated |x| > L part
  double cutoff = 0.0;            // L
};

/// int e^{2 pi i x y} f(x) e^{-eps_reg x^2} dx over |x| <= L, with L = 8 for
/// the Gaussian profiles and L = 8/sqrt(eps_reg) for the Feynman ones.
/// eps_reg may be 0 for the Gaussian profiles.
FourierValue fourier_numeric_1d(FourierProfile f, double y, double eps_reg);

struct FeynmanPoint {
  RealSquareMatrix y;
  Complex transform;   // numeric F[Delta_W e^{-i pi tr}](y), extrapolated in eps_reg
  Complex raw;         // same at eps_reg, without extrapolation
  Complex predicted;   // e^{-i pi n^2/4} conj(Delta_W(y) e^{-i pi tr y^T y})
  double error = 0.0;  // |transform - predicted|
};

struct FeynmanReport {
  int n = 0;
  double eps_reg = 0.0;
  Complex phase;  // e^{-i pi n^2/4}
  double tolerance = 1e-2;
  std::vector<FeynmanPoint> points;
  double max_error = 0.0;
  bool pass = false;
};

/// Numeric check of F[Delta_W e^{-i pi tr}] = e^{-i pi n^2/4} conj(Delta_W e^{-i pi tr}).
/// n = 2 factorizes entrywise over the squarefree monomials of Delta_W.
/// Values at eps_reg and 10 eps_reg are Richardson-extrapolated to eps -> 0.
FeynmanReport feynman_phase_check(int n, double eps_reg, const std::vector<RealSquareMatrix>& points,
                                  double tolerance = 1e-2);

}  // namespace hecke
