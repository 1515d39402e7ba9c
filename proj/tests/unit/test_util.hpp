#pragma once

#include <random>

#include <Eigen/Dense>

#include "hecke/types.hpp"

namespace hecke::test {

// Entries uniform in [-2, 2], redrawn until |det| >= 1e-3.
inline RealSquareMatrix random_well_conditioned(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (;;) {
    RealSquareMatrix g(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) g(i, j) = u(rng);
    }
    if (std::abs(g.determinant()) >= 1e-3) return g;
  }
}

inline RealSquareMatrix random_orthogonal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> z;
  RealSquareMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = z(rng);
  }
  Eigen::HouseholderQR<RealSquareMatrix> qr(m);
  return qr.householderQ();
}

// Random lower-triangular with diagonal bounded away from 0 and random signs.
inline RealSquareMatrix random_lower_triangular(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), mag(0.3, 2.0);
  RealSquareMatrix b = RealSquareMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) b(i, j) = u(rng);
    b(i, i) = (u(rng) < 0 ? -1.0 : 1.0) * mag(rng);
  }
  return b;
}

inline RealSquareMatrix sign_matrix(int n, std::uint32_t bits) {
  RealSquareMatrix m = RealSquareMatrix::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    if ((bits >> i) & 1u) m(i, i) = -1.0;
  }
  return m;
}

inline RealSquareMatrix from_rows(int n, std::initializer_list<double> values) {
  RealSquareMatrix g(n, n);
  auto it = values.begin();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = *it++;
  }
  return g;
}

}  // namespace hecke::test
