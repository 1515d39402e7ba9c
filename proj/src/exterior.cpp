#include "hecke/exterior.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace hecke {

MultilinearPolynomial::MultilinearPolynomial(int dimension) : n_(dimension) {
  if (dimension < 1 || dimension > kMaxDimension) {
    throw PreconditionError("MultilinearPolynomial: dimension must be in [1, " + std::to_string(kMaxDimension) +
                            "]");
  }
}

void MultilinearPolynomial::add_term(std::span<const Entry> entries, Complex coeff) {
  Monomial mask = 0;
  for (const auto& [i, j] : entries) {
    if (i < 0 || i >= n_ || j < 0 || j >= n_) {
      throw PreconditionError("MultilinearPolynomial: entry (" + std::to_string(i) + "," + std::to_string(j) +
                              ") out of range");
    }
    const Monomial bit = Monomial{1} << (i * n_ + j);
    if (mask & bit) {
      throw PreconditionError("MultilinearPolynomial: monomial is not squarefree in g_" + std::to_string(i + 1) +
                              std::to_string(j + 1));
    }
    mask |= bit;
  }
  add_monomial(mask, coeff);
}

void MultilinearPolynomial::add_monomial(Monomial mask, Complex coeff) {
  const int bits = n_ * n_;
  if (bits < 64 && (mask >> bits) != 0) throw PreconditionError("MultilinearPolynomial: mask out of range");
  auto [it, inserted] = terms_.try_emplace(mask, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == Complex(0.0)) terms_.erase(it);
  }
}

int MultilinearPolynomial::degree(Monomial mask) { return std::popcount(mask); }

std::vector<MultilinearPolynomial::Entry> MultilinearPolynomial::entries(Monomial mask) const {
  std::vector<Entry> out;
  for (int bit = 0; bit < n_ * n_; ++bit) {
    if ((mask >> bit) & 1u) out.emplace_back(bit / n_, bit % n_);
  }
  return out;
}

double MultilinearPolynomial::max_coefficient_difference(const MultilinearPolynomial& a,
                                                         const MultilinearPolynomial& b) {
  double worst = 0.0;
  for (const auto& [mask, coeff] : a.terms()) {
    const auto it = b.terms().find(mask);
    worst = std::max(worst, std::abs(coeff - (it == b.terms().end() ? Complex(0.0) : it->second)));
  }
  for (const auto& [mask, coeff] : b.terms()) {
    if (!a.terms().contains(mask)) worst = std::max(worst, std::abs(coeff));
  }
  return worst;
}

MultilinearPolynomial delta_W_polynomial(int n) {
  if (n < 1 || n > kMaxDimension) {
    throw PreconditionError("delta_W_polynomial: dimension " + std::to_string(n) + " exceeds the supported " +
                            std::to_string(kMaxDimension));
  }
  MultilinearPolynomial poly(n);
  for (const Signature& eps : Signature::all(n)) {
    const double dk = static_cast<double>(graded_dimension(n, eps.weight()));
    const std::vector<int> idx = eps.support();
    // Leibniz expansion of the principal minor over permutations of idx.
    std::vector<int> perm(idx.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
      int inversions = 0;
      for (std::size_t a = 0; a < perm.size(); ++a) {
        for (std::size_t b = a + 1; b < perm.size(); ++b) inversions += perm[a] > perm[b];
      }
      MultilinearPolynomial::Monomial mask = 0;
      for (std::size_t a = 0; a < perm.size(); ++a) {
        mask |= MultilinearPolynomial::Monomial{1} << (idx[a] * n + idx[perm[a]]);
      }
      poly.add_monomial(mask, inversions % 2 == 0 ? dk : -dk);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return poly;
}

}  // namespace hecke
