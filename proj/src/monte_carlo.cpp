#include "hecke/monte_carlo.hpp"

#include <limits>

#include "hecke/exterior.hpp"

namespace hecke {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

RandomStream::Engine make_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return RandomStream::Engine(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(make_engine(seed, stream)) {}

RandomStream RandomStream::substream(std::uint64_t index) const {
  return RandomStream(seed_, splitmix64(splitmix64(stream_) ^ (index + 1)));
}

double MCEstimate::z_score(Complex reference) const {
  const double diff = std::abs(mean - reference);
  // An integrand that is constant up to rounding has a standard error of a
  // few ulps; the floor keeps that from turning into a spurious failure.
  const double sigma = std::max(std_error, kRoundingFloor * std::max(std::abs(mean), std::abs(reference)));
  if (sigma == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / sigma;
}

MCEstimate MCEstimate::scaled(Complex factor) const {
  return MCEstimate{mean * factor, std_error * std::abs(factor), samples};
}

double combined_sigma(const MCEstimate& a, const MCEstimate& b) { return std::hypot(a.std_error, b.std_error); }

double z_between(const MCEstimate& a, const MCEstimate& b) {
  const double diff = std::abs(a.mean - b.mean);
  const double sigma =
      std::max(combined_sigma(a, b), MCEstimate::kRoundingFloor * std::max(std::abs(a.mean), std::abs(b.mean)));
  if (sigma == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / sigma;
}

namespace detail {

MCEstimate Moments::estimate() const {
  const double nn = static_cast<double>(n);
  const double var = n > 1 ? (m2_re + m2_im) / (nn - 1.0) : 0.0;
  return MCEstimate{Complex(mean_re, mean_im), std::sqrt(std::max(0.0, var) / nn), n};
}

}  // namespace detail

double schur_orthogonality_prediction(const Signature& e1, const Signature& e1p, const Signature& e2,
                                      const Signature& e2p) {
  if (e1.weight() != e1p.weight() || e2.weight() != e2p.weight()) return 0.0;
  if (e1.weight() != e2.weight()) return 0.0;
  const double dim = static_cast<double>(graded_dimension(e1.size(), e1.weight()));
  return (e1 == e2p && e2 == e1p) ? 1.0 / dim : 0.0;
}

MCEstimate schur_orthogonality_check(const Signature& e1, const Signature& e1p, const Signature& e2,
                                     const Signature& e2p, std::size_t n_samples, const RandomStream& r,
                                     const McOptions& opts) {
  const int n = e1.size();
  if (e1p.size() != n || e2.size() != n || e2p.size() != n) {
    throw PreconditionError("schur_orthogonality_check: signatures must share one length");
  }
  if (e1.weight() != e1p.weight() || e2.weight() != e2p.weight()) {
    throw PreconditionError("schur_orthogonality_check: each signature pair must have a common grade");
  }
  return dispatch_dimension(n, [&](auto dim) {
    constexpr int Dim = decltype(dim)::value;
    return mc_expectation(
        [&](const SquareMatrix<double, Dim>& k) {
          // pi(k^{-1}) = pi(k^T) for orthogonal k.
          return minor_matrix_element(e1, e1p, k) * minor_matrix_element(e2, e2p, k.transpose());
        },
        [n](RandomStream& s) { return sample_orthogonal<Dim>(n, s); }, n_samples, r, opts);
  });
}

MCEstimate compact_convolution(const CompactFunction& f1, const CompactFunction& f2,
                               const RealSquareMatrix& k_eval, std::size_t n_samples, const RandomStream& r,
                               const McOptions& opts) {
  detail::require_square_finite(k_eval, "compact_convolution");
  const int n = static_cast<int>(k_eval.rows());
  const double orth_err = (k_eval.transpose() * k_eval - RealSquareMatrix::Identity(n, n)).norm();
  if (orth_err > 1e-8) throw PreconditionError("compact_convolution: evaluation point is not orthogonal");
  return mc_expectation(
      [&](const RealSquareMatrix& k) {
        const RealSquareMatrix rest = k.transpose() * k_eval;
        return f1(k) * f2(rest);
      },
      [n](RandomStream& s) { return sample_orthogonal(n, s); }, n_samples, r, opts);
}

}  // namespace hecke
