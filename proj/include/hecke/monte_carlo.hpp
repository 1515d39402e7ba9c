#pragma once

// Seeded sampling on O(n) and matrix space, and a block-parallel Monte Carlo
// expectation engine whose result does not depend on the worker count.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <random>
#include <span>
#include <thread>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "hecke/types.hpp"

namespace hecke {

/// A reproducible random sub-stream identified by (seed, stream id).
/// Streams are single-owner; derive independent ones with substream().
class RandomStream {
 public:
  using Engine = std::mt19937_64;

  explicit RandomStream(std::uint64_t seed = 0, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

  RandomStream substream(std::uint64_t index) const;

  double normal() { return normal_(engine_); }
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  Engine& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  Engine engine_;
  std::normal_distribution<double> normal_;
};

/// Sample mean with its standard error. For complex data the standard error
/// is the root-sum-square of the real and imaginary standard errors.
struct MCEstimate {
  Complex mean{0.0, 0.0};
  double std_error = 0.0;
  std::size_t samples = 0;

  /// Relative floor on the standard error used by z_score.
  static constexpr double kRoundingFloor = 1e-12;

  /// |mean - reference| / std_error (0 when both vanish).
  double z_score(Complex reference) const;
  bool agrees_with(Complex reference, double tol_sigma) const { return z_score(reference) <= tol_sigma; }
  /// Estimate of factor * X; the combined standard error scales by |factor|.
  MCEstimate scaled(Complex factor) const;
  double relative_error() const { return std_error / std::abs(mean); }
};

/// sqrt(se_a^2 + se_b^2).
double combined_sigma(const MCEstimate& a, const MCEstimate& b);
/// |a - b| / combined_sigma(a, b).
double z_between(const MCEstimate& a, const MCEstimate& b);

struct McOptions {
  int workers = 1;
  std::size_t block_size = std::size_t{1} << 14;
};

namespace detail {

struct Moments {
  std::size_t n = 0;
  double mean_re = 0.0, m2_re = 0.0;
  double mean_im = 0.0, m2_im = 0.0;

  void push(Complex x) {
    ++n;
    const double dr = x.real() - mean_re;
    mean_re += dr / static_cast<double>(n);
    m2_re += dr * (x.real() - mean_re);
    const double di = x.imag() - mean_im;
    mean_im += di / static_cast<double>(n);
    m2_im += di * (x.imag() - mean_im);
  }

  void merge(const Moments& o) {
    if (o.n == 0) return;
    const double na = static_cast<double>(n), nb = static_cast<double>(o.n), nt = na + nb;
    const double dr = o.mean_re - mean_re, di = o.mean_im - mean_im;
    mean_re += dr * nb / nt;
    mean_im += di * nb / nt;
    m2_re += o.m2_re + dr * dr * na * nb / nt;
    m2_im += o.m2_im + di * di * na * nb / nt;
    n += o.n;
  }

  MCEstimate estimate() const;
};

}  // namespace detail

/// Vector-valued Monte Carlo expectation.
///
/// `sample(RandomStream&)` draws one sample; `f(sample, std::span<Complex>)`
/// writes `components` values. Samples are grouped in fixed blocks, block b
/// drawing from r.substream(b), and block moments are merged in block order,
/// so the result is bit-identical for every worker count. A non-finite value
/// raises NonFiniteError naming the global sample index.
template <class Integrand, class Sampler>
std::vector<MCEstimate> mc_expectation_vector(std::size_t components, Integrand&& f, Sampler&& sample,
                                              std::size_t n_samples, const RandomStream& r,
                                              const McOptions& opts = {}) {
  if (n_samples < 2) throw PreconditionError("mc_expectation: need at least 2 samples");
  if (components == 0) throw PreconditionError("mc_expectation: need at least one component");
  const std::size_t block = std::max<std::size_t>(opts.block_size, 1);
  const std::size_t n_blocks = (n_samples + block - 1) / block;

  std::vector<std::vector<detail::Moments>> partial(n_blocks, std::vector<detail::Moments>(components));
  std::vector<std::exception_ptr> failures(n_blocks);

  auto run_block = [&](std::size_t b) {
    try {
      RandomStream stream = r.substream(b);
      const std::size_t begin = b * block;
      const std::size_t end = std::min(n_samples, begin + block);
      std::vector<Complex> values(components);
      auto& acc = partial[b];
      for (std::size_t i = begin; i < end; ++i) {
        const auto x = sample(stream);
        std::fill(values.begin(), values.end(), Complex(0.0));
        f(x, std::span<Complex>(values));
        for (std::size_t c = 0; c < components; ++c) {
          if (!std::isfinite(values[c].real()) || !std::isfinite(values[c].imag())) {
            throw NonFiniteError("mc_expectation: non-finite integrand at sample " + std::to_string(i) +
                                 " (component " + std::to_string(c) + ")");
          }
          acc[c].push(values[c]);
        }
      }
    } catch (...) {
      failures[b] = std::current_exception();
    }
  };

  const std::size_t workers =
      std::min<std::size_t>(n_blocks, static_cast<std::size_t>(std::max(1, opts.workers)));
  if (workers <= 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) {
      run_block(b);
      if (failures[b]) break;
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t b = next++; b < n_blocks; b = next++) run_block(b);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<MCEstimate> out;
  out.reserve(components);
  for (std::size_t c = 0; c < components; ++c) {
    detail::Moments total;
    for (std::size_t b = 0; b < n_blocks; ++b) total.merge(partial[b][c]);
    out.push_back(total.estimate());
  }
  return out;
}

/// Scalar Monte Carlo expectation of f(sample) over n_samples draws.
template <class Integrand, class Sampler>
MCEstimate mc_expectation(Integrand&& f, Sampler&& sample, std::size_t n_samples, const RandomStream& r,
                          const McOptions& opts = {}) {
  return mc_expectation_vector(
      1, [&](const auto& x, std::span<Complex> out) { out[0] = static_cast<Complex>(f(x)); },
      std::forward<Sampler>(sample), n_samples, r, opts)[0];
}

/// Haar-distributed element of O(n): QR of a standard Gaussian matrix with
/// the signs of diag(R) moved into Q. Both components of O(n) are charged
/// with probability 1/2.
template <int Dim = Eigen::Dynamic>
SquareMatrix<double, Dim> sample_orthogonal(int n, RandomStream& r) {
  using Mat = SquareMatrix<double, Dim>;
  if (n < 1) throw PreconditionError("sample_orthogonal: n must be positive");
  for (;;) {
    Mat z(n, n);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) z(i, j) = r.normal();
    }
    const Eigen::HouseholderQR<Mat> qr(z);
    Mat q = qr.householderQ();
    bool degenerate = false;
    for (int i = 0; i < n; ++i) {
      const double rii = qr.matrixQR()(i, i);
      if (rii == 0.0) degenerate = true;
      if (rii < 0.0) q.col(i) *= -1.0;
    }
    if (!degenerate) return q;
  }
}

/// Matrix with i.i.d. N(0, 1/(2c)) entries: density (c/pi)^{n^2/2} exp(-c tr g^T g).
template <int Dim = Eigen::Dynamic>
SquareMatrix<double, Dim> sample_gaussian_matrix(int n, double c, RandomStream& r) {
  if (n < 1) throw PreconditionError("sample_gaussian_matrix: n must be positive");
  if (!(c > 0.0)) throw PreconditionError("sample_gaussian_matrix: c must be positive");
  const double sigma = std::sqrt(0.5 / c);
  SquareMatrix<double, Dim> g(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) g(i, j) = sigma * r.normal();
  }
  return g;
}

/// Calls f(std::integral_constant<int, Dim>) with Dim = n for n <= 4 and
/// Eigen::Dynamic otherwise.
template <class F>
decltype(auto) dispatch_dimension(int n, F&& f) {
  switch (n) {
    case 1:
      return f(std::integral_constant<int, 1>{});
    case 2:
      return f(std::integral_constant<int, 2>{});
    case 3:
      return f(std::integral_constant<int, 3>{});
    case 4:
      return f(std::integral_constant<int, 4>{});
    default:
      return f(std::integral_constant<int, Eigen::Dynamic>{});
  }
}

/// Monte Carlo estimate of int dk (v_e1, pi(k) v_e1p) (v_e2, pi(k^{-1}) v_e2p)
/// over normalized Haar measure on O(n). The grades are the signature weights.
MCEstimate schur_orthogonality_check(const Signature& e1, const Signature& e1p, const Signature& e2,
                                     const Signature& e2p, std::size_t n_samples, const RandomStream& r,
                                     const McOptions& opts = {});

/// Closed form of the above: delta_{grades}/dim * delta_{e1,e2p} delta_{e2,e1p}.
double schur_orthogonality_prediction(const Signature& e1, const Signature& e1p, const Signature& e2,
                                      const Signature& e2p);

using CompactFunction = std::function<Complex(const RealSquareMatrix&)>;

/// (f1 * f2)(k_eval) = int dk f1(k) f2(k^{-1} k_eval) over Haar O(n).
MCEstimate compact_convolution(const CompactFunction& f1, const CompactFunction& f2,
                               const RealSquareMatrix& k_eval, std::size_t n_samples, const RandomStream& r,
                               const McOptions& opts = {});

}  // namespace hecke
