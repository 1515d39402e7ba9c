#include "hecke/types.hpp"

#include <bit>
#include <cmath>

namespace hecke {

Signature::Signature(int size, std::uint32_t bits) : size_(size), bits_(bits) {
  if (size < 1 || size > kMaxDimension) {
    throw PreconditionError("signature length must be in [1, " + std::to_string(kMaxDimension) +
                            "], got " + std::to_string(size));
  }
  if (bits >> size) {
    throw PreconditionError("signature bits exceed length " + std::to_string(size));
  }
}

Signature Signature::parse(std::string_view text) {
  std::uint32_t bits = 0;
  int size = 0;
  for (char ch : text) {
    if (ch == ',' || ch == ' ') continue;
    if (ch != '0' && ch != '1') {
      throw PreconditionError("signature entries must be 0 or 1, got '" + std::string(text) + "'");
    }
    if (size >= kMaxDimension) throw PreconditionError("signature too long: '" + std::string(text) + "'");
    if (ch == '1') bits |= 1u << size;
    ++size;
  }
  return Signature(size, bits);
}

std::vector<Signature> Signature::all(int size) {
  std::vector<Signature> out;
  out.reserve(std::size_t{1} << size);
  for (std::uint32_t b = 0; b < (1u << size); ++b) out.emplace_back(size, b);
  return out;
}

std::vector<Signature> Signature::of_weight(int size, int weight) {
  std::vector<Signature> out;
  for (std::uint32_t b = 0; b < (1u << size); ++b) {
    if (std::popcount(b) == weight) out.emplace_back(size, b);
  }
  return out;
}

int Signature::weight() const { return std::popcount(bits_); }

std::vector<int> Signature::support() const {
  std::vector<int> idx;
  for (int i = 0; i < size_; ++i) {
    if ((*this)[i]) idx.push_back(i);
  }
  return idx;
}

std::string Signature::to_string() const {
  std::string out;
  for (int i = 0; i < size_; ++i) out.push_back((*this)[i] ? '1' : '0');
  return out;
}

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

RealVector rho_vector(int n) {
  RealVector rho(n);
  const double ell = n - 1;
  for (int j = 1; j <= n; ++j) rho(j - 1) = ell / 2.0 + 1.0 - j;
  return rho;
}

SpectralParams SpectralParams::make(Complex s, double c, RealVector gamma, Signature epsilon) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw PreconditionError("c must be a positive finite real, got " + std::to_string(c));
  }
  if (gamma.size() != epsilon.size()) {
    throw PreconditionError("gamma has " + std::to_string(gamma.size()) + " entries but epsilon has " +
                            std::to_string(epsilon.size()));
  }
  if (!gamma.allFinite() || !std::isfinite(s.real()) || !std::isfinite(s.imag())) {
    throw PreconditionError("spectral parameters must be finite");
  }
  return SpectralParams{s, c, std::move(gamma), epsilon};
}

}  // namespace hecke
