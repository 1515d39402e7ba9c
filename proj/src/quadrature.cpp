#include "hecke/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>

namespace hecke {
namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
constexpr std::array<double, 4> kGaussWeights = {0.129484966168869693270611432679082,
                                                 0.279705391489276667901467771423780,
                                                 0.381830050505118944950369775488975,
                                                 0.417959183673469387755102040816327};

struct Panel {
  double lo;
  double hi;
  Complex value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod(const std::function<Complex(double)>& f, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const Complex fc = f(mid);
  Complex kronrod = kKronrodWeights[7] * fc;
  Complex gauss = kGaussWeights[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const Complex sum = f(mid - dx) + f(mid + dx);
    kronrod += kKronrodWeights[i] * sum;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  return Panel{lo, hi, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<Complex(double)>& f, double lo, double hi,
                                    const QuadratureOptions& opts) {
  std::priority_queue<Panel> heap;
  Complex total = 0.0;
  double err = 0.0;
  const int panels = std::max(1, opts.initial_panels);
  const double width = (hi - lo) / panels;
  for (int i = 0; i < panels; ++i) {
    const double a = lo + i * width;
    const double b = (i + 1 == panels) ? hi : a + width;
    Panel p = gauss_kronrod(f, a, b);
    total += p.value;
    err += p.error;
    heap.push(p);
  }
  int count = panels;
  while (err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
    if (count >= opts.max_intervals) {
      throw ConvergenceError("integrate_adaptive: no convergence on [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "] (error estimate " + std::to_string(err) + ")");
    }
    const Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const Panel left = gauss_kronrod(f, worst.lo, mid);
    const Panel right = gauss_kronrod(f, mid, worst.hi);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  // Re-sum to shed the drift of the running updates.
  Complex resum = 0.0;
  double reerr = 0.0;
  while (!heap.empty()) {
    resum += heap.top().value;
    reerr += heap.top().error;
    heap.pop();
  }
  return QuadratureResult{resum, reerr, count};
}

}  // namespace hecke
