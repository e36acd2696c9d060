#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rotbec {

// Globally adaptive Gauss-Kronrod (G7/K15) integration on a finite interval:
// the panel with the largest error estimate is bisected until the summed
// error meets the tolerance, the worst panel reaches its rounding floor, or
// the panel budget runs out. The global strategy terminates gracefully when
// the integrand itself carries evaluation jitter (cancellation noise), where
// per-panel budgets would subdivide without bound.
struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_depth = 48;     // per-panel bisection limit
  int min_depth = 2;      // initial uniform splitting (2^min_depth panels)
  int max_panels = 4096;
};

namespace detail {

// K15 abscissae and weights; odd entries are the embedded G7 nodes.
inline constexpr double kGkNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double kGkWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
  double a, b, val, err, resabs;
  int depth;
  bool operator<(const Panel& o) const { return err < o.err; }
};

template <typename F>
inline Panel make_panel(F& f, double a, double b, int depth) {
  const double c = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  double fv[15];
  for (int k = 0; k < 7; ++k) {
    fv[k] = f(c - hw * kGkNodes[k]);
    fv[14 - k] = f(c + hw * kGkNodes[k]);
  }
  fv[7] = f(c);
  double resk = 0.0, resg = 0.0, rabs = 0.0;
  for (int k = 0; k < 7; ++k) {
    resk += kGkWeights[k] * (fv[k] + fv[14 - k]);
    rabs += kGkWeights[k] * (std::abs(fv[k]) + std::abs(fv[14 - k]));
    if (k % 2 == 1) resg += kGaussWeights[k / 2] * (fv[k] + fv[14 - k]);
  }
  resk += kGkWeights[7] * fv[7];
  rabs += kGkWeights[7] * std::abs(fv[7]);
  resg += kGaussWeights[3] * fv[7];
  return {a, b, resk * hw, std::abs((resk - resg) * hw), rabs * hw, depth};
}

}  // namespace detail

template <typename F>
double integrate(F&& f, double a, double b, QuadOptions opt = {}) {
  using detail::Panel;
  if (!(a <= b)) throw std::invalid_argument("integrate: bad interval");
  if (a == b) return 0.0;
  auto& fn = f;

  std::vector<Panel> heap;
  const int pieces = 1 << std::max(0, std::min(opt.min_depth, 12));
  heap.reserve(std::size_t(opt.max_panels) + 2);
  for (int i = 0; i < pieces; ++i)
    heap.push_back(detail::make_panel(
        fn, a + (b - a) * i / pieces, a + (b - a) * (i + 1) / pieces,
        opt.min_depth));
  std::make_heap(heap.begin(), heap.end());

  auto totals = [&heap] {
    double v = 0.0, e = 0.0, ra = 0.0;
    for (const Panel& p : heap) {
      v += p.val;
      e += p.err;
      ra += p.resabs;
    }
    return std::array<double, 3>{v, e, ra};
  };

  while (int(heap.size()) < opt.max_panels) {
    const auto [val, err, resabs] = totals();
    const double noise = 50.0 * 2.220446049250313e-16 * resabs;
    if (err <= std::max({opt.abs_tol, opt.rel_tol * std::abs(val), noise}))
      break;
    const Panel worst = heap.front();
    // The worst panel is at its own rounding floor or depth limit; further
    // splitting cannot reduce the estimate.
    if (worst.err <= 50.0 * 2.220446049250313e-16 * worst.resabs ||
        worst.depth >= opt.max_depth)
      break;
    std::pop_heap(heap.begin(), heap.end());
    heap.pop_back();
    const double c = 0.5 * (worst.a + worst.b);
    heap.push_back(detail::make_panel(fn, worst.a, c, worst.depth + 1));
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(detail::make_panel(fn, c, worst.b, worst.depth + 1));
    std::push_heap(heap.begin(), heap.end());
  }

  // Deterministic final sum, ordered by interval.
  std::sort(heap.begin(), heap.end(),
            [](const Panel& x, const Panel& y) { return x.a < y.a; });
  double total = 0.0;
  for (const Panel& p : heap) total += p.val;
  return total;
}

// Integration with interior breakpoints (support edges, kinks). Points
// outside (a, b) are ignored.
template <typename F>
double integrate_pieces(F&& f, double a, double b,
                        std::initializer_list<double> breakpoints,
                        QuadOptions opt = {}) {
  double pts[16];
  int n = 0;
  pts[n++] = a;
  for (double p : breakpoints)
    if (p > a && p < b && n < 15) pts[n++] = p;
  pts[n++] = b;
  for (int i = 1; i < n; ++i)  // insertion sort, few points
    for (int j = i; j > 0 && pts[j] < pts[j - 1]; --j)
      std::swap(pts[j], pts[j - 1]);
  QuadOptions piece = opt;
  piece.abs_tol = opt.abs_tol / std::max(1, n - 1);
  double acc = 0.0;
  for (int i = 0; i + 1 < n; ++i)
    acc += integrate(f, pts[i], pts[i + 1], piece);
  return acc;
}

}  // namespace rotbec
