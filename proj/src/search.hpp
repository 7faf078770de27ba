#pragma once

// One-dimensional searches shared by the bounds and kyp modules.

#include <cmath>
#include <utility>

namespace adaptctl::detail {

inline constexpr double kInvPhi = 0.6180339887498949;  // (sqrt(5) - 1) / 2

// Minimizer of a unimodal f on [lo, hi] to relative width rel_tol. Returns
// (argmin, f(argmin)); the bracket ends are included as candidates.
template <class F>
std::pair<double, double> golden_section_min(F&& f, double lo, double hi, double rel_tol = 1e-10,
                                             int max_iter = 300) {
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > rel_tol * std::max(1.0, std::abs(a) + std::abs(b));
       ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  std::pair<double, double> best = fc <= fd ? std::pair{c, fc} : std::pair{d, fd};
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo < best.second) best = {lo, flo};
  if (fhi < best.second) best = {hi, fhi};
  return best;
}

template <class F>
std::pair<double, double> golden_section_max(F&& f, double lo, double hi, double rel_tol = 1e-10) {
  auto [x, fx] = golden_section_min([&](double t) { return -f(t); }, lo, hi, rel_tol);
  return {x, -fx};
}

// Boundary of a predicate that holds at lo and fails at hi.
template <class Pred>
std::pair<double, double> bisect(Pred&& holds, double lo, double hi, double rel_tol = 1e-10,
                                 int max_iter = 300) {
  for (int it = 0; it < max_iter && (hi - lo) > rel_tol * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? lo : hi) = mid;
  }
  return {lo, hi};
}

}  // namespace adaptctl::detail
