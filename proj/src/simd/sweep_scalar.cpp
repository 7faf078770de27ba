#include "kernels.hpp"

namespace adaptctl::simd::kernels {

namespace {

// p(jw) for real ascending coefficients: Horner with (re, im) <- (re, im) * jw + a.
inline void horner(const double* coeff, std::size_t count, double w, double& re, double& im) {
  re = coeff[count - 1];
  im = 0.0;
  for (std::size_t k = count - 1; k-- > 0;) {
    const double next_re = coeff[k] - im * w;
    const double next_im = re * w;
    re = next_re;
    im = next_im;
  }
}

}  // namespace

void sweep_scalar(const SweepView& in, const double* omega, std::size_t count, double* re_h,
                  double* abs_h_sq, double* g_norm_sq) {
  for (std::size_t i = 0; i < count; ++i) {
    const double w = omega[i];
    double dr, di;
    horner(in.den, in.n_den, w, dr, di);
    const double dsq = dr * dr + di * di;

    double gsum = 0.0;
    for (std::size_t r = 0; r < in.n_out; ++r) {
      double nr, ni;
      horner(in.num + r * in.n_num, in.n_num, w, nr, ni);
      gsum = gsum + (nr * nr + ni * ni);
    }
    double hr, hi;
    horner(in.h_num, in.n_num, w, hr, hi);

    re_h[i] = (hr * dr + hi * di) / dsq;
    abs_h_sq[i] = (hr * hr + hi * hi) / dsq;
    g_norm_sq[i] = gsum / dsq;
  }
}

}  // namespace adaptctl::simd::kernels
