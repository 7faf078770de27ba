#include <arm_neon.h>

#include "kernels.hpp"

namespace adaptctl::simd::kernels {

namespace {

inline void horner2(const double* coeff, std::size_t count, float64x2_t w, float64x2_t& re,
                    float64x2_t& im) {
  re = vdupq_n_f64(coeff[count - 1]);
  im = vdupq_n_f64(0.0);
  for (std::size_t k = count - 1; k-- > 0;) {
    const float64x2_t next_re = vsubq_f64(vdupq_n_f64(coeff[k]), vmulq_f64(im, w));
    const float64x2_t next_im = vmulq_f64(re, w);
    re = next_re;
    im = next_im;
  }
}

inline float64x2_t abs_sq(float64x2_t re, float64x2_t im) {
  return vaddq_f64(vmulq_f64(re, re), vmulq_f64(im, im));
}

}  // namespace

void sweep_neon(const SweepView& in, const double* omega, std::size_t count, double* re_h,
                double* abs_h_sq, double* g_norm_sq) {
  std::size_t i = 0;
  for (; i + 2 <= count; i += 2) {
    const float64x2_t w = vld1q_f64(omega + i);
    float64x2_t dr, di;
    horner2(in.den, in.n_den, w, dr, di);
    const float64x2_t dsq = abs_sq(dr, di);

    float64x2_t gsum = vdupq_n_f64(0.0);
    for (std::size_t r = 0; r < in.n_out; ++r) {
      float64x2_t nr, ni;
      horner2(in.num + r * in.n_num, in.n_num, w, nr, ni);
      gsum = vaddq_f64(gsum, abs_sq(nr, ni));
    }
    float64x2_t hr, hi;
    horner2(in.h_num, in.n_num, w, hr, hi);

    const float64x2_t cross = vaddq_f64(vmulq_f64(hr, dr), vmulq_f64(hi, di));
    vst1q_f64(re_h + i, vdivq_f64(cross, dsq));
    vst1q_f64(abs_h_sq + i, vdivq_f64(abs_sq(hr, hi), dsq));
    vst1q_f64(g_norm_sq + i, vdivq_f64(gsum, dsq));
  }
  if (i < count)
    sweep_scalar(in, omega + i, count - i, re_h + i, abs_h_sq + i, g_norm_sq + i);
}

}  // namespace adaptctl::simd::kernels
