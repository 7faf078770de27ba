#include <immintrin.h>

#include "kernels.hpp"

namespace adaptctl::simd::kernels {

namespace {

inline void horner4(const double* coeff, std::size_t count, __m256d w, __m256d& re, __m256d& im) {
  re = _mm256_set1_pd(coeff[count - 1]);
  im = _mm256_setzero_pd();
  for (std::size_t k = count - 1; k-- > 0;) {
    const __m256d next_re = _mm256_sub_pd(_mm256_set1_pd(coeff[k]), _mm256_mul_pd(im, w));
    const __m256d next_im = _mm256_mul_pd(re, w);
    re = next_re;
    im = next_im;
  }
}

inline __m256d abs_sq(__m256d re, __m256d im) {
  return _mm256_add_pd(_mm256_mul_pd(re, re), _mm256_mul_pd(im, im));
}

}  // namespace

void sweep_avx2(const SweepView& in, const double* omega, std::size_t count, double* re_h,
                double* abs_h_sq, double* g_norm_sq) {
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d w = _mm256_loadu_pd(omega + i);
    __m256d dr, di;
    horner4(in.den, in.n_den, w, dr, di);
    const __m256d dsq = abs_sq(dr, di);

    __m256d gsum = _mm256_setzero_pd();
    for (std::size_t r = 0; r < in.n_out; ++r) {
      __m256d nr, ni;
      horner4(in.num + r * in.n_num, in.n_num, w, nr, ni);
      gsum = _mm256_add_pd(gsum, abs_sq(nr, ni));
    }
    __m256d hr, hi;
    horner4(in.h_num, in.n_num, w, hr, hi);

    const __m256d cross = _mm256_add_pd(_mm256_mul_pd(hr, dr), _mm256_mul_pd(hi, di));
    _mm256_storeu_pd(re_h + i, _mm256_div_pd(cross, dsq));
    _mm256_storeu_pd(abs_h_sq + i, _mm256_div_pd(abs_sq(hr, hi), dsq));
    _mm256_storeu_pd(g_norm_sq + i, _mm256_div_pd(gsum, dsq));
  }
  if (i < count)
    sweep_scalar(in, omega + i, count - i, re_h + i, abs_h_sq + i, g_norm_sq + i);
}

}  // namespace adaptctl::simd::kernels
