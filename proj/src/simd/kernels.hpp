#pragma once

// Entry points of the per-ISA translation units. Raw pointers only: these
// files are compiled with different target flags and must not share inline
// library code with the rest of the build.

#include <cstddef>

#include "adaptctl/simd/sweep.hpp"

namespace adaptctl::simd::kernels {

void sweep_scalar(const SweepView& in, const double* omega, std::size_t count, double* re_h,
                  double* abs_h_sq, double* g_norm_sq);
void sweep_avx2(const SweepView& in, const double* omega, std::size_t count, double* re_h,
                double* abs_h_sq, double* g_norm_sq);
void sweep_neon(const SweepView& in, const double* omega, std::size_t count, double* re_h,
                double* abs_h_sq, double* g_norm_sq);

}  // namespace adaptctl::simd::kernels
