#pragma once

// Frequency-grid evaluation of the rational response
//   G(jw) = N(jw) / d(jw),  H(jw) = h(jw) / d(jw)
// where d is the monic characteristic polynomial of A and N, h are the
// adjugate numerators of (sI - A)^-1 B and v^T (sI - A)^-1 B. Lanes run
// across frequencies. Every variant performs the same IEEE operations in the
// same order (no fused multiply-add), so all ISAs produce bit-identical
// output.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace adaptctl::simd {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);

// Plain-pointer view shared with the ISA-specific translation units.
struct SweepView {
  const double* den = nullptr;  // n + 1 coefficients, ascending powers
  std::size_t n_den = 0;
  const double* num = nullptr;  // n_out rows of n_num coefficients, row-major, ascending
  std::size_t n_out = 0;
  std::size_t n_num = 0;
  const double* h_num = nullptr;  // n_num coefficients, ascending
};

struct SweepOutput {
  std::span<double> re_h;       // Re H(jw)
  std::span<double> abs_h_sq;   // |H(jw)|^2
  std::span<double> g_norm_sq;  // ||G(jw)||^2
};

// ISAs compiled into this build and supported by the running CPU, scalar first.
std::vector<Isa> available_isas();

// Widest available ISA, unless ADAPTCTL_SIMD=scalar|avx2|neon names another
// available one.
Isa active_isa();

void evaluate_sweep(Isa isa, const SweepView& in, std::span<const double> omega,
                    const SweepOutput& out);

inline void evaluate_sweep(const SweepView& in, std::span<const double> omega,
                           const SweepOutput& out) {
  evaluate_sweep(active_isa(), in, omega, out);
}

}  // namespace adaptctl::simd
