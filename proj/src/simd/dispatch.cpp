#include <cstdlib>
#include <string>

#include "adaptctl/error.hpp"
#include "adaptctl/simd/sweep.hpp"
#include "kernels.hpp"

namespace adaptctl::simd {

namespace {

bool cpu_has_avx2() {
#if defined(ADAPTCTL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa detect() {
  const std::vector<Isa> isas = available_isas();
  if (const char* env = std::getenv("ADAPTCTL_SIMD")) {
    const std::string want(env);
    for (Isa isa : isas)
      if (isa_name(isa) == want) return isa;
  }
  return isas.back();
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "unknown";
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out{Isa::kScalar};
  if (cpu_has_avx2()) out.push_back(Isa::kAvx2);
#if defined(ADAPTCTL_HAVE_NEON)
  out.push_back(Isa::kNeon);
#endif
  return out;
}

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

void evaluate_sweep(Isa isa, const SweepView& in, std::span<const double> omega,
                    const SweepOutput& out) {
  const std::size_t n = omega.size();
  if (out.re_h.size() < n || out.abs_h_sq.size() < n || out.g_norm_sq.size() < n)
    throw ValidationError("evaluate_sweep: output spans shorter than the grid");
  if (in.n_den == 0 || in.n_num == 0) throw ValidationError("evaluate_sweep: empty polynomial");
  if (n == 0) return;
  switch (isa) {
    case Isa::kScalar:
      kernels::sweep_scalar(in, omega.data(), n, out.re_h.data(), out.abs_h_sq.data(),
                            out.g_norm_sq.data());
      return;
    case Isa::kAvx2:
#if defined(ADAPTCTL_HAVE_AVX2)
      if (cpu_has_avx2()) {
        kernels::sweep_avx2(in, omega.data(), n, out.re_h.data(), out.abs_h_sq.data(),
                            out.g_norm_sq.data());
        return;
      }
#endif
      break;
    case Isa::kNeon:
#if defined(ADAPTCTL_HAVE_NEON)
      kernels::sweep_neon(in, omega.data(), n, out.re_h.data(), out.abs_h_sq.data(),
                          out.g_norm_sq.data());
      return;
#endif
      break;
  }
  throw ValidationError("evaluate_sweep: ISA " + std::string(isa_name(isa)) + " not available");
}

}  // namespace adaptctl::simd
