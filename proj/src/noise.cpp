#include <cmath>
#include <random>

#include "adaptctl/error.hpp"
#include "adaptctl/simulator.hpp"

namespace adaptctl::sim {

namespace {

// Hold index of t; the slack keeps t = k * sample_dt inside interval k.
std::size_t hold_index(double t, double hold) {
  const double k = std::floor(t / hold + 1e-9);
  return k <= 0.0 ? 0 : static_cast<std::size_t>(k);
}

}  // namespace

void NoiseSpec::validate() const {
  if (!(sample_dt > 0.0) || !std::isfinite(sample_dt))
    throw ValidationError("noise sample_dt must be positive");
  if (!(amplitude_bound >= 0.0) || !std::isfinite(amplitude_bound))
    throw ValidationError("noise amplitude_bound must be non-negative");
  for (const Sinusoid& s : sinusoids)
    if (!std::isfinite(s.amplitude) || !std::isfinite(s.omega) || !std::isfinite(s.phase))
      throw ValidationError("noise sinusoid parameters must be finite");
}

double NoiseSpec::eta_star() const {
  double out = amplitude_bound;
  for (const Sinusoid& s : sinusoids) out += std::abs(s.amplitude);
  return out;
}

NoiseSignal::NoiseSignal(NoiseSpec spec, double horizon) : spec_(std::move(spec)) {
  spec_.validate();
  if (!(horizon >= 0.0) || !std::isfinite(horizon))
    throw ValidationError("noise horizon must be finite and non-negative");
  const std::size_t count = hold_index(horizon, spec_.sample_dt) + 2;
  draws_.assign(count, 0.0);
  if (spec_.amplitude_bound == 0.0) return;
  std::mt19937_64 rng(spec_.seed);
  for (double& d : draws_) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
    d = spec_.amplitude_bound * (2.0 * u - 1.0);
  }
}

double NoiseSignal::hold_value(std::size_t index) const {
  if (index >= draws_.size()) throw ValidationError("noise evaluated beyond its horizon");
  return draws_[index];
}

double NoiseSignal::operator()(double t) const {
  double out = hold_value(hold_index(t, spec_.sample_dt));
  for (const Sinusoid& s : spec_.sinusoids) out += s.amplitude * std::sin(s.omega * t + s.phase);
  return out;
}

NoiseSignal make_noise(const NoiseSpec& spec, double horizon) { return NoiseSignal(spec, horizon); }

}  // namespace adaptctl::sim
