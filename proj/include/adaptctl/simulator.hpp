#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "adaptctl/lyapunov.hpp"
#include "adaptctl/regressor.hpp"

namespace adaptctl::sim {

struct Sinusoid {
  double amplitude = 0.0;
  double omega = 0.0;  // rad/s
  double phase = 0.0;  // rad
};

// eta(t) = hold(t) + sum a sin(w t + phase), where hold is a seeded uniform
// draw in [-cap, cap] kept constant over each sample_dt interval.
struct NoiseSpec {
  std::uint64_t seed = 0;
  double sample_dt = 0.01;
  double amplitude_bound = 0.01;
  std::vector<Sinusoid> sinusoids;

  void validate() const;
  // cap + sum |a|, bounds |eta(t)| everywhere.
  double eta_star() const;
};

class NoiseSignal {
 public:
  // Draws enough held samples to cover [0, horizon].
  NoiseSignal(NoiseSpec spec, double horizon);

  double operator()(double t) const;
  double hold_value(std::size_t index) const;
  std::size_t hold_count() const { return draws_.size(); }
  const NoiseSpec& spec() const { return spec_; }

 private:
  NoiseSpec spec_;
  std::vector<double> draws_;
};

NoiseSignal make_noise(const NoiseSpec& spec, double horizon);

struct UncertaintyModel {
  Regressor beta;
  Vector W;
  NoiseSpec eta;

  void validate(Eigen::Index n_state) const;
};

// W_hat = K q + z,  dz/dt = -Gamma Sigma z + Gamma (I - Sigma K) q.
struct PiLaw {
  SymMatrix K;
  SymMatrix Gamma;
  SymMatrix Sigma;
};

// W_hat = K q.
struct StaticLaw {
  SymMatrix K;
};

using UpdateLaw = std::variant<PiLaw, StaticLaw>;

std::string law_name(const UpdateLaw& law);
Eigen::Index law_dim(const UpdateLaw& law);
// PI: Gamma, Sigma > 0 and 0 <= K < 4 Sigma^-1. Static: K > 0.
void validate_law(const UpdateLaw& law, Eigen::Index n_beta);

// Samples k = 0..steps at t_k = k dt. Column k of each matrix is sample k.
struct Trajectory {
  std::string law;
  double dt = 0.0;
  std::vector<double> t;
  Matrix e;      // n x samples
  Matrix W_hat;  // n_beta x samples
  Vector u;      // adaptive control -W_hat^T beta(e)
  Matrix q;      // beta(e) B^T P e
  std::optional<Matrix> z;  // PI internal state W_hat - K q

  std::size_t samples() const { return t.size(); }
  double e_norm(std::size_t k) const { return e.col(static_cast<Eigen::Index>(k)).norm(); }
};

struct SimulationInput {
  const LinearErrorSystem* sys = nullptr;
  const NominalCertificate* cert = nullptr;
  UncertaintyModel unc;
  UpdateLaw law;
  Vector e0;
  Vector z0;  // PI only; empty means zero
  double t_final = 0.0;
  double dt = 1e-3;
};

// Classic fixed-step RK4 on (e) for the static law and (e, z) for PI.
// Throws NumericalError with the blow-up time when ||e|| exceeds 1e9.
Trajectory simulate(const LinearErrorSystem& sys, const NominalCertificate& cert,
                    const UncertaintyModel& unc, const UpdateLaw& law, const Vector& e0,
                    const Vector& z0, double t_final, double dt = 1e-3);

inline Trajectory simulate(const SimulationInput& in) {
  return simulate(*in.sys, *in.cert, in.unc, in.law, in.e0, in.z0, in.t_final, in.dt);
}

// Independent runs on up to ADAPTCTL_THREADS workers, results in input order.
std::vector<Trajectory> simulate_batch(const std::vector<SimulationInput>& runs);

struct UubReport {
  double tail_max = 0.0;  // max ||e|| over the trailing tail_fraction
  bool inside = false;    // tail_max <= r_e
  std::optional<double> entry_time;  // first t after which ||e|| <= r_e for good
};

UubReport verify_uub(const Trajectory& traj, double r_e, double tail_fraction);

}  // namespace adaptctl::sim
