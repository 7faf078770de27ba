#pragma once

#include <optional>

#include "adaptctl/lyapunov.hpp"
#include "adaptctl/regressor.hpp"

namespace adaptctl::bounds {

// Static update law W_hat = K beta B^T P e with K = alpha K_b.
struct StaticLawConfig {
  SymMatrix K_b;
  double alpha = 1.0;
  double gamma = 0.0;  // split between the two uncertainty terms, in [0, 1)
  double mu = 0.0;     // settling-rate constant; 0 gives the residual error
  double b = 0.0;      // inf_x beta(x)^T K_b beta(x)

  SymMatrix K() const { return K_b * alpha; }
  void validate() const;
};

struct BoundReport {
  double r_e = 0.0;       // ultimate bound of ||e|| at the configured mu
  double c_e = 0.0;       // convergence rate of the transient envelope
  double residual = 0.0;  // r_e at mu = 0
  double g_value = 0.0;   // g(alpha b gamma, Q, PB)
  std::optional<double> settling_time;
};

// Exact infimum of beta(x)^T K_b beta(x). Affine families are solved as a
// weighted least-squares problem; quadratic families are supported only when
// they vanish at the origin (infimum 0).
double beta_inf_bound(const Regressor& beta, const SymMatrix& K_b);

BoundReport ultimate_bound(const NominalCertificate& cert, const StaticLawConfig& cfg,
                           const Vector& W, double eta_star);

double convergence_rate(const NominalCertificate& cert, const StaticLawConfig& cfg);

// Envelope of ||e(t)|| from an initial norm e0_norm >= residual.
double transient_envelope(double t, double e0_norm, const NominalCertificate& cert,
                          const StaticLawConfig& cfg, const Vector& W, double eta_star);

// (V0 - rho) / mu.
double settling_time(double V0, double rho, double mu);

// Settling time into the sublevel set that certifies ||e|| <= r_e(mu) from
// the initial state e0. The W^T Gamma^-1 W part of V cancels in V0 - rho.
double settling_time(const NominalCertificate& cert, const StaticLawConfig& cfg, const Vector& W,
                     double eta_star, const Vector& e0);

// lambda_min(Q) / (b * g'(0+)). Gains strictly above this make the set M
// in gamma_star nonempty.
double alpha_lower_bound(const NominalCertificate& cert, double b);

struct GammaStar {
  double gamma = 0.0;
  double Phi = 0.0;  // sup M, equals alpha b gamma
};

GammaStar gamma_star(const NominalCertificate& cert, const StaticLawConfig& cfg);

struct TauBound {
  double tau = 0.0;
  double eps_opt = 0.0;  // maximizer
  double sup_E = 0.0;    // g(2 alpha b - sup_E) = 0
};

// Linear-growth bound on |W^T beta(x)| / ||x|| below which e -> 0 when
// eta = 0.
TauBound tau_growth_bound(const NominalCertificate& cert, double alpha, double b);

}  // namespace adaptctl::bounds
