#pragma once

// Sensitivity of W_hat against the input disturbance d = W + eta in the
// linear case beta = 1 (n_beta = 1).

#include <complex>
#include <vector>

#include "adaptctl/lyapunov.hpp"
#include "adaptctl/simulator.hpp"

namespace adaptctl::freqresp {

using Complex = std::complex<double>;

struct SensitivitySample {
  double omega = 0.0;
  Complex value;
  double mag_db = 0.0;
  double phase_deg = 0.0;

  static SensitivitySample from(double omega, Complex value);
};

// Scalar factor r(s) with R(s) = r(s) B^T P. PI: (K s + Gamma)/(s + Gamma
// Sigma), the same function as (K + Gamma/s)/(1 + Gamma Sigma/s) but defined
// at s = 0. Static: K. Throws at the PI pole s = -Gamma Sigma.
Complex regulator_prefactor(const sim::UpdateLaw& law, Complex s);

// R(s) = r(s) B^T P = r(s) v^T.
Eigen::RowVectorXcd regulator_R(const sim::UpdateLaw& law, const NominalCertificate& cert,
                                Complex s);

// S(jw) = R (jw I - A + B R)^-1 B.
SensitivitySample sensitivity(const sim::UpdateLaw& law, const LinearErrorSystem& sys,
                              const NominalCertificate& cert, double omega);

std::vector<SensitivitySample> bode_table(const sim::UpdateLaw& law, const LinearErrorSystem& sys,
                                          const NominalCertificate& cert,
                                          const std::vector<double>& grid);

// log-spaced omegas, inclusive ends.
std::vector<double> log_grid(double lo, double hi, std::size_t points);

}  // namespace adaptctl::freqresp
