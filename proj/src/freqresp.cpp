#include "adaptctl/freqresp.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/LU>

#include "adaptctl/error.hpp"

namespace adaptctl::freqresp {

namespace {

void require_scalar(const sim::UpdateLaw& law) {
  if (sim::law_dim(law) != 1)
    throw ValidationError("sensitivity analysis needs beta = 1 (n_beta = 1)");
  sim::validate_law(law, 1);
}

}  // namespace

SensitivitySample SensitivitySample::from(double omega, Complex value) {
  SensitivitySample s;
  s.omega = omega;
  s.value = value;
  s.mag_db = 20.0 * std::log10(std::abs(value));
  s.phase_deg = std::arg(value) * 180.0 / std::numbers::pi;
  return s;
}

Complex regulator_prefactor(const sim::UpdateLaw& law, Complex s) {
  require_scalar(law);
  if (const auto* st = std::get_if<sim::StaticLaw>(&law)) return st->K(0, 0);
  const auto& pi = std::get<sim::PiLaw>(law);
  const double k = pi.K(0, 0);
  const double g = pi.Gamma(0, 0);
  const double gs = g * pi.Sigma(0, 0);
  const Complex den = s + gs;
  if (std::abs(den) <= 1e-14 * std::max(1.0, gs)) {
    std::ostringstream os;
    os << "PI regulator evaluated at its pole s = " << -gs;
    throw ValidationError(os.str());
  }
  return (k * s + g) / den;
}

Eigen::RowVectorXcd regulator_R(const sim::UpdateLaw& law, const NominalCertificate& cert,
                                Complex s) {
  return regulator_prefactor(law, s) * cert.v().transpose().cast<Complex>();
}

SensitivitySample sensitivity(const sim::UpdateLaw& law, const LinearErrorSystem& sys,
                              const NominalCertificate& cert, double omega) {
  if (cert.P().size() != sys.n()) throw ValidationError("certificate dimension differs from A");
  const Complex s(0.0, omega);
  const Eigen::RowVectorXcd r = regulator_R(law, cert, s);
  const Eigen::VectorXcd b = sys.B().cast<Complex>();
  Eigen::MatrixXcd m = -sys.A().cast<Complex>() + b * r;
  m.diagonal().array() += s;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
  if (!(lu.rcond() > 1e-14)) {
    std::ostringstream os;
    os << "sensitivity: jwI - A + BR is singular at omega = " << omega;
    throw NumericalError(os.str());
  }
  const Complex value = (r * lu.solve(b))(0, 0);
  return SensitivitySample::from(omega, value);
}

std::vector<SensitivitySample> bode_table(const sim::UpdateLaw& law, const LinearErrorSystem& sys,
                                          const NominalCertificate& cert,
                                          const std::vector<double>& grid) {
  std::vector<SensitivitySample> out;
  out.reserve(grid.size());
  for (double w : grid) {
    if (!std::isfinite(w)) throw ValidationError("bode grid has a non-finite value");
    out.push_back(sensitivity(law, sys, cert, w));
  }
  return out;
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0) || !(hi >= lo) || points == 0)
    throw ValidationError("log grid needs 0 < lo <= hi and at least one point");
  std::vector<double> out(points);
  if (points == 1) {
    out[0] = lo;
    return out;
  }
  const double l0 = std::log10(lo);
  const double step = (std::log10(hi) - l0) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) out[i] = std::pow(10.0, l0 + step * static_cast<double>(i));
  out.back() = hi;
  return out;
}

}  // namespace adaptctl::freqresp
