#include "adaptctl/simulator.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>

#include "adaptctl/error.hpp"
#include "adaptctl/parallel.hpp"

namespace adaptctl::sim {

namespace {

constexpr double kBlowUp = 1e9;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Matrix sym_inverse(const SymMatrix& m) {
  Eigen::LLT<Matrix> llt(m.matrix());
  if (llt.info() != Eigen::Success) throw ValidationError("matrix must be positive definite");
  return llt.solve(Matrix::Identity(m.size(), m.size()));
}

}  // namespace

void UncertaintyModel::validate(Eigen::Index n_state) const {
  if (beta.n_state() >= 0 && beta.n_state() != n_state)
    throw ValidationError("regressor state dimension differs from the error system");
  if (W.size() != beta.n_beta()) throw ValidationError("W length differs from n_beta");
  if (!W.allFinite()) throw ValidationError("W must be finite");
  eta.validate();
}

std::string law_name(const UpdateLaw& law) {
  return std::holds_alternative<PiLaw>(law) ? "pi" : "static";
}

Eigen::Index law_dim(const UpdateLaw& law) {
  return std::visit([](const auto& l) { return l.K.size(); }, law);
}

void validate_law(const UpdateLaw& law, Eigen::Index n_beta) {
  std::visit(Overloaded{
                 [&](const PiLaw& l) {
                   if (l.K.size() != n_beta || l.Gamma.size() != n_beta ||
                       l.Sigma.size() != n_beta)
                     throw ValidationError("PI law: K, Gamma, Sigma must be n_beta x n_beta");
                   if (!is_pos_def(l.Gamma)) throw ValidationError("PI law: need Gamma > 0");
                   if (!is_pos_def(l.Sigma)) throw ValidationError("PI law: need Sigma > 0");
                   const double tol = 1e-12 * std::max(1.0, max_abs(l.K.matrix()));
                   if (lambda_min(l.K) < -tol)
                     throw ValidationError("PI law gain range violated: need 0 <= K_PI");
                   const SymMatrix upper(4.0 * sym_inverse(l.Sigma) - l.K.matrix());
                   if (!is_pos_def(upper))
                     throw ValidationError(
                         "PI law gain range violated: need K_PI < 4 Sigma^-1 (lambda_min(4 "
                         "Sigma^-1 - K_PI) > 0)");
                 },
                 [&](const StaticLaw& l) {
                   if (l.K.size() != n_beta)
                     throw ValidationError("static law: K must be n_beta x n_beta");
                   if (!is_pos_def(l.K)) throw ValidationError("static law: need K_P > 0");
                 },
             },
             law);
}

Trajectory simulate(const LinearErrorSystem& sys, const NominalCertificate& cert,
                    const UncertaintyModel& unc, const UpdateLaw& law, const Vector& e0,
                    const Vector& z0, double t_final, double dt) {
  const Eigen::Index n = sys.n();
  if (cert.P().size() != n) throw ValidationError("certificate dimension differs from A");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be positive");
  if (!(t_final >= 0.0) || !std::isfinite(t_final))
    throw ValidationError("t_final must be finite and non-negative");
  if (e0.size() != n || !e0.allFinite()) throw ValidationError("e0 length differs from dim A");
  unc.validate(n);
  const Eigen::Index nb = unc.beta.n_beta();
  validate_law(law, nb);

  const bool pi = std::holds_alternative<PiLaw>(law);
  const Matrix K = std::visit([](const auto& l) { return l.K.matrix(); }, law);
  Matrix gs, gik;
  Vector z = Vector::Zero(pi ? nb : 0);
  if (pi) {
    const auto& l = std::get<PiLaw>(law);
    gs = l.Gamma.matrix() * l.Sigma.matrix();
    gik = l.Gamma.matrix() * (Matrix::Identity(nb, nb) - l.Sigma.matrix() * K);
    if (z0.size() != 0) {
      if (z0.size() != nb || !z0.allFinite()) throw ValidationError("z0 length differs from n_beta");
      z = z0;
    }
  } else if (z0.size() != 0 && z0.norm() != 0.0) {
    throw ValidationError("z0 is only meaningful for the PI law");
  }

  const auto steps = static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9));
  const NoiseSignal eta(unc.eta, static_cast<double>(steps + 1) * dt);
  const Matrix& a = sys.A();
  const Vector& b = sys.B();
  const Vector& v = cert.v();
  const Vector& w = unc.W;

  auto rhs = [&](double t, const Vector& e, const Vector& zz, Vector& de, Vector& dz) {
    const Vector beta = unc.beta(e);
    const Vector q = beta * v.dot(e);
    Vector what = K * q;
    if (pi) what += zz;
    const double u = -what.dot(beta);
    de = a * e + b * (u + w.dot(beta) + eta(t));
    if (pi) dz = -gs * zz + gik * q;
  };

  Trajectory tr;
  tr.law = law_name(law);
  tr.dt = dt;
  const auto samples = static_cast<Eigen::Index>(steps + 1);
  tr.t.resize(steps + 1);
  tr.e.resize(n, samples);
  tr.W_hat.resize(nb, samples);
  tr.u.resize(samples);
  tr.q.resize(nb, samples);
  if (pi) tr.z = Matrix(nb, samples);

  auto record = [&](std::size_t k, const Vector& e, const Vector& zz) {
    const auto c = static_cast<Eigen::Index>(k);
    const Vector beta = unc.beta(e);
    const Vector q = beta * v.dot(e);
    Vector what = K * q;
    if (pi) {
      what += zz;
      tr.z->col(c) = zz;
    }
    tr.t[k] = static_cast<double>(k) * dt;
    tr.e.col(c) = e;
    tr.q.col(c) = q;
    tr.W_hat.col(c) = what;
    tr.u(c) = -what.dot(beta);
  };

  Vector e = e0;
  record(0, e, z);
  Vector k1e, k2e, k3e, k4e, k1z, k2z, k3z, k4z;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double h = dt;
    rhs(t, e, z, k1e, k1z);
    rhs(t + 0.5 * h, e + 0.5 * h * k1e, pi ? Vector(z + 0.5 * h * k1z) : z, k2e, k2z);
    rhs(t + 0.5 * h, e + 0.5 * h * k2e, pi ? Vector(z + 0.5 * h * k2z) : z, k3e, k3z);
    rhs(t + h, e + h * k3e, pi ? Vector(z + h * k3z) : z, k4e, k4z);
    e += (h / 6.0) * (k1e + 2.0 * k2e + 2.0 * k3e + k4e);
    if (pi) z += (h / 6.0) * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
    if (!(e.norm() <= kBlowUp) || !z.allFinite()) {
      std::ostringstream os;
      os << "simulation diverged (||e|| > 1e9) at t = " << static_cast<double>(k + 1) * dt;
      throw NumericalError(os.str());
    }
    record(k + 1, e, z);
  }
  return tr;
}

std::vector<Trajectory> simulate_batch(const std::vector<SimulationInput>& runs) {
  std::vector<Trajectory> out(runs.size());
  parallel_for(runs.size(), [&](std::size_t i) {
    if (!runs[i].sys || !runs[i].cert) throw ValidationError("simulation input without system");
    out[i] = simulate(runs[i]);
  });
  return out;
}

UubReport verify_uub(const Trajectory& traj, double r_e, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
    throw ValidationError("tail_fraction must lie in (0, 1]");
  UubReport rep;
  const std::size_t n = traj.samples();
  if (n == 0) {
    rep.inside = true;
    return rep;
  }
  const auto start = static_cast<std::size_t>(
      std::floor((1.0 - tail_fraction) * static_cast<double>(n - 1)));
  for (std::size_t k = start; k < n; ++k) rep.tail_max = std::max(rep.tail_max, traj.e_norm(k));
  rep.inside = rep.tail_max <= r_e;

  std::size_t k = n;
  while (k > 0 && traj.e_norm(k - 1) <= r_e) --k;
  if (k < n) rep.entry_time = traj.t[k];
  return rep;
}

}  // namespace adaptctl::sim
