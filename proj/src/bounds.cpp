#include "adaptctl/bounds.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <variant>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "adaptctl/error.hpp"
#include "search.hpp"

namespace adaptctl::bounds {

namespace {

constexpr int kGridPoints = 2048;
constexpr double kRelWidth = 1e-10;

double weighted_norm_inv(const SymMatrix& k, const Vector& w) {
  Eigen::LLT<Matrix> llt(k.matrix());
  if (llt.info() != Eigen::Success) throw ValidationError("K_b must be positive definite");
  return w.dot(llt.solve(w));
}

Matrix as_column(const Vector& v) { return Matrix(v); }

}  // namespace

void StaticLawConfig::validate() const {
  if (K_b.size() == 0 || !is_pos_def(K_b)) throw ValidationError("K_b must be positive definite");
  if (!(alpha > 0.0)) throw ValidationError("alpha must be positive");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ValidationError("gamma must lie in [0, 1)");
  if (!(mu >= 0.0)) throw ValidationError("mu must be non-negative");
  if (!(b >= 0.0)) throw ValidationError("b must be non-negative");
}

double beta_inf_bound(const Regressor& beta, const SymMatrix& K_b) {
  if (K_b.size() != beta.n_beta()) throw ValidationError("K_b dimension differs from n_beta");
  if (!is_pos_def(K_b)) throw ValidationError("K_b must be positive definite");
  Eigen::LLT<Matrix> llt(K_b.matrix());
  const Matrix lt = llt.matrixU();  // K_b = L L^T, lt = L^T

  auto affine_inf = [&](const Vector& c, const Matrix& m) {
    // min_x || L^T (c + M x) ||^2
    const Vector rhs = lt * c;
    if (m.cols() == 0 || max_abs(m) == 0.0) return rhs.squaredNorm();
    const Matrix lhs = lt * m;
    const Vector x = lhs.completeOrthogonalDecomposition().solve(-rhs);
    const double r = (rhs + lhs * x).squaredNorm();
    return r <= 1e-14 * std::max(1.0, rhs.squaredNorm()) ? 0.0 : r;
  };

  if (std::holds_alternative<ConstantRegressor>(beta.family())) return K_b(0, 0);
  if (const auto* f = std::get_if<AffineRegressor>(&beta.family()))
    return affine_inf(f->constant, f->linear);
  if (const auto* f = std::get_if<QuadraticRegressor>(&beta.family())) {
    bool has_quadratic = false;
    for (const Matrix& h : f->quadratic) has_quadratic = has_quadratic || max_abs(h) > 0.0;
    if (!has_quadratic) return affine_inf(f->constant, f->linear);
    if (f->constant.norm() == 0.0) return 0.0;  // beta(0) = 0
    throw ValidationError(
        "beta_inf_bound: no closed-form infimum for a quadratic regressor with a constant part");
  }
  throw ValidationError("beta_inf_bound: custom regressors are not supported in certified analysis");
}

double convergence_rate(const NominalCertificate& cert, const StaticLawConfig& cfg) {
  cfg.validate();
  const double phi = cfg.alpha * cfg.b * cfg.gamma;
  return g_eval(phi, cert.Q(), as_column(cert.v())) / cert.lambda_max_P();
}

BoundReport ultimate_bound(const NominalCertificate& cert, const StaticLawConfig& cfg,
                           const Vector& W, double eta_star) {
  cfg.validate();
  if (!(cfg.b > 0.0)) {
    throw HypothesisError(
        "ultimate bound needs b > 0; augment the regressor with a constant entry (beta^T 1)^T "
        "and the weights with a zero");
  }
  if (!(eta_star >= 0.0)) throw ValidationError("eta_star must be non-negative");
  if (W.size() != cfg.K_b.size()) throw ValidationError("W dimension differs from K_b");

  BoundReport out;
  out.g_value = g_eval(cfg.alpha * cfg.b * cfg.gamma, cert.Q(), as_column(cert.v()));
  out.c_e = out.g_value / cert.lambda_max_P();
  const double scale =
      std::sqrt(cert.lambda_max_P() / (out.g_value * cert.lambda_min_P()));
  const double load =
      (weighted_norm_inv(cfg.K_b, W) + eta_star * eta_star / (cfg.b * (1.0 - cfg.gamma))) /
      cfg.alpha;
  out.residual = scale * std::sqrt(load);
  out.r_e = scale * std::sqrt(load + cfg.mu);
  return out;
}

double transient_envelope(double t, double e0_norm, const NominalCertificate& cert,
                          const StaticLawConfig& cfg, const Vector& W, double eta_star) {
  if (!(t >= 0.0)) throw ValidationError("transient_envelope: t must be non-negative");
  StaticLawConfig residual_cfg = cfg;
  residual_cfg.mu = 0.0;
  const BoundReport rep = ultimate_bound(cert, residual_cfg, W, eta_star);
  if (e0_norm < rep.residual) {
    std::ostringstream os;
    os << "transient envelope does not apply: ||e(0)|| = " << e0_norm
       << " is below the residual error " << rep.residual;
    throw HypothesisError(os.str());
  }
  const double r2 = rep.residual * rep.residual;
  const double start = cert.lambda_max_P() / cert.lambda_min_P() * e0_norm * e0_norm;
  return std::sqrt(r2 + std::exp(-rep.c_e * t) * (start - r2));
}

double settling_time(double V0, double rho, double mu) {
  if (!(mu > 0.0)) throw ValidationError("settling_time: mu must be positive");
  return std::max(0.0, (V0 - rho) / mu);
}

double settling_time(const NominalCertificate& cert, const StaticLawConfig& cfg, const Vector& W,
                     double eta_star, const Vector& e0) {
  const BoundReport rep = ultimate_bound(cert, cfg, W, eta_star);
  const double V0 = e0.dot(cert.P().matrix() * e0);
  const double rho = cert.lambda_min_P() * rep.r_e * rep.r_e;
  return settling_time(V0, rho, cfg.mu);
}

double alpha_lower_bound(const NominalCertificate& cert, double b) {
  if (!(b > 0.0)) throw ValidationError("alpha_lower_bound: b must be positive");
  const Matrix v = as_column(cert.v());
  if (!check_eigenvalue_lift(cert.Q(), v))
    throw HypothesisError("alpha_lower_bound: lift condition fails (g(1,Q,PB) = lambda_min(Q))");
  const double slope = g_derivative(1e-8, cert.Q(), v).value;
  if (!(slope > 1e-12)) throw HypothesisError("lift condition fails at origin (g'(0+) = 0)");
  return cert.lambda_min_Q() / (b * slope);
}

GammaStar gamma_star(const NominalCertificate& cert, const StaticLawConfig& cfg) {
  cfg.validate();
  if (!(cfg.b > 0.0)) throw HypothesisError("gamma_star needs b > 0");
  const Matrix v = as_column(cert.v());
  const double p = cfg.alpha * cfg.b;

  // Condition defining M at a single phi.
  auto holds = [&](double phi) {
    const double slope = g_derivative(phi, cert.Q(), v).value;
    if (!(slope > 0.0)) return false;
    return phi + g_eval(phi, cert.Q(), v) / slope <= p;
  };

  const double phi_min = 1e-8 * p;
  if (!holds(phi_min)) {
    std::ostringstream os;
    os << "gamma_star: set M is empty; alpha = " << cfg.alpha
       << " does not exceed the lower bound (inconsistent inputs)";
    throw HypothesisError(os.str());
  }
  double good = phi_min;
  double bad = p;
  for (int i = 1; i <= kGridPoints; ++i) {
    const double phi = p * static_cast<double>(i) / kGridPoints;
    if (phi <= phi_min) continue;
    if (!holds(phi)) {
      bad = phi;
      break;
    }
    good = phi;
  }
  const auto [lo, hi] = detail::bisect(holds, good, bad, kRelWidth);
  (void)hi;

  GammaStar out;
  out.Phi = lo;
  out.gamma = lo / p;
  const double g0 = cert.lambda_min_Q();
  const double lifted = (1.0 - out.gamma) * g_eval(out.Phi, cert.Q(), v);
  if (lifted < g0 - 1e-9 * std::max(1.0, g0)) {
    std::ostringstream os;
    os << "gamma_star post-check failed: (1-gamma*) g = " << lifted << " < g(0) = " << g0;
    throw NumericalError(os.str());
  }
  return out;
}

TauBound tau_growth_bound(const NominalCertificate& cert, double alpha, double b) {
  if (!(alpha > 0.0)) throw ValidationError("tau_growth_bound: alpha must be positive");
  if (!(b >= 0.0)) throw ValidationError("tau_growth_bound: b must be non-negative");
  const Matrix v = as_column(cert.v());
  if (max_abs(v) == 0.0) throw ValidationError("tau_growth_bound: PB = 0");
  const double two_p = 2.0 * alpha * b;
  auto g_at = [&](double eps) { return g_eval(two_p - eps, cert.Q(), v); };

  // E = (0, sup E): g(2 alpha b - eps) decreases in eps and turns negative.
  double inside = two_p;
  double step = 1.0;
  double outside = two_p + step;
  while (g_at(outside) > 0.0) {
    inside = outside;
    step *= 2.0;
    outside = two_p + step;
    if (!std::isfinite(outside)) throw NumericalError("tau_growth_bound: sup E not bracketed");
  }
  const auto [lo, hi] = detail::bisect([&](double eps) { return g_at(eps) > 0.0; }, inside,
                                       outside, kRelWidth);
  (void)hi;

  TauBound out;
  out.sup_E = lo;
  auto objective = [&](double eps) { return eps * g_at(eps); };
  int best_i = 1;
  double best_f = -std::numeric_limits<double>::infinity();
  for (int i = 1; i < kGridPoints; ++i) {
    const double f = objective(out.sup_E * i / kGridPoints);
    if (f > best_f) {
      best_f = f;
      best_i = i;
    }
  }
  const double a = out.sup_E * (best_i - 1) / kGridPoints;
  const double c = out.sup_E * (best_i + 1) / kGridPoints;
  const auto [eps, f] = detail::golden_section_max(objective, a, c, kRelWidth);
  out.eps_opt = eps;
  out.tau = std::sqrt(std::max(f, 0.0));
  return out;
}

}  // namespace adaptctl::bounds
