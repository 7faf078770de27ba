#include "adaptctl/kyp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/QR>

#include "adaptctl/error.hpp"
#include "adaptctl/lyapunov.hpp"
#include "adaptctl/simd/sweep.hpp"
#include "search.hpp"

namespace adaptctl::kyp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLmiStrictMargin = 1e-8;
const double kHfProbe[] = {1e4, 1e5, 1e6};

void check_system(const Matrix& a, const Vector& b, const Vector& v) {
  if (a.rows() == 0 || a.rows() != a.cols()) throw ValidationError("A must be square and nonempty");
  if (b.size() != a.rows()) throw ValidationError("B length differs from dim A");
  if (v.size() != a.rows()) throw ValidationError("v length differs from dim A");
  if (!a.allFinite() || !b.allFinite() || !v.allFinite())
    throw ValidationError("A, B and v must be finite");
}

struct Minimum {
  double omega = 0.0;
  double value = kInf;
};

// Grid minimum plus one level of golden-section refinement inside the two
// grid cells around every local minimum.
template <class F>
Minimum refine_minimum(const std::vector<double>& omega, const std::vector<double>& vals, F&& eval,
                       GridReport& report) {
  const std::size_t n = omega.size();
  Minimum best;
  for (std::size_t i = 0; i < n; ++i)
    if (vals[i] < best.value) best = {omega[i], vals[i]};
  report.points = n;
  report.refinement_levels = 1;
  report.refined_intervals = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool left_ok = i == 0 || vals[i] <= vals[i - 1];
    const bool right_ok = i + 1 == n || vals[i] <= vals[i + 1];
    const bool strict = (i > 0 && vals[i] < vals[i - 1]) || (i + 1 < n && vals[i] < vals[i + 1]);
    if (!left_ok || !right_ok || !strict) continue;
    const double lo = omega[i > 0 ? i - 1 : i];
    const double hi = omega[i + 1 < n ? i + 1 : i];
    if (!(hi > lo)) continue;
    auto [w, fw] = detail::golden_section_min(eval, lo, hi, 1e-12, 200);
    ++report.refined_intervals;
    if (fw < best.value) best = {w, fw};
  }
  return best;
}

template <class F>
std::vector<double> tabulate(const RationalResponse::Table& t, F&& fn) {
  std::vector<double> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = fn(t.at(i));
  return out;
}

}  // namespace

FrequencyGrid FrequencyGrid::log_spaced(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2)
    throw ValidationError("frequency grid needs 0 < lo < hi and at least 2 points");
  FrequencyGrid g;
  g.omegas.reserve(points + 1);
  g.omegas.push_back(0.0);
  const double l0 = std::log10(lo);
  const double step = (std::log10(hi) - l0) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i)
    g.omegas.push_back(std::pow(10.0, l0 + step * static_cast<double>(i)));
  g.omegas.back() = hi;
  return g;
}

void FrequencyGrid::validate() const {
  if (omegas.empty()) throw ValidationError("frequency grid is empty");
  if (omegas.front() != 0.0) throw ValidationError("frequency grid must start at omega = 0");
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    if (!std::isfinite(omegas[i])) throw ValidationError("frequency grid has a non-finite value");
    if (i > 0 && !(omegas[i] > omegas[i - 1]))
      throw ValidationError("frequency grid must be strictly ascending");
  }
}

RationalResponse::RationalResponse(const Matrix& a, const Vector& b, const Vector& v) {
  check_system(a, b, v);
  const Eigen::Index n = a.rows();
  const auto nn = static_cast<std::size_t>(n);
  den_.assign(nn + 1, 0.0);
  den_[nn] = 1.0;
  num_ = Matrix::Zero(n, n);
  h_num_.assign(nn, 0.0);

  // adj(sI - A) = sum_k M_k s^(n-k), M_1 = I, c_(n-k) = -tr(A M_k)/k,
  // M_(k+1) = A M_k + c_(n-k) I.
  Matrix m = Matrix::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    const Eigen::Index power = n - k;
    const Vector mb = m * b;
    num_.col(power) = mb;
    h_num_[static_cast<std::size_t>(power)] = v.dot(mb);
    const Matrix am = a * m;
    const double c = -am.trace() / static_cast<double>(k);
    den_[static_cast<std::size_t>(power)] = c;
    m = am + c * Matrix::Identity(n, n);
  }
  num_rowmajor_.resize(nn * nn);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      num_rowmajor_[static_cast<std::size_t>(r * n + c)] = num_(r, c);
}

RationalResponse::Table RationalResponse::evaluate(std::span<const double> omega) const {
  Table t;
  t.omega.assign(omega.begin(), omega.end());
  t.re_h.resize(omega.size());
  t.abs_h_sq.resize(omega.size());
  t.g_norm_sq.resize(omega.size());
  simd::SweepView view;
  view.den = den_.data();
  view.n_den = den_.size();
  view.num = num_rowmajor_.data();
  view.n_out = static_cast<std::size_t>(num_.rows());
  view.n_num = static_cast<std::size_t>(num_.cols());
  view.h_num = h_num_.data();
  simd::evaluate_sweep(view, omega, {t.re_h, t.abs_h_sq, t.g_norm_sq});
  return t;
}

RationalResponse::Sample RationalResponse::at(double omega) const {
  const double w[1] = {omega};
  const Table t = evaluate(w);
  return t.at(0);
}

ComplexVector freq_response_G(const Matrix& a, const Vector& b, double omega) {
  if (a.rows() == 0 || a.rows() != a.cols() || b.size() != a.rows())
    throw ValidationError("freq_response_G: dimension mismatch");
  Eigen::MatrixXcd m = -a.cast<Complex>();
  m.diagonal().array() += Complex(0.0, omega);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
  if (!(lu.rcond() > 1e-14)) {
    std::ostringstream os;
    os << "freq_response_G: jwI - A is singular at omega = " << omega;
    throw NumericalError(os.str());
  }
  return lu.solve(b.cast<Complex>());
}

double f_eval(double omega, double kappa, double vartheta, const Vector& v, const Matrix& a,
              const Vector& b) {
  check_system(a, b, v);
  const ComplexVector g = freq_response_G(a, b, omega);
  const Complex h = v.cast<Complex>().dot(g);  // conjugates v, which is real
  return 2.0 * h.real() + kappa * std::norm(h) - vartheta * g.squaredNorm();
}

SprReport check_spr(const Matrix& a, const Vector& b, const Vector& v, const FrequencyGrid& grid) {
  check_system(a, b, v);
  grid.validate();
  if (!is_controllable(a, b)) throw ValidationError("check_spr: (A, B) is not controllable");

  SprReport rep;
  rep.hf_limit = -v.dot(a * b);
  const double scale = v.norm() * a.norm() * b.norm();
  if (std::abs(rep.hf_limit) <= 1e-14 * std::max(scale, 1e-300))
    throw HypothesisError(
        "check_spr: indeterminate limit, -v^T A B = 0 so w^2 Re H has no positive limit at this order");
  rep.poles_stable = is_hurwitz(a);
  if (!rep.poles_stable) return rep;

  const RationalResponse resp(a, b, v);
  const auto table = resp.evaluate(grid.omegas);
  const Minimum m = refine_minimum(
      grid.omegas, table.re_h, [&](double w) { return resp.at(w).re_h; }, rep.grid);
  rep.min_re_h = m.value;
  rep.omega_min_re_h = m.omega;
  rep.re_positive = m.value > 0.0;

  const double w = 1e6;
  const Complex h = v.cast<Complex>().dot(freq_response_G(a, b, w));
  rep.hf_numeric = w * w * h.real();
  rep.spr = rep.poles_stable && rep.re_positive && rep.hf_limit > 0.0;
  return rep;
}

double hf_criterion_limit(const Matrix& a, const Vector& b, const Vector& v, double kappa) {
  check_system(a, b, v);
  const double bb = b.squaredNorm();
  if (!(bb > 0.0)) throw ValidationError("B must be nonzero");
  const double vb = v.dot(b);
  return (-2.0 * v.dot(a * b) + kappa * vb * vb) / bb - kappa * v.squaredNorm();
}

CriteriaReport check_frequency_criteria(const Matrix& a, const Vector& b, const Vector& v, double kappa,
                                    const FrequencyGrid& grid) {
  check_system(a, b, v);
  grid.validate();
  if (!(kappa >= 0.0)) throw ValidationError("kappa must be non-negative");
  if (!is_hurwitz(a)) throw ValidationError("check_frequency_criteria: A is not Hurwitz");
  if (!is_controllable(a, b))
    throw ValidationError("check_frequency_criteria: (A, B) is not controllable");

  const double vartheta = kappa * v.squaredNorm();
  CriteriaReport rep;
  const RationalResponse resp(a, b, v);
  const auto table = resp.evaluate(grid.omegas);
  const auto f = tabulate(table, [&](const auto& s) { return s.f(kappa, vartheta); });
  const Minimum m = refine_minimum(
      grid.omegas, f, [&](double w) { return resp.at(w).f(kappa, vartheta); }, rep.grid);
  rep.min_f = m.value;
  rep.omega_min_f = m.omega;
  rep.band_criterion = m.value > 0.0;

  rep.limit = hf_criterion_limit(a, b, v, kappa);
  for (double w : kHfProbe) {
    const ComplexVector g = freq_response_G(a, b, w);
    rep.limit_numeric.push_back(f_eval(w, kappa, vartheta, v, a, b) / g.squaredNorm());
  }
  const double numeric = rep.limit_numeric.back();
  if (std::abs(numeric - rep.limit) > 0.01 * std::abs(rep.limit) + 1e-9) {
    std::ostringstream os;
    os << "check_frequency_criteria: analytic high-frequency limit " << rep.limit
       << " disagrees with the value " << numeric << " at omega = 1e6";
    throw NumericalError(os.str());
  }
  rep.hf_criterion = rep.limit > 0.0;
  return rep;
}

SupK sup_K_bound(const Matrix& a, const Vector& b, const Vector& v, double varrho,
                 const FrequencyGrid& grid) {
  if (!(varrho >= 0.0 && varrho < 1.0)) throw ValidationError("varrho must lie in [0, 1)");
  const SprReport spr = check_spr(a, b, v, grid);
  if (!spr.spr) throw HypothesisError("sup_K_bound: H(s) = v^T (sI - A)^-1 B is not SPR");

  const double vv = v.squaredNorm();
  const RationalResponse resp(a, b, v);
  const auto table = resp.evaluate(grid.omegas);
  auto ratio = [&](const RationalResponse::Sample& s) {
    const double den = vv * s.g_norm_sq - varrho * s.abs_h_sq;
    return 2.0 * s.re_h / den;
  };
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto s = table.at(i);
    if (!(vv * s.g_norm_sq - varrho * s.abs_h_sq > 0.0)) {
      std::ostringstream os;
      os << "sup_K_bound: denominator not positive at omega = " << table.omega[i];
      throw NumericalError(os.str());
    }
  }
  SupK out;
  const auto vals = tabulate(table, ratio);
  const Minimum m = refine_minimum(
      grid.omegas, vals, [&](double w) { return ratio(resp.at(w)); }, out.grid);
  out.value = m.value;
  out.omega = m.omega;

  const double vb = v.dot(b);
  const double hf = -2.0 * v.dot(a * b) / (vv * b.squaredNorm() - varrho * vb * vb);
  if (hf < out.value) {
    out.value = hf;
    out.omega = kInf;
  }
  return out;
}

PsiFree psi_free_criterion(const Matrix& a, const Vector& b, const Vector& v, double kappa,
                           const FrequencyGrid& grid) {
  check_system(a, b, v);
  grid.validate();
  if (!(kappa >= 0.0)) throw ValidationError("kappa must be non-negative");
  const double vartheta = kappa * v.squaredNorm();
  const RationalResponse resp(a, b, v);
  const auto table = resp.evaluate(grid.omegas);
  const auto f = tabulate(table, [&](const auto& s) { return s.f(0.0, vartheta); });

  PsiFree out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] <= 0.0) {
      out.holds = true;
      out.witness = grid.omegas[i];
      out.f_at_witness = f[i];
      out.grid.points = f.size();
      return out;
    }
  }
  const Minimum m = refine_minimum(
      grid.omegas, f, [&](double w) { return resp.at(w).f(0.0, vartheta); }, out.grid);
  if (m.value <= 0.0) {
    out.holds = true;
    out.witness = m.omega;
    out.f_at_witness = m.value;
  }
  return out;
}

SymMatrix lmi_residual(const Matrix& a, const SymMatrix& p, const Vector& v, double kappa,
                       double psi) {
  const Eigen::Index n = a.rows();
  if (p.size() != n || v.size() != n) throw ValidationError("lmi_residual: dimension mismatch");
  Matrix r = a.transpose() * p.matrix() + p.matrix() * a - kappa * v * v.transpose();
  r.diagonal().array() += psi + kappa * v.squaredNorm();
  return SymMatrix(0.5 * (r + r.transpose()));
}

LmiResult find_P_lmi(const Matrix& a, const Vector& b, const Vector& v, double kappa,
                     const LmiOptions& opts) {
  check_system(a, b, v);
  if (!(kappa >= 0.0)) throw ValidationError("kappa must be non-negative");
  if (opts.psi && !(*opts.psi > 0.0)) throw ValidationError("psi must be positive");
  if (!opts.strict && !opts.psi) throw ValidationError("non-strict LMI needs an explicit psi > 0");
  if (!is_hurwitz(a)) throw ValidationError("find_P_lmi: A is not Hurwitz");
  const Eigen::Index n = a.rows();
  const double bb = b.squaredNorm();
  if (!(bb > 0.0)) throw ValidationError("B must be nonzero");

  // {P : P B = v} = P_part + span{U E_j U^T}, U an orthonormal basis of B^perp.
  const double vb = v.dot(b);
  const Matrix p_part =
      (v * b.transpose() + b * v.transpose()) / bb - vb * (b * b.transpose()) / (bb * bb);
  const Matrix bcol = b;
  Eigen::HouseholderQR<Matrix> qr(bcol);
  const Matrix qfull = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix u = qfull.rightCols(n - 1);

  std::vector<Matrix> basis;
  for (Eigen::Index i = 0; i < n - 1; ++i)
    for (Eigen::Index j = i; j < n - 1; ++j) {
      Matrix e = Matrix::Zero(n - 1, n - 1);
      e(i, j) = 1.0;
      e(j, i) = 1.0;
      basis.push_back(u * e * u.transpose());
    }
  const std::size_t dim = basis.size();

  const double psi = opts.psi.value_or(0.0);
  auto lyap = [&](const Matrix& p) {
    Matrix l = a.transpose() * p + p * a;
    return Matrix(0.5 * (l + l.transpose()));
  };
  Matrix l0 = lyap(p_part) - kappa * v * v.transpose();
  l0.diagonal().array() += psi + kappa * v.squaredNorm();
  l0 = 0.5 * (l0 + l0.transpose());
  std::vector<Matrix> lj;
  for (const Matrix& nb : basis) lj.push_back(lyap(nb));

  std::size_t evals = 0;
  auto lam = [&](const Matrix& r) {
    ++evals;
    return lambda_max(SymMatrix(r));
  };
  auto residual_at = [&](const Vector& theta) {
    Matrix r = l0;
    for (std::size_t j = 0; j < dim; ++j) r += theta(static_cast<Eigen::Index>(j)) * lj[j];
    return r;
  };
  auto assemble = [&](const Vector& theta) {
    Matrix p = p_part;
    for (std::size_t j = 0; j < dim; ++j) p += theta(static_cast<Eigen::Index>(j)) * basis[j];
    return Matrix(0.5 * (p + p.transpose()));
  };

  // Starts: Lyapunov(A, I) projected onto the affine set, then seeded random offsets.
  std::vector<Vector> starts;
  {
    const Matrix p0 = solve_lyapunov(a, SymMatrix::identity(n)).matrix();
    const Matrix s = u.transpose() * p0 * u;
    Vector theta(static_cast<Eigen::Index>(dim));
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < n - 1; ++i)
      for (Eigen::Index j = i; j < n - 1; ++j) theta(static_cast<Eigen::Index>(k++)) = i == j ? s(i, i) : s(i, j);
    starts.push_back(theta);
    std::mt19937_64 rng(opts.seed);
    auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
    const double scale = std::max({1.0, p_part.norm(), p0.norm()});
    for (int r = 0; r < opts.random_starts; ++r) {
      Vector t = theta;
      for (Eigen::Index j = 0; j < t.size(); ++j) t(j) += scale * uniform();
      starts.push_back(t);
    }
  }

  double best = kInf;
  Vector best_theta = starts.front();
  const std::size_t per_start = std::max<std::size_t>(1, opts.budget / starts.size());
  std::mt19937_64 dir_rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);
  auto dir_uniform = [&] { return static_cast<double>(dir_rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };

  for (const Vector& start : starts) {
    const std::size_t stop_at = std::min(opts.budget, evals + per_start);
    Vector theta = start;
    Matrix r = residual_at(theta);
    double fcur = lam(r);
    if (dim == 0) {
      if (fcur < best) best = fcur, best_theta = theta;
      break;
    }
    // Convex in theta: exact line searches along coordinates and random directions.
    auto line_search = [&](const Vector& dir) {
      Matrix d = Matrix::Zero(n, n);
      for (std::size_t j = 0; j < dim; ++j) d += dir(static_cast<Eigen::Index>(j)) * lj[j];
      auto f = [&](double t) { return lam(r + t * d); };
      double step = 1e-2 * std::max(1.0, theta.norm());
      double lo = -step, hi = step;
      const double fr = f(step);
      if (fr < fcur) {
        double prev = 0.0, cur = step, fc = fr;
        for (int k = 0; k < 60; ++k) {
          const double next = 2.0 * cur;
          const double fn = f(next);
          if (fn >= fc) break;
          prev = cur, cur = next, fc = fn;
        }
        lo = prev, hi = 2.0 * cur;
      } else if (const double fl = f(-step); fl < fcur) {
        double prev = 0.0, cur = -step, fc = fl;
        for (int k = 0; k < 60; ++k) {
          const double next = 2.0 * cur;
          const double fn = f(next);
          if (fn >= fc) break;
          prev = cur, cur = next, fc = fn;
        }
        lo = 2.0 * cur, hi = prev;
      }
      auto [t, ft] = detail::golden_section_min(f, lo, hi, 1e-12, 200);
      if (ft < fcur) {
        theta += t * dir;
        r += t * d;
        r = 0.5 * (r + r.transpose());
        fcur = ft;
      }
    };
    while (evals < stop_at) {
      const double round_start = fcur;
      for (std::size_t j = 0; j < dim && evals < stop_at; ++j)
        line_search(Vector::Unit(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(j)));
      for (std::size_t j = 0; j < dim && evals < stop_at; ++j) {
        Vector dir(static_cast<Eigen::Index>(dim));
        for (Eigen::Index k = 0; k < dir.size(); ++k) dir(k) = dir_uniform();
        if (dir.norm() > 0.0) line_search(dir / dir.norm());
      }
      if (round_start - fcur <= 1e-13 * std::max(1.0, std::abs(fcur))) break;
    }
    if (fcur < best) best = fcur, best_theta = theta;
    if (evals >= opts.budget) break;
  }

  const bool ok = opts.psi ? best <= 0.0 : best < -kLmiStrictMargin;
  if (!ok) {
    std::ostringstream os;
    os << "LMI infeasible within budget (" << evals << " evaluations): best lambda_max = " << best;
    throw InfeasibleError(os.str(), best);
  }

  LmiResult res;
  res.P = SymMatrix(assemble(best_theta));
  res.Q = lyapunov_residual(a, res.P);
  res.residual = lmi_residual(a, res.P, v, kappa, psi);
  res.lambda_max_residual = lambda_max(res.residual);
  res.evaluations = evals;
  if (!is_pos_def(res.P) || !is_pos_def(res.Q))
    throw NumericalError("find_P_lmi: LMI point found but P or Q is not positive definite");
  return res;
}

KypVerdict certify(const Matrix& a, const Vector& b, const Vector& v, double varrho,
                   double kappa_fraction, const FrequencyGrid& grid, std::uint64_t seed) {
  if (!(kappa_fraction > 0.0)) throw ValidationError("kappa_fraction must be positive");
  KypVerdict out;
  out.spr = check_spr(a, b, v, grid);
  out.sup_K = sup_K_bound(a, b, v, varrho, grid);
  out.kappa = kappa_fraction * out.sup_K.value;
  out.criteria = check_frequency_criteria(a, b, v, out.kappa, grid);
  out.psi_free = psi_free_criterion(a, b, v, out.kappa, grid);
  if (out.criteria.holds()) {
    LmiOptions opts;
    opts.seed = seed;
    try {
      out.lmi = find_P_lmi(a, b, v, out.kappa, opts);
    } catch (const InfeasibleError& e) {
      out.lmi_best = e.best_value();
    }
  }
  if (out.lmi && out.psi_free.holds && !check_eigenvalue_lift(out.lmi->Q, Matrix(v)))
    throw NumericalError("certify: psi-free criterion and LMI hold but the eigenvalue lift fails");
  return out;
}

}  // namespace adaptctl::kyp
