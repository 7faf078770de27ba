#include "adaptctl/lyapunov.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "adaptctl/error.hpp"

namespace adaptctl {

LinearErrorSystem::LinearErrorSystem(Matrix a, Vector b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_.rows() == 0 || a_.rows() != a_.cols())
    throw ValidationError("system matrix A must be square and non-empty");
  if (b_.size() != a_.rows()) {
    std::ostringstream os;
    os << "input vector B has " << b_.size() << " entries, expected " << a_.rows();
    throw ValidationError(os.str());
  }
  if (!a_.allFinite() || !b_.allFinite()) throw ValidationError("system matrices must be finite");
  hurwitz_ = is_hurwitz(a_);
  controllable_ = is_controllable(a_, b_);
}

LinearErrorSystem LinearErrorSystem::companion(double omega0, double zeta) {
  if (!(omega0 > 0.0)) throw ValidationError("omega0 must be positive");
  Matrix a(2, 2);
  a << 0.0, 1.0, -omega0 * omega0, -2.0 * zeta * omega0;
  Vector b(2);
  b << 0.0, 1.0 / (omega0 * omega0);
  return LinearErrorSystem(a, b);
}

SymMatrix lyapunov_residual(const Matrix& a, const SymMatrix& p) {
  const Matrix pa = p.matrix() * a;
  return SymMatrix(-(pa.transpose() + pa));
}

NominalCertificate::NominalCertificate(SymMatrix p, SymMatrix q, Vector v)
    : p_(std::move(p)), q_(std::move(q)), v_(std::move(v)), p_eig_(sym_eig(p_)),
      q_eig_(sym_eig(q_)) {}

NominalCertificate NominalCertificate::from_P(const LinearErrorSystem& sys, const SymMatrix& p) {
  if (p.size() != sys.n()) throw ValidationError("certificate P has the wrong dimension");
  SymMatrix q = lyapunov_residual(sys.A(), p);
  Vector v = p.matrix() * sys.B();
  NominalCertificate cert(p, std::move(q), std::move(v));
  if (!(cert.lambda_min_P() > 0.0)) {
    std::ostringstream os;
    os << "certificate P is not positive definite (lambda_min = " << cert.lambda_min_P() << ")";
    throw ValidationError(os.str());
  }
  if (!(cert.lambda_min_Q() > 0.0)) {
    std::ostringstream os;
    os << "Q = -(A^T P + P A) is not positive definite (lambda_min = " << cert.lambda_min_Q()
       << ")";
    throw ValidationError(os.str());
  }
  return cert;
}

NominalCertificate NominalCertificate::from_Q(const LinearErrorSystem& sys, const SymMatrix& q) {
  if (!is_pos_def(q)) throw ValidationError("certificate Q must be positive definite");
  return from_P(sys, solve_lyapunov(sys.A(), q));
}

SymMatrix solve_lyapunov(const Matrix& a, const SymMatrix& q) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || q.size() != n) throw ValidationError("solve_lyapunov: dimension mismatch");

  Eigen::EigenSolver<Matrix> es(a, false);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::complex<double> lam = es.eigenvalues()(i);
    if (!(lam.real() < 0.0)) {
      std::ostringstream os;
      os << "A is not Hurwitz: eigenvalue " << lam.real() << (lam.imag() < 0 ? " - " : " + ")
         << std::abs(lam.imag()) << "i has non-negative real part";
      throw ValidationError(os.str());
    }
  }

  // Column-major vec: vec(A^T P) = (I kron A^T) vec(P), vec(P A) = (A^T kron I) vec(P).
  const Eigen::Index n2 = n * n;
  Matrix kron = Matrix::Zero(n2, n2);
  const Matrix at = a.transpose();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) kron.block(i * n, j * n, n, n) += at;
      kron.block(i * n, j * n, n, n) += at(i, j) * Matrix::Identity(n, n);
    }
  }
  const Eigen::Map<const Vector> qvec(q.matrix().data(), n2);
  const Vector pvec = kron.partialPivLu().solve(-qvec);
  const Matrix praw = Eigen::Map<const Matrix>(pvec.data(), n, n);
  SymMatrix p(0.5 * (praw + praw.transpose()));

  const double residual = max_abs(lyapunov_residual(a, p).matrix() - q.matrix());
  if (residual > LyapunovTolerances::kResidual * std::max(1.0, max_abs(q.matrix()))) {
    std::ostringstream os;
    os << "Lyapunov solve residual " << residual << " exceeds tolerance";
    throw NumericalError(os.str());
  }
  return p;
}

namespace {

SymMatrix lifted(double phi, const SymMatrix& q, const Matrix& v) {
  if (v.rows() != q.size()) throw ValidationError("g: v has the wrong number of rows");
  return SymMatrix(q.matrix() + phi * (v * v.transpose()));
}

}  // namespace

double g_eval(double phi, const SymMatrix& q, const Matrix& v) {
  return lambda_min(lifted(phi, q, v));
}

GDerivative g_derivative(double phi, const SymMatrix& q, const Matrix& v) {
  const EigenDecomposition eig = sym_eig(lifted(phi, q, v));
  GDerivative out;
  out.eigengap = eig.values.size() > 1 ? eig.values(1) - eig.values(0)
                                       : std::numeric_limits<double>::infinity();
  if (out.eigengap > 1e-8) {
    out.value = (v.transpose() * eig.vectors.col(0)).squaredNorm();
    return out;
  }
  const double h = 1e-6 * std::max(1.0, std::abs(phi));
  out.value = (g_eval(phi + h, q, v) - g_eval(phi - h, q, v)) / (2.0 * h);
  out.finite_difference = true;
  return out;
}

bool check_eigenvalue_lift(const SymMatrix& q, const Matrix& v) {
  return g_eval(1.0, q, v) > lambda_min(q) + 1e-10;
}

PhiStar g_phi_star(const SymMatrix& q, const Matrix& v, double grid_max, double tol) {
  if (v.rows() != q.size()) throw ValidationError("g_phi_star: v has the wrong number of rows");
  if (v.cols() >= q.size()) {
    throw ValidationError(
        "g_phi_star: needs more state dimensions than columns of v (g is unbounded otherwise)");
  }
  if (max_abs(v) == 0.0) throw ValidationError("g_phi_star: v = 0, g is constant");
  if (!(grid_max > 0.0)) throw ValidationError("g_phi_star: grid_max must be positive");

  PhiStar out;
  const double g0 = lambda_min(q);
  if (!check_eigenvalue_lift(q, v)) {
    out.no_lift = true;
    out.sup_g = g0;
    return out;
  }
  out.sup_g = g_eval(grid_max, q, v);
  if (out.sup_g - g_eval(0.5 * grid_max, q, v) > tol) {
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }

  const double target = out.sup_g - tol;
  double lo = 0.0;
  double hi = std::min(1.0, grid_max);
  while (g_eval(hi, q, v) < target && hi < grid_max) {
    lo = hi;
    hi = std::min(2.0 * hi, grid_max);
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (g_eval(mid, q, v) >= target ? hi : lo) = mid;
  }
  out.value = hi;
  return out;
}

GProfile g_profile(const SymMatrix& q, const Matrix& v, const std::vector<double>& phis) {
  GProfile out;
  out.phi = phis;
  out.g.reserve(phis.size());
  for (double phi : phis) out.g.push_back(g_eval(phi, q, v));
  if (v.cols() < q.size() && max_abs(v) > 0.0) out.phi_star = g_phi_star(q, v);
  return out;
}

}  // namespace adaptctl
