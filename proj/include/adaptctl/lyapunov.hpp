#pragma once

#include <limits>
#include <vector>

#include "adaptctl/linalg.hpp"

namespace adaptctl {

// Default tolerances for this module.
struct LyapunovTolerances {
  static constexpr double kEigen = 1e-10;
  static constexpr double kResidual = 1e-9;
  static constexpr double kFlatness = 1e-9;
};

// The single-input error system  de/dt = A e + B (u + W^T beta(e) + eta).
class LinearErrorSystem {
 public:
  LinearErrorSystem(Matrix a, Vector b);

  // Companion form of a second order plant with natural frequency omega0
  // and damping zeta: A = [0 1; -w0^2 -2 zeta w0], B = (0, w0^-2).
  static LinearErrorSystem companion(double omega0, double zeta);

  const Matrix& A() const { return a_; }
  const Vector& B() const { return b_; }
  Eigen::Index n() const { return a_.rows(); }
  bool hurwitz() const { return hurwitz_; }
  bool controllable() const { return controllable_; }

 private:
  Matrix a_;
  Vector b_;
  bool hurwitz_;
  bool controllable_;
};

// (P, Q, v = P B) with Q = -(A^T P + P A), both positive definite.
class NominalCertificate {
 public:
  // Takes P as given and derives Q. Throws if P or Q is not positive definite.
  static NominalCertificate from_P(const LinearErrorSystem& sys, const SymMatrix& p);
  // Solves the Lyapunov equation for the given Q.
  static NominalCertificate from_Q(const LinearErrorSystem& sys, const SymMatrix& q);

  const SymMatrix& P() const { return p_; }
  const SymMatrix& Q() const { return q_; }
  const Vector& v() const { return v_; }

  double lambda_min_P() const { return p_eig_.min(); }
  double lambda_max_P() const { return p_eig_.max(); }
  double lambda_min_Q() const { return q_eig_.min(); }
  double lambda_max_Q() const { return q_eig_.max(); }

 private:
  NominalCertificate(SymMatrix p, SymMatrix q, Vector v);

  SymMatrix p_;
  SymMatrix q_;
  Vector v_;
  EigenDecomposition p_eig_;
  EigenDecomposition q_eig_;
};

// Q = -(A^T P + P A) for symmetric P.
SymMatrix lyapunov_residual(const Matrix& a, const SymMatrix& p);

// Solves A^T P + P A = -Q through the n^2 x n^2 Kronecker system.
// Throws ValidationError naming the offending eigenvalue if A is not Hurwitz.
SymMatrix solve_lyapunov(const Matrix& a, const SymMatrix& q);

// g(phi, Q, v) = lambda_min(Q + phi v v^T). phi may be negative.
double g_eval(double phi, const SymMatrix& q, const Matrix& v);

struct GDerivative {
  double value = 0.0;
  bool finite_difference = false;  // eigengap too small for the analytic formula
  double eigengap = 0.0;
};

// d/dphi g = ||v^T w||^2 with w the unit minimal eigenvector of Q + phi v v^T.
// Falls back to a central difference (step 1e-6 max(1,|phi|)) when the gap
// between the two smallest eigenvalues is <= 1e-8.
GDerivative g_derivative(double phi, const SymMatrix& q, const Matrix& v);

struct PhiStar {
  double value = 0.0;    // +inf when g is still increasing at grid_max
  bool no_lift = false;  // g is constant: lambda_min(Q) is never exceeded
  double sup_g = 0.0;    // g at grid_max
  bool finite() const { return value < std::numeric_limits<double>::infinity(); }
};

// Smallest phi at which g reaches its supremum over [0, grid_max] within tol.
PhiStar g_phi_star(const SymMatrix& q, const Matrix& v, double grid_max = 1e6,
                   double tol = LyapunovTolerances::kFlatness);

struct GProfile {
  std::vector<double> phi;
  std::vector<double> g;
  PhiStar phi_star;
};

GProfile g_profile(const SymMatrix& q, const Matrix& v, const std::vector<double>& phis);

// g(1, Q, v) > lambda_min(Q) + 1e-10.
bool check_eigenvalue_lift(const SymMatrix& q, const Matrix& v);

}  // namespace adaptctl
