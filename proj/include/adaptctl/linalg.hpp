#pragma once

#include <Eigen/Dense>

namespace adaptctl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Real symmetric matrix. Construction symmetrizes inputs whose asymmetry is
// below 1e-12 relative to the largest entry and rejects anything else.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Matrix& m);

  static SymMatrix identity(Eigen::Index n);
  static SymMatrix diagonal(const Vector& d);
  static SymMatrix scalar(Eigen::Index n, double value);

  Eigen::Index size() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  SymMatrix operator+(const SymMatrix& o) const;
  SymMatrix operator-(const SymMatrix& o) const;
  SymMatrix operator*(double s) const;

 private:
  Matrix m_;
};

struct EigenDecomposition {
  Vector values;   // ascending
  Matrix vectors;  // column i belongs to values(i)

  double min() const { return values(0); }
  double max() const { return values(values.size() - 1); }
};

// Cyclic Jacobi rotations; sweeps until every off-diagonal entry is below
// 1e-12 * ||M||_F.
EigenDecomposition sym_eig(const SymMatrix& m);

double lambda_min(const SymMatrix& m);
double lambda_max(const SymMatrix& m);

bool is_pos_def(const SymMatrix& m, double tol = 0.0);

// X = [M m; m^T 0] <= 0 decided through the equivalent pair of conditions
// lambda_max(M) <= tol and ||m|| <= tol.
bool block_neg_semidef(const SymMatrix& m, const Vector& col, double tol = 1e-9);

// True iff some eigenvector r of the minimal eigenvalue of Q satisfies
// ||w^T r|| <= tol ||r||. A repeated minimal eigenvalue is handled by
// searching the whole eigenspace.
bool min_eig_orthogonality(const SymMatrix& q, const Matrix& w, double tol = 1e-9);

// Helpers shared by the other modules.
SymMatrix outer(const Matrix& v);  // v v^T
bool is_hurwitz(const Matrix& a);
bool is_controllable(const Matrix& a, const Vector& b);
double max_abs(const Matrix& m);

}  // namespace adaptctl
