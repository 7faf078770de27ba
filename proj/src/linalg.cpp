#include "adaptctl/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "adaptctl/error.hpp"

namespace adaptctl {

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

SymMatrix::SymMatrix(const Matrix& m) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << "symmetric matrix must be square, got " << m.rows() << "x" << m.cols();
    throw ValidationError(os.str());
  }
  if (!m.allFinite()) throw ValidationError("symmetric matrix has non-finite entries");
  const double asym = max_abs(m - m.transpose());
  if (asym > 1e-12 * max_abs(m)) {
    std::ostringstream os;
    os << "matrix is not symmetric (max |M - M^T| = " << asym << ")";
    throw ValidationError(os.str());
  }
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::identity(Eigen::Index n) { return SymMatrix(Matrix::Identity(n, n)); }

SymMatrix SymMatrix::diagonal(const Vector& d) { return SymMatrix(Matrix(d.asDiagonal())); }

SymMatrix SymMatrix::scalar(Eigen::Index n, double value) {
  return SymMatrix(value * Matrix::Identity(n, n));
}

SymMatrix SymMatrix::operator+(const SymMatrix& o) const { return SymMatrix(m_ + o.m_); }
SymMatrix SymMatrix::operator-(const SymMatrix& o) const { return SymMatrix(m_ - o.m_); }
SymMatrix SymMatrix::operator*(double s) const { return SymMatrix(s * m_); }

EigenDecomposition sym_eig(const SymMatrix& sym) {
  Matrix a = sym.matrix();
  const Eigen::Index n = a.rows();
  Matrix v = Matrix::Identity(n, n);
  const double threshold = 1e-12 * a.norm();

  auto off_diagonal_max = [&] {
    double m = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) m = std::max(m, std::abs(a(p, q)));
    return m;
  };

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps && off_diagonal_max() > threshold; ++sweep) {
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = tau >= 0.0 ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                    : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (off_diagonal_max() > threshold) throw NumericalError("Jacobi eigensolver did not converge");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index src = order[static_cast<std::size_t>(i)];
    out.values(i) = a(src, src);
    out.vectors.col(i) = v.col(src);
  }
  return out;
}

double lambda_min(const SymMatrix& m) { return sym_eig(m).min(); }
double lambda_max(const SymMatrix& m) { return sym_eig(m).max(); }

bool is_pos_def(const SymMatrix& m, double tol) { return lambda_min(m) > tol; }

bool block_neg_semidef(const SymMatrix& m, const Vector& col, double tol) {
  if (col.size() != m.size()) {
    std::ostringstream os;
    os << "block_neg_semidef: M is " << m.size() << "x" << m.size() << " but m has "
       << col.size() << " entries";
    throw ValidationError(os.str());
  }
  return lambda_max(m) <= tol && col.norm() <= tol;
}

bool min_eig_orthogonality(const SymMatrix& q, const Matrix& w, double tol) {
  if (w.rows() != q.size()) throw ValidationError("min_eig_orthogonality: w has wrong row count");
  const EigenDecomposition eig = sym_eig(q);
  const double cluster = 1e-9 * std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  Eigen::Index k = 1;
  while (k < eig.values.size() && eig.values(k) - eig.values(0) <= cluster) ++k;
  if (w.cols() == 0) return true;

  // Some unit r = E c with ||w^T E c|| <= tol exists iff the smallest
  // singular value of w^T E is at most tol. An eigenspace wider than w has
  // a null direction outright; squaring into a Gram matrix would drown
  // that zero in roundoff.
  if (k > w.cols()) return true;
  const Matrix proj = w.transpose() * eig.vectors.leftCols(k);
  return Eigen::JacobiSVD<Matrix>(proj).singularValues()(k - 1) <= tol;
}

SymMatrix outer(const Matrix& v) { return SymMatrix(v * v.transpose()); }

bool is_hurwitz(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) return false;
  Eigen::EigenSolver<Matrix> es(a, false);
  if (es.info() != Eigen::Success) return false;
  return (es.eigenvalues().real().array() < 0.0).all();
}

bool is_controllable(const Matrix& a, const Vector& b) {
  const Eigen::Index n = a.rows();
  Matrix ctrb(n, n);
  Vector col = b;
  for (Eigen::Index i = 0; i < n; ++i) {
    ctrb.col(i) = col;
    col = a * col;
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(ctrb);
  qr.setThreshold(1e-10);
  return qr.rank() == n;
}

}  // namespace adaptctl
