#pragma once

// Shared plants and certificates for the test binaries.

#include <cmath>

#include "adaptctl/lyapunov.hpp"

namespace fixtures {

using adaptctl::Matrix;
using adaptctl::SymMatrix;
using adaptctl::Vector;

inline const double kSqrt2 = std::sqrt(2.0);

// omega0 = 1, zeta = 1/sqrt(2).
inline adaptctl::LinearErrorSystem example_system() {
  return adaptctl::LinearErrorSystem::companion(1.0, 1.0 / std::sqrt(2.0));
}

inline SymMatrix example_P() {
  Matrix p(2, 2);
  p << 3.9598, 1.0, 1.0, kSqrt2;
  return SymMatrix(p);
}

inline adaptctl::NominalCertificate example_cert() {
  return adaptctl::NominalCertificate::from_P(example_system(), example_P());
}

inline Vector example_v() {
  Vector v(2);
  v << 1.0, kSqrt2;
  return v;
}

// A = -1, B = 1, P = 1, Q = 2.
inline adaptctl::LinearErrorSystem scalar_system() {
  return adaptctl::LinearErrorSystem(Matrix::Constant(1, 1, -1.0), Vector::Constant(1, 1.0));
}

inline adaptctl::NominalCertificate scalar_cert() {
  return adaptctl::NominalCertificate::from_P(scalar_system(), SymMatrix::identity(1));
}

inline Matrix col(std::initializer_list<double> xs) {
  Matrix m(static_cast<Eigen::Index>(xs.size()), 1);
  Eigen::Index i = 0;
  for (double x : xs) m(i++, 0) = x;
  return m;
}

inline SymMatrix diag(std::initializer_list<double> xs) {
  Vector d(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) d(i++) = x;
  return SymMatrix::diagonal(d);
}

}  // namespace fixtures
