#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "adaptctl/error.hpp"
#include "adaptctl/lyapunov.hpp"
#include "fixtures.hpp"

using namespace adaptctl;
using fixtures::col;
using fixtures::diag;

namespace {

// Q = -(A^T P + P A) for the example P worked by hand:
// Q = [[2, 2 sqrt2 - P11], [2 sqrt2 - P11, 2]].
SymMatrix example_Q() {
  const double off = 2.0 * std::sqrt(2.0) - 3.9598;
  Matrix q(2, 2);
  q << 2.0, off, off, 2.0;
  return SymMatrix(q);
}

Matrix random_hurwitz(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = nd(rng);
  // Shift the spectrum into the open left half-plane.
  Eigen::EigenSolver<Matrix> es(a, false);
  const double shift = es.eigenvalues().real().maxCoeff() + 0.1 + std::abs(nd(rng));
  return a - shift * Matrix::Identity(n, n);
}

SymMatrix random_spd(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = nd(rng);
  return SymMatrix(m * m.transpose() + 0.1 * Matrix::Identity(n, n));
}

}  // namespace

TEST(SolveLyapunov, ScalarClosedForm) {
  const SymMatrix p = solve_lyapunov(Matrix::Constant(1, 1, -1.0), SymMatrix::scalar(1, 2.0));
  EXPECT_NEAR(p(0, 0), 1.0, 1e-14);
}

TEST(SolveLyapunov, NegativeIdentity) {
  const SymMatrix p = solve_lyapunov(-Matrix::Identity(2, 2), SymMatrix::scalar(2, 2.0));
  EXPECT_LE((p.matrix() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(SolveLyapunov, ExampleRecoversP) {
  const auto sys = fixtures::example_system();
  const SymMatrix p = solve_lyapunov(sys.A(), example_Q());
  EXPECT_LE((p.matrix() - fixtures::example_P().matrix()).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(SolveLyapunov, RejectsNonHurwitzNamingEigenvalue) {
  Matrix a(2, 2);
  a << 0.5, 0.0, 0.0, -1.0;
  try {
    solve_lyapunov(a, SymMatrix::identity(2));
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("0.5"), std::string::npos) << e.what();
  }
}

TEST(SolveLyapunov, RandomRoundTrip) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 5;
    const Matrix a = random_hurwitz(rng, n);
    const SymMatrix q = random_spd(rng, n);
    const SymMatrix p = solve_lyapunov(a, q);
    const double res = (lyapunov_residual(a, p).matrix() - q.matrix()).cwiseAbs().maxCoeff();
    EXPECT_LE(res, 1e-9 * std::max(1.0, q.matrix().cwiseAbs().maxCoeff())) << "trial " << trial;
    EXPECT_TRUE(is_pos_def(p)) << "trial " << trial;
  }
}

TEST(NominalCertificate, ExampleFromP) {
  const auto cert = fixtures::example_cert();
  EXPECT_LE((cert.Q().matrix() - example_Q().matrix()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((cert.v() - fixtures::example_v()).cwiseAbs().maxCoeff(), 1e-15);
  // Frozen eigendata.
  EXPECT_NEAR(cert.lambda_min_Q(), 0.86862712, 1e-7);
  EXPECT_NEAR(cert.lambda_max_Q(), 3.13137288, 1e-7);
  EXPECT_NEAR(cert.lambda_min_P(), 1.06836458, 1e-7);
  EXPECT_NEAR(cert.lambda_max_P(), 4.30564898, 1e-7);
}

TEST(NominalCertificate, RejectsIndefiniteP) {
  const auto sys = fixtures::example_system();
  EXPECT_THROW(NominalCertificate::from_P(sys, diag({1.0, -1.0})), ValidationError);
  // P > 0 but Q not positive definite.
  EXPECT_THROW(NominalCertificate::from_P(sys, diag({1.0, 100.0})), ValidationError);
}

TEST(NominalCertificate, FromQMatchesFromP) {
  const auto sys = fixtures::example_system();
  const auto a = NominalCertificate::from_Q(sys, example_Q());
  EXPECT_LE((a.P().matrix() - fixtures::example_P().matrix()).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Companion, Shorthand) {
  const auto sys = LinearErrorSystem::companion(2.0, 0.5);
  EXPECT_DOUBLE_EQ(sys.A()(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(sys.A()(1, 0), -4.0);
  EXPECT_DOUBLE_EQ(sys.A()(1, 1), -2.0);
  EXPECT_DOUBLE_EQ(sys.B()(1), 0.25);
  EXPECT_TRUE(sys.hurwitz());
  EXPECT_TRUE(sys.controllable());
}

TEST(GEval, Examples) {
  const auto q = example_Q();
  const Matrix v = fixtures::example_v();
  EXPECT_DOUBLE_EQ(g_eval(0.0, q, v), lambda_min(q));
  // 2x2 closed form of lambda_min(Q + v v^T).
  const Matrix m = q.matrix() + v * v.transpose();
  const double h = 0.5 * (m(0, 0) + m(1, 1));
  const double r = std::sqrt(0.25 * std::pow(m(0, 0) - m(1, 1), 2) + m(0, 1) * m(0, 1));
  EXPECT_NEAR(g_eval(1.0, q, v), h - r, 1e-12);
  EXPECT_NEAR(g_eval(1.0, q, v), 2.92554473, 1e-7);
  for (double phi : {0.0, 0.5, 3.0, 1e3})
    EXPECT_NEAR(g_eval(phi, SymMatrix::identity(2), col({1, 0})), 1.0, 1e-12);
}

TEST(GEval, NegativePhiAllowed) {
  // Scalar: g = 2 + phi.
  EXPECT_NEAR(g_eval(-0.5, SymMatrix::scalar(1, 2.0), col({1})), 1.5, 1e-14);
}

TEST(GDerivative, Examples) {
  for (double phi : {0.0, 1.0, 7.0}) {
    const auto d = g_derivative(phi, SymMatrix::scalar(1, 2.0), col({1}));
    EXPECT_NEAR(d.value, 1.0, 1e-12);
    EXPECT_FALSE(d.finite_difference);
  }
  EXPECT_NEAR(g_derivative(1.0, SymMatrix::identity(2), col({1, 0})).value, 0.0, 1e-14);

  const auto q = example_Q();
  const Matrix v = fixtures::example_v();
  const double h = 1e-5;
  const double fd = (g_eval(0.5 + h, q, v) - g_eval(0.5 - h, q, v)) / (2 * h);
  EXPECT_NEAR(g_derivative(0.5, q, v).value, fd, 1e-5);
}

TEST(GDerivative, DegenerateFallsBackToFiniteDifference) {
  // Q = I, v = 0: every eigenvalue is 1, the gap is zero.
  const auto d = g_derivative(0.3, SymMatrix::identity(2), col({0, 0}));
  EXPECT_TRUE(d.finite_difference);
  EXPECT_NEAR(d.value, 0.0, 1e-9);
}

TEST(GPhiStar, NoLift) {
  const auto ps = g_phi_star(SymMatrix::identity(2), col({1, 0}));
  EXPECT_TRUE(ps.no_lift);
  EXPECT_EQ(ps.value, 0.0);
  EXPECT_DOUBLE_EQ(ps.sup_g, 1.0);
}

TEST(GPhiStar, ExactSaturation) {
  // lambda_min of [[1+p, p], [p, 3+p]] is 2 + p - sqrt(1 + p^2); it meets 1.5 at p = 0.75.
  const auto ps = g_phi_star(diag({1.0, 1.5, 3.0}), col({1, 0, 1}));
  ASSERT_TRUE(ps.finite());
  EXPECT_NEAR(ps.value, 0.75, 1e-6);
  EXPECT_NEAR(ps.sup_g, 1.5, 1e-12);
}

TEST(GPhiStar, AgreesWithDenseSweep) {
  // g approaches 5.5 like 1/phi, so the horizon must be long enough for the
  // last doubling to stay within tol.
  const SymMatrix q = diag({1.0, 10.0});
  const Matrix v = col({1, 1});
  const double grid_max = 2e4;
  const double tol = 1e-3;
  const int steps = 20000;
  const auto ps = g_phi_star(q, v, grid_max, tol);
  double sup = -1e300;
  std::vector<double> g(steps + 1);
  for (int i = 0; i <= steps; ++i) {
    g[i] = g_eval(grid_max * i / steps, q, v);
    sup = std::max(sup, g[i]);
  }
  EXPECT_NEAR(ps.sup_g, sup, 1e-12);
  ASSERT_TRUE(ps.finite());
  int first = 0;
  while (g[first] < sup - tol) ++first;
  EXPECT_LE(ps.value, grid_max * first / steps + 1e-9);
  EXPECT_GT(ps.value, grid_max * (first - 1) / steps - 1e-9);
}

TEST(GPhiStar, StillIncreasingIsInfinite) {
  const auto ps = g_phi_star(diag({1.0, 1e9}), col({1, 0}), 10.0, 1e-9);
  EXPECT_FALSE(ps.finite());
}

TEST(GPhiStar, RejectsDegenerateInputs) {
  EXPECT_THROW(g_phi_star(SymMatrix::scalar(1, 2.0), col({1})), ValidationError);
  EXPECT_THROW(g_phi_star(SymMatrix::identity(2), col({0, 0})), ValidationError);
}

TEST(Lift, Examples) {
  EXPECT_TRUE(check_eigenvalue_lift(example_Q(), fixtures::example_v()));
  EXPECT_FALSE(check_eigenvalue_lift(SymMatrix::identity(2), col({1, 0})));
  EXPECT_TRUE(check_eigenvalue_lift(diag({1, 2}), col({1, 0})));
}

TEST(GProfile, MonotoneWithinBounds) {
  std::vector<double> phis;
  for (int i = 0; i <= 50; ++i) phis.push_back(0.2 * i);
  const auto prof = g_profile(example_Q(), fixtures::example_v(), phis);
  ASSERT_EQ(prof.g.size(), phis.size());
  for (std::size_t i = 1; i < prof.g.size(); ++i) EXPECT_LE(prof.g[i - 1], prof.g[i] + 1e-12);
}

// Randomized structure checks on g.
TEST(GProperties, MonotoneLipschitzBoundedAndEquivalence) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const SymMatrix q = random_spd(rng, 3);
    Vector v(3);
    for (int i = 0; i < 3; ++i) v(i) = nd(rng);
    if (trial % 4 == 0) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(q.matrix());
      const Vector r = es.eigenvectors().col(0);
      v -= v.dot(r) * r;  // orthogonal to the min-eigenvector: no lift
    }
    const Matrix vm = v;
    double p1 = u(rng), p2 = u(rng);
    if (p1 > p2) std::swap(p1, p2);
    const double g1 = g_eval(p1, q, vm);
    const double g2 = g_eval(p2, q, vm);
    const double scale = 1e-10 * std::max(1.0, lambda_max(q) + p2 * v.squaredNorm());
    EXPECT_LE(g1, g2 + scale);
    EXPECT_LE(std::abs(g2 - g1), (p2 - p1) * v.squaredNorm() + scale);
    EXPECT_GE(g1, lambda_min(q) - scale);
    EXPECT_LE(g2, lambda_max(q) + scale);
    if (!check_eigenvalue_lift(q, vm)) {
      for (double phi : {0.1, 1.0, 10.0, 1e3})
        EXPECT_NEAR(g_eval(phi, q, vm), lambda_min(q), 1e-8 * std::max(1.0, phi));
    }
  }
}
