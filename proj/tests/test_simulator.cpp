#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "adaptctl/bounds.hpp"
#include "adaptctl/error.hpp"
#include "adaptctl/parallel.hpp"
#include "adaptctl/simulator.hpp"
#include "fixtures.hpp"

using namespace adaptctl;
using namespace adaptctl::sim;

namespace {

Regressor example_beta() {
  Vector c(2);
  c << 1.0, 0.0;
  Matrix m = Matrix::Zero(2, 2);
  m(1, 1) = -1.0;
  return Regressor::affine(c, m);
}

UncertaintyModel example_unc(std::uint64_t seed, double cap = 0.01) {
  UncertaintyModel unc;
  unc.beta = example_beta();
  unc.W = Vector::Ones(2);
  unc.eta.seed = seed;
  unc.eta.amplitude_bound = cap;
  unc.eta.sinusoids = {{0.05, 1.7179, 0.0}};
  return unc;
}

Vector e0_example() {
  Vector e(2);
  e << 0.0, 1.0;
  return e;
}

PiLaw pi_law(double k, double gamma = 2.0, double sigma = 0.2, Eigen::Index nb = 2) {
  return PiLaw{SymMatrix::scalar(nb, k), SymMatrix::scalar(nb, gamma), SymMatrix::scalar(nb, sigma)};
}

}  // namespace

TEST(Noise, SinusoidOnly) {
  NoiseSpec spec;
  spec.amplitude_bound = 0.0;
  spec.sinusoids = {{0.05, 1.7179, 0.0}};
  const auto eta = make_noise(spec, 10.0);
  for (double t : {0.0, 0.37, 1.0, 9.99})
    EXPECT_DOUBLE_EQ(eta(t), 0.05 * std::sin(1.7179 * t));
}

TEST(Noise, ZeroSignal) {
  NoiseSpec spec;
  spec.amplitude_bound = 0.0;
  const auto eta = make_noise(spec, 10.0);
  for (double t : {0.0, 1.0, 5.5, 10.0}) EXPECT_EQ(eta(t), 0.0);
}

TEST(Noise, DeterministicAndBounded) {
  NoiseSpec spec;
  spec.seed = 17;
  spec.sinusoids = {{0.05, 1.7179, 0.3}};
  const auto a = make_noise(spec, 100.0);
  const auto b = make_noise(spec, 100.0);
  ASSERT_EQ(a.hold_count(), b.hold_count());
  bool any_nonzero = false;
  for (std::size_t i = 0; i < a.hold_count(); ++i) {
    EXPECT_EQ(a.hold_value(i), b.hold_value(i));
    EXPECT_LE(std::abs(a.hold_value(i)), spec.amplitude_bound);
    any_nonzero = any_nonzero || a.hold_value(i) != 0.0;
  }
  EXPECT_TRUE(any_nonzero);
  for (double t = 0.0; t <= 100.0; t += 0.0037) EXPECT_LE(std::abs(a(t)), spec.eta_star());
  EXPECT_NEAR(spec.eta_star(), 0.06, 1e-15);

  spec.seed = 18;
  const auto c = make_noise(spec, 100.0);
  int differ = 0;
  for (std::size_t i = 0; i < c.hold_count(); ++i) differ += c.hold_value(i) != a.hold_value(i);
  EXPECT_GT(differ, 0);
}

TEST(Noise, HoldIsPiecewiseConstant) {
  NoiseSpec spec;
  spec.seed = 1;
  spec.sample_dt = 0.1;
  const auto eta = make_noise(spec, 1.0);
  EXPECT_EQ(eta(0.0), eta(0.05));
  EXPECT_EQ(eta(0.1), eta(0.19));
  EXPECT_EQ(eta(0.1), eta.hold_value(1));
  EXPECT_THROW(make_noise(NoiseSpec{0, 0.0, 0.01, {}}, 1.0), ValidationError);
}

TEST(Simulate, EquilibriumStaysAtZero) {
  const auto sys = fixtures::example_system();
  const auto cert = fixtures::example_cert();
  UncertaintyModel unc = example_unc(0, 0.0);
  unc.W = Vector::Zero(2);
  unc.eta.sinusoids.clear();
  const auto tr = simulate(sys, cert, unc, StaticLaw{SymMatrix::scalar(2, 5.0)}, Vector::Zero(2),
                           Vector(), 5.0, 1e-2);
  EXPECT_EQ(tr.samples(), 501u);
  EXPECT_EQ(tr.e.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(tr.W_hat.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_FALSE(tr.z.has_value());
}

TEST(Simulate, UniformTimeGrid) {
  const auto sys = fixtures::example_system();
  const auto cert = fixtures::example_cert();
  const auto tr = simulate(sys, cert, example_unc(1), StaticLaw{SymMatrix::scalar(2, 5.0)},
                           e0_example(), Vector(), 1.0, 1e-3);
  ASSERT_EQ(tr.samples(), 1001u);
  for (std::size_t k = 0; k < tr.samples(); ++k) EXPECT_EQ(tr.t[k], static_cast<double>(k) * 1e-3);
  EXPECT_TRUE(tr.e.allFinite());
}

TEST(Simulate, StaticLawIdentityExact) {
  const auto sys = fixtures::example_system();
  const auto cert = fixtures::example_cert();
  Matrix kb(2, 2);
  kb << 3.0, 0.5, 0.5, 2.0;
  const SymMatrix K(kb);
  const auto tr = simulate(sys, cert, example_unc(3), StaticLaw{K}, e0_example(), Vector(), 10.0);
  for (std::size_t k = 0; k < tr.samples(); ++k) {
    const auto c = static_cast<Eigen::Index>(k);
    const Vector e = tr.e.col(c);
    const Vector beta = example_beta()(e);
    const Vector q = beta * cert.v().dot(e);
    EXPECT_EQ((tr.W_hat.col(c) - K.matrix() * q).cwiseAbs().maxCoeff(), 0.0) << k;
    EXPECT_EQ(tr.q.col(c), q);
    EXPECT_EQ(tr.u(c), -tr.W_hat.col(c).dot(beta));
  }
}

TEST(Simulate, StaticEqualsPiAtInverseSigma) {
  const auto sys = fixtures::example_system();
  const auto cert = fixtures::example_cert();
  const auto unc = example_unc(5);
  const auto st = simulate(sys, cert, unc, StaticLaw{SymMatrix::scalar(2, 5.0)}, e0_example(),
                           Vector(), 50.0);
  const auto pi = simulate(sys, cert, unc, pi_law(5.0), e0_example(), Vector::Zero(2), 50.0);
  ASSERT_EQ(st.samples(), pi.samples());
  double dw = 0.0, de = 0.0;
  for (std::size_t k = 0; k < st.samples(); ++k) {
    const auto c = static_cast<Eigen::Index>(k);
    dw = std::max(dw, (st.W_hat.col(c) - pi.W_hat.col(c)).norm());
    de = std::max(de, (st.e.col(c) - pi.e.col(c)).norm());
  }
  EXPECT_LT(dw, 1e-6);
  EXPECT_LT(de, 1e-6);
}

TEST(Simulate, PiInternalStateDecays) {
  const auto sys = fixtures::example_system();
  const auto cert = fixtures::example_cert();
  Vector z0(2);
  z0 << 0.7, -0.4;
  const auto tr = simulate(sys, cert, example_unc(6), pi_law(5.0), e0_example(), z0, 20.0);
  ASSERT_TRUE(tr.z.has_value());
  const double rate = 2.0 * 0.2;  // lambda_min(Gamma Sigma)
  for (std::size_t k = 0; k < tr.samples(); k += 50) {
    const double bound = z0.norm() * std::exp(-rate * tr.t[k]) * (1.0 + 1e-9);
    EXPECT_LE(tr.z->col(static_cast<Eigen::Index>(k)).norm(), bound) << tr.t[k];
  }
}

TEST(Simulate, StepHalvingFourthOrder) {
  const auto sys = fixtures::example_system();
  const auto cert = fixtures::example_cert();
  auto unc = example_unc(0, 0.0);  // smooth eta
  const double T = 5.0;
  auto terminal = [&](double dt, const UpdateLaw& law) {
    const auto tr = simulate(sys, cert, unc, law, e0_example(), Vector(), T, dt);
    Vector x(tr.e.rows() + (tr.z ? tr.z->rows() : 0));
    x.head(tr.e.rows()) = tr.e.col(tr.e.cols() - 1);
    if (tr.z) x.tail(tr.z->rows()) = tr.z->col(tr.z->cols() - 1);
    return x;
  };
  for (const UpdateLaw& law : {UpdateLaw(StaticLaw{SymMatrix::scalar(2, 5.0)}), UpdateLaw(pi_law(2.5))}) {
    const Vector a = terminal(0.04, law);
    const Vector b = terminal(0.02, law);
    const Vector c = terminal(0.01, law);
    const double order = std::log2((a - b).norm() / (b - c).norm());
    EXPECT_GE(order, 3.5) << law_name(law);
  }
}

TEST(Simulate, RejectsGainOutsideRange) {
  const auto sys = fixtures::example_system();
  const auto cert = fixtures::example_cert();
  try {
    simulate(sys, cert, example_unc(0), pi_law(25.0), e0_example(), Vector(), 1.0);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("K_PI < 4 Sigma^-1"), std::string::npos) << e.what();
  }
  EXPECT_THROW(simulate(sys, cert, example_unc(0), pi_law(-1.0), e0_example(), Vector(), 1.0),
               ValidationError);
  EXPECT_THROW(simulate(sys, cert, example_unc(0), StaticLaw{SymMatrix::scalar(2, 0.0)}, e0_example(),
                        Vector(), 1.0),
               ValidationError);
  EXPECT_THROW(simulate(sys, cert, example_unc(0), StaticLaw{SymMatrix::scalar(2, 1.0)}, e0_example(),
                        Vector(), 1.0, 0.0),
               ValidationError);
}

TEST(Simulate, DivergenceReportsTime) {
  const auto sys = fixtures::example_system();
  const auto cert = fixtures::example_cert();
  try {
    simulate(sys, cert, example_unc(0), StaticLaw{SymMatrix::scalar(2, 5.0)}, e0_example(), Vector(),
             1000.0, 10.0);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("t = "), std::string::npos) << e.what();
  }
}

TEST(Simulate, BatchMatchesSequential) {
  const auto sys = fixtures::example_system();
  const auto cert = fixtures::example_cert();
  std::vector<SimulationInput> runs;
  for (int i = 0; i < 6; ++i) {
    SimulationInput in;
    in.sys = &sys;
    in.cert = &cert;
    in.unc = example_unc(static_cast<std::uint64_t>(i));
    in.law = i % 2 ? UpdateLaw(pi_law(2.5)) : UpdateLaw(StaticLaw{SymMatrix::scalar(2, 2.5)});
    in.e0 = e0_example();
    in.t_final = 3.0;
    runs.push_back(in);
  }
  const auto batch = simulate_batch(runs);
  ASSERT_EQ(batch.size(), runs.size());
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto seq = simulate(runs[i]);
    EXPECT_EQ(batch[i].e, seq.e) << i;
    EXPECT_EQ(batch[i].W_hat, seq.W_hat) << i;
  }
}

TEST(Parallel, RethrowsFirstFailureByIndex) {
  std::vector<int> hit(50, 0);
  try {
    parallel_for(50, [&](std::size_t i) {
      hit[i] = 1;
      if (i == 7 || i == 31) throw std::runtime_error("index " + std::to_string(i));
    });
    FAIL() << "expected exception";
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "index 7");
  }
  for (int h : hit) EXPECT_EQ(h, 1);
  EXPECT_GE(worker_count(), 1u);
}

TEST(Uub, ZeroTrajectoryInside) {
  Trajectory tr;
  tr.t = {0.0, 1.0, 2.0};
  tr.e = Matrix::Zero(2, 3);
  const auto rep = verify_uub(tr, 0.1, 0.5);
  EXPECT_TRUE(rep.inside);
  EXPECT_EQ(rep.tail_max, 0.0);
  ASSERT_TRUE(rep.entry_time.has_value());
  EXPECT_EQ(*rep.entry_time, 0.0);
}

TEST(Uub, SpikeAfterSettling) {
  Trajectory tr;
  for (int k = 0; k <= 100; ++k) tr.t.push_back(0.1 * k);
  tr.e = Matrix::Zero(1, 101);
  for (int k = 0; k < 101; ++k) tr.e(0, k) = std::exp(-0.1 * k);
  tr.e(0, 80) = 5.0;  // spike after settling
  const auto rep = verify_uub(tr, 0.01, 0.25);
  EXPECT_FALSE(rep.inside);
  EXPECT_EQ(rep.tail_max, 5.0);
  ASSERT_TRUE(rep.entry_time.has_value());
  EXPECT_DOUBLE_EQ(*rep.entry_time, tr.t[81]);

  tr.e(0, 100) = 5.0;  // spike on the last sample: never permanently inside
  EXPECT_FALSE(verify_uub(tr, 0.01, 0.25).entry_time.has_value());
}

TEST(Uub, TailShrinksWithAlpha) {
  const auto sys = fixtures::example_system();
  const auto cert = fixtures::example_cert();
  const auto unc = example_unc(11);
  double tails[2];
  int i = 0;
  for (double alpha : {1.0, 10.0}) {
    const auto tr = simulate(sys, cert, unc, StaticLaw{SymMatrix::scalar(2, alpha)}, e0_example(),
                             Vector(), 60.0);
    tails[i++] = verify_uub(tr, 1.0, 0.25).tail_max;
  }
  EXPECT_LT(tails[1], tails[0]);
}

TEST(Uub, SettlesBelowComputedBound) {
  const auto sys = fixtures::example_system();
  const auto cert = fixtures::example_cert();
  const auto unc = example_unc(12);
  bounds::StaticLawConfig cfg;
  cfg.K_b = SymMatrix::identity(2);
  cfg.alpha = 5.0;
  cfg.b = 1.0;
  const double r_e = bounds::ultimate_bound(cert, cfg, unc.W, unc.eta.eta_star()).residual;
  const auto tr = simulate(sys, cert, unc, StaticLaw{cfg.K()}, e0_example(), Vector(), 60.0);
  EXPECT_TRUE(verify_uub(tr, r_e, 0.25).inside);
}

// Zero noise and linear growth below tau: the error converges to the origin.
TEST(GrowthBound, ConvergesToOrigin) {
  const auto sys = fixtures::example_system();
  const auto cert = fixtures::example_cert();
  Matrix m(1, 2);
  m << 0.0, 1.0;
  UncertaintyModel unc;
  unc.beta = Regressor::affine(Vector::Zero(1), m);  // beta = e2
  unc.eta.amplitude_bound = 0.0;
  const double b = bounds::beta_inf_bound(unc.beta, SymMatrix::identity(1));
  ASSERT_EQ(b, 0.0);
  const double tau = bounds::tau_growth_bound(cert, 1.0, b).tau;
  unc.W = Vector::Constant(1, 0.5 * tau);
  bounds::StaticLawConfig cfg;
  cfg.K_b = SymMatrix::identity(1);
  cfg.b = b;
  const double c_e = bounds::convergence_rate(cert, cfg);
  const auto tr = simulate(sys, cert, unc, StaticLaw{cfg.K()}, e0_example(), Vector(), 50.0 / c_e, 1e-2);
  EXPECT_LT(tr.e_norm(tr.samples() - 1), 1e-6);
}
