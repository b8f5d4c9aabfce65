#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hocbf/barrier_chain.hpp"
#include "hocbf/errors.hpp"
#include "hocbf/simulator.hpp"
#include "hocbf/systems.hpp"

using namespace hocbf;

namespace {

std::vector<ExtendedClassK> identity2() { return {ExtendedClassK(), ExtendedClassK()}; }

BarrierChain di_chain(double xi = 1.0, ChiTruncation chi = ChiTruncation::cubic()) {
  return BarrierChain(double_integrator_model(2.0).constraint, chi, xi, identity2());
}

Vector di_state(double px, double py, double vx, double vy) {
  Vector x(4);
  x << px, py, vx, vy;
  return x;
}

Vector random_di_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> p(-3.0, 3.0), v(-2.0, 2.0);
  return di_state(p(rng), p(rng), v(rng), v(rng));
}

}  // namespace

TEST(Chi, CubicValues) {
  const ChiTruncation chi = ChiTruncation::cubic();
  const ScalarJet at1 = eval_chi(chi, 1.0);
  EXPECT_EQ(at1.value, 1.0);
  EXPECT_EQ(at1.d1, 0.0);
  EXPECT_EQ(at1.d2, 0.0);
  const ScalarJet at0 = eval_chi(chi, 0.0);
  EXPECT_EQ(at0.value, 0.0);
  EXPECT_EQ(at0.d1, 3.0);
  EXPECT_EQ(at0.d2, -6.0);
  const ScalarJet at2 = eval_chi(chi, 2.0);
  EXPECT_EQ(at2.value, 1.0);
  EXPECT_EQ(at2.d1, 0.0);
  EXPECT_EQ(at2.d2, 0.0);
  EXPECT_THROW(eval_chi(chi, NAN), InvalidInput);
}

TEST(Chi, SmoothAtOneAndIncreasingBelow) {
  const ChiTruncation chi = ChiTruncation::cubic();
  const ScalarJet below = chi(1.0 - 1e-7);
  EXPECT_NEAR(below.value, 1.0, 1e-15);
  EXPECT_NEAR(below.d1, 0.0, 1e-13);
  EXPECT_NEAR(below.d2, 0.0, 1e-6);
  for (double t = -3.0; t < 1.0; t += 0.01) EXPECT_GT(chi(t).d1, 0.0);
  EXPECT_TRUE(chi.truncating());
  EXPECT_FALSE(ChiTruncation::identity().truncating());
}

TEST(BarrierChainTest, ConstructorValidates) {
  const auto provider = double_integrator_model(2.0).constraint;
  EXPECT_THROW(BarrierChain(provider, ChiTruncation::cubic(), 0.0, identity2()), InvalidInput);
  EXPECT_THROW(BarrierChain(provider, ChiTruncation::cubic(), 1.0, {ExtendedClassK()}), InvalidInput);
}

TEST(BarrierChainTest, TruncatedBranchOfDoubleIntegrator) {
  const BarrierChain chain = di_chain();
  const PsiEvaluation e = chain.evaluate(di_state(1, 0, 0, 1));
  EXPECT_EQ(e.b, 3.0);
  EXPECT_EQ(e.psi[0], 1.0);
  EXPECT_EQ(e.psi[1], 1.0);
  EXPECT_EQ(e.lg_psi_last.norm(), 0.0);
  EXPECT_EQ(e.lf_psi_last, 0.0);
  const ConstraintRow row = hocbf_constraint_row(chain, di_state(1, 0, 0, 1));
  EXPECT_EQ(row.a.norm(), 0.0);
  EXPECT_EQ(row.c, 1.0);
  EXPECT_DOUBLE_EQ(chain.interior_offset(), 1.0);
}

TEST(BarrierChainTest, ZeroBarrierGivesZeroChain) {
  ConstraintProvider zero;
  zero.relative_order = 2;
  zero.eval_b = [](const Vector&) { return 0.0; };
  zero.lie_terms = [](const Vector&) {
    LieTerms l;
    l.lg_top = RowVector::Zero(2);
    return l;
  };
  const BarrierChain chain(zero, ChiTruncation::cubic(), 0.5, identity2());
  const PsiEvaluation e = eval_psi_chain(chain, Vector::Zero(4));
  EXPECT_EQ(e.psi[0], 0.0);
  EXPECT_EQ(e.psi[1], 0.0);
}

TEST(BarrierChainTest, NearBoundaryRowMatchesHandFormulas) {
  const BarrierChain chain = di_chain();
  const Vector x = di_state(1.99, 0, 0.1, 0);
  const double tau = 4.0 - 1.99 * 1.99;
  const double lfb = -2 * 1.99 * 0.1, lf2b = -2 * 0.01;
  const double d1 = 3 * (tau - 1) * (tau - 1), d2 = 6 * (tau - 1);
  const double h = (tau - 1) * (tau - 1) * (tau - 1) + 1;
  const double lfh = d1 * lfb;
  const double psi1 = lfh + h;
  const double lf_psi1 = d2 * lfb * lfb + d1 * lf2b + lfh;

  const ConstraintRow row = chain.constraint_row(x);
  EXPECT_NEAR(row.a[0], d1 * -2 * 1.99, 1e-12);
  EXPECT_EQ(row.a[1], 0.0);
  EXPECT_NEAR(row.c, lf_psi1 + psi1, 1e-12);

  // Finite differences of psi_1 along exact double-integrator flows with
  // u = 0 and u = e1.
  const double step = 1e-5;
  for (double u : {0.0, 1.0}) {
    auto flow = [&](double t) {
      return di_state(1.99 + 0.1 * t + 0.5 * u * t * t, 0, 0.1 + u * t, 0);
    };
    const double fd =
        (chain.evaluate(flow(step)).psi[1] - chain.evaluate(flow(-step)).psi[1]) / (2 * step);
    EXPECT_NEAR(fd, lf_psi1 + row.a[0] * u, 1e-6);
  }
  // The half-space is nonempty: u = -c a^T / |a|^2 sits on its boundary.
  const Vector u0 = -row.c * row.a.transpose() / row.a.squaredNorm();
  EXPECT_NEAR(row.a * u0 + row.c, 0.0, 1e-12);
}

TEST(BarrierChainTest, RobustifiedRow) {
  const BarrierChain chain = di_chain();
  const Vector x = di_state(1.9, 0.2, 0.3, -0.1);
  const ConstraintRow base = chain.constraint_row(x);
  const ConstraintRow same = robustified_constraint_row(chain, x, RowVector::Zero(2), 0.7);
  EXPECT_EQ(same.c, base.c);
  RowVector lp(2);
  lp << 3, 4;
  const ConstraintRow zero_bar = robustified_constraint_row(chain, x, lp, 0.0);
  EXPECT_EQ(zero_bar.c, base.c);
  const ConstraintRow tight = robustified_constraint_row(chain, x, lp, 1.0);
  EXPECT_NEAR(tight.c, base.c - 5.0, 1e-12);
  EXPECT_EQ(tight.a, base.a);
  EXPECT_THROW(robustified_constraint_row(chain, x, lp, -1.0), InvalidInput);
}

TEST(BarrierChainTest, Membership) {
  const BarrierChain chain = di_chain();
  EXPECT_TRUE(membership_C(chain, di_state(0.5, 0, 1, 1)).inside);
  EXPECT_FALSE(membership_C(chain, di_state(2.5, 0, 0, 0)).inside);
  const Membership edge = membership_C(chain, di_state(0, 2, 1, 0));
  EXPECT_EQ(edge.margins[0], 0.0);
  EXPECT_EQ(edge.margins[1], 0.0);
  EXPECT_TRUE(edge.inside);
}

TEST(BarrierChainTest, TruncationPreservesSign) {
  const BarrierChain chain = di_chain(1.5);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10000; ++i) {
    const Vector x = random_di_state(rng);
    const PsiEvaluation e = chain.evaluate(x);
    ASSERT_EQ(e.psi[0] > 0, e.b > 0);
    ASSERT_EQ(e.psi[0] < 0, e.b < 0);
  }
}

TEST(BarrierChainTest, SingularityDecoupling) {
  const double xi = 1.5;
  const BarrierChain chain = di_chain(xi);
  const auto provider = double_integrator_model(2.0).constraint;
  std::mt19937_64 rng(4);
  for (int i = 0; i < 10000; ++i) {
    const Vector x = random_di_state(rng);
    const PsiEvaluation e = chain.evaluate(x);
    if (e.b >= xi) {
      ASSERT_EQ(e.lg_psi_last.norm(), 0.0);
    } else {
      const double tau = e.b / xi;
      const RowVector expected = (3 * (tau - 1) * (tau - 1) / xi) * provider.lie_terms(x).lg_top;
      ASSERT_LT((e.lg_psi_last - expected).norm(), 1e-12 * (1 + expected.norm()));
    }
    const ConstraintRow row = chain.constraint_row(x);
    if (row.a.norm() < 1e-8) {
      ASSERT_GT(row.c, 0.0);
    }
  }
}

TEST(BarrierChainTest, JetProviderMatchesClosedForms) {
  const DoubleIntegrator di = double_integrator_model(2.0);
  const ConstraintProvider jet = make_jet_provider(di.jet, 2);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const Vector x = random_di_state(rng);
    const LieTerms a = di.constraint.lie_terms(x);
    const LieTerms b = jet.lie_terms(x);
    ASSERT_NEAR(a.lf_b, b.lf_b, 1e-12);
    ASSERT_NEAR(a.lf2_b, b.lf2_b, 1e-12);
    ASSERT_LT((a.lg_top - b.lg_top).norm(), 1e-12);
    ASSERT_NEAR(di.constraint.eval_b(x), jet.eval_b(x), 1e-12);
  }
}

TEST(BarrierChainTest, ChainConsistencyAlongTrajectory) {
  const DoubleIntegrator di = double_integrator_model(2.0);
  auto chain = std::make_shared<const BarrierChain>(di.constraint, ChiTruncation::cubic(), 1.0,
                                                    identity2());
  const auto pd = double_integrator_pd(1.0, 1.5, Eigen::Vector2d(3.0, 1.0));
  const auto controller =
      make_filtered_controller(chain, [pd](const Vector& x, double) { return pd(x); });
  const double dt = 1e-3;
  const Trajectory traj =
      integrate_closed_loop(di.model, controller, di_state(-1, 0.5, 0.2, 0), 8.0, dt);
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < traj.size(); ++k) {
    const double dpsi0 = (traj.psi_values[k + 1][0] - traj.psi_values[k - 1][0]) / (2 * dt);
    worst = std::max(worst, std::abs(dpsi0 - (traj.psi_values[k][1] - traj.psi_values[k][0])));
  }
  EXPECT_LT(worst, 1e-3);
}
