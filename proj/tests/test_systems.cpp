#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hocbf/errors.hpp"
#include "hocbf/simulator.hpp"
#include "hocbf/so3.hpp"
#include "hocbf/systems.hpp"

using namespace hocbf;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Matrix3d random_rotation(std::mt19937_64& rng, double max_angle = kPi) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, max_angle);
  return rodrigues_exp(Eigen::Vector3d(n(rng), n(rng), n(rng)).normalized(), angle(rng));
}

AttitudeParams single_cell(const Eigen::Matrix3d& center) {
  AttitudeParams p = reference_attitude_params();
  p.cell_centers = {center};
  return p;
}

}  // namespace

TEST(So3, Basics) {
  EXPECT_TRUE(rodrigues_exp(Eigen::Vector3d::UnitX(), 0.0).isApprox(Eigen::Matrix3d::Identity()));
  EXPECT_EQ(vee(hat(Eigen::Vector3d(1, 2, 3))), Eigen::Vector3d(1, 2, 3));
  const Eigen::Vector3d mapped = rodrigues_exp(Eigen::Vector3d::UnitZ(), kPi / 2) * Eigen::Vector3d::UnitX();
  EXPECT_LT((mapped - Eigen::Vector3d::UnitY()).norm(), 1e-15);
  EXPECT_THROW(rodrigues_exp(Eigen::Vector3d(1, 1, 0), 0.1), InvalidInput);
  EXPECT_THROW(vee(Eigen::Matrix3d::Identity()), InvalidInput);
  const Eigen::Vector3d a(0.3, -1.2, 2.0), b(-0.7, 0.1, 0.4);
  EXPECT_LT((hat(a) * b - a.cross(b)).norm(), 1e-15);
}

TEST(DoubleIntegrator, LieTerms) {
  const DoubleIntegrator di = double_integrator_model(2.0);
  Vector x(4);
  x << 1, 0, 0, 1;
  EXPECT_EQ(di.constraint.eval_b(x), 3.0);
  const LieTerms lt = di.constraint.lie_terms(x);
  EXPECT_EQ(lt.lf_b, 0.0);
  EXPECT_EQ(lt.lf2_b, -2.0);
  EXPECT_EQ(lt.lg_top, (RowVector(2) << -2.0, 0.0).finished());

  x << 0, 0, 0.4, -1;
  EXPECT_EQ(di.constraint.lie_terms(x).lg_top.norm(), 0.0);
  x << 1.3, -0.2, 0, 0;
  EXPECT_EQ(di.constraint.lie_terms(x).lf_b, 0.0);
  EXPECT_THROW(double_integrator_model(0.0), InvalidInput);
}

TEST(DoubleIntegrator, PdLaw) {
  const auto law = double_integrator_pd(0.5, 2.0, Eigen::Vector2d(3, 0));
  Vector x(4);
  x << 1, 1, 0.5, 0;
  const Vector u = law(x);
  EXPECT_DOUBLE_EQ(u[0], -0.5 * (1 - 3) - 2.0 * 0.5);
  EXPECT_DOUBLE_EQ(u[1], -0.5 * 1);
}

TEST(Attitude, Drift) {
  const AttitudeParams p = reference_attitude_params();
  EXPECT_EQ(attitude_drift(attitude_state(p.cell_centers[0], Eigen::Vector3d::Zero()), p),
            Vector::Zero(12));

  const Eigen::Vector3d w = Eigen::Vector3d::UnitZ();
  const Vector f = attitude_drift(attitude_state(Eigen::Matrix3d::Identity(), w), p);
  const Eigen::Matrix3d rdot = Eigen::Matrix3d::Identity() * hat(w);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(f[3 * i + j], rdot(i, j), 1e-15);
  }
  EXPECT_NEAR(f[1], -1.0, 1e-15);
  EXPECT_NEAR(f[3], 1.0, 1e-15);
  const Eigen::Vector3d wdot = p.inertia.inverse() * (-w.cross(p.inertia * w));
  EXPECT_LT((f.tail<3>() - wdot).norm(), 1e-14);

  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(p.inertia);
  const Eigen::Vector3d axis = 0.8 * eig.eigenvectors().col(1);
  EXPECT_LT(attitude_drift(attitude_state(Eigen::Matrix3d::Identity(), axis), p).tail<3>().norm(),
            1e-14);
}

TEST(Attitude, CellBarrier) {
  const AttitudeParams ref = reference_attitude_params();
  const Eigen::Matrix3d c = ref.cell_centers[1];
  const AttitudeParams p = single_cell(c);
  EXPECT_NEAR(cell_barrier(c, p), 0.95, 1e-12);

  const Eigen::Matrix3d at20 = rodrigues_exp(Eigen::Vector3d(1, 2, 2) / 3.0, 20.0 * kPi / 180) * c;
  EXPECT_NEAR(cell_barrier(at20, p), -p.delta, 1e-12);
  const Eigen::Matrix3d at30 = rodrigues_exp(Eigen::Vector3d::UnitY(), 30.0 * kPi / 180) * c;
  EXPECT_EQ(cell_barrier(at30, p), -p.delta);

  std::mt19937_64 rng(3);
  for (int k = 0; k < 1000; ++k) {
    const Eigen::Matrix3d a = random_rotation(rng), b = random_rotation(rng);
    const double theta = rotation_angle_between(a, b);
    ASSERT_NEAR((a - b).squaredNorm(), 4.0 * (1.0 - std::cos(theta)), 1e-12);
  }
  for (const auto& ci : ref.cell_centers) EXPECT_GT(cell_barrier(ci, ref), ref.xi);
}

TEST(Attitude, SmoothTransition) {
  EXPECT_NEAR(smooth_transition(0.5).value, 0.5, 1e-15);
  const ScalarJet neg = smooth_transition(-3.0);
  EXPECT_EQ(neg.value, 0.0);
  EXPECT_EQ(neg.d1, 0.0);
  EXPECT_EQ(neg.d2, 0.0);
  EXPECT_EQ(smooth_transition(4.0).value, 1.0);

  const double rho_a = 4.0 * std::exp(-4.0);
  const double rho_b = (4.0 / 3.0) * std::exp(-4.0 / 3.0);
  EXPECT_NEAR(smooth_transition(0.25).value, rho_a / (rho_a + rho_b), 1e-14);

  const double h = 1e-5;
  for (double v = 0.02; v < 0.99; v += 0.0137) {
    const ScalarJet j = smooth_transition(v);
    const double d1 = (smooth_transition(v + h).value - smooth_transition(v - h).value) / (2 * h);
    const double d2 = (smooth_transition(v + h).d1 - smooth_transition(v - h).d1) / (2 * h);
    ASSERT_NEAR(j.d1, d1, 1e-6 * std::max(1.0, std::abs(d1))) << v;
    ASSERT_NEAR(j.d2, d2, 1e-5 * std::max(1.0, std::abs(d2))) << v;
    ASSERT_GE(j.d1, 0.0);
  }
  EXPECT_THROW(smooth_transition(NAN), InvalidInput);
}

TEST(Attitude, NominalController) {
  const AttitudeParams p = reference_attitude_params();
  EXPECT_EQ(nominal_attitude_controller(Eigen::Matrix3d::Identity(), Eigen::Vector3d::Zero(), p),
            Eigen::Vector3d::Zero());
  const double theta = 0.7;
  const Eigen::Vector3d u = nominal_attitude_controller(
      rodrigues_exp(Eigen::Vector3d::UnitX(), theta), Eigen::Vector3d::Zero(), p);
  EXPECT_LT((u - Eigen::Vector3d(-2.0 * p.k1 * std::sin(theta), 0, 0)).norm(), 1e-15);

  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 5.0);
  for (int k = 0; k < 1000; ++k) {
    const Eigen::Vector3d v = nominal_attitude_controller(
        random_rotation(rng), Eigen::Vector3d(n(rng), n(rng), n(rng)), p);
    ASSERT_LE(v.cwiseAbs().maxCoeff(), 2.0 * p.k1 + p.k2 + 1e-12);
  }
}

TEST(Attitude, AdditiveSignal) {
  EXPECT_EQ(additive_signal(10.0), Eigen::Vector3d::Zero());
  EXPECT_LT(additive_signal(20.0).norm(), 1e-15);
  EXPECT_EQ(additive_signal(25.5), Eigen::Vector3d::Zero());
  const Eigen::Vector3d v = additive_signal(21.25);
  const double s = std::sin(kPi / 4);
  EXPECT_NEAR(v[0], 0.3, 1e-15);
  EXPECT_NEAR(v[1], 0.3 * s, 1e-15);
  EXPECT_NEAR(v[2], -0.3 * s, 1e-15);
}

TEST(Attitude, FlowStaysOnRotationsAndConservesEnergy) {
  const AttitudeParams p = reference_attitude_params();
  const SystemModel model = attitude_model(p);
  const Vector x0 = attitude_state(reference_orientations().r0, Eigen::Vector3d(0.1, -0.05, 0.2));

  const auto controlled = plain_controller([&](const Vector& x, double) -> Vector {
    return nominal_attitude_controller(rotation_part(x), angular_velocity_part(x), p);
  });
  const Trajectory traj = integrate_closed_loop(model, controlled, x0, 40.0, 1e-3);
  double worst = 0.0;
  for (const auto& x : traj.states) worst = std::max(worst, orthonormality_error(rotation_part(x)));
  EXPECT_LT(worst, 1e-6);

  const auto free = plain_controller([](const Vector&, double) -> Vector { return Vector::Zero(3); });
  const Trajectory coast = integrate_closed_loop(model, free, x0, 10.0, 1e-3);
  auto energy = [&](const Vector& x) {
    const Eigen::Vector3d w = angular_velocity_part(x);
    return 0.5 * w.dot(p.inertia * w);
  };
  const double e0 = energy(coast.states.front());
  for (const auto& x : coast.states) ASSERT_NEAR(energy(x), e0, 1e-9 * e0);
}

TEST(Attitude, ProjectionRestoresRotation) {
  Eigen::Matrix3d r = rodrigues_exp(Eigen::Vector3d::UnitY(), 0.4);
  r(0, 1) += 1e-3;
  const Vector x = project_attitude_state(attitude_state(r, Eigen::Vector3d(1, 2, 3)));
  EXPECT_LT(orthonormality_error(rotation_part(x)), 1e-14);
  EXPECT_NEAR(rotation_part(x).determinant(), 1.0, 1e-14);
  EXPECT_EQ(angular_velocity_part(x), Eigen::Vector3d(1, 2, 3));
}

TEST(Attitude, LieTermsAgainstFlow) {
  const AttitudeParams p = reference_attitude_params();
  const ConstraintProvider provider = attitude_constraint_provider(p);
  const SystemModel model = attitude_model(p);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> w(-1.0, 1.0);
  std::uniform_int_distribution<int> cell(0, 2);

  for (int k = 0; k < 50; ++k) {
    const Eigen::Matrix3d r = random_rotation(rng, 0.3) * p.cell_centers[cell(rng)];
    EXPECT_EQ(provider.lie_terms(attitude_state(r, Eigen::Vector3d::Zero())).lf_b, 0.0);

    const Vector x = attitude_state(r, Eigen::Vector3d(w(rng), w(rng), w(rng)));
    const auto zero = plain_controller([](const Vector&, double) -> Vector { return Vector::Zero(3); });
    const double h = 1e-4;
    const Trajectory fwd = integrate_closed_loop(model, zero, x, h, h);
    Vector back_state = x;
    back_state.tail<3>() *= -1.0;
    // Reversing omega runs the torque-free flow backwards in R; the omega
    // block is quadratic in omega, so b(x(-h)) is b along the reversed flow.
    const Trajectory bwd = integrate_closed_loop(model, zero, back_state, h, h);
    const double fd = (provider.eval_b(fwd.states.back()) - provider.eval_b(bwd.states.back())) / (2 * h);
    ASSERT_NEAR(provider.lie_terms(x).lf_b, fd, 1e-4);
  }
}

TEST(Attitude, TruncatedRowVanishesDeepInsideCell) {
  const AttitudeParams p = reference_attitude_params();
  const BarrierChain chain(attitude_constraint_provider(p), ChiTruncation::cubic(), p.xi,
                           {ExtendedClassK(), ExtendedClassK()});
  const Vector x = attitude_state(p.cell_centers[2], Eigen::Vector3d(0.2, -0.1, 0.3));
  ASSERT_GE(chain.evaluate(x).b, p.xi);
  const ConstraintRow row = chain.constraint_row(x);
  EXPECT_EQ(row.a.norm(), 0.0);
  EXPECT_GT(row.c, 0.0);
}

TEST(Attitude, Validation) {
  AttitudeParams p = reference_attitude_params();
  p.inertia(0, 1) = 1.0;
  EXPECT_THROW(p.validate(), InvalidInput);
  p = reference_attitude_params();
  p.cell_centers[0](0, 0) = 2.0;
  EXPECT_THROW(p.validate(), InvalidInput);
  p = reference_attitude_params();
  p.epsilon = 0.0;
  EXPECT_THROW(p.validate(), InvalidInput);
}
