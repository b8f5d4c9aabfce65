#include <gtest/gtest.h>

#include <cmath>

#include "hocbf/errors.hpp"
#include "hocbf/verifier.hpp"

using namespace hocbf;

namespace {

std::vector<ExtendedClassK> identity2() { return {ExtendedClassK(), ExtendedClassK()}; }

Vector di_state(double px, double py, double vx, double vy) {
  Vector x(4);
  x << px, py, vx, vy;
  return x;
}

}  // namespace

TEST(Sampling, BoxAndDeterminism) {
  const SamplingBox box = double_integrator_box(2.0, 500, 9);
  const auto a = draw_samples(box);
  const auto b = draw_samples(box);
  ASSERT_EQ(a.size(), 500u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    ASSERT_EQ(a[k], b[k]);
    ASSERT_TRUE((a[k].array() >= box.lower.array()).all());
    ASSERT_TRUE((a[k].array() <= box.upper.array()).all());
  }
  SamplingBox other = box;
  other.seed = 10;
  EXPECT_NE(draw_samples(other).front(), a.front());

  SamplingBox uniform = box;
  uniform.sampler = Sampler::uniform;
  EXPECT_EQ(draw_samples(uniform).size(), 500u);
  EXPECT_EQ(parse_sampler("halton"), Sampler::halton);
  EXPECT_THROW(parse_sampler("sobol"), InvalidInput);

  SamplingBox bad = box;
  bad.lower[0] = 10.0;
  EXPECT_THROW(draw_samples(bad), InvalidInput);
  SamplingBox empty_domain = box;
  empty_domain.domain = [](const Vector&) { return false; };
  EXPECT_THROW(draw_samples(empty_domain), InvalidInput);
}

TEST(HocbfCondition, ZeroSamples) {
  const BarrierChain chain(double_integrator_model(2.0).constraint, ChiTruncation::cubic(), 1.0,
                           identity2());
  const CertificateReport r = check_hocbf_condition(chain, double_integrator_box(2.0, 0, 1));
  EXPECT_EQ(r.checked, 0);
  EXPECT_TRUE(r.passed());
  EXPECT_TRUE(std::isinf(r.min_slack));
}

TEST(HocbfCondition, TruncatedDoubleIntegrator) {
  const BarrierChain chain(double_integrator_model(2.0).constraint, ChiTruncation::cubic(), 1.0,
                           identity2());
  auto states = draw_samples(double_integrator_box(2.0, 5000, 2));
  states.push_back(di_state(0, 0, 2, 0));
  states.push_back(di_state(0, 0, -1.5, 1.5));
  const CertificateReport r = check_hocbf_condition(chain, states);
  EXPECT_EQ(r.checked, 5002);
  EXPECT_TRUE(r.passed());
}

TEST(HocbfCondition, RawBarrierFailsAtSingularSet) {
  const BarrierChain raw(double_integrator_model(2.0).constraint, ChiTruncation::identity(), 1.0,
                         identity2());
  // At p = 0 the row vanishes and c = d^2 - 2|v|^2, negative for |v| > sqrt(2).
  const Vector bad = di_state(0, 0, 2, 0);
  ASSERT_LT(raw.constraint_row(bad).a.norm(), kSingularRowNorm);
  ASSERT_LT(raw.constraint_row(bad).c, 0.0);

  const CertificateReport r = check_hocbf_condition(raw, {di_state(1, 0, 0, 0), bad,
                                                          di_state(0, 0, 0.5, 0)});
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].state, bad);
  EXPECT_NEAR(r.violations[0].value, -4.0, 1e-12);
  EXPECT_LT(r.min_slack, 0.0);
}

TEST(HocbfCondition, TruncatedAttitude) {
  const AttitudeParams p = reference_attitude_params();
  const BarrierChain chain(attitude_constraint_provider(p), ChiTruncation::cubic(), p.xi,
                           identity2());
  const CertificateReport r = check_hocbf_condition(chain, attitude_box(p, 3000, 4));
  EXPECT_EQ(r.checked, 3000);
  EXPECT_TRUE(r.passed());
}

TEST(RelativeDegree, ReferenceSystems) {
  const DoubleIntegrator di = double_integrator_model(2.0);
  EXPECT_TRUE(check_least_relative_degree(di.constraint, di.model,
                                          double_integrator_box(2.0, 2000, 3)).passed());
  const AttitudeParams p = reference_attitude_params();
  EXPECT_TRUE(check_least_relative_degree(attitude_constraint_provider(p), attitude_model(p),
                                          attitude_box(p, 2000, 3)).passed());
}

TEST(RelativeDegree, VelocityDependentConstraintFails) {
  const DoubleIntegrator di = double_integrator_model(2.0);
  ConstraintProvider leaky = di.constraint;
  leaky.eval_b = [](const Vector& x) { return 4.0 - x.head<2>().squaredNorm() - x[2]; };
  const CertificateReport r =
      check_least_relative_degree(leaky, di.model, double_integrator_box(2.0, 200, 3));
  EXPECT_EQ(r.violations.size(), 200u);
  EXPECT_NEAR(r.violations[0].value, 1.0, 1e-6);
}

TEST(Containment, NestedSuperlevelSets) {
  const DoubleIntegrator di = double_integrator_model(2.0);
  const StateFunction b = di.constraint.eval_b;
  const double xi = 1.0;
  const SamplingBox box = double_integrator_box(2.0, 4000, 5);

  auto level = [&](double xi_prime) -> StateFunction {
    return [b, xi_prime](const Vector& x) { return b(x) - xi_prime; };
  };
  EXPECT_TRUE(check_containment(level(1.5), b, xi, box).passed());

  const CertificateReport loose = check_containment(level(0.5), b, xi, box);
  ASSERT_FALSE(loose.passed());
  for (const auto& v : loose.violations) {
    ASSERT_GE(v.value, 0.5);
    ASSERT_LT(v.value, 1.0);
  }
}

TEST(Containment, SingularSetInsideTruncationRegion) {
  const DoubleIntegrator di = double_integrator_model(2.0);
  auto states = draw_samples(double_integrator_box(2.0, 2000, 6));
  states.push_back(di_state(0, 0, 0, 0));
  states.push_back(di_state(0, 0, 1.2, -0.3));
  const StateFunction indicator = singular_set_indicator(di.constraint);
  EXPECT_EQ(indicator(states.back()), 1.0);
  EXPECT_EQ(indicator(di_state(1, 0, 0, 0)), -1.0);
  for (double xi : {0.5, 1.0, 3.9}) {
    EXPECT_TRUE(check_containment(indicator, di.constraint.eval_b, xi, states).passed()) << xi;
  }
  EXPECT_FALSE(check_containment(indicator, di.constraint.eval_b, 4.5, states).passed());
}

TEST(Report, Merge) {
  CertificateReport a, b;
  a.checked = 3;
  a.min_slack = 0.2;
  b.checked = 2;
  b.min_slack = -0.1;
  b.violations.push_back({Vector::Zero(1), "b", -0.1});
  a.merge(b);
  EXPECT_EQ(a.checked, 5);
  EXPECT_EQ(a.min_slack, -0.1);
  EXPECT_FALSE(a.passed());
}
