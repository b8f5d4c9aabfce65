#include "hocbf/systems.hpp"

#include <cmath>
#include <numbers>

#include "hocbf/errors.hpp"
#include "hocbf/so3.hpp"

namespace hocbf {

namespace {

constexpr double kDegree = std::numbers::pi / 180.0;

using JetState = JetConstraint::JetState;

void require_finite(const Vector& x, const char* what) {
  if (!x.allFinite()) throw InvalidInput(std::string(what) + ": non-finite state");
}

double transition(double v) { return smooth_transition(v).value; }
Jet2 transition(const Jet2& v) {
  const ScalarJet s = smooth_transition(v.value);
  return chain(v, s.value, s.d1, s.d2);
}

/// Row-major 3x3 block r[0..8] and w[9..11], generic in the scalar.
template <typename T, typename State>
std::vector<T> attitude_drift_t(const State& x, const Eigen::Matrix3d& inertia,
                                const Eigen::Matrix3d& inertia_inv) {
  std::vector<T> out(12);
  const T& w1 = x[9];
  const T& w2 = x[10];
  const T& w3 = x[11];
  for (int row = 0; row < 3; ++row) {
    const T& a = x[3 * row];
    const T& b = x[3 * row + 1];
    const T& c = x[3 * row + 2];
    out[3 * row] = b * w3 - c * w2;
    out[3 * row + 1] = c * w1 - a * w3;
    out[3 * row + 2] = a * w2 - b * w1;
  }
  // J^{-1} (-(w x J w))
  T jw[3];
  for (int i = 0; i < 3; ++i) {
    jw[i] = T(inertia(i, 0)) * w1 + T(inertia(i, 1)) * w2 + T(inertia(i, 2)) * w3;
  }
  const T cross[3] = {w2 * jw[2] - w3 * jw[1], w3 * jw[0] - w1 * jw[2], w1 * jw[1] - w2 * jw[0]};
  for (int i = 0; i < 3; ++i) {
    out[9 + i] = -(T(inertia_inv(i, 0)) * cross[0] + T(inertia_inv(i, 1)) * cross[1] +
                   T(inertia_inv(i, 2)) * cross[2]);
  }
  return out;
}

template <typename T, typename State>
T cell_barrier_t(const State& x, const AttitudeParams& p) {
  T sum(0.0);
  for (const auto& center : p.cell_centers) {
    T dist_sq(0.0);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const T d = x[3 * i + j] - T(center(i, j));
        dist_sq += d * d;
      }
    }
    const T r_i = T(p.epsilon) - T(0.5) * dist_sq;
    sum += transition(r_i * T(1.0 / p.epsilon));
  }
  return sum - T(p.delta);
}

}  // namespace

// ---------------------------------------------------------------------------
// double integrator

DoubleIntegrator double_integrator_model(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InvalidInput("double integrator radius must be positive");
  }
  DoubleIntegrator di;
  di.radius = radius;
  di.model.state_dim = 4;
  di.model.input_dim = 2;
  di.model.label = "double_integrator";
  di.model.drift = [](const Vector& x) {
    Vector f = Vector::Zero(4);
    f.head<2>() = x.tail<2>();
    return f;
  };
  di.model.actuation = [](const Vector&) {
    Matrix g = Matrix::Zero(4, 2);
    g.bottomRows<2>().setIdentity();
    return g;
  };

  const double d_sq = radius * radius;
  di.constraint.relative_order = 2;
  di.constraint.eval_b = [d_sq](const Vector& x) { return d_sq - x.head<2>().squaredNorm(); };
  di.constraint.lie_terms = [](const Vector& x) {
    const Eigen::Vector2d p = x.head<2>();
    const Eigen::Vector2d v = x.tail<2>();
    LieTerms lie;
    lie.lf_b = -2.0 * p.dot(v);
    lie.lf2_b = -2.0 * v.squaredNorm();
    lie.lg_top = -2.0 * p.transpose();
    return lie;
  };

  di.jet.state_dim = 4;
  di.jet.drift = [](const JetState& x) { return JetState{x[2], x[3], Jet2(0.0), Jet2(0.0)}; };
  di.jet.actuation = di.model.actuation;
  di.jet.barrier = [d_sq](const JetState& x) { return Jet2(d_sq) - x[0] * x[0] - x[1] * x[1]; };
  return di;
}

std::function<Vector(const Vector&)> double_integrator_pd(double kp, double kd,
                                                         const Eigen::Vector2d& target) {
  return [kp, kd, target](const Vector& x) -> Vector {
    return -kp * (x.head<2>() - target) - kd * x.tail<2>();
  };
}

// ---------------------------------------------------------------------------
// attitude

void AttitudeParams::validate() const {
  if (!inertia.allFinite() || (inertia - inertia.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InvalidInput("inertia must be finite and symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(inertia);
  if (eig.eigenvalues().minCoeff() <= 0.0) throw InvalidInput("inertia must be positive definite");
  if (cell_centers.empty()) throw InvalidInput("at least one cell center is required");
  for (const auto& c : cell_centers) {
    if (!c.allFinite() || orthonormality_error(c) >= 1e-10 || std::abs(c.determinant() - 1.0) > 1e-9) {
      throw InvalidInput("cell centers must be rotation matrices");
    }
  }
  for (double v : {epsilon, delta, k1, k2, xi}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InvalidInput("epsilon, delta, k1, k2 and xi must be positive");
    }
  }
}

ReferenceOrientations reference_orientations() {
  const Eigen::Vector3d e1 = Eigen::Vector3d::UnitX();
  const Eigen::Vector3d e2 = Eigen::Vector3d::UnitY();
  // (0, 0.447, 0.894) has norm 0.99947.
  const Eigen::Vector3d tilted = Eigen::Vector3d(0.0, 0.447, 0.894).normalized();
  ReferenceOrientations o;
  o.r3 = rodrigues_exp(e1, 10.0 * kDegree);
  o.r2 = rodrigues_exp(e2, 30.0 * kDegree) * o.r3;
  o.r1 = rodrigues_exp(tilted, 30.0 * kDegree) * o.r2;
  o.r0 = rodrigues_exp(e1, 10.0 * kDegree) * o.r1;
  o.target = Eigen::Matrix3d::Identity();
  return o;
}

AttitudeParams reference_attitude_params() {
  AttitudeParams p;
  p.inertia << 5.5, 0.06, -0.03,
               0.06, 5.5, 0.01,
               -0.03, 0.01, 0.1;
  const ReferenceOrientations o = reference_orientations();
  p.cell_centers = {o.r1, o.r2, o.r3};
  p.epsilon = 0.1206;
  p.delta = 0.05;
  p.k1 = 0.2;
  p.k2 = 0.2;
  p.xi = 0.6;
  return p;
}

Eigen::Matrix3d rotation_part(const Vector& x) {
  if (x.size() != 12) throw DimensionMismatch("attitude state must have 12 entries");
  Eigen::Matrix3d r;
  r << x[0], x[1], x[2], x[3], x[4], x[5], x[6], x[7], x[8];
  return r;
}

Eigen::Vector3d angular_velocity_part(const Vector& x) {
  if (x.size() != 12) throw DimensionMismatch("attitude state must have 12 entries");
  return x.tail<3>();
}

Vector attitude_state(const Eigen::Matrix3d& r, const Eigen::Vector3d& omega) {
  Vector x(12);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) x[3 * i + j] = r(i, j);
  }
  x.tail<3>() = omega;
  return x;
}

Vector project_attitude_state(const Vector& x) {
  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(rotation_part(x),
                                              Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    Eigen::Matrix3d u = svd.matrixU();
    u.col(2) *= -1.0;
    r = u * svd.matrixV().transpose();
  }
  return attitude_state(r, angular_velocity_part(x));
}

Vector attitude_drift(const Vector& x, const AttitudeParams& params) {
  if (x.size() != 12) throw DimensionMismatch("attitude state must have 12 entries");
  require_finite(x, "attitude_drift");
  const auto f = attitude_drift_t<double>(x, params.inertia, params.inertia.inverse());
  return Eigen::Map<const Vector>(f.data(), 12);
}

Matrix attitude_actuation(const AttitudeParams& params) {
  Matrix g = Matrix::Zero(12, 3);
  g.bottomRows<3>() = params.inertia.inverse();
  return g;
}

SystemModel attitude_model(const AttitudeParams& params) {
  params.validate();
  SystemModel m;
  m.state_dim = 12;
  m.input_dim = 3;
  m.label = "attitude";
  const Eigen::Matrix3d inertia = params.inertia;
  const Eigen::Matrix3d inertia_inv = params.inertia.inverse();
  m.drift = [inertia, inertia_inv](const Vector& x) {
    if (x.size() != 12) throw DimensionMismatch("attitude state must have 12 entries");
    const auto f = attitude_drift_t<double>(x, inertia, inertia_inv);
    return Vector(Eigen::Map<const Vector>(f.data(), 12));
  };
  const Matrix g = attitude_actuation(params);
  m.actuation = [g](const Vector&) { return g; };
  return m;
}

double cell_barrier(const Eigen::Matrix3d& r, const AttitudeParams& params) {
  if (!r.allFinite()) throw InvalidInput("cell_barrier: non-finite rotation");
  const Vector x = attitude_state(r, Eigen::Vector3d::Zero());
  return cell_barrier_t<double>(x, params);
}

ScalarJet smooth_transition(double v) {
  if (!std::isfinite(v)) throw InvalidInput("smooth_transition: non-finite argument");
  // Beyond these cutoffs every term underflows to the flat branches in double.
  if (v < 1e-3) return {0.0, 0.0, 0.0};
  if (v > 1.0 - 1e-3) return {1.0, 0.0, 0.0};
  // s = 1 / (1 + e^q), q = ln(rho(1-v) / rho(v)).
  const double w = 1.0 - v;
  const double q = 1.0 / v - 1.0 / w + std::log(v) - std::log(w);
  const double dq = -1.0 / (v * v) - 1.0 / (w * w) + 1.0 / v + 1.0 / w;
  const double d2q = 2.0 / (v * v * v) - 2.0 / (w * w * w) - 1.0 / (v * v) + 1.0 / (w * w);
  const double s = q > 0.0 ? std::exp(-q) / (1.0 + std::exp(-q)) : 1.0 / (1.0 + std::exp(q));
  const double ch = std::cosh(0.5 * q);
  const double s_1ms = 1.0 / (4.0 * ch * ch);  // s (1 - s)
  const double ds = -s_1ms * dq;
  const double d2s = -(1.0 - 2.0 * s) * ds * dq - s_1ms * d2q;
  return {s, ds, d2s};
}

Eigen::Vector3d nominal_attitude_controller(const Eigen::Matrix3d& r, const Eigen::Vector3d& omega,
                                            const AttitudeParams& params) {
  return -params.k1 * vee(r - r.transpose()) - params.k2 * omega.array().tanh().matrix();
}

Eigen::Vector3d additive_signal(double t) {
  if (!(t >= 20.0 && t <= 25.0)) return Eigen::Vector3d::Zero();
  const double phase = std::numbers::pi * (t - 20.0) / 5.0;
  return 0.3 * Eigen::Vector3d(std::sin(2.0 * phase), std::sin(phase), -std::sin(phase));
}

JetConstraint attitude_jet_constraint(const AttitudeParams& params) {
  params.validate();
  JetConstraint sys;
  sys.state_dim = 12;
  const Eigen::Matrix3d inertia = params.inertia;
  const Eigen::Matrix3d inertia_inv = params.inertia.inverse();
  sys.drift = [inertia, inertia_inv](const JetState& x) {
    return attitude_drift_t<Jet2>(x, inertia, inertia_inv);
  };
  const Matrix g = attitude_actuation(params);
  sys.actuation = [g](const Vector&) { return g; };
  sys.barrier = [params](const JetState& x) { return cell_barrier_t<Jet2>(x, params); };
  return sys;
}

ConstraintProvider attitude_constraint_provider(const AttitudeParams& params) {
  return make_jet_provider(attitude_jet_constraint(params), 2);
}

}  // namespace hocbf
