#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "hocbf/class_k.hpp"
#include "hocbf/jet.hpp"

namespace hocbf {

using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Matrix = Eigen::MatrixXd;

/// Lie derivatives of the constraint b needed by the chain.
///
/// For relative order 2: lf_b = L_f b, lf2_b = L_f^2 b, lg_top = L_g L_f b.
/// For relative order 1: lf_b = L_f b, lg_top = L_g b and lf2_b is unused.
struct LieTerms {
  double lf_b = 0.0;
  double lf2_b = 0.0;
  RowVector lg_top;
};

struct ConstraintProvider {
  std::function<double(const Vector&)> eval_b;
  std::function<LieTerms(const Vector&)> lie_terms;
  int relative_order = 2;
};

/// Value and first two derivatives of a scalar map at a point.
struct ScalarJet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Monotone saturation chi applied as h = chi(b / xi).
///
/// A truncating chi has chi(0) = 0, chi = 1 on [1, inf) and chi' > 0 below 1,
/// which makes the constraint row vanish exactly on {b >= xi}.
class ChiTruncation {
 public:
  using Fn = std::function<ScalarJet(double)>;

  /// (tau - 1)^3 + 1 for tau <= 1, and 1 above.
  static ChiTruncation cubic();
  /// chi(tau) = tau. Not truncating; recovers the raw barrier h = b / xi.
  static ChiTruncation identity();
  static ChiTruncation custom(Fn fn, bool truncating);

  ScalarJet operator()(double tau) const;
  bool truncating() const noexcept { return truncating_; }

 private:
  enum class Kind { cubic, identity, custom };
  Kind kind_ = Kind::cubic;
  bool truncating_ = true;
  Fn fn_;
};

ScalarJet eval_chi(const ChiTruncation& chi, double tau);

/// psi_0 .. psi_{r-1} and the Lie derivatives of the last one.
struct PsiEvaluation {
  Vector psi;
  double lf_psi_last = 0.0;
  RowVector lg_psi_last;
  double b = 0.0;
};

/// Affine safety constraint a u + c >= 0 on the input.
struct ConstraintRow {
  RowVector a;
  double c = 0.0;
};

struct Membership {
  bool inside = false;
  Vector margins;
};

/// The chain psi_0 = chi(b / xi), psi_k = (d/dt + alpha_k) psi_{k-1}.
/// Supports relative order 1 and 2.
class BarrierChain {
 public:
  BarrierChain(ConstraintProvider constraint, ChiTruncation chi, double xi,
               std::vector<ExtendedClassK> alphas, double delta_margin = 0.0);

  int order() const noexcept { return constraint_.relative_order; }
  double xi() const noexcept { return xi_; }
  double delta_margin() const noexcept { return delta_margin_; }
  const ChiTruncation& chi() const noexcept { return chi_; }
  const std::vector<ExtendedClassK>& alphas() const noexcept { return alphas_; }
  const ConstraintProvider& constraint() const noexcept { return constraint_; }

  PsiEvaluation evaluate(const Vector& x) const;
  /// Row of L_f psi_{r-1} + L_g psi_{r-1} u + alpha_r(psi_{r-1}) >= 0.
  ConstraintRow constraint_row(const Vector& x) const;
  ConstraintRow constraint_row(const PsiEvaluation& eval) const;
  /// Same row with c lowered by |lp_psi_last| * omega_bar.
  ConstraintRow robustified_row(const Vector& x, const RowVector& lp_psi_last,
                                double omega_bar) const;
  Membership membership(const Vector& x) const;

  /// alpha_r o ... o alpha_1 (1): the constraint offset on {b >= xi}.
  double interior_offset() const;

 private:
  ConstraintProvider constraint_;
  ChiTruncation chi_;
  double xi_;
  std::vector<ExtendedClassK> alphas_;
  double delta_margin_;
};

PsiEvaluation eval_psi_chain(const BarrierChain& chain, const Vector& x);
ConstraintRow hocbf_constraint_row(const BarrierChain& chain, const Vector& x);
ConstraintRow robustified_constraint_row(const BarrierChain& chain, const Vector& x,
                                         const RowVector& lp_psi_last, double omega_bar);
Membership membership_C(const BarrierChain& chain, const Vector& x);

/// Jet-evaluable description of a system and constraint, from which the
/// LieTerms are computed exactly by forward differentiation.
struct JetConstraint {
  using JetState = std::vector<Jet2>;
  int state_dim = 0;
  std::function<JetState(const JetState&)> drift;
  std::function<Matrix(const Vector&)> actuation;
  std::function<Jet2(const JetState&)> barrier;
};

/// L_f b and L_f^2 b from the curve (x, f, Df f); L_{g_j} L_f b from
/// g_j' H f + grad b . Df g_j with the Hessian term obtained by polarization.
/// For relative_order 1, lg_top holds L_g b.
LieTerms jet_lie_terms(const JetConstraint& sys, const Vector& x, int relative_order = 2);

ConstraintProvider make_jet_provider(JetConstraint sys, int relative_order = 2);

}  // namespace hocbf
