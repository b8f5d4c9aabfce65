#include "hocbf/barrier_chain.hpp"

#include <cmath>
#include <string>

#include "hocbf/errors.hpp"

namespace hocbf {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw InvalidInput(std::string(what) + " is not finite");
}

void require_finite(const RowVector& v, const char* what) {
  if (!v.allFinite()) throw InvalidInput(std::string(what) + " is not finite");
}

JetConstraint::JetState curve(const Vector& x, const Vector& d1, const Vector& d2) {
  JetConstraint::JetState out(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = Jet2(x[i], d1[i], d2[i]);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// chi

ChiTruncation ChiTruncation::cubic() { return ChiTruncation{}; }

ChiTruncation ChiTruncation::identity() {
  ChiTruncation chi;
  chi.kind_ = Kind::identity;
  chi.truncating_ = false;
  return chi;
}

ChiTruncation ChiTruncation::custom(Fn fn, bool truncating) {
  if (!fn) throw InvalidInput("custom chi needs an evaluator");
  ChiTruncation chi;
  chi.kind_ = Kind::custom;
  chi.truncating_ = truncating;
  chi.fn_ = std::move(fn);
  return chi;
}

ScalarJet ChiTruncation::operator()(double tau) const {
  require_finite(tau, "chi argument");
  switch (kind_) {
    case Kind::cubic: {
      if (tau >= 1.0) return {1.0, 0.0, 0.0};
      const double d = tau - 1.0;
      return {d * d * d + 1.0, 3.0 * d * d, 6.0 * d};
    }
    case Kind::identity:
      return {tau, 1.0, 0.0};
    case Kind::custom:
      break;
  }
  return fn_(tau);
}

ScalarJet eval_chi(const ChiTruncation& chi, double tau) { return chi(tau); }

// ---------------------------------------------------------------------------
// chain

BarrierChain::BarrierChain(ConstraintProvider constraint, ChiTruncation chi, double xi,
                           std::vector<ExtendedClassK> alphas, double delta_margin)
    : constraint_(std::move(constraint)),
      chi_(std::move(chi)),
      xi_(xi),
      alphas_(std::move(alphas)),
      delta_margin_(delta_margin) {
  if (!constraint_.eval_b || !constraint_.lie_terms) {
    throw InvalidInput("constraint provider is incomplete");
  }
  if (constraint_.relative_order != 1 && constraint_.relative_order != 2) {
    throw InvalidInput("only relative order 1 and 2 are supported");
  }
  if (!(xi_ > 0.0) || !std::isfinite(xi_)) throw InvalidInput("xi must be positive");
  if (static_cast<int>(alphas_.size()) != constraint_.relative_order) {
    throw DimensionMismatch("need one class-K function per order of the chain");
  }
}

PsiEvaluation BarrierChain::evaluate(const Vector& x) const {
  const double b = constraint_.eval_b(x);
  require_finite(b, "b(x)");
  const LieTerms lie = constraint_.lie_terms(x);
  require_finite(lie.lf_b, "L_f b");
  require_finite(lie.lf2_b, "L_f^2 b");
  require_finite(lie.lg_top, "L_g L_f^{r-1} b");

  const ScalarJet chi = chi_(b / xi_);
  const double h = chi.value;
  const double lf_h = chi.d1 * lie.lf_b / xi_;

  PsiEvaluation out;
  out.b = b;
  out.psi.resize(order());
  out.psi[0] = h;
  out.lg_psi_last = (chi.d1 / xi_) * lie.lg_top;
  if (order() == 1) {
    out.lf_psi_last = lf_h;
  } else {
    out.psi[1] = lf_h + alphas_[0](h);
    out.lf_psi_last = (chi.d2 * lie.lf_b * lie.lf_b / xi_ + chi.d1 * lie.lf2_b) / xi_ +
                      alphas_[0].derivative(h) * lf_h;
  }
  return out;
}

ConstraintRow BarrierChain::constraint_row(const PsiEvaluation& eval) const {
  const double last = eval.psi[order() - 1];
  return {eval.lg_psi_last, eval.lf_psi_last + alphas_.back()(last)};
}

ConstraintRow BarrierChain::constraint_row(const Vector& x) const {
  return constraint_row(evaluate(x));
}

ConstraintRow BarrierChain::robustified_row(const Vector& x, const RowVector& lp_psi_last,
                                            double omega_bar) const {
  if (!(omega_bar >= 0.0) || !std::isfinite(omega_bar)) {
    throw InvalidInput("disturbance bound must be non-negative and finite");
  }
  ConstraintRow row = constraint_row(x);
  row.c -= lp_psi_last.norm() * omega_bar;
  return row;
}

Membership BarrierChain::membership(const Vector& x) const {
  Membership m;
  m.margins = evaluate(x).psi;
  m.inside = (m.margins.array() >= 0.0).all();
  return m;
}

double BarrierChain::interior_offset() const {
  double v = 1.0;
  for (const auto& a : alphas_) v = a(v);
  return v;
}

PsiEvaluation eval_psi_chain(const BarrierChain& chain, const Vector& x) {
  return chain.evaluate(x);
}

ConstraintRow hocbf_constraint_row(const BarrierChain& chain, const Vector& x) {
  return chain.constraint_row(x);
}

ConstraintRow robustified_constraint_row(const BarrierChain& chain, const Vector& x,
                                         const RowVector& lp_psi_last, double omega_bar) {
  return chain.robustified_row(x, lp_psi_last, omega_bar);
}

Membership membership_C(const BarrierChain& chain, const Vector& x) {
  return chain.membership(x);
}

// ---------------------------------------------------------------------------
// forward differentiation

LieTerms jet_lie_terms(const JetConstraint& sys, const Vector& x, int relative_order) {
  const Eigen::Index n = x.size();
  if (n != sys.state_dim) throw DimensionMismatch("state dimension mismatch in jet_lie_terms");
  const Vector zero = Vector::Zero(n);

  // f(x) and Df f from one jet pass through the drift along f.
  Vector f(n);
  {
    const auto fx = sys.drift(curve(x, zero, zero));
    for (Eigen::Index i = 0; i < n; ++i) f[i] = fx[i].value;
  }
  auto drift_along = [&](const Vector& dir) {
    const auto out = sys.drift(curve(x, dir, zero));
    Vector d(n);
    for (Eigen::Index i = 0; i < n; ++i) d[i] = out[i].d1;
    return d;
  };
  const Vector f_dot = drift_along(f);

  LieTerms lie;
  const Jet2 along_flow = sys.barrier(curve(x, f, f_dot));
  lie.lf_b = along_flow.d1;
  lie.lf2_b = along_flow.d2;

  const Matrix g = sys.actuation(x);
  if (g.rows() != n) throw DimensionMismatch("actuation rows must equal state dimension");
  lie.lg_top.resize(g.cols());
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    const Vector gj = g.col(j);
    if (relative_order == 1) {
      lie.lg_top[j] = sys.barrier(curve(x, gj, zero)).d1;
      continue;
    }
    // g' H f = (Q(f + g) - Q(f - g)) / 4 with Q(v) = v' H v.
    const double q_plus = sys.barrier(curve(x, f + gj, zero)).d2;
    const double q_minus = sys.barrier(curve(x, f - gj, zero)).d2;
    const double grad_dot = sys.barrier(curve(x, drift_along(gj), zero)).d1;
    lie.lg_top[j] = 0.25 * (q_plus - q_minus) + grad_dot;
  }
  return lie;
}

ConstraintProvider make_jet_provider(JetConstraint sys, int relative_order) {
  ConstraintProvider p;
  p.relative_order = relative_order;
  p.eval_b = [sys](const Vector& x) {
    JetConstraint::JetState s(static_cast<std::size_t>(x.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i) s[i] = Jet2(x[i]);
    return sys.barrier(s).value;
  };
  p.lie_terms = [sys, relative_order](const Vector& x) {
    return jet_lie_terms(sys, x, relative_order);
  };
  return p;
}

}  // namespace hocbf
