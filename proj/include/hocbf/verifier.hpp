#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hocbf/barrier_chain.hpp"
#include "hocbf/systems.hpp"

namespace hocbf {

enum class Sampler { uniform, halton };

/// Samples drawn from [lower, upper]. An optional lift maps each box point to
/// a state, and an optional domain predicate discards states outside D.
struct SamplingBox {
  Vector lower;
  Vector upper;
  long count = 0;
  std::uint64_t seed = 1;
  Sampler sampler = Sampler::uniform;
  std::function<Vector(const Vector&)> lift;
  std::function<bool(const Vector&)> domain;

  /// Throws InvalidInput unless lower <= upper component-wise, both finite
  /// and equally sized, and count >= 0.
  void validate() const;
};

Sampler parse_sampler(const std::string& name);

/// `count` states: box points mapped through `lift`, keeping those inside
/// `domain` and drawing further points until `count` are kept. Throws
/// InvalidInput if fewer than one in 1000 draws is accepted. Deterministic in
/// the seed.
std::vector<Vector> draw_samples(const SamplingBox& box);

struct Violation {
  Vector state;
  std::string quantity;
  double value = 0.0;
};

struct CertificateReport {
  long checked = 0;
  std::vector<Violation> violations;
  /// Smallest slack over the samples the check applies to; +inf if none.
  /// Negative exactly when violations were found.
  double min_slack = 0.0;

  bool passed() const noexcept { return violations.empty(); }
  /// Appends another report over disjoint samples.
  void merge(const CertificateReport& other);
};

/// |a| below this counts as a = 0.
inline constexpr double kSingularRowNorm = 1e-8;
inline constexpr double kRelativeDegreeTol = 1e-6;

/// For U = R^m the supremum over u of a u + c is +inf unless a = 0, so a
/// state violates the condition iff |a| < 1e-8 and c < 0. min_slack is the
/// least c over states with |a| < 1e-8.
CertificateReport check_hocbf_condition(const BarrierChain& chain, const SamplingBox& box);
CertificateReport check_hocbf_condition(const BarrierChain& chain,
                                        const std::vector<Vector>& states);

/// Relative order 2: L_g b by central differences of b along each actuation
/// column; a violation where |L_g b| > 1e-6. Relative order 1 is vacuous.
CertificateReport check_least_relative_degree(const ConstraintProvider& provider,
                                              const SystemModel& model, const SamplingBox& box,
                                              double fd_step = 1e-6);
CertificateReport check_least_relative_degree(const ConstraintProvider& provider,
                                              const SystemModel& model,
                                              const std::vector<Vector>& states,
                                              double fd_step = 1e-6);

using StateFunction = std::function<double(const Vector&)>;

/// Violations where inner_margin >= 0 but outer_b < xi; slack is
/// outer_b - xi over states with inner_margin >= 0.
CertificateReport check_containment(const StateFunction& inner_margin, const StateFunction& outer_b,
                                    double xi, const SamplingBox& box);
CertificateReport check_containment(const StateFunction& inner_margin, const StateFunction& outer_b,
                                    double xi, const std::vector<Vector>& states);

/// +1 where |L_g L_f^{r-1} b| < 1e-8 (the singular set E), -1 elsewhere.
StateFunction singular_set_indicator(const ConstraintProvider& provider);

/// p in [-1.5 d, 1.5 d]^2, v in [-2, 2]^2.
SamplingBox double_integrator_box(double radius, long count, std::uint64_t seed,
                                  Sampler sampler = Sampler::halton);

/// Box coordinates (cell selector, rotation vector, omega) lifted to
/// exp(phi) R_i with |phi_j| <= 0.35 and omega in [-1, 1]^3, restricted to
/// the domain b > -delta / 2.
SamplingBox attitude_box(const AttitudeParams& params, long count, std::uint64_t seed,
                         Sampler sampler = Sampler::halton);

}  // namespace hocbf
