#include "hocbf/verifier.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "hocbf/errors.hpp"
#include "hocbf/so3.hpp"

namespace hocbf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double radical_inverse(std::uint64_t index, std::uint64_t base) {
  double inv_base = 1.0 / static_cast<double>(base);
  double factor = inv_base;
  double out = 0.0;
  while (index > 0) {
    out += static_cast<double>(index % base) * factor;
    index /= base;
    factor *= inv_base;
  }
  return out;
}

std::vector<std::uint64_t> first_primes(std::size_t n) {
  std::vector<std::uint64_t> primes;
  for (std::uint64_t c = 2; primes.size() < n; ++c) {
    bool prime = true;
    for (std::uint64_t p : primes) {
      if (p * p > c) break;
      if (c % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(c);
  }
  return primes;
}

CertificateReport empty_report() {
  CertificateReport r;
  r.min_slack = kInf;
  return r;
}

void record(CertificateReport& report, const Vector& x, const char* quantity, double slack,
            double value, bool violated) {
  report.min_slack = std::min(report.min_slack, slack);
  if (violated) report.violations.push_back({x, quantity, value});
}

}  // namespace

void SamplingBox::validate() const {
  if (lower.size() != upper.size()) throw DimensionMismatch("box bounds differ in size");
  if (!lower.allFinite() || !upper.allFinite()) throw InvalidInput("box bounds must be finite");
  if ((lower.array() > upper.array()).any()) throw InvalidInput("box lower bound exceeds upper");
  if (count < 0) throw InvalidInput("sample count must be non-negative");
}

Sampler parse_sampler(const std::string& name) {
  if (name == "uniform") return Sampler::uniform;
  if (name == "halton") return Sampler::halton;
  throw InvalidInput("unknown sampler '" + name + "'");
}

std::vector<Vector> draw_samples(const SamplingBox& box) {
  box.validate();
  const Eigen::Index dim = box.lower.size();
  const Vector width = box.upper - box.lower;
  std::mt19937_64 rng(box.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<std::uint64_t> primes;
  Vector shift;
  if (box.sampler == Sampler::halton) {
    primes = first_primes(static_cast<std::size_t>(dim));
    shift.resize(dim);
    for (Eigen::Index j = 0; j < dim; ++j) shift[j] = unit(rng);
  }

  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(box.count));
  Vector point(dim);
  const long max_draws = box.domain ? 1000 * box.count : box.count;
  for (long k = 0; k < max_draws && static_cast<long>(out.size()) < box.count; ++k) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      double w;
      if (box.sampler == Sampler::halton) {
        w = radical_inverse(static_cast<std::uint64_t>(k) + 1, primes[j]) + shift[j];
        w -= std::floor(w);
      } else {
        w = unit(rng);
      }
      point[j] = box.lower[j] + w * width[j];
    }
    Vector x = box.lift ? box.lift(point) : point;
    if (box.domain && !box.domain(x)) continue;
    out.push_back(std::move(x));
  }
  if (static_cast<long>(out.size()) < box.count) {
    throw InvalidInput("sampling domain rejects almost every box point");
  }
  return out;
}

void CertificateReport::merge(const CertificateReport& other) {
  checked += other.checked;
  violations.insert(violations.end(), other.violations.begin(), other.violations.end());
  min_slack = std::min(min_slack, other.min_slack);
}

CertificateReport check_hocbf_condition(const BarrierChain& chain,
                                        const std::vector<Vector>& states) {
  CertificateReport report = empty_report();
  for (const Vector& x : states) {
    const ConstraintRow row = chain.constraint_row(x);
    ++report.checked;
    if (row.a.norm() < kSingularRowNorm) record(report, x, "c", row.c, row.c, row.c < 0.0);
  }
  return report;
}

CertificateReport check_hocbf_condition(const BarrierChain& chain, const SamplingBox& box) {
  return check_hocbf_condition(chain, draw_samples(box));
}

CertificateReport check_least_relative_degree(const ConstraintProvider& provider,
                                              const SystemModel& model,
                                              const std::vector<Vector>& states,
                                              double fd_step) {
  if (!(fd_step > 0.0)) throw InvalidInput("finite-difference step must be positive");
  CertificateReport report = empty_report();
  for (const Vector& x : states) {
    ++report.checked;
    if (provider.relative_order < 2) continue;
    const Matrix g = model.actuation(x);
    if (g.rows() != x.size()) throw DimensionMismatch("actuation rows differ from state size");
    RowVector lg_b(g.cols());
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      const Vector step = fd_step * g.col(j);
      lg_b[j] = (provider.eval_b(x + step) - provider.eval_b(x - step)) / (2.0 * fd_step);
    }
    const double n = lg_b.norm();
    record(report, x, "|L_g b|", kRelativeDegreeTol - n, n, n > kRelativeDegreeTol);
  }
  return report;
}

CertificateReport check_least_relative_degree(const ConstraintProvider& provider,
                                              const SystemModel& model, const SamplingBox& box,
                                              double fd_step) {
  return check_least_relative_degree(provider, model, draw_samples(box), fd_step);
}

CertificateReport check_containment(const StateFunction& inner_margin, const StateFunction& outer_b,
                                    double xi, const std::vector<Vector>& states) {
  CertificateReport report = empty_report();
  for (const Vector& x : states) {
    ++report.checked;
    if (inner_margin(x) < 0.0) continue;
    const double b = outer_b(x);
    record(report, x, "b", b - xi, b, b < xi);
  }
  return report;
}

CertificateReport check_containment(const StateFunction& inner_margin, const StateFunction& outer_b,
                                    double xi, const SamplingBox& box) {
  return check_containment(inner_margin, outer_b, xi, draw_samples(box));
}

StateFunction singular_set_indicator(const ConstraintProvider& provider) {
  return [provider](const Vector& x) {
    return provider.lie_terms(x).lg_top.norm() < kSingularRowNorm ? 1.0 : -1.0;
  };
}

SamplingBox double_integrator_box(double radius, long count, std::uint64_t seed, Sampler sampler) {
  SamplingBox box;
  box.lower = Vector(4);
  box.upper = Vector(4);
  box.lower << -1.5 * radius, -1.5 * radius, -2.0, -2.0;
  box.upper << 1.5 * radius, 1.5 * radius, 2.0, 2.0;
  box.count = count;
  box.seed = seed;
  box.sampler = sampler;
  return box;
}

SamplingBox attitude_box(const AttitudeParams& params, long count, std::uint64_t seed,
                         Sampler sampler) {
  params.validate();
  SamplingBox box;
  const double cells = static_cast<double>(params.cell_centers.size());
  box.lower = Vector(7);
  box.upper = Vector(7);
  box.lower << 0.0, -0.35, -0.35, -0.35, -1.0, -1.0, -1.0;
  box.upper << cells, 0.35, 0.35, 0.35, 1.0, 1.0, 1.0;
  box.count = count;
  box.seed = seed;
  box.sampler = sampler;
  const std::vector<Eigen::Matrix3d> centers = params.cell_centers;
  box.lift = [centers](const Vector& p) {
    const auto last = static_cast<long>(centers.size()) - 1;
    const long i = std::min(static_cast<long>(std::floor(p[0])), last);
    const Eigen::Vector3d phi = p.segment<3>(1);
    const double angle = phi.norm();
    const Eigen::Matrix3d turn =
        angle > 0.0 ? rodrigues_exp(phi / angle, angle) : Eigen::Matrix3d::Identity();
    return attitude_state(turn * centers[static_cast<std::size_t>(i)], p.tail<3>());
  };
  box.domain = [params](const Vector& x) {
    return cell_barrier(rotation_part(x), params) > -0.5 * params.delta;
  };
  return box;
}

}  // namespace hocbf
