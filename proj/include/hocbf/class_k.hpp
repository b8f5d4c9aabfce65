#pragma once

#include <functional>
#include <string>

namespace hocbf {

/// Extended class-K function on all of R: strictly increasing, alpha(0) = 0.
///
/// Two kinds are supported: a linear gain alpha(v) = k v, and a custom pair
/// of callables (value, derivative). Custom functions are trusted to satisfy
/// the class-K properties; `looks_class_k` checks them by sampling.
class ExtendedClassK {
 public:
  using Fn = std::function<double(double)>;

  enum class Kind { linear, custom };

  /// Identity, alpha(v) = v.
  ExtendedClassK();

  static ExtendedClassK linear(double gain);
  static ExtendedClassK custom(Fn value, Fn derivative, std::string name = "custom");
  /// alpha(v) = k1 v + k3 v^3 with k1 > 0, k3 >= 0.
  static ExtendedClassK cubic(double k1, double k3);

  Kind kind() const noexcept { return kind_; }
  double gain() const noexcept { return gain_; }
  const std::string& name() const noexcept { return name_; }

  /// alpha(v). Throws InvalidInput on non-finite v.
  double operator()(double v) const;
  /// d alpha / dv at v. Throws InvalidInput on non-finite v.
  double derivative(double v) const;

  /// Sampled check of alpha(0) = 0, strict monotonicity and a positive
  /// derivative on [lo, hi].
  bool looks_class_k(double lo = -10.0, double hi = 10.0, int samples = 1000) const;

 private:
  Kind kind_ = Kind::linear;
  double gain_ = 1.0;
  Fn value_;
  Fn derivative_;
  std::string name_ = "linear";
};

double eval_alpha(const ExtendedClassK& alpha, double v);
double eval_alpha_derivative(const ExtendedClassK& alpha, double v);

/// Parses "linear:<gain>" or "cubic:<k1>:<k3>". Throws InvalidInput.
ExtendedClassK parse_class_k(const std::string& spec);

}  // namespace hocbf
