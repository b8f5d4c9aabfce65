#include "hocbf/class_k.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "hocbf/errors.hpp"

namespace hocbf {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw InvalidInput(std::string(what) + ": non-finite argument");
  }
}

}  // namespace

ExtendedClassK::ExtendedClassK() = default;

ExtendedClassK ExtendedClassK::linear(double gain) {
  if (!(gain > 0.0) || !std::isfinite(gain)) {
    throw InvalidInput("linear class-K gain must be positive and finite");
  }
  ExtendedClassK a;
  a.kind_ = Kind::linear;
  a.gain_ = gain;
  a.name_ = "linear";
  return a;
}

ExtendedClassK ExtendedClassK::custom(Fn value, Fn derivative, std::string name) {
  if (!value || !derivative) {
    throw InvalidInput("custom class-K function needs value and derivative providers");
  }
  ExtendedClassK a;
  a.kind_ = Kind::custom;
  a.value_ = std::move(value);
  a.derivative_ = std::move(derivative);
  a.name_ = std::move(name);
  return a;
}

ExtendedClassK ExtendedClassK::cubic(double k1, double k3) {
  if (!(k1 > 0.0) || !(k3 >= 0.0)) {
    throw InvalidInput("cubic class-K needs k1 > 0 and k3 >= 0");
  }
  return custom([k1, k3](double v) { return k1 * v + k3 * v * v * v; },
                [k1, k3](double v) { return k1 + 3.0 * k3 * v * v; }, "cubic");
}

double ExtendedClassK::operator()(double v) const {
  require_finite(v, "class-K evaluation");
  if (kind_ == Kind::linear) return gain_ * v;
  return value_(v);
}

double ExtendedClassK::derivative(double v) const {
  require_finite(v, "class-K derivative");
  if (kind_ == Kind::linear) return gain_;
  return derivative_(v);
}

bool ExtendedClassK::looks_class_k(double lo, double hi, int samples) const {
  if ((*this)(0.0) != 0.0) return false;
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> dist(lo, hi);
  for (int i = 0; i < samples; ++i) {
    double v1 = dist(rng);
    double v2 = dist(rng);
    if (v1 == v2) continue;
    if (v1 > v2) std::swap(v1, v2);
    if (!((*this)(v1) < (*this)(v2))) return false;
    if (!(derivative(v1) > 0.0)) return false;
  }
  return true;
}

double eval_alpha(const ExtendedClassK& alpha, double v) { return alpha(v); }

double eval_alpha_derivative(const ExtendedClassK& alpha, double v) {
  return alpha.derivative(v);
}

ExtendedClassK parse_class_k(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      double v = std::stod(s, &used);
      if (used != s.size()) throw InvalidInput("");
      return v;
    } catch (const std::exception&) {
      throw InvalidInput("bad number in class-K spec '" + spec + "'");
    }
  };
  if (parts.size() == 2 && parts[0] == "linear") return ExtendedClassK::linear(number(parts[1]));
  if (parts.size() == 3 && parts[0] == "cubic") {
    return ExtendedClassK::cubic(number(parts[1]), number(parts[2]));
  }
  throw InvalidInput("unknown class-K spec '" + spec + "' (expected linear:<k> or cubic:<k1>:<k3>)");
}

}  // namespace hocbf
