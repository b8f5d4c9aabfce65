#pragma once

#include <cmath>

namespace hocbf {

/// Second-order forward-mode jet along a curve s -> x(s):
/// (value, d/ds, d^2/ds^2). Used to obtain L_f b and L_f^2 b by pushing the
/// state curve x(t) with x' = f(x), x'' = Df f through the barrier.
struct Jet2 {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;

  constexpr Jet2() = default;
  constexpr Jet2(double v) : value(v) {}  // NOLINT: implicit constant lift
  constexpr Jet2(double v, double first, double second) : value(v), d1(first), d2(second) {}

  static constexpr Jet2 variable(double v, double first = 1.0, double second = 0.0) {
    return {v, first, second};
  }

  Jet2& operator+=(const Jet2& o) {
    value += o.value;
    d1 += o.d1;
    d2 += o.d2;
    return *this;
  }
  Jet2& operator-=(const Jet2& o) {
    value -= o.value;
    d1 -= o.d1;
    d2 -= o.d2;
    return *this;
  }
  Jet2& operator*=(const Jet2& o) {
    *this = Jet2{value * o.value, d1 * o.value + value * o.d1,
                 d2 * o.value + 2.0 * d1 * o.d1 + value * o.d2};
    return *this;
  }
};

inline Jet2 operator-(const Jet2& a) { return {-a.value, -a.d1, -a.d2}; }
inline Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
inline Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
inline Jet2 operator*(Jet2 a, const Jet2& b) { return a *= b; }

/// Applies a scalar function with known derivatives: (phi, phi', phi'').
inline Jet2 chain(const Jet2& a, double f, double df, double d2f) {
  return {f, df * a.d1, d2f * a.d1 * a.d1 + df * a.d2};
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) {
  const double inv = 1.0 / b.value;
  const Jet2 recip = chain(b, inv, -inv * inv, 2.0 * inv * inv * inv);
  return a * recip;
}

inline Jet2 sin(const Jet2& a) {
  const double s = std::sin(a.value), c = std::cos(a.value);
  return chain(a, s, c, -s);
}
inline Jet2 cos(const Jet2& a) {
  const double s = std::sin(a.value), c = std::cos(a.value);
  return chain(a, c, -s, -c);
}
inline Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.value);
  return chain(a, e, e, e);
}
inline Jet2 tanh(const Jet2& a) {
  const double t = std::tanh(a.value);
  const double dt = 1.0 - t * t;
  return chain(a, t, dt, -2.0 * t * dt);
}

}  // namespace hocbf
