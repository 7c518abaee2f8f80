#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <utility>

namespace mlab {

// Truncated second-order Taylor arithmetic in up to three variables.
//
// A Dual2 carries f, the gradient df/du^i and the Hessian d2f/du^i du^j
// (packed upper triangle). Every operation propagates all three exactly, so
// first and second derivatives of composed maps come out to rounding error
// with no step size involved.
class Dual2 {
 public:
  static constexpr int kVars = 3;
  static constexpr int kPacked = kVars * (kVars + 1) / 2;

  constexpr Dual2() = default;
  constexpr Dual2(double value) : v_(value) {}  // NOLINT: implicit constants

  // The i-th independent variable evaluated at `value`.
  static constexpr Dual2 variable(int i, double value) {
    Dual2 d(value);
    d.g_[static_cast<std::size_t>(i)] = 1.0;
    return d;
  }

  static constexpr int packed(int i, int j) {
    if (i > j) std::swap(i, j);
    // row-major upper triangle of a kVars x kVars matrix
    return i * kVars - i * (i - 1) / 2 + (j - i);
  }

  constexpr double value() const { return v_; }
  constexpr double d(int i) const { return g_[static_cast<std::size_t>(i)]; }
  constexpr double dd(int i, int j) const {
    return h_[static_cast<std::size_t>(packed(i, j))];
  }
  constexpr void set_d(int i, double x) { g_[static_cast<std::size_t>(i)] = x; }
  constexpr void set_dd(int i, int j, double x) {
    h_[static_cast<std::size_t>(packed(i, j))] = x;
  }

  // Composition with a scalar function given f(v), f'(v), f''(v).
  constexpr Dual2 compose(double f0, double f1, double f2) const {
    Dual2 r(f0);
    for (int i = 0; i < kVars; ++i) r.g_[i] = f1 * g_[i];
    for (int i = 0; i < kVars; ++i)
      for (int j = i; j < kVars; ++j)
        r.h_[packed(i, j)] = f1 * h_[packed(i, j)] + f2 * g_[i] * g_[j];
    return r;
  }

  constexpr Dual2& operator+=(const Dual2& o) {
    v_ += o.v_;
    for (int i = 0; i < kVars; ++i) g_[i] += o.g_[i];
    for (int i = 0; i < kPacked; ++i) h_[i] += o.h_[i];
    return *this;
  }
  constexpr Dual2& operator-=(const Dual2& o) {
    v_ -= o.v_;
    for (int i = 0; i < kVars; ++i) g_[i] -= o.g_[i];
    for (int i = 0; i < kPacked; ++i) h_[i] -= o.h_[i];
    return *this;
  }
  constexpr Dual2& operator*=(const Dual2& o) {
    Dual2 r(v_ * o.v_);
    for (int i = 0; i < kVars; ++i) r.g_[i] = g_[i] * o.v_ + v_ * o.g_[i];
    for (int i = 0; i < kVars; ++i)
      for (int j = i; j < kVars; ++j) {
        const int p = packed(i, j);
        r.h_[p] = h_[p] * o.v_ + v_ * o.h_[p] + g_[i] * o.g_[j] + g_[j] * o.g_[i];
      }
    return *this = r;
  }
  constexpr Dual2& operator/=(const Dual2& o) {
    const double inv = 1.0 / o.v_;
    return *this *= o.compose(inv, -inv * inv, 2.0 * inv * inv * inv);
  }
  constexpr Dual2& operator*=(double s) {
    v_ *= s;
    for (auto& x : g_) x *= s;
    for (auto& x : h_) x *= s;
    return *this;
  }
  constexpr Dual2 operator-() const {
    Dual2 r = *this;
    r *= -1.0;
    return r;
  }

  friend constexpr Dual2 operator+(Dual2 a, const Dual2& b) { return a += b; }
  friend constexpr Dual2 operator-(Dual2 a, const Dual2& b) { return a -= b; }
  friend constexpr Dual2 operator*(Dual2 a, const Dual2& b) { return a *= b; }
  friend constexpr Dual2 operator/(Dual2 a, const Dual2& b) { return a /= b; }
  friend constexpr Dual2 operator+(Dual2 a, double b) { a.v_ += b; return a; }
  friend constexpr Dual2 operator+(double b, Dual2 a) { a.v_ += b; return a; }
  friend constexpr Dual2 operator-(Dual2 a, double b) { a.v_ -= b; return a; }
  friend constexpr Dual2 operator-(double b, const Dual2& a) { return (-a) + b; }
  friend constexpr Dual2 operator*(Dual2 a, double b) { return a *= b; }
  friend constexpr Dual2 operator*(double b, Dual2 a) { return a *= b; }
  friend constexpr Dual2 operator/(Dual2 a, double b) { return a *= 1.0 / b; }
  friend constexpr Dual2 operator/(double b, const Dual2& a) {
    const double inv = 1.0 / a.v_;
    return a.compose(b * inv, -b * inv * inv, 2.0 * b * inv * inv * inv);
  }

 private:
  double v_ = 0.0;
  std::array<double, kVars> g_{};
  std::array<double, kPacked> h_{};
};

// Overloads mirror <cmath> so templated maps can be written once for double
// and Dual2 (call unqualified after `using std::sin;` etc.).
inline Dual2 sin(const Dual2& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.compose(s, c, -s);
}
inline Dual2 cos(const Dual2& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.compose(c, -s, -c);
}
inline Dual2 tan(const Dual2& a) {
  const double t = std::tan(a.value());
  const double sec2 = 1.0 + t * t;
  return a.compose(t, sec2, 2.0 * t * sec2);
}
inline Dual2 exp(const Dual2& a) {
  const double e = std::exp(a.value());
  return a.compose(e, e, e);
}
inline Dual2 log(const Dual2& a) {
  const double x = a.value();
  return a.compose(std::log(x), 1.0 / x, -1.0 / (x * x));
}
inline Dual2 sqrt(const Dual2& a) {
  const double s = std::sqrt(a.value());
  return a.compose(s, 0.5 / s, -0.25 / (s * a.value()));
}
inline Dual2 sinh(const Dual2& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return a.compose(s, c, s);
}
inline Dual2 cosh(const Dual2& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return a.compose(c, s, c);
}
inline Dual2 tanh(const Dual2& a) {
  const double t = std::tanh(a.value());
  const double s2 = 1.0 - t * t;
  return a.compose(t, s2, -2.0 * t * s2);
}
inline Dual2 acos(const Dual2& a) {
  const double x = a.value();
  const double w = 1.0 - x * x;
  const double r = 1.0 / std::sqrt(w);
  return a.compose(std::acos(x), -r, -x * r / w);
}
inline Dual2 acosh(const Dual2& a) {
  const double x = a.value();
  const double w = x * x - 1.0;
  const double r = 1.0 / std::sqrt(w);
  return a.compose(std::acosh(x), r, -x * r / w);
}
inline Dual2 asinh(const Dual2& a) {
  const double x = a.value();
  const double w = x * x + 1.0;
  const double r = 1.0 / std::sqrt(w);
  return a.compose(std::asinh(x), r, -x * r / w);
}
inline Dual2 atan(const Dual2& a) {
  const double x = a.value();
  const double w = 1.0 + x * x;
  return a.compose(std::atan(x), 1.0 / w, -2.0 * x / (w * w));
}
inline Dual2 pow(const Dual2& a, double p) {
  const double x = a.value();
  if (p == 0.0) return Dual2(1.0);
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  return a.compose(std::pow(x, p), p * std::pow(x, p - 1.0),
                   p * (p - 1.0) * std::pow(x, p - 2.0));
}

inline double value_of(double x) { return x; }
inline double value_of(const Dual2& x) { return x.value(); }

}  // namespace mlab
