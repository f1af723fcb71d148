#pragma once

#include <array>
#include <cmath>
#include <cstdlib>

#include "cosyflat/errors.hpp"

namespace cosyflat {

using Vec3 = std::array<double, 3>;

namespace detail {

// Packed index of the symmetric pair (i,j), i,j in {0,1,2}.
constexpr int pack2(int i, int j) {
  if (i > j) std::swap(i, j);
  return i * (5 - i) / 2 + j;
}

// Packed index of the symmetric triple (i,j,k).
constexpr int pack3(int i, int j, int k) {
  if (i > j) std::swap(i, j);
  if (j > k) std::swap(j, k);
  if (i > j) std::swap(i, j);
  // (0,0,0)=0 (0,0,1)=1 (0,0,2)=2 (0,1,1)=3 (0,1,2)=4 (0,2,2)=5
  // (1,1,1)=6 (1,1,2)=7 (1,2,2)=8 (2,2,2)=9
  if (i == 0) return pack2(j, k);
  if (i == 1) return 6 + (j - 1) + (k - 1);
  return 9;
}

inline constexpr double kDivisionFloor = 1e-300;

}  // namespace detail

/// Truncated Taylor value at a point: the value of a scalar quantity
/// together with all of its partial derivatives through order three in the
/// three chart coordinates.  Second and third derivative blocks are stored
/// in packed symmetric layout; the accessors symmetrize indices.
///
/// `ord` records how many derivative orders are still meaningful.  Taking a
/// partial derivative of a jet loses the top order; arithmetic propagates
/// the minimum.  Entries above `ord` are zero-filled and must not be read.
///
/// Jets are immutable values; every operation is pure.
struct Jet3 {
  double v = 0.0;
  std::array<double, 3> d1{};
  std::array<double, 6> d2{};
  std::array<double, 10> d3{};
  int ord = 3;

  static Jet3 constant(double c) {
    Jet3 r;
    r.v = c;
    return r;
  }

  /// Jet of the coordinate function with the given index, at `coords`.
  static Jet3 variable(int index, const Vec3& coords) {
    if (index < 0 || index > 2) throw DomainError("jet variable index out of range");
    Jet3 r;
    r.v = coords[index];
    r.d1[index] = 1.0;
    return r;
  }

  double d(int i) const { return d1[i]; }
  double d(int i, int j) const { return d2[detail::pack2(i, j)]; }
  double d(int i, int j, int k) const {
    return d3[detail::pack3(i, j, k)];
  }
};

/// Drops a jet one derivative order: the jet of the i-th partial.
inline Jet3 partial(const Jet3& a, int i) {
  Jet3 r;
  r.ord = a.ord - 1;
  r.v = a.d(i);
  for (int j = 0; j < 3; ++j) r.d1[j] = a.d(i, j);
  for (int j = 0; j < 3; ++j)
    for (int k = j; k < 3; ++k)
      r.d2[detail::pack2(j, k)] = a.d(i, j, k);
  return r;
}

inline Jet3 operator+(const Jet3& a, const Jet3& b) {
  Jet3 r;
  r.ord = std::min(a.ord, b.ord);
  r.v = a.v + b.v;
  for (int i = 0; i < 3; ++i) r.d1[i] = a.d1[i] + b.d1[i];
  for (int i = 0; i < 6; ++i) r.d2[i] = a.d2[i] + b.d2[i];
  for (int i = 0; i < 10; ++i) r.d3[i] = a.d3[i] + b.d3[i];
  return r;
}

inline Jet3 operator-(const Jet3& a, const Jet3& b) {
  Jet3 r;
  r.ord = std::min(a.ord, b.ord);
  r.v = a.v - b.v;
  for (int i = 0; i < 3; ++i) r.d1[i] = a.d1[i] - b.d1[i];
  for (int i = 0; i < 6; ++i) r.d2[i] = a.d2[i] - b.d2[i];
  for (int i = 0; i < 10; ++i) r.d3[i] = a.d3[i] - b.d3[i];
  return r;
}

inline Jet3 operator-(const Jet3& a) {
  Jet3 r;
  r.ord = a.ord;
  r.v = -a.v;
  for (int i = 0; i < 3; ++i) r.d1[i] = -a.d1[i];
  for (int i = 0; i < 6; ++i) r.d2[i] = -a.d2[i];
  for (int i = 0; i < 10; ++i) r.d3[i] = -a.d3[i];
  return r;
}

// Leibniz rule through order three.
inline Jet3 operator*(const Jet3& a, const Jet3& b) {
  Jet3 r;
  r.ord = std::min(a.ord, b.ord);
  r.v = a.v * b.v;
  for (int i = 0; i < 3; ++i) r.d1[i] = a.d(i) * b.v + a.v * b.d(i);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      r.d2[detail::pack2(i, j)] =
          a.d(i, j) * b.v + a.d(i) * b.d(j) + a.d(j) * b.d(i) + a.v * b.d(i, j);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      for (int k = j; k < 3; ++k)
        r.d3[detail::pack3(i, j, k)] =
            a.d(i, j, k) * b.v + a.d(i, j) * b.d(k) + a.d(i, k) * b.d(j) +
            a.d(j, k) * b.d(i) + a.d(i) * b.d(j, k) + a.d(j) * b.d(i, k) +
            a.d(k) * b.d(i, j) + a.v * b.d(i, j, k);
  return r;
}

/// Univariate composition f(u) by the chain rule through order three,
/// given the derivatives f0 = f(u.v), f1 = f'(u.v), f2 = f''(u.v),
/// f3 = f'''(u.v).
inline Jet3 compose(const Jet3& u, double f0, double f1, double f2, double f3) {
  Jet3 r;
  r.ord = u.ord;
  r.v = f0;
  for (int i = 0; i < 3; ++i) r.d1[i] = f1 * u.d(i);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      r.d2[detail::pack2(i, j)] =
          f2 * u.d(i) * u.d(j) + f1 * u.d(i, j);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      for (int k = j; k < 3; ++k)
        r.d3[detail::pack3(i, j, k)] =
            f3 * u.d(i) * u.d(j) * u.d(k) +
            f2 * (u.d(i, j) * u.d(k) + u.d(i, k) * u.d(j) + u.d(j, k) * u.d(i)) +
            f1 * u.d(i, j, k);
  return r;
}

inline Jet3 reciprocal(const Jet3& b) {
  if (std::abs(b.v) < detail::kDivisionFloor)
    throw DivisionByZero("jet division by a value below the floor");
  const double iv = 1.0 / b.v;
  return compose(b, iv, -iv * iv, 2.0 * iv * iv * iv, -6.0 * iv * iv * iv * iv);
}

inline Jet3 operator/(const Jet3& a, const Jet3& b) { return a * reciprocal(b); }

inline Jet3 operator+(const Jet3& a, double c) {
  Jet3 r = a;
  r.v += c;
  return r;
}
inline Jet3 operator+(double c, const Jet3& a) { return a + c; }
inline Jet3 operator-(const Jet3& a, double c) { return a + (-c); }
inline Jet3 operator-(double c, const Jet3& a) { return (-a) + c; }

inline Jet3 operator*(const Jet3& a, double c) {
  Jet3 r;
  r.ord = a.ord;
  r.v = a.v * c;
  for (int i = 0; i < 3; ++i) r.d1[i] = a.d1[i] * c;
  for (int i = 0; i < 6; ++i) r.d2[i] = a.d2[i] * c;
  for (int i = 0; i < 10; ++i) r.d3[i] = a.d3[i] * c;
  return r;
}
inline Jet3 operator*(double c, const Jet3& a) { return a * c; }
inline Jet3 operator/(const Jet3& a, double c) {
  if (std::abs(c) < detail::kDivisionFloor)
    throw DivisionByZero("jet division by a value below the floor");
  return a * (1.0 / c);
}
inline Jet3 operator/(double c, const Jet3& a) { return reciprocal(a) * c; }

inline Jet3 exp(const Jet3& a) {
  const double e = std::exp(a.v);
  return compose(a, e, e, e, e);
}

inline Jet3 log(const Jet3& a) {
  if (!(a.v > 0.0)) throw DomainError("log of a non-positive jet value");
  const double iv = 1.0 / a.v;
  return compose(a, std::log(a.v), iv, -iv * iv, 2.0 * iv * iv * iv);
}

inline Jet3 sqrt(const Jet3& a) {
  if (!(a.v > 0.0)) throw DomainError("sqrt of a non-positive jet value");
  const double s = std::sqrt(a.v);
  const double iv = 1.0 / a.v;
  return compose(a, s, 0.5 * s * iv, -0.25 * s * iv * iv, 0.375 * s * iv * iv * iv);
}

inline Jet3 sin(const Jet3& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return compose(a, s, c, -s, -c);
}

inline Jet3 cos(const Jet3& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return compose(a, c, -s, -c, s);
}

/// u^k for a constant exponent.  Zero coefficients short-circuit before the
/// power of u is formed, so integer exponents stay total at u = 0.
inline Jet3 pow_const(const Jet3& u, double k) {
  const bool integral = std::nearbyint(k) == k && std::abs(k) < 1e15;
  if (u.v < 0.0 && !integral)
    throw DomainError("fractional power of a negative jet value");
  const double c1 = k;
  const double c2 = k * (k - 1.0);
  const double c3 = k * (k - 1.0) * (k - 2.0);
  auto term = [&](double coeff, double expo) -> double {
    if (coeff == 0.0) return 0.0;
    if (u.v == 0.0) {
      if (expo > 0.0) return 0.0;
      if (expo == 0.0) return coeff;
      throw DomainError("negative power of a zero jet value");
    }
    return coeff * std::pow(u.v, expo);
  };
  return compose(u, term(1.0, k), term(c1, k - 1.0), term(c2, k - 2.0),
                 term(c3, k - 3.0));
}

}  // namespace cosyflat
