#pragma once

// Double-double (compensated) arithmetic: an unevaluated sum hi + lo of two
// doubles with |lo| <= ulp(hi)/2, giving roughly 106 bits of significand.
// Enough of the scalar interface is provided for Eigen's dense
// decompositions (LU, self-adjoint eigensolver) to run on it.

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>

namespace boxlab {

struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  constexpr DoubleDouble() = default;
  constexpr DoubleDouble(double h) : hi(h) {}  // NOLINT(implicit)
  constexpr DoubleDouble(int v) : hi(static_cast<double>(v)) {}  // NOLINT(implicit)
  constexpr DoubleDouble(long v) : hi(static_cast<double>(v)) {}  // NOLINT(implicit)
  constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}

  explicit constexpr operator double() const { return hi + lo; }
};

namespace dd_detail {

inline DoubleDouble quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline DoubleDouble two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline DoubleDouble two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

}  // namespace dd_detail

inline DoubleDouble operator-(const DoubleDouble& a) { return {-a.hi, -a.lo}; }

inline DoubleDouble operator+(const DoubleDouble& a, const DoubleDouble& b) {
  DoubleDouble s = dd_detail::two_sum(a.hi, b.hi);
  DoubleDouble t = dd_detail::two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = dd_detail::quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return dd_detail::quick_two_sum(s.hi, s.lo);
}

inline DoubleDouble operator-(const DoubleDouble& a, const DoubleDouble& b) { return a + (-b); }

inline DoubleDouble operator*(const DoubleDouble& a, const DoubleDouble& b) {
  DoubleDouble p = dd_detail::two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return dd_detail::quick_two_sum(p.hi, p.lo);
}

inline DoubleDouble operator/(const DoubleDouble& a, const DoubleDouble& b) {
  // Long division: q1 + q2 + q3 with two correction steps.
  const double q1 = a.hi / b.hi;
  DoubleDouble r = a - b * DoubleDouble(q1);
  const double q2 = r.hi / b.hi;
  r = r - b * DoubleDouble(q2);
  const double q3 = r.hi / b.hi;
  DoubleDouble q = dd_detail::quick_two_sum(q1, q2);
  return q + DoubleDouble(q3);
}

inline DoubleDouble& operator+=(DoubleDouble& a, const DoubleDouble& b) { return a = a + b; }
inline DoubleDouble& operator-=(DoubleDouble& a, const DoubleDouble& b) { return a = a - b; }
inline DoubleDouble& operator*=(DoubleDouble& a, const DoubleDouble& b) { return a = a * b; }
inline DoubleDouble& operator/=(DoubleDouble& a, const DoubleDouble& b) { return a = a / b; }

inline bool operator==(const DoubleDouble& a, const DoubleDouble& b) { return a.hi == b.hi && a.lo == b.lo; }
inline bool operator!=(const DoubleDouble& a, const DoubleDouble& b) { return !(a == b); }
inline bool operator<(const DoubleDouble& a, const DoubleDouble& b) {
  return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(const DoubleDouble& a, const DoubleDouble& b) { return b < a; }
inline bool operator<=(const DoubleDouble& a, const DoubleDouble& b) { return !(b < a); }
inline bool operator>=(const DoubleDouble& a, const DoubleDouble& b) { return !(a < b); }

inline double to_double(const DoubleDouble& a) { return a.hi + a.lo; }
inline double to_double(double a) { return a; }

inline DoubleDouble abs(const DoubleDouble& a) { return a.hi < 0.0 ? -a : a; }
inline DoubleDouble fabs(const DoubleDouble& a) { return abs(a); }
inline DoubleDouble abs2(const DoubleDouble& a) { return a * a; }
inline DoubleDouble conj(const DoubleDouble& a) { return a; }
inline DoubleDouble real(const DoubleDouble& a) { return a; }
inline DoubleDouble imag(const DoubleDouble&) { return DoubleDouble(0.0); }
inline bool isfinite(const DoubleDouble& a) { return std::isfinite(a.hi); }
inline bool isnan(const DoubleDouble& a) { return std::isnan(a.hi); }
inline bool isinf(const DoubleDouble& a) { return std::isinf(a.hi); }

inline DoubleDouble sqrt(const DoubleDouble& a) {
  if (a.hi <= 0.0) return DoubleDouble(a.hi == 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN());
  // One Newton step on the double approximation doubles the accurate bits.
  const double x = std::sqrt(a.hi);
  const DoubleDouble xx = dd_detail::two_prod(x, x);
  const DoubleDouble corr = (a - xx) / DoubleDouble(2.0 * x);
  return DoubleDouble(x) + corr;
}

inline DoubleDouble hypot(const DoubleDouble& a, const DoubleDouble& b) {
  const DoubleDouble x = abs(a);
  const DoubleDouble y = abs(b);
  const DoubleDouble big = x < y ? y : x;
  const DoubleDouble small = x < y ? x : y;
  if (big.hi == 0.0) return DoubleDouble(0.0);
  const DoubleDouble t = small / big;
  return big * sqrt(DoubleDouble(1.0) + t * t);
}

inline DoubleDouble dd_pi() { return {3.141592653589793116e+00, 1.224646799147353207e-16}; }

namespace dd_detail {

// Taylor series; |x| <= pi/4 keeps 27 terms far below 2^-106.
inline DoubleDouble sin_taylor(const DoubleDouble& x) {
  const DoubleDouble x2 = x * x;
  DoubleDouble term = x;
  DoubleDouble sum = x;
  for (int k = 1; k < 20; ++k) {
    term = -term * x2 / DoubleDouble(static_cast<double>((2 * k) * (2 * k + 1)));
    sum += term;
    if (std::abs(term.hi) < 1e-34 * std::abs(sum.hi)) break;
  }
  return sum;
}

inline DoubleDouble cos_taylor(const DoubleDouble& x) {
  const DoubleDouble x2 = x * x;
  DoubleDouble term(1.0);
  DoubleDouble sum(1.0);
  for (int k = 1; k < 20; ++k) {
    term = -term * x2 / DoubleDouble(static_cast<double>((2 * k - 1) * (2 * k)));
    sum += term;
    if (std::abs(term.hi) < 1e-34) break;
  }
  return sum;
}

}  // namespace dd_detail

/// sin and cos of pi*num/den, computed with exact rational argument reduction
/// so that no rounding of pi*num/den leaks into the result.
inline void sincos_pi_fraction(std::int64_t num, std::int64_t den, DoubleDouble& s, DoubleDouble& c) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  // Reduce to num in [0, 2*den).
  const std::int64_t period = 2 * den;
  num %= period;
  if (num < 0) num += period;
  double sign_s = 1.0;
  if (num >= den) {  // angle in [pi, 2pi): sin flips, cos flips
    num -= den;
    sign_s = -1.0;
  }
  double sign_c = sign_s;
  // angle in [0, pi): reflect to [0, pi/2]
  if (2 * num > den) {
    num = den - num;
    sign_c = -sign_c;
  }
  // angle in [0, pi/2]: use complementary angle above pi/4
  bool swap = false;
  if (4 * num > den) {
    num = den - 2 * num;  // pi/2 - pi*num/den = pi*(den - 2num)/(2den)
    den = 2 * den;
    swap = true;
  }
  const DoubleDouble x = dd_pi() * DoubleDouble(static_cast<double>(num)) / DoubleDouble(static_cast<double>(den));
  DoubleDouble sv = dd_detail::sin_taylor(x);
  DoubleDouble cv = dd_detail::cos_taylor(x);
  if (swap) std::swap(sv, cv);
  s = sign_s < 0 ? -sv : sv;
  c = sign_c < 0 ? -cv : cv;
}

inline std::ostream& operator<<(std::ostream& os, const DoubleDouble& a) { return os << to_double(a); }

/// Scalar-generic sin/cos of pi*num/den.
template <typename Scalar>
Scalar cos_pi_fraction(std::int64_t num, std::int64_t den) {
  if constexpr (std::is_same_v<Scalar, DoubleDouble>) {
    DoubleDouble s, c;
    sincos_pi_fraction(num, den, s, c);
    return c;
  } else {
    DoubleDouble s, c;
    sincos_pi_fraction(num, den, s, c);
    return static_cast<Scalar>(to_double(c));
  }
}

template <typename Scalar>
Scalar sin_pi_fraction(std::int64_t num, std::int64_t den) {
  if constexpr (std::is_same_v<Scalar, DoubleDouble>) {
    DoubleDouble s, c;
    sincos_pi_fraction(num, den, s, c);
    return s;
  } else {
    DoubleDouble s, c;
    sincos_pi_fraction(num, den, s, c);
    return static_cast<Scalar>(to_double(s));
  }
}

}  // namespace boxlab

namespace Eigen {

template <>
struct NumTraits<boxlab::DoubleDouble> : GenericNumTraits<boxlab::DoubleDouble> {
  using Real = boxlab::DoubleDouble;
  using NonInteger = boxlab::DoubleDouble;
  using Nested = boxlab::DoubleDouble;
  using Literal = boxlab::DoubleDouble;

  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 20,
    MulCost = 25
  };

  static inline Real epsilon() { return Real(4.93038065763132e-32); }
  static inline Real dummy_precision() { return Real(1e-28); }
  static inline Real highest() { return Real(std::numeric_limits<double>::max()); }
  static inline Real lowest() { return Real(-std::numeric_limits<double>::max()); }
  static inline int digits10() { return 31; }
  static inline int digits() { return 106; }
  static inline Real infinity() { return Real(std::numeric_limits<double>::infinity()); }
  static inline Real quiet_NaN() { return Real(std::numeric_limits<double>::quiet_NaN()); }
};

}  // namespace Eigen
