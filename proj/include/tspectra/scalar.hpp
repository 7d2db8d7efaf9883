#pragma once

// Scalar layer shared by every module: the two supported real types (native
// double for 53-bit work, mp::Float otherwise), context-aware constructors,
// decimal I/O, and a small complex type that works for both.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>

#include "tspectra/mpfloat.hpp"
#include "tspectra/precision.hpp"

namespace tspectra {

template <class T>
concept RealScalar = std::same_as<T, double> || std::same_as<T, mp::Float>;

namespace num {

template <RealScalar Real>
Real from_int(long v, const PrecisionContext& ctx) {
  if constexpr (std::is_same_v<Real, double>) {
    (void)ctx;
    return static_cast<double>(v);
  } else {
    return mp::Float(v, ctx.bits());
  }
}

template <RealScalar Real>
Real from_double(double v, const PrecisionContext& ctx) {
  if constexpr (std::is_same_v<Real, double>) {
    (void)ctx;
    return v;
  } else {
    return mp::Float(v, ctx.bits());
  }
}

/// Correctly rounded decimal parse; throws std::invalid_argument on malformed input.
template <RealScalar Real>
Real parse(std::string_view text, const PrecisionContext& ctx) {
  if constexpr (std::is_same_v<Real, double>) {
    (void)ctx;
    const std::string s(text);
    if (s.empty()) throw std::invalid_argument("empty numeric literal");
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') {
      throw std::invalid_argument("malformed numeric literal '" + s + "'");
    }
    return v;
  } else {
    return mp::Float::parse(text, ctx.bits());
  }
}

template <RealScalar Real>
Real pi(const PrecisionContext& ctx) {
  if constexpr (std::is_same_v<Real, double>) {
    (void)ctx;
    return 3.14159265358979323846;
  } else {
    return mp::Float::pi(ctx.bits());
  }
}

/// 2^(1-bits), exact.
template <RealScalar Real>
Real epsilon(const PrecisionContext& ctx) {
  if constexpr (std::is_same_v<Real, double>) {
    return std::ldexp(1.0, ctx.eps_exponent());
  } else {
    mp::Float e(1L, ctx.bits());
    return e.scale_pow2(ctx.eps_exponent());
  }
}

inline double to_double(double x) noexcept { return x; }
inline double to_double(const mp::Float& x) noexcept { return x.to_double(); }

inline bool is_zero(double x) noexcept { return x == 0.0; }
inline bool is_zero(const mp::Float& x) noexcept { return x.is_zero(); }

inline double scale_pow2(double x, long e) { return std::ldexp(x, static_cast<int>(e)); }
inline mp::Float scale_pow2(mp::Float x, long e) { return std::move(x.scale_pow2(e)); }

/// Scientific notation with `digits` significant digits.
inline std::string format(double x, int digits) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
  // A double never carries more than 17 significant digits.
  const int prec = std::clamp(digits - 1, 0, 40);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", prec, x);
  return buf;
}
inline std::string format(const mp::Float& x, int digits) { return x.to_string(digits); }

template <RealScalar Real>
std::string format(const Real& x, const PrecisionContext& ctx) {
  return format(x, ctx.output_digits());
}

/// Bring a value to exactly the context precision (no-op for double).
inline double at_precision(double x, const PrecisionContext&) { return x; }
inline mp::Float at_precision(const mp::Float& x, const PrecisionContext& ctx) {
  mp::Float r(static_cast<mpfr_prec_t>(ctx.bits()));
  mpfr_set(r.get(), x.get(), MPFR_RNDN);
  return r;
}

}  // namespace num

/// Complex number over either scalar backend. std::complex is unspecified for
/// non-fundamental types, so the library carries its own.
template <RealScalar Real>
struct Complex {
  Real re{};
  Real im{};

  Complex() = default;
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  explicit Complex(Real r) : re(std::move(r)), im(re * 0) {}

  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Complex& operator*=(const Complex& o) { return *this = *this * o; }
  Complex& operator*=(const Real& s) {
    re *= s;
    im *= s;
    return *this;
  }
  Complex& operator/=(const Real& s) {
    re /= s;
    im /= s;
    return *this;
  }

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator-(const Complex& a) { return Complex(-a.re, -a.im); }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return Complex(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
  }
  friend Complex operator*(Complex a, const Real& s) { return a *= s; }
  friend Complex operator*(const Real& s, Complex a) { return a *= s; }
  friend Complex operator/(Complex a, const Real& s) { return a /= s; }

  /// Smith's algorithm.
  friend Complex operator/(const Complex& a, const Complex& b) {
    using std::abs;
    if (abs(b.re) >= abs(b.im)) {
      const Real r = b.im / b.re;
      const Real d = b.re + b.im * r;
      return Complex((a.re + a.im * r) / d, (a.im - a.re * r) / d);
    }
    const Real r = b.re / b.im;
    const Real d = b.re * r + b.im;
    return Complex((a.re * r + a.im) / d, (a.im * r - a.re) / d);
  }

  friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const Complex& a, const Complex& b) { return !(a == b); }
};

template <RealScalar Real>
Complex<Real> conj(const Complex<Real>& z) {
  return Complex<Real>(z.re, -z.im);
}

template <RealScalar Real>
Real abs(const Complex<Real>& z) {
  using std::hypot;
  return hypot(z.re, z.im);
}

/// |re| + |im|; cheap magnitude surrogate within a factor sqrt(2) of abs.
template <RealScalar Real>
Real abs1(const Complex<Real>& z) {
  using std::abs;
  return abs(z.re) + abs(z.im);
}

template <RealScalar Real>
Real norm(const Complex<Real>& z) {
  return z.re * z.re + z.im * z.im;
}

template <RealScalar Real>
Real arg(const Complex<Real>& z) {
  using std::atan2;
  return atan2(z.im, z.re);
}

/// Principal square root (branch cut on the negative real axis, Re >= 0).
template <RealScalar Real>
Complex<Real> sqrt(const Complex<Real>& z) {
  using std::abs;
  using std::sqrt;
  const Real zero = z.re * 0;
  if (num::is_zero(z.re) && num::is_zero(z.im)) return Complex<Real>(zero, zero);
  const Real m = abs(z);
  if (z.re >= 0.0) {
    const Real t = sqrt((m + z.re) / 2);
    return Complex<Real>(t, z.im / (t * 2));
  }
  Real t = sqrt((m - z.re) / 2);
  const Real re = abs(z.im) / (t * 2);
  if (z.im < 0.0) t = -t;
  return Complex<Real>(re, t);
}

/// cos(theta) + i sin(theta).
template <RealScalar Real>
Complex<Real> cis(const Real& theta) {
  using std::cos;
  using std::sin;
  return Complex<Real>(cos(theta), sin(theta));
}

/// Lexicographic (Re, then Im) order used for every tie-break in the library.
template <RealScalar Real>
bool lex_less(const Complex<Real>& a, const Complex<Real>& b) {
  if (a.re < b.re) return true;
  if (b.re < a.re) return false;
  return a.im < b.im;
}

namespace num {

template <RealScalar Real>
Complex<Real> complex_from(double re, double im, const PrecisionContext& ctx) {
  return Complex<Real>(from_double<Real>(re, ctx), from_double<Real>(im, ctx));
}

template <RealScalar Real>
Complex<Real> complex_zero(const PrecisionContext& ctx) {
  return Complex<Real>(from_int<Real>(0, ctx), from_int<Real>(0, ctx));
}

template <RealScalar Real>
Complex<double> to_double(const Complex<Real>& z) {
  return Complex<double>(to_double(z.re), to_double(z.im));
}

}  // namespace num

}  // namespace tspectra
