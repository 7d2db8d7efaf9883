#pragma once

// RAII value type over mpfr_t.
//
// Precision travels with each value. Binary operations produce a result at the
// larger of the operand precisions, so a default-constructed Float (an exact
// zero at MPFR_PREC_MIN) adopts the precision of whatever it is combined with.

#include <mpfr.h>

#include <algorithm>
#include <cstdlib>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace tspectra::mp {

class Float {
 public:
  Float() noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_set_zero(v_, 1);
  }

  explicit Float(mpfr_prec_t prec) noexcept {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }

  Float(int value, mpfr_prec_t prec) noexcept : Float(static_cast<long>(value), prec) {}

  Float(long value, mpfr_prec_t prec) noexcept {
    mpfr_init2(v_, prec);
    mpfr_set_si(v_, value, MPFR_RNDN);
  }

  Float(double value, mpfr_prec_t prec) noexcept {
    mpfr_init2(v_, prec);
    mpfr_set_d(v_, value, MPFR_RNDN);
  }

  /// Correctly rounded parse of a decimal literal; the whole string must be consumed.
  static Float parse(std::string_view text, mpfr_prec_t prec) {
    Float r(prec);
    const std::string s(text);
    if (s.empty()) throw std::invalid_argument("empty numeric literal");
    char* end = nullptr;
    mpfr_strtofr(r.v_, s.c_str(), &end, 10, MPFR_RNDN);
    if (end == s.c_str() || *end != '\0') {
      throw std::invalid_argument("malformed numeric literal '" + s + "'");
    }
    return r;
  }

  static Float pi(mpfr_prec_t prec) {
    Float r(prec);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }

  Float(const Float& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }

  Float(Float&& o) noexcept {
    *v_ = *o.v_;
    o.v_->_mpfr_d = nullptr;
  }

  Float& operator=(const Float& o) noexcept {
    if (this == &o) return *this;
    if (!initialized()) {
      mpfr_init2(v_, mpfr_get_prec(o.v_));
    } else if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_)) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
    }
    mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }

  Float& operator=(Float&& o) noexcept {
    if (this != &o) std::swap(*v_, *o.v_);
    return *this;
  }

  ~Float() {
    if (initialized()) mpfr_clear(v_);
  }

  mpfr_prec_t precision() const noexcept { return mpfr_get_prec(v_); }
  mpfr_srcptr get() const noexcept { return v_; }
  mpfr_ptr get() noexcept { return v_; }

  double to_double() const noexcept { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const noexcept { return mpfr_get_si(v_, MPFR_RNDN); }

  bool is_zero() const noexcept { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const noexcept { return mpfr_number_p(v_) != 0; }

  /// Scientific notation with `digits` significant decimal digits, e.g. "-1.25e+00".
  std::string to_string(int digits) const {
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return mpfr_signbit(v_) ? "-inf" : "inf";
    if (digits < 1) digits = 1;
    if (mpfr_zero_p(v_)) {
      std::string z = mpfr_signbit(v_) ? "-0" : "0";
      if (digits > 1) z += "." + std::string(static_cast<std::size_t>(digits - 1), '0');
      return z + "e+00";
    }
    mpfr_exp_t exp10 = 0;
    std::unique_ptr<char, void (*)(char*)> raw(
        mpfr_get_str(nullptr, &exp10, 10, static_cast<std::size_t>(digits), v_, MPFR_RNDN),
        [](char* p) { mpfr_free_str(p); });
    std::string mant(raw.get());
    std::string out;
    if (!mant.empty() && mant.front() == '-') {
      out.push_back('-');
      mant.erase(0, 1);
    }
    out.push_back(mant[0]);
    if (mant.size() > 1) {
      out.push_back('.');
      out.append(mant, 1, std::string::npos);
    }
    const long e = static_cast<long>(exp10) - 1;
    out.push_back('e');
    out.push_back(e < 0 ? '-' : '+');
    std::string es = std::to_string(e < 0 ? -e : e);
    if (es.size() < 2) es.insert(0, "0");
    out += es;
    return out;
  }

  Float operator-() const& {
    Float r(precision());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }
  Float operator-() && {
    mpfr_neg(v_, v_, MPFR_RNDN);
    return std::move(*this);
  }

  Float& operator+=(const Float& o) { return apply(o, mpfr_add); }
  Float& operator-=(const Float& o) { return apply(o, mpfr_sub); }
  Float& operator*=(const Float& o) { return apply(o, mpfr_mul); }
  Float& operator/=(const Float& o) { return apply(o, mpfr_div); }

  Float& operator+=(long o) { widen(64); mpfr_add_si(v_, v_, o, MPFR_RNDN); return *this; }
  Float& operator-=(long o) { widen(64); mpfr_sub_si(v_, v_, o, MPFR_RNDN); return *this; }
  Float& operator*=(long o) { widen(64); mpfr_mul_si(v_, v_, o, MPFR_RNDN); return *this; }
  Float& operator/=(long o) { widen(64); mpfr_div_si(v_, v_, o, MPFR_RNDN); return *this; }
  Float& operator+=(double o) { widen(53); mpfr_add_d(v_, v_, o, MPFR_RNDN); return *this; }
  Float& operator-=(double o) { widen(53); mpfr_sub_d(v_, v_, o, MPFR_RNDN); return *this; }
  Float& operator*=(double o) { widen(53); mpfr_mul_d(v_, v_, o, MPFR_RNDN); return *this; }
  Float& operator/=(double o) { widen(53); mpfr_div_d(v_, v_, o, MPFR_RNDN); return *this; }
  Float& operator+=(int o) { return *this += static_cast<long>(o); }
  Float& operator-=(int o) { return *this -= static_cast<long>(o); }
  Float& operator*=(int o) { return *this *= static_cast<long>(o); }
  Float& operator/=(int o) { return *this /= static_cast<long>(o); }

  /// Exact multiplication by 2^e.
  Float& scale_pow2(long e) {
    mpfr_mul_2si(v_, v_, e, MPFR_RNDN);
    return *this;
  }

  friend int compare(const Float& a, const Float& b) noexcept { return mpfr_cmp(a.v_, b.v_); }
  friend bool operator==(const Float& a, const Float& b) noexcept { return mpfr_equal_p(a.v_, b.v_); }
  friend bool operator!=(const Float& a, const Float& b) noexcept { return !(a == b); }
  friend bool operator<(const Float& a, const Float& b) noexcept { return mpfr_less_p(a.v_, b.v_); }
  friend bool operator>(const Float& a, const Float& b) noexcept { return mpfr_greater_p(a.v_, b.v_); }
  friend bool operator<=(const Float& a, const Float& b) noexcept { return mpfr_lessequal_p(a.v_, b.v_); }
  friend bool operator>=(const Float& a, const Float& b) noexcept { return mpfr_greaterequal_p(a.v_, b.v_); }

  friend bool operator==(const Float& a, double b) noexcept { return mpfr_cmp_d(a.v_, b) == 0; }
  friend bool operator<(const Float& a, double b) noexcept { return mpfr_cmp_d(a.v_, b) < 0; }
  friend bool operator>(const Float& a, double b) noexcept { return mpfr_cmp_d(a.v_, b) > 0; }
  friend bool operator<=(const Float& a, double b) noexcept { return mpfr_cmp_d(a.v_, b) <= 0; }
  friend bool operator>=(const Float& a, double b) noexcept { return mpfr_cmp_d(a.v_, b) >= 0; }

 private:
  bool initialized() const noexcept { return v_->_mpfr_d != nullptr; }

  void widen(mpfr_prec_t p) {
    if (mpfr_get_prec(v_) < p) mpfr_prec_round(v_, p, MPFR_RNDN);
  }

  template <class Op>
  Float& apply(const Float& o, Op op) {
    widen(mpfr_get_prec(o.v_));
    op(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }

  mpfr_t v_;
};

// Binary operators reuse an rvalue operand's storage when it is wide enough.
#define TSPECTRA_MP_BINARY(OP, FN)                                                   \
  inline Float operator OP(const Float& a, const Float& b) {                         \
    Float r(std::max(a.precision(), b.precision()));                                 \
    FN(r.get(), a.get(), b.get(), MPFR_RNDN);                                        \
    return r;                                                                        \
  }                                                                                  \
  inline Float operator OP(Float&& a, const Float& b) {                              \
    if (a.precision() < b.precision()) return static_cast<const Float&>(a) OP b;     \
    FN(a.get(), a.get(), b.get(), MPFR_RNDN);                                        \
    return std::move(a);                                                             \
  }                                                                                  \
  inline Float operator OP(const Float& a, Float&& b) {                              \
    if (b.precision() < a.precision()) return a OP static_cast<const Float&>(b);     \
    FN(b.get(), a.get(), b.get(), MPFR_RNDN);                                        \
    return std::move(b);                                                             \
  }                                                                                  \
  inline Float operator OP(Float&& a, Float&& b) {                                   \
    return std::move(a) OP static_cast<const Float&>(b);                             \
  }                                                                                  \
  inline Float operator OP(Float a, long b) { return a OP## = b; }                   \
  inline Float operator OP(Float a, int b) { return a OP## = static_cast<long>(b); } \
  inline Float operator OP(Float a, double b) { return a OP## = b; }

TSPECTRA_MP_BINARY(+, mpfr_add)
TSPECTRA_MP_BINARY(-, mpfr_sub)
TSPECTRA_MP_BINARY(*, mpfr_mul)
TSPECTRA_MP_BINARY(/, mpfr_div)

#undef TSPECTRA_MP_BINARY

inline Float operator+(long a, Float b) { return b += a; }
inline Float operator+(int a, Float b) { return b += static_cast<long>(a); }
inline Float operator+(double a, Float b) { return b += a; }
inline Float operator*(long a, Float b) { return b *= a; }
inline Float operator*(int a, Float b) { return b *= static_cast<long>(a); }
inline Float operator*(double a, Float b) { return b *= a; }
inline Float operator-(long a, Float b) { return -(b -= a); }
inline Float operator-(int a, Float b) { return -(b -= static_cast<long>(a)); }
inline Float operator-(double a, Float b) { return -(b -= a); }
inline Float operator/(long a, const Float& b) {
  Float r(std::max<mpfr_prec_t>(b.precision(), 64));
  mpfr_si_div(r.get(), a, b.get(), MPFR_RNDN);
  return r;
}
inline Float operator/(int a, const Float& b) { return static_cast<long>(a) / b; }
inline Float operator/(double a, const Float& b) {
  Float r(std::max<mpfr_prec_t>(b.precision(), 53));
  mpfr_d_div(r.get(), a, b.get(), MPFR_RNDN);
  return r;
}

namespace detail {
template <class Fn>
Float unary(const Float& x, Fn fn) {
  Float r(x.precision());
  fn(r.get(), x.get(), MPFR_RNDN);
  return r;
}
}  // namespace detail

inline Float sqrt(const Float& x) { return detail::unary(x, mpfr_sqrt); }
inline Float abs(const Float& x) { return detail::unary(x, mpfr_abs); }
inline Float fabs(const Float& x) { return detail::unary(x, mpfr_abs); }
inline Float cos(const Float& x) { return detail::unary(x, mpfr_cos); }
inline Float sin(const Float& x) { return detail::unary(x, mpfr_sin); }
inline Float exp(const Float& x) { return detail::unary(x, mpfr_exp); }
inline Float log(const Float& x) { return detail::unary(x, mpfr_log); }
inline Float atan(const Float& x) { return detail::unary(x, mpfr_atan); }

inline Float floor(const Float& x) {
  Float r(x.precision());
  mpfr_floor(r.get(), x.get());
  return r;
}

/// Round half away from zero, like std::round.
inline Float round(const Float& x) {
  Float r(x.precision());
  mpfr_round(r.get(), x.get());
  return r;
}

inline Float atan2(const Float& y, const Float& x) {
  Float r(std::max(y.precision(), x.precision()));
  mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
  return r;
}

inline Float hypot(const Float& x, const Float& y) {
  Float r(std::max(x.precision(), y.precision()));
  mpfr_hypot(r.get(), x.get(), y.get(), MPFR_RNDN);
  return r;
}

inline Float pow(const Float& x, long e) {
  Float r(x.precision());
  mpfr_pow_si(r.get(), x.get(), e, MPFR_RNDN);
  return r;
}

inline Float ldexp(Float x, long e) { return x.scale_pow2(e); }

inline bool isfinite(const Float& x) { return x.is_finite(); }
inline bool signbit(const Float& x) { return mpfr_signbit(x.get()) != 0; }

}  // namespace tspectra::mp
