#pragma once

// Small dense solves: LU with partial pivoting over real or complex scalars.

#include <cstddef>
#include <string>
#include <vector>

#include "tspectra/errors.hpp"
#include "tspectra/matrix.hpp"
#include "tspectra/precision.hpp"
#include "tspectra/scalar.hpp"

namespace tspectra {

namespace detail {

template <RealScalar Real>
Real magnitude(const Real& x) {
  using std::abs;
  return abs(x);
}
template <RealScalar Real>
Real magnitude(const Complex<Real>& z) {
  return abs(z);
}

template <class T>
struct real_of;
template <>
struct real_of<double> {
  using type = double;
};
template <>
struct real_of<mp::Float> {
  using type = mp::Float;
};
template <RealScalar Real>
struct real_of<Complex<Real>> {
  using type = Real;
};

}  // namespace detail

/// PA = LU with partial pivoting, factored once and reusable for many
/// right-hand sides. T is a RealScalar or Complex<RealScalar>.
template <class T>
class LuFactorization {
 public:
  using Real = typename detail::real_of<T>::type;

  LuFactorization(Matrix<T> a, const PrecisionContext& ctx) : lu_(std::move(a)), perm_(lu_.rows()) {
    if (!lu_.square() || lu_.rows() == 0) {
      throw InputError("LU factorization needs a non-empty square matrix");
    }
    const std::size_t n = lu_.rows();
    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;

    // Row-sum infinity norm of the original matrix.
    Real norm_inf = num::from_int<Real>(0, ctx);
    for (std::size_t i = 0; i < n; ++i) {
      Real s = num::from_int<Real>(0, ctx);
      for (std::size_t j = 0; j < n; ++j) s += detail::magnitude(lu_(i, j));
      if (norm_inf < s) norm_inf = s;
    }
    const Real threshold = num::epsilon<Real>(ctx) * norm_inf;

    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      Real best = detail::magnitude(lu_(k, k));
      for (std::size_t i = k + 1; i < n; ++i) {
        Real m = detail::magnitude(lu_(i, k));
        if (best < m) {
          best = std::move(m);
          p = i;
        }
      }
      if (num::is_zero(best) || best < threshold) {
        throw SingularMatrix("pivot " + std::to_string(k) + " below eps*||A||_inf");
      }
      if (p != k) {
        lu_.swap_rows(p, k);
        std::swap(perm_[p], perm_[k]);
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        if (is_zero(lu_(i, k))) continue;
        T l = lu_(i, k) / lu_(k, k);
        for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= l * lu_(k, j);
        lu_(i, k) = std::move(l);
      }
    }
  }

  std::size_t size() const noexcept { return lu_.rows(); }

  std::vector<T> solve(const std::vector<T>& b) const {
    const std::size_t n = lu_.rows();
    if (b.size() != n) throw InputError("right-hand side has wrong length");
    std::vector<T> x(n);
    for (std::size_t i = 0; i < n; ++i) {
      T s = b[perm_[i]];
      for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
      x[i] = std::move(s);
    }
    for (std::size_t ii = n; ii-- > 0;) {
      T s = x[ii];
      for (std::size_t j = ii + 1; j < n; ++j) s -= lu_(ii, j) * x[j];
      x[ii] = s / lu_(ii, ii);
    }
    return x;
  }

 private:
  static bool is_zero(const T& v) {
    if constexpr (RealScalar<T>) {
      return num::is_zero(v);
    } else {
      return num::is_zero(v.re) && num::is_zero(v.im);
    }
  }

  Matrix<T> lu_;
  std::vector<std::size_t> perm_;
};

/// Solve Ax = b over complex scalars.
template <RealScalar Real>
std::vector<Complex<Real>> lu_solve(const Matrix<Complex<Real>>& a, const std::vector<Complex<Real>>& b,
                                    const PrecisionContext& ctx) {
  if (a.rows() != b.size()) throw InputError("lu_solve: dimension mismatch");
  return LuFactorization<Complex<Real>>(a, ctx).solve(b);
}

/// Solve Ax = b over real scalars.
template <RealScalar Real>
std::vector<Real> real_solve(const Matrix<Real>& a, const std::vector<Real>& b, const PrecisionContext& ctx) {
  if (a.rows() != b.size()) throw InputError("real_solve: dimension mismatch");
  return LuFactorization<Real>(a, ctx).solve(b);
}

}  // namespace tspectra
