#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "tspectra/tspectra.hpp"

namespace tspectra::testing {

using MP = mp::Float;

inline double d(const MP& x) { return x.to_double(); }
inline double d(double x) { return x; }

template <RealScalar Real>
Complex<Real> cplx(double re, double im, const PrecisionContext& ctx) {
  return num::complex_from<Real>(re, im, ctx);
}

/// max_i |a_i - b_i|, in the working precision.
template <RealScalar Real>
Real max_diff(const std::vector<Complex<Real>>& a, const std::vector<Complex<Real>>& b, const PrecisionContext& ctx) {
  Real m = num::from_int<Real>(0, ctx);
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    Real e = abs(a[i] - b[i]);
    if (m < e) m = e;
  }
  return m;
}

/// Symmetric Hausdorff distance between two finite point sets; equal to the
/// multiset matching error when the points are well separated.
template <RealScalar Real>
Real set_distance(const std::vector<Complex<Real>>& a, const std::vector<Complex<Real>>& b,
                  const PrecisionContext& ctx) {
  auto one_way = [&ctx](const auto& x, const auto& y) {
    Real worst = num::from_int<Real>(0, ctx);
    for (const auto& p : x) {
      Real best = abs(p - y.front());
      for (const auto& q : y) {
        Real e = abs(p - q);
        if (e < best) best = e;
      }
      if (worst < best) worst = best;
    }
    return worst;
  };
  Real ab = one_way(a, b);
  Real ba = one_way(b, a);
  return ab < ba ? ba : ab;
}

template <RealScalar Real>
Real inf_norm(const Matrix<Complex<Real>>& a, const PrecisionContext& ctx) {
  Real m = num::from_int<Real>(0, ctx);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Real s = num::from_int<Real>(0, ctx);
    for (std::size_t j = 0; j < a.cols(); ++j) s += abs(a(i, j));
    if (m < s) m = s;
  }
  return m;
}

/// Spectral function of the tridiagonal example symbol -e^{it} + 2 + (-2+i)e^{-it}:
/// g(t) = 2 + 2 w cos t with w = -sqrt(2 - i) (principal root), written out
/// component-wise so it does not share code with the library's complex sqrt.
template <RealScalar Real>
Complex<Real> example1_g(const Real& theta, const PrecisionContext& ctx) {
  using std::cos;
  using std::sqrt;
  const Real five = num::from_int<Real>(5, ctx);
  const Real two = num::from_int<Real>(2, ctx);
  const Real r = sqrt(five);
  const Real wre = -sqrt((r + two) / 2);
  const Real wim = sqrt((r - two) / 2);
  const Real c = cos(theta);
  return Complex<Real>(two + wre * c * 2, wim * c * 2);
}

template <RealScalar Real>
Matrix<Complex<Real>> tridiagonal(std::size_t n, const Complex<Real>& a0, const Complex<Real>& a1,
                                  const Complex<Real>& am1, const PrecisionContext& ctx) {
  typename LaurentSymbol<Real>::Coefficients c;
  c.emplace(0, a0);
  c.emplace(1, a1);
  c.emplace(-1, am1);
  return build_toeplitz(LaurentSymbol<Real>(std::move(c)), n, ctx);
}

/// a0 + 2 sqrt(a1 a_{-1}) cos(j pi / (n+1)), j = 1..n. The sign of the root is
/// irrelevant for the multiset.
template <RealScalar Real>
std::vector<Complex<Real>> tridiagonal_oracle(std::size_t n, const Complex<Real>& a0, const Complex<Real>& a1,
                                              const Complex<Real>& am1, const PrecisionContext& ctx) {
  using std::cos;
  const Complex<Real> r = sqrt(a1 * am1);
  std::vector<Complex<Real>> out;
  for (std::size_t j = 1; j <= n; ++j) {
    const Real c = cos(num::pi<Real>(ctx) * static_cast<long>(j) / static_cast<long>(n + 1));
    out.push_back(a0 + r * (c * 2));
  }
  return out;
}

// a_k(theta) for the synthetic source below.
template <RealScalar Real>
Complex<Real> poly_coeff(std::size_t k, const Real& theta, const PrecisionContext& ctx) {
  using std::cos;
  using std::sin;
  const Real kk = num::from_int<Real>(static_cast<long>(k) + 1, ctx);
  return Complex<Real>(cos(kk * theta) * kk, sin(theta) - num::from_int<Real>(static_cast<long>(k), ctx));
}

// Returns sum_{k<=deg} a_k(theta_{j,n}) h^k: data that is exactly a polynomial in h.
template <RealScalar Real>
EigSource<Real> polynomial_source(std::size_t deg) {
  return [deg](std::size_t n, const PrecisionContext& ctx) {
    OrderedSpectrum<Real> out;
    out.n = n;
    const Real h = num::from_int<Real>(1, ctx) / num::from_int<Real>(static_cast<long>(n + 1), ctx);
    for (std::size_t j = 1; j <= n; ++j) {
      const Real theta = grid_theta<Real>(j, n, ctx);
      Complex<Real> acc = num::complex_zero<Real>(ctx);
      Real hp = num::from_int<Real>(1, ctx);
      for (std::size_t k = 0; k <= deg; ++k) {
        acc += poly_coeff<Real>(k, theta, ctx) * hp;
        hp *= h;
      }
      out.values.push_back(acc);
    }
    return out;
  };
}

// a0 + 2 sum_k a_k cos(k theta), evaluated directly as the oracle.
template <RealScalar Real>
Real cosine_series(const std::vector<double>& a, const Real& theta, const PrecisionContext& ctx) {
  using std::cos;
  Real acc = num::from_double<Real>(a[0], ctx);
  for (std::size_t k = 1; k < a.size(); ++k) {
    acc += num::from_double<Real>(a[k], ctx) * cos(theta * static_cast<long>(k)) * 2;
  }
  return acc;
}

template <RealScalar Real>
std::vector<Real> samples_on_grid(const std::vector<double>& a, std::size_t n0, const PrecisionContext& ctx) {
  std::vector<Real> out;
  for (std::size_t j = 1; j <= n0; ++j) out.push_back(cosine_series(a, grid_theta<Real>(j, n0, ctx), ctx));
  return out;
}

}  // namespace tspectra::testing
