#pragma once

// All eigenvalues of a dense complex matrix at the context precision:
// radix-2 balancing, Householder reduction to upper Hessenberg form, then
// single-shift complex QR with Wilkinson shifts on the active window.

#include <algorithm>
#include <cstddef>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "tspectra/errors.hpp"
#include "tspectra/matrix.hpp"
#include "tspectra/precision.hpp"
#include "tspectra/scalar.hpp"

namespace tspectra {

struct EigOptions {
  /// Parlett-Reinsch style diagonal scaling by powers of two before reduction.
  bool balance = true;
  /// Sweeps allowed per deflation; 0 selects 30 * max(10, n).
  std::size_t max_sweeps = 0;
};

template <RealScalar Real>
struct EigResult {
  std::vector<Complex<Real>> values;  ///< unordered
  std::size_t iterations = 0;         ///< total QR sweeps
  Real deflation_tol{};               ///< relative subdiagonal threshold (= eps)
};

/// NoConvergence carrying the eigenvalues that did deflate before the cap was hit.
template <RealScalar Real>
class NoConvergenceWith : public NoConvergence {
 public:
  NoConvergenceWith(const std::string& what, EigResult<Real> partial)
      : NoConvergence(what, partial.values.size()), partial_(std::move(partial)) {}
  const EigResult<Real>& partial() const noexcept { return partial_; }

 private:
  EigResult<Real> partial_;
};

namespace detail {

template <RealScalar Real>
void balance(Matrix<Complex<Real>>& a, const PrecisionContext& ctx) {
  const std::size_t n = a.rows();
  const Real threshold = num::from_double<Real>(0.95, ctx);
  bool done = false;
  for (int sweep = 0; !done && sweep < 64; ++sweep) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      Real c = num::from_int<Real>(0, ctx);
      Real r = num::from_int<Real>(0, ctx);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += abs1(a(j, i));
        r += abs1(a(i, j));
      }
      if (num::is_zero(c) || num::is_zero(r)) continue;
      const Real s = c + r;
      long e = 0;
      Real g = num::scale_pow2(r, -1);
      while (c < g) {
        ++e;
        c = num::scale_pow2(std::move(c), 2);
      }
      g = num::scale_pow2(r, 1);
      while (c > g) {
        --e;
        c = num::scale_pow2(std::move(c), -2);
      }
      if (num::scale_pow2(c + r, -e) < threshold * s) {
        done = false;
        for (std::size_t j = 0; j < n; ++j) {
          a(i, j).re = num::scale_pow2(std::move(a(i, j).re), -e);
          a(i, j).im = num::scale_pow2(std::move(a(i, j).im), -e);
          a(j, i).re = num::scale_pow2(std::move(a(j, i).re), e);
          a(j, i).im = num::scale_pow2(std::move(a(j, i).im), e);
        }
      }
    }
  }
}

/// Unitary similarity to upper Hessenberg form; columns that are already
/// reduced (zero below the subdiagonal) are skipped.
template <RealScalar Real>
void hessenberg(Matrix<Complex<Real>>& a, const PrecisionContext& ctx) {
  const std::size_t n = a.rows();
  if (n < 3) return;
  std::vector<Complex<Real>> v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    Real tail = num::from_int<Real>(0, ctx);
    for (std::size_t i = k + 2; i < n; ++i) tail += norm(a(i, k));
    if (num::is_zero(tail)) continue;

    using std::sqrt;
    const Complex<Real>& x0 = a(k + 1, k);
    const Real alpha = sqrt(norm(x0) + tail);
    Complex<Real> phase = num::complex_from<Real>(1, 0, ctx);
    if (!(num::is_zero(x0.re) && num::is_zero(x0.im))) phase = x0 / abs(x0);

    v[k + 1] = x0 + phase * alpha;
    for (std::size_t i = k + 2; i < n; ++i) v[i] = a(i, k);
    const Real beta = num::from_int<Real>(2, ctx) / (norm(v[k + 1]) + tail);

    // Left: rows k+1.., columns k+1.. (column k is set explicitly below).
    for (std::size_t j = k + 1; j < n; ++j) {
      Complex<Real> s = num::complex_zero<Real>(ctx);
      for (std::size_t i = k + 1; i < n; ++i) s += conj(v[i]) * a(i, j);
      s *= beta;
      for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= s * v[i];
    }
    // Right: all rows, columns k+1..
    for (std::size_t i = 0; i < n; ++i) {
      Complex<Real> s = num::complex_zero<Real>(ctx);
      for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * v[j];
      s *= beta;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= s * conj(v[j]);
    }
    a(k + 1, k) = -(phase * alpha);
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = num::complex_zero<Real>(ctx);
  }
}

/// In-place rotation kernels for the MPFR backend; the generic expressions
/// allocate a temporary per operation, which dominates QR time at high precision.
struct MpScratch {
  mp::Float t1, t2, t3, t4;
  explicit MpScratch(mpfr_prec_t prec) : t1(prec), t2(prec), t3(prec), t4(prec) {}

  // (x, y) <- (c x + s y, c y - conj(s) x)
  void rotate(Complex<mp::Float>& x, Complex<mp::Float>& y, const mp::Float& c, const Complex<mp::Float>& s) {
    constexpr auto rnd = MPFR_RNDN;
    // t1 + i t2 = c x + s y
    mpfr_mul(t1.get(), c.get(), x.re.get(), rnd);
    mpfr_mul(t3.get(), s.re.get(), y.re.get(), rnd);
    mpfr_add(t1.get(), t1.get(), t3.get(), rnd);
    mpfr_mul(t3.get(), s.im.get(), y.im.get(), rnd);
    mpfr_sub(t1.get(), t1.get(), t3.get(), rnd);
    mpfr_mul(t2.get(), c.get(), x.im.get(), rnd);
    mpfr_mul(t3.get(), s.re.get(), y.im.get(), rnd);
    mpfr_add(t2.get(), t2.get(), t3.get(), rnd);
    mpfr_mul(t3.get(), s.im.get(), y.re.get(), rnd);
    mpfr_add(t2.get(), t2.get(), t3.get(), rnd);
    // y <- c y - conj(s) x
    mpfr_mul(t3.get(), c.get(), y.re.get(), rnd);
    mpfr_mul(t4.get(), s.re.get(), x.re.get(), rnd);
    mpfr_sub(t3.get(), t3.get(), t4.get(), rnd);
    mpfr_mul(t4.get(), s.im.get(), x.im.get(), rnd);
    mpfr_sub(t3.get(), t3.get(), t4.get(), rnd);
    mpfr_mul(y.im.get(), c.get(), y.im.get(), rnd);
    mpfr_mul(t4.get(), s.re.get(), x.im.get(), rnd);
    mpfr_sub(y.im.get(), y.im.get(), t4.get(), rnd);
    mpfr_mul(t4.get(), s.im.get(), x.re.get(), rnd);
    mpfr_add(y.im.get(), y.im.get(), t4.get(), rnd);
    mpfr_swap(y.re.get(), t3.get());
    mpfr_swap(x.re.get(), t1.get());
    mpfr_swap(x.im.get(), t2.get());
  }

  // (u, v) <- (c u + conj(s) v, c v - s u)
  void rotate_right(Complex<mp::Float>& u, Complex<mp::Float>& v, const mp::Float& c,
                    const Complex<mp::Float>& s) {
    constexpr auto rnd = MPFR_RNDN;
    mpfr_mul(t1.get(), c.get(), u.re.get(), rnd);
    mpfr_mul(t3.get(), v.re.get(), s.re.get(), rnd);
    mpfr_add(t1.get(), t1.get(), t3.get(), rnd);
    mpfr_mul(t3.get(), v.im.get(), s.im.get(), rnd);
    mpfr_add(t1.get(), t1.get(), t3.get(), rnd);
    mpfr_mul(t2.get(), c.get(), u.im.get(), rnd);
    mpfr_mul(t3.get(), v.im.get(), s.re.get(), rnd);
    mpfr_add(t2.get(), t2.get(), t3.get(), rnd);
    mpfr_mul(t3.get(), v.re.get(), s.im.get(), rnd);
    mpfr_sub(t2.get(), t2.get(), t3.get(), rnd);
    mpfr_mul(t3.get(), c.get(), v.re.get(), rnd);
    mpfr_mul(t4.get(), u.re.get(), s.re.get(), rnd);
    mpfr_sub(t3.get(), t3.get(), t4.get(), rnd);
    mpfr_mul(t4.get(), u.im.get(), s.im.get(), rnd);
    mpfr_add(t3.get(), t3.get(), t4.get(), rnd);
    mpfr_mul(v.im.get(), c.get(), v.im.get(), rnd);
    mpfr_mul(t4.get(), u.re.get(), s.im.get(), rnd);
    mpfr_sub(v.im.get(), v.im.get(), t4.get(), rnd);
    mpfr_mul(t4.get(), u.im.get(), s.re.get(), rnd);
    mpfr_sub(v.im.get(), v.im.get(), t4.get(), rnd);
    mpfr_swap(v.re.get(), t3.get());
    mpfr_swap(u.re.get(), t1.get());
    mpfr_swap(u.im.get(), t2.get());
  }
};

/// Plane rotation G = [c s; -conj(s) c] with G [x; y] = [r; 0], c real.
template <RealScalar Real>
struct Givens {
  Real c;
  Complex<Real> s;
  Complex<Real> r;

  static Givens make(const Complex<Real>& x, const Complex<Real>& y, const PrecisionContext& ctx) {
    using std::hypot;
    const bool y_zero = num::is_zero(y.re) && num::is_zero(y.im);
    const bool x_zero = num::is_zero(x.re) && num::is_zero(x.im);
    if (y_zero) return {num::from_int<Real>(1, ctx), num::complex_zero<Real>(ctx), x};
    if (x_zero) {
      const Real ay = abs(y);
      return {num::from_int<Real>(0, ctx), conj(y) / ay, Complex<Real>(ay, ay * 0)};
    }
    const Real ax = abs(x);
    const Real nrm = hypot(ax, abs(y));
    const Complex<Real> phase = x / ax;
    return {ax / nrm, phase * conj(y) / nrm, phase * nrm};
  }

  /// Rows p, p+1, columns [c0, c1].
  void apply_rows(Matrix<Complex<Real>>& h, std::size_t p, std::size_t c0, std::size_t c1) const {
    if constexpr (std::is_same_v<Real, mp::Float>) {
      MpScratch t(c.precision());
      for (std::size_t j = c0; j <= c1; ++j) t.rotate(h(p, j), h(p + 1, j), c, s);
    } else {
      const Complex<Real> sc = conj(s);
      for (std::size_t j = c0; j <= c1; ++j) {
        Complex<Real> x = h(p, j);
        Complex<Real>& y = h(p + 1, j);
        h(p, j) = x * c + s * y;
        y = y * c - sc * x;
      }
    }
  }

  /// Columns p, p+1 (right multiplication by G^H), rows [r0, r1].
  void apply_cols(Matrix<Complex<Real>>& h, std::size_t p, std::size_t r0, std::size_t r1) const {
    if constexpr (std::is_same_v<Real, mp::Float>) {
      MpScratch t(c.precision());
      for (std::size_t i = r0; i <= r1; ++i) t.rotate_right(h(i, p), h(i, p + 1), c, s);
    } else {
      const Complex<Real> sc = conj(s);
      for (std::size_t i = r0; i <= r1; ++i) {
        Complex<Real> u = h(i, p);
        Complex<Real>& v = h(i, p + 1);
        h(i, p) = u * c + v * sc;
        v = v * c - u * s;
      }
    }
  }
};

/// Eigenvalue of the 2x2 block [[a, b], [c, d]] closest to d.
template <RealScalar Real>
Complex<Real> wilkinson_shift(const Complex<Real>& a, const Complex<Real>& b, const Complex<Real>& c,
                              const Complex<Real>& d) {
  const Complex<Real> t = (a - d) / (a.re * 0 + 2);
  const Complex<Real> bc = b * c;
  Complex<Real> disc = sqrt(t * t + bc);
  // Choose the sign that avoids cancellation in t + disc.
  if (t.re * disc.re + t.im * disc.im < 0.0) disc = -disc;
  const Complex<Real> den = t + disc;
  if (num::is_zero(den.re) && num::is_zero(den.im)) return d;
  return d - bc / den;
}

template <RealScalar Real>
EigResult<Real> hessenberg_qr(Matrix<Complex<Real>>& h, const PrecisionContext& ctx, std::size_t max_sweeps = 0) {
  using std::abs;
  const std::size_t n = h.rows();
  EigResult<Real> result;
  result.deflation_tol = num::epsilon<Real>(ctx);
  const Real& eps = result.deflation_tol;
  std::vector<Complex<Real>> w(n);

  Real anorm = num::from_int<Real>(0, ctx);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = (i == 0 ? 0 : i - 1); j < n; ++j) {
      Real m = abs1(h(i, j));
      if (anorm < m) anorm = std::move(m);
    }
  }

  const std::size_t cap = max_sweeps != 0 ? max_sweeps : 30 * std::max<std::size_t>(10, n);
  const Real exceptional = num::from_double<Real>(0.75, ctx);
  std::size_t hi = n;  // active window is [l, hi - 1]
  while (hi > 0) {
    const std::size_t i = hi - 1;
    std::size_t its = 0;
    for (;;) {
      // Find the start of the unreduced block ending at i.
      std::size_t l = i;
      while (l > 0) {
        const Real sub = abs(h(l, l - 1));
        Real tst = abs(h(l - 1, l - 1)) + abs(h(l, l));
        if (num::is_zero(tst)) tst = anorm;
        if (sub <= eps * tst) {
          h(l, l - 1) = num::complex_zero<Real>(ctx);
          break;
        }
        --l;
      }
      if (l == i) {
        w[i] = h(i, i);
        break;
      }
      if (its >= cap) {
        EigResult<Real> partial;
        partial.iterations = result.iterations;
        partial.deflation_tol = result.deflation_tol;
        partial.values.assign(w.begin() + static_cast<std::ptrdiff_t>(hi), w.end());
        throw NoConvergenceWith<Real>(
            "QR iteration did not converge after " + std::to_string(cap) + " sweeps at row " + std::to_string(i),
            std::move(partial));
      }

      Complex<Real> shift;
      if (its > 0 && its % 20 == 10) {
        shift = h(l, l) + Complex<Real>(exceptional * abs(h(l + 1, l).re), eps * 0);
      } else if (its > 0 && its % 20 == 0) {
        shift = h(i, i) + Complex<Real>(exceptional * abs(h(i, i - 1).re), eps * 0);
      } else {
        shift = wilkinson_shift(h(i - 1, i - 1), h(i - 1, i), h(i, i - 1), h(i, i));
      }

      // Implicit single-shift sweep over [l, i], chasing the bulge down.
      for (std::size_t k = l; k < i; ++k) {
        Givens<Real> g;
        if (k == l) {
          g = Givens<Real>::make(h(l, l) - shift, h(l + 1, l), ctx);
          g.apply_rows(h, k, l, i);
        } else {
          g = Givens<Real>::make(h(k, k - 1), h(k + 1, k - 1), ctx);
          h(k, k - 1) = g.r;
          h(k + 1, k - 1) = num::complex_zero<Real>(ctx);
          g.apply_rows(h, k, k, i);
        }
        g.apply_cols(h, k, l, std::min(k + 2, i));
      }
      ++its;
      ++result.iterations;
    }
    --hi;
  }
  result.values = std::move(w);
  return result;
}

}  // namespace detail

/// Eigenvalues of a square complex matrix, unordered. Throws NoConvergenceWith<Real>
/// (a NoConvergence) when a deflation step exceeds the sweep cap of `options`.
template <RealScalar Real>
EigResult<Real> eigenvalues(Matrix<Complex<Real>> a, const PrecisionContext& ctx, const EigOptions& options = {}) {
  if (!a.square() || a.rows() == 0) throw InputError("eigenvalues: need a non-empty square matrix");
  if (options.balance) detail::balance(a, ctx);
  detail::hessenberg(a, ctx);
  return detail::hessenberg_qr(a, ctx, options.max_sweeps);
}

/// Same algorithm in native double precision: the low-precision surrogate
/// spectrum that, for strongly non-normal matrices, lands near the pseudospectrum.
template <RealScalar Real>
EigResult<double> eigenvalues_at_double(const Matrix<Complex<Real>>& a, const EigOptions& options = {}) {
  Matrix<Complex<double>> d(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) d(i, j) = num::to_double(a(i, j));
  }
  return eigenvalues<double>(std::move(d), PrecisionContext::double_precision(), options);
}

}  // namespace tspectra
