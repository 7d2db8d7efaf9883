#pragma once

// Recovery of the cosine Fourier coefficients of the spectral function g from
// samples of c_0, evaluation of the reconstructed g~, perfect sampling grids,
// and the gamma curves solving b(z) = g~(theta).

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "tspectra/eigensolver.hpp"
#include "tspectra/errors.hpp"
#include "tspectra/expansion.hpp"
#include "tspectra/linalg.hpp"
#include "tspectra/parallel.hpp"
#include "tspectra/symbol.hpp"

namespace tspectra {

namespace detail {

/// G(j-1, 0) = 1, G(j-1, k) = 2 cos(k theta_{j,n0}).
template <RealScalar Real>
Matrix<Real> cosine_matrix(std::size_t n0, const PrecisionContext& ctx) {
  using std::cos;
  Matrix<Real> g(n0, n0);
  for (std::size_t j = 1; j <= n0; ++j) {
    const Real t = grid_theta<Real>(j, n0, ctx);
    g(j - 1, 0) = num::from_int<Real>(1, ctx);
    for (std::size_t k = 1; k < n0; ++k) g(j - 1, k) = cos(t * static_cast<long>(k)) * 2;
  }
  return g;
}

}  // namespace detail

/// Coefficients ghat_0..ghat_{n0-1} of the even cosine series
/// ghat_0 + 2 sum_k ghat_k cos(k theta) interpolating c0 on theta_{j,n0}.
/// Real samples only; apply to real and imaginary parts separately.
template <RealScalar Real>
std::vector<Real> recover_fourier(const std::vector<Real>& c0, const PrecisionContext& ctx) {
  if (c0.empty()) throw InputError("recover_fourier needs at least one sample");
  return real_solve(detail::cosine_matrix<Real>(c0.size(), ctx), c0, ctx);
}

template <RealScalar Real>
struct FourierRecovery {
  std::vector<Real> ghat_re;
  std::vector<Real> ghat_im;
  std::size_t n0 = 0;
  int precision_bits = 0;
  /// Distance of ghat_0 from the nearest Gaussian integer when both parts are
  /// within 1e-3 of an integer; a practical scale below which coefficients are noise.
  std::optional<Real> noise_floor;
};

/// Recover g~ from complex c0 samples on theta_{j,n0} (one factorization, two solves).
template <RealScalar Real>
FourierRecovery<Real> recover_spectral_function(const std::vector<Complex<Real>>& c0, const PrecisionContext& ctx) {
  using std::abs;
  using std::round;
  if (c0.empty()) throw InputError("recover_spectral_function needs at least one sample");
  const std::size_t n0 = c0.size();
  const LuFactorization<Real> lu(detail::cosine_matrix<Real>(n0, ctx), ctx);
  std::vector<Real> re(n0), im(n0);
  for (std::size_t j = 0; j < n0; ++j) {
    re[j] = c0[j].re;
    im[j] = c0[j].im;
  }
  FourierRecovery<Real> rec;
  rec.ghat_re = lu.solve(re);
  rec.ghat_im = lu.solve(im);
  rec.n0 = n0;
  rec.precision_bits = ctx.bits();
  const Real dre = abs(rec.ghat_re[0] - round(rec.ghat_re[0]));
  const Real dim = abs(rec.ghat_im[0] - round(rec.ghat_im[0]));
  if (dre <= 1e-3 && dim <= 1e-3) rec.noise_floor = dre < dim ? dim : dre;
  return rec;
}

template <RealScalar Real>
FourierRecovery<Real> recover_spectral_function(const ExpansionTable<Real>& table, const PrecisionContext& ctx) {
  return recover_spectral_function(table.row(0), ctx);
}

/// g~(theta) = ghat_0 + 2 sum_{k>=1} ghat_k cos(k theta), both series combined.
template <RealScalar Real>
Complex<Real> evaluate_g_tilde(const FourierRecovery<Real>& rec, const Real& theta, const PrecisionContext& ctx) {
  using std::cos;
  Complex<Real> acc = num::complex_zero<Real>(ctx);
  if (!rec.ghat_re.empty()) acc.re += rec.ghat_re[0];
  if (!rec.ghat_im.empty()) acc.im += rec.ghat_im[0];
  const std::size_t m = std::max(rec.ghat_re.size(), rec.ghat_im.size());
  for (std::size_t k = 1; k < m; ++k) {
    const Real c = cos(theta * static_cast<long>(k)) * 2;
    if (k < rec.ghat_re.size()) acc.re += rec.ghat_re[k] * c;
    if (k < rec.ghat_im.size()) acc.im += rec.ghat_im[k] * c;
  }
  return acc;
}

/// The recovered series as a symmetric Laurent symbol, fhat_{+-k} = ghat_k.
template <RealScalar Real>
LaurentSymbol<Real> to_symbol(const FourierRecovery<Real>& rec, const PrecisionContext& ctx) {
  typename LaurentSymbol<Real>::Coefficients c;
  const std::size_t m = std::max(rec.ghat_re.size(), rec.ghat_im.size());
  for (std::size_t k = 0; k < m; ++k) {
    Complex<Real> v = num::complex_zero<Real>(ctx);
    if (k < rec.ghat_re.size()) v.re = rec.ghat_re[k];
    if (k < rec.ghat_im.size()) v.im = rec.ghat_im[k];
    c.emplace(static_cast<int>(k), v);
    if (k != 0) c.emplace(-static_cast<int>(k), std::move(v));
  }
  return LaurentSymbol<Real>(std::move(c));
}

template <RealScalar Real>
void write_fourier_csv(std::ostream& os, const FourierRecovery<Real>& rec, const PrecisionContext& ctx) {
  os << "k,ghat_re,ghat_im\n";
  for (std::size_t k = 0; k < rec.n0; ++k) {
    os << k << ',' << num::format(rec.ghat_re[k], ctx) << ',' << num::format(rec.ghat_im[k], ctx) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Perfect grids

template <RealScalar Real>
using RealFunction = std::function<Real(const Real&)>;

namespace detail {

/// Bisection for component(t) = target on [lo, hi], where the residuals at the
/// ends have opposite signs (or one vanishes). Runs until the bracket stops
/// shrinking at the working precision.
template <RealScalar Real>
Real bisect(const RealFunction<Real>& component, const Real& target, Real lo, Real hi, const PrecisionContext& ctx) {
  Real flo = component(lo) - target;
  if (num::is_zero(flo)) return lo;
  const bool lo_negative = flo < 0.0;
  const int max_iter = ctx.bits() + 64;
  for (int it = 0; it < max_iter; ++it) {
    Real mid = (lo + hi) / 2;
    if (!(lo < mid && mid < hi)) break;
    const Real fm = component(mid) - target;
    if (num::is_zero(fm)) return mid;
    if ((fm < 0.0) == lo_negative) {
      lo = std::move(mid);
    } else {
      hi = std::move(mid);
    }
  }
  using std::abs;
  const Real rl = abs(component(lo) - target);
  const Real rh = abs(component(hi) - target);
  return rh < rl ? hi : lo;
}

}  // namespace detail

/// For each target v_j returns xi_j in [0, pi] with component(xi_j) = v_j.
/// The interval is cut into monotone pieces at sign changes of the sampled
/// differences on a 1024-point scan; every piece whose end values bracket v_j
/// contributes one bisected root, and the root closest to theta_{j,n}
/// (n = number of targets) is kept. Throws NoBracket when no piece brackets v_j.
template <RealScalar Real>
std::vector<Real> perfect_grid(const RealFunction<Real>& component, const std::vector<Real>& targets,
                               const PrecisionContext& ctx) {
  using std::abs;
  constexpr std::size_t kScan = 1024;
  const Real pi = num::pi<Real>(ctx);
  std::vector<Real> xs(kScan), fs(kScan);
  for (std::size_t i = 0; i < kScan; ++i) {
    xs[i] = pi * num::from_int<Real>(static_cast<long>(i), ctx) / num::from_int<Real>(kScan - 1, ctx);
    fs[i] = component(xs[i]);
  }
  // Piece boundaries: sample indices where the difference sign flips.
  std::vector<std::size_t> cuts{0};
  int last_sign = 0;
  for (std::size_t i = 0; i + 1 < kScan; ++i) {
    const Real d = fs[i + 1] - fs[i];
    const int s = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (s == 0) continue;
    if (last_sign != 0 && s != last_sign) cuts.push_back(i);
    last_sign = s;
  }
  cuts.push_back(kScan - 1);

  const std::size_t n = targets.size();
  std::vector<Real> out;
  out.reserve(n);
  for (std::size_t j = 1; j <= n; ++j) {
    const Real& v = targets[j - 1];
    const Real node = grid_theta<Real>(j, n, ctx);
    std::optional<Real> best;
    Real best_d = num::from_int<Real>(0, ctx);
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
      const std::size_t a = cuts[p];
      const std::size_t b = cuts[p + 1];
      const Real& fa = fs[a];
      const Real& fb = fs[b];
      const bool inside = (fa <= v && v <= fb) || (fb <= v && v <= fa);
      if (!inside) continue;
      Real root = detail::bisect(component, v, xs[a], xs[b], ctx);
      Real d = abs(root - node);
      if (!best || d < best_d) {
        best = std::move(root);
        best_d = std::move(d);
      }
    }
    if (!best) throw NoBracket("no monotone piece brackets target " + std::to_string(j));
    out.push_back(std::move(*best));
  }
  return out;
}

template <RealScalar Real>
void write_grid_csv(std::ostream& os, const std::vector<Real>& targets, const std::vector<Real>& xi,
                    const PrecisionContext& ctx) {
  os << "j,theta,target,xi\n";
  for (std::size_t j = 1; j <= xi.size(); ++j) {
    os << j << ',' << num::format(grid_theta<Real>(j, xi.size(), ctx), ctx) << ','
       << num::format(targets[j - 1], ctx) << ',' << num::format(xi[j - 1], ctx) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Gamma curves

template <RealScalar Real>
struct GammaCurves {
  std::vector<Real> thetas;
  /// branches[b][j]: the root on branch b at thetas[j].
  std::vector<std::vector<Complex<Real>>> branches;

  std::size_t degree() const noexcept { return branches.size(); }
};

namespace detail {

/// p(z) = sum_m a[m] z^m and p'(z), Horner.
template <RealScalar Real>
std::pair<Complex<Real>, Complex<Real>> horner(const std::vector<Complex<Real>>& a, const Complex<Real>& z,
                                               const PrecisionContext& ctx) {
  Complex<Real> p = num::complex_zero<Real>(ctx);
  Complex<Real> dp = p;
  for (std::size_t m = a.size(); m-- > 0;) {
    dp = dp * z + p;
    p = p * z + a[m];
  }
  return {std::move(p), std::move(dp)};
}

/// Roots of sum_m a[m] z^m via companion-matrix eigenvalues, then Newton
/// polished. a.back() must be non-zero.
template <RealScalar Real>
std::vector<Complex<Real>> polynomial_roots(const std::vector<Complex<Real>>& a, const PrecisionContext& ctx) {
  const std::size_t d = a.size() - 1;
  Matrix<Complex<Real>> c(d, d, num::complex_zero<Real>(ctx));
  for (std::size_t i = 1; i < d; ++i) c(i, i - 1) = num::complex_from<Real>(1, 0, ctx);
  for (std::size_t i = 0; i < d; ++i) c(i, d - 1) = -(a[i] / a[d]);
  auto roots = eigenvalues(std::move(c), ctx).values;
  for (auto& z : roots) {
    Real last_step;
    for (int it = 0; it < 8; ++it) {
      auto [p, dp] = horner(a, z, ctx);
      if (num::is_zero(dp.re) && num::is_zero(dp.im)) break;
      Complex<Real> step = p / dp;
      Real size = abs1(step);
      if (it > 0 && !(size < last_step)) break;
      z -= step;
      last_step = std::move(size);
      if (num::is_zero(last_step)) break;
    }
  }
  return roots;
}

}  // namespace detail

/// b(z) = sum_k fhat_k z^k for the symbol's Laurent polynomial.
template <RealScalar Real>
Complex<Real> evaluate_laurent(const LaurentSymbol<Real>& sym, const Complex<Real>& z, const PrecisionContext& ctx) {
  Complex<Real> acc = num::complex_zero<Real>(ctx);
  const Complex<Real> one = num::complex_from<Real>(1, 0, ctx);
  for (const auto& [k, c] : sym.coeffs()) {
    Complex<Real> zk = one;
    const Complex<Real> base = k < 0 ? one / z : z;
    for (int i = 0; i < std::abs(k); ++i) zk = zk * base;
    acc += c * zk;
  }
  return acc;
}

/// Roots z of b(z) = g_j for every sample g_j on theta_{j,n0}, where b is the
/// Laurent polynomial of `sym`, chained into K_min + K_max branch curves. At
/// j = 1 the branches are ordered by argument; at each later node the roots are
/// assigned by greedy global nearest matching to the previous branch points.
template <RealScalar Real>
GammaCurves<Real> gamma_curves(const LaurentSymbol<Real>& sym, const std::vector<Complex<Real>>& g_samples,
                               const PrecisionContext& ctx, unsigned threads = 0) {
  const int kmin = sym.band_lower();
  const int kmax = sym.band_upper();
  const std::size_t d = static_cast<std::size_t>(kmin + kmax);
  if (d == 0) throw InputError("gamma curves need a symbol with at least one non-zero offset");
  if (g_samples.empty()) throw InputError("gamma curves need at least one sample");
  const std::size_t n0 = g_samples.size();

  std::vector<Complex<Real>> base(d + 1, num::complex_zero<Real>(ctx));
  for (const auto& [k, c] : sym.coeffs()) base[static_cast<std::size_t>(k + kmin)] = c;

  std::vector<std::vector<Complex<Real>>> roots(n0);
  parallel_for(n0, threads == 0 ? threads_from_env() : threads, [&](std::size_t j) {
    std::vector<Complex<Real>> a = base;
    a[static_cast<std::size_t>(kmin)] -= g_samples[j];
    if (num::is_zero(a[d].re) && num::is_zero(a[d].im)) {
      throw NumericError("b(z) - g has a vanishing leading coefficient at node " + std::to_string(j + 1));
    }
    roots[j] = detail::polynomial_roots(a, ctx);
  });

  GammaCurves<Real> out;
  out.thetas = Grid<Real>::make(n0, ctx).thetas;
  out.branches.assign(d, std::vector<Complex<Real>>(n0));

  std::vector<Complex<Real>> first = roots[0];
  std::sort(first.begin(), first.end(), [](const auto& x, const auto& y) {
    const Real ax = arg(x);
    const Real ay = arg(y);
    if (ax < ay) return true;
    if (ay < ax) return false;
    return lex_less(x, y);
  });
  for (std::size_t b = 0; b < d; ++b) out.branches[b][0] = first[b];

  struct Pair {
    std::size_t branch;
    std::size_t root;
  };
  for (std::size_t j = 1; j < n0; ++j) {
    const auto& rj = roots[j];
    std::vector<Real> dist(d * d);
    std::vector<Pair> pairs;
    pairs.reserve(d * d);
    for (std::size_t b = 0; b < d; ++b) {
      for (std::size_t r = 0; r < d; ++r) {
        dist[b * d + r] = norm(rj[r] - out.branches[b][j - 1]);
        pairs.push_back({b, r});
      }
    }
    std::sort(pairs.begin(), pairs.end(), [&](const Pair& x, const Pair& y) {
      const Real& dx = dist[x.branch * d + x.root];
      const Real& dy = dist[y.branch * d + y.root];
      if (dx < dy) return true;
      if (dy < dx) return false;
      if (lex_less(rj[x.root], rj[y.root])) return true;
      if (lex_less(rj[y.root], rj[x.root])) return false;
      return x.branch < y.branch;
    });
    std::vector<bool> used_b(d, false), used_r(d, false);
    for (const Pair& p : pairs) {
      if (used_b[p.branch] || used_r[p.root]) continue;
      used_b[p.branch] = used_r[p.root] = true;
      out.branches[p.branch][j] = rj[p.root];
    }
  }
  return out;
}

/// `branch,theta,z_re,z_im`, branches numbered from 1.
template <RealScalar Real>
void write_gamma_csv(std::ostream& os, const GammaCurves<Real>& curves, const PrecisionContext& ctx) {
  os << "branch,theta,z_re,z_im\n";
  for (std::size_t b = 0; b < curves.branches.size(); ++b) {
    for (std::size_t j = 0; j < curves.thetas.size(); ++j) {
      const auto& z = curves.branches[b][j];
      os << b + 1 << ',' << num::format(curves.thetas[j], ctx) << ',' << num::format(z.re, ctx) << ','
         << num::format(z.im, ctx) << '\n';
    }
  }
}

}  // namespace tspectra
