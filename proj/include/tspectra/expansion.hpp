#pragma once

// Matrix-less extraction of the expansion functions c_k on the coarse grid,
// lambda_j(T_n) ~ sum_k c_k(theta_{j,n}) h^k with h = 1/(n+1), and the
// interpolation-extrapolation of eigenvalues to larger n.

#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "tspectra/eigensolver.hpp"
#include "tspectra/errors.hpp"
#include "tspectra/linalg.hpp"
#include "tspectra/matrix.hpp"
#include "tspectra/ordering.hpp"
#include "tspectra/parallel.hpp"
#include "tspectra/symbol.hpp"
#include "tspectra/toeplitz.hpp"

namespace tspectra {

/// theta_{j,n} = j pi / (n+1). Evaluated as (j * pi) / (n+1) so that
/// theta_{2^k j, 2^k (n+1) - 1} is bitwise equal to theta_{j,n}.
template <RealScalar Real>
Real grid_theta(std::size_t j, std::size_t n, const PrecisionContext& ctx) {
  return num::pi<Real>(ctx) * num::from_int<Real>(static_cast<long>(j), ctx) /
         num::from_int<Real>(static_cast<long>(n + 1), ctx);
}

template <RealScalar Real>
struct Grid {
  std::size_t n = 0;
  std::vector<Real> thetas;  ///< theta_{j,n}, j = 1..n
  Real h{};                  ///< 1/(n+1)

  static Grid make(std::size_t n, const PrecisionContext& ctx) {
    Grid g;
    g.n = n;
    g.thetas.reserve(n);
    for (std::size_t j = 1; j <= n; ++j) g.thetas.push_back(grid_theta<Real>(j, n, ctx));
    g.h = num::from_int<Real>(1, ctx) / num::from_int<Real>(static_cast<long>(n + 1), ctx);
    return g;
  }
};

/// n_k = 2^k (n0 + 1) - 1.
inline std::size_t expansion_size(std::size_t n0, std::size_t k) { return ((n0 + 1) << k) - 1; }

/// Black-box spectrum provider: must return exactly n consistently ordered values.
template <RealScalar Real>
using EigSource = std::function<OrderedSpectrum<Real>(std::size_t n, const PrecisionContext& ctx)>;

/// Eigenvalues of T_n(sym) in the given order.
template <RealScalar Real>
EigSource<Real> toeplitz_eig_source(LaurentSymbol<Real> sym, OrderingStrategy<Real> strategy,
                                    EigOptions options = {}) {
  return [sym = std::move(sym), strategy = std::move(strategy), options](std::size_t n,
                                                                         const PrecisionContext& ctx) {
    auto eig = eigenvalues(build_toeplitz(sym, n, ctx), ctx, options);
    return order(std::move(eig.values), strategy, ctx);
  };
}

/// Samples g(theta_{j,n}) in grid order; an exact stand-in for an eigensolver
/// whose spectrum is g on the grid.
template <RealScalar Real>
EigSource<Real> sampler_eig_source(LaurentSymbol<Real> g) {
  return [g = std::move(g)](std::size_t n, const PrecisionContext& ctx) {
    OrderedSpectrum<Real> out;
    out.n = n;
    out.values.reserve(n);
    for (std::size_t j = 1; j <= n; ++j) out.values.push_back(evaluate(g, grid_theta<Real>(j, n, ctx), ctx));
    return out;
  };
}

template <RealScalar Real>
struct ExpansionTable {
  std::size_t n0 = 0;
  std::size_t alpha = 0;
  /// (alpha+1) x n0; c(k, j-1) = c_k(theta_{j,n0}).
  Matrix<Complex<Real>> c;
  std::vector<std::size_t> sizes_used;
  int precision_bits = 0;
  std::vector<std::string> warnings;

  std::vector<Real> thetas(const PrecisionContext& ctx) const { return Grid<Real>::make(n0, ctx).thetas; }

  std::vector<Complex<Real>> row(std::size_t k) const { return c.row(k); }
};

struct ExpansionOptions {
  /// Concurrent eigensolves; 0 means threads_from_env().
  unsigned threads = 0;
};

template <RealScalar Real>
ExpansionTable<Real> compute_expansion(std::size_t n0, std::size_t alpha, const EigSource<Real>& source,
                                       const PrecisionContext& ctx, const ExpansionOptions& options = {}) {
  if (n0 < alpha + 1) {
    throw InputError("n0 = " + std::to_string(n0) + " must be at least alpha + 1 = " + std::to_string(alpha + 1));
  }
  const std::size_t rows = alpha + 1;
  ExpansionTable<Real> table;
  table.n0 = n0;
  table.alpha = alpha;
  table.precision_bits = ctx.bits();
  for (std::size_t k = 0; k < rows; ++k) table.sizes_used.push_back(expansion_size(n0, k));
  if (alpha > 4) {
    table.warnings.push_back("alpha = " + std::to_string(alpha) +
                             " > 4: the Vandermonde system is badly conditioned, expect lost digits");
  }

  // E(k, j-1) = lambda_{2^k j}(T_{n_k}).
  Matrix<Complex<Real>> e(rows, n0);
  const unsigned threads = options.threads == 0 ? threads_from_env() : options.threads;
  parallel_for(rows, threads, [&](std::size_t k) {
    const std::size_t nk = table.sizes_used[k];
    OrderedSpectrum<Real> spec;
    try {
      spec = source(nk, ctx);
    } catch (const Error&) {
      throw;
    } catch (const std::exception& ex) {
      throw EigSourceError("eigenvalue source failed at n = " + std::to_string(nk) + ": " + ex.what());
    }
    if (spec.values.size() != nk) {
      throw EigSourceError("eigenvalue source returned " + std::to_string(spec.values.size()) +
                           " values for n = " + std::to_string(nk));
    }
    const std::size_t stride = std::size_t{1} << k;
    for (std::size_t j = 1; j <= n0; ++j) e(k, j - 1) = std::move(spec.values[stride * j - 1]);
  });

  Matrix<Real> v(rows, rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const Real h = num::from_int<Real>(1, ctx) / num::from_int<Real>(static_cast<long>(table.sizes_used[i] + 1), ctx);
    Real p = num::from_int<Real>(1, ctx);
    for (std::size_t j = 0; j < rows; ++j) {
      v(i, j) = p;
      p *= h;
    }
  }
  const LuFactorization<Real> lu(std::move(v), ctx);

  table.c = Matrix<Complex<Real>>(rows, n0);
  std::vector<Real> re(rows), im(rows);
  for (std::size_t j = 0; j < n0; ++j) {
    for (std::size_t k = 0; k < rows; ++k) {
      re[k] = e(k, j).re;
      im[k] = e(k, j).im;
    }
    auto cre = lu.solve(re);
    auto cim = lu.solve(im);
    for (std::size_t k = 0; k < rows; ++k) table.c(k, j) = Complex<Real>(std::move(cre[k]), std::move(cim[k]));
  }
  return table;
}

namespace detail {

/// Lagrange interpolation through (x_i, y_i) with x_i = first, first+1, ...
template <RealScalar Real>
Real lagrange_on_integers(long first, const std::vector<Real>& y, const Real& x, const PrecisionContext& ctx) {
  Real acc = num::from_int<Real>(0, ctx);
  const long m = static_cast<long>(y.size());
  for (long i = 0; i < m; ++i) {
    Real w = num::from_int<Real>(1, ctx);
    for (long l = 0; l < m; ++l) {
      if (l == i) continue;
      w *= (x - num::from_int<Real>(first + l, ctx));
      w /= num::from_int<Real>(i - l, ctx);
    }
    acc += w * y[static_cast<std::size_t>(i)];
  }
  return acc;
}

}  // namespace detail

/// lambda~_j(T_n) = sum_k c_k(theta_{j,n}) h^k for j = 1..n. Each c_k, real
/// and imaginary parts separately, is carried from the n0 grid to theta_{j,n}
/// by Lagrange interpolation of degree min(alpha+1, 4) on the nearest
/// consecutive nodes; windows are clamped at the ends of the grid, so targets
/// outside [theta_{1,n0}, theta_{n0,n0}] are extrapolated. Targets that fall on
/// a node take the tabulated value directly.
template <RealScalar Real>
OrderedSpectrum<Real> interp_extrap_eigs(const ExpansionTable<Real>& table, std::size_t n,
                                         const PrecisionContext& ctx) {
  const std::size_t n0 = table.n0;
  if (n < n0) {
    throw TargetTooSmall("target size " + std::to_string(n) + " is below n0 = " + std::to_string(n0));
  }
  const std::size_t rows = table.alpha + 1;
  const std::size_t points = std::min<std::size_t>(std::min<std::size_t>(table.alpha + 1, 4) + 1, n0);
  const Real h = num::from_int<Real>(1, ctx) / num::from_int<Real>(static_cast<long>(n + 1), ctx);

  OrderedSpectrum<Real> out;
  out.n = n;
  out.values.reserve(n);
  std::vector<Real> yre(points), yim(points);
  for (std::size_t j = 1; j <= n; ++j) {
    // Position of theta_{j,n} on the node index axis: x = j (n0+1) / (n+1).
    const std::size_t pos = j * (n0 + 1);
    const std::size_t den = n + 1;
    std::vector<Complex<Real>> ck(rows);
    if (pos % den == 0) {
      const std::size_t node = pos / den;
      for (std::size_t k = 0; k < rows; ++k) ck[k] = table.c(k, node - 1);
    } else {
      const long fl = static_cast<long>(pos / den);
      long first;
      if (points % 2 == 0) {
        first = fl - static_cast<long>(points / 2) + 1;
      } else {
        const long nearest = static_cast<long>((2 * pos + den) / (2 * den));
        first = nearest - static_cast<long>(points / 2);
      }
      first = std::clamp(first, 1L, static_cast<long>(n0 - points + 1));
      const Real x = num::from_int<Real>(static_cast<long>(pos), ctx) / num::from_int<Real>(static_cast<long>(den), ctx);
      for (std::size_t k = 0; k < rows; ++k) {
        for (std::size_t i = 0; i < points; ++i) {
          const auto& node = table.c(k, static_cast<std::size_t>(first - 1) + i);
          yre[i] = node.re;
          yim[i] = node.im;
        }
        ck[k] = Complex<Real>(detail::lagrange_on_integers(first, yre, x, ctx),
                              detail::lagrange_on_integers(first, yim, x, ctx));
      }
    }
    Complex<Real> acc = num::complex_zero<Real>(ctx);
    Real hp = num::from_int<Real>(1, ctx);
    for (std::size_t k = 0; k < rows; ++k) {
      acc += ck[k] * hp;
      hp *= h;
    }
    out.values.push_back(std::move(acc));
  }
  return out;
}

/// Header `theta,c0_re,c0_im,...` then one row per grid node.
template <RealScalar Real>
void write_expansion_csv(std::ostream& os, const ExpansionTable<Real>& table, const PrecisionContext& ctx) {
  os << "theta";
  for (std::size_t k = 0; k <= table.alpha; ++k) os << ",c" << k << "_re,c" << k << "_im";
  os << '\n';
  const auto thetas = table.thetas(ctx);
  for (std::size_t j = 0; j < table.n0; ++j) {
    os << num::format(thetas[j], ctx);
    for (std::size_t k = 0; k <= table.alpha; ++k) {
      os << ',' << num::format(table.c(k, j).re, ctx) << ',' << num::format(table.c(k, j).im, ctx);
    }
    os << '\n';
  }
}

}  // namespace tspectra
