#pragma once

#include <cstddef>
#include <ostream>

#include "tspectra/errors.hpp"
#include "tspectra/matrix.hpp"
#include "tspectra/symbol.hpp"

namespace tspectra {

template <RealScalar Real>
using DenseComplexMatrix = Matrix<Complex<Real>>;

/// T_n(f) = [fhat_{i-j}], i, j = 1..n. The first column carries fhat_0, fhat_1, ...
/// and the first row fhat_0, fhat_{-1}, ...; entries outside the band are zero.
template <RealScalar Real>
DenseComplexMatrix<Real> build_toeplitz(const LaurentSymbol<Real>& sym, std::size_t n, const PrecisionContext& ctx) {
  if (n == 0) throw InputError("Toeplitz size must be positive");
  const Complex<Real> zero = num::complex_zero<Real>(ctx);
  DenseComplexMatrix<Real> t(n, n, zero);
  const long size = static_cast<long>(n);
  for (const auto& [k, c] : sym.coeffs()) {
    if (k >= size || -k >= size) continue;
    const Complex<Real> value(num::at_precision(c.re, ctx), num::at_precision(c.im, ctx));
    // Diagonal i - j = k.
    for (long i = std::max(0L, static_cast<long>(k)); i < size && i - k < size; ++i) {
      t(static_cast<std::size_t>(i), static_cast<std::size_t>(i - k)) = value;
    }
  }
  return t;
}

/// Debug dump: one matrix row per line, "re,im" pairs separated by commas.
template <RealScalar Real>
void write_matrix_csv(std::ostream& os, const DenseComplexMatrix<Real>& a, const PrecisionContext& ctx) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j != 0) os << ',';
      os << num::format(a(i, j).re, ctx) << ',' << num::format(a(i, j).im, ctx);
    }
    os << '\n';
  }
}

}  // namespace tspectra
