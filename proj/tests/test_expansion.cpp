#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "support.hpp"

using namespace tspectra;
using tspectra::testing::cplx;
using tspectra::testing::d;
using tspectra::testing::MP;
using tspectra::testing::poly_coeff;
using tspectra::testing::polynomial_source;

namespace {

const PrecisionContext kDouble;


double max_abs(const std::vector<Complex<double>>& v) {
  double m = 0;
  for (const auto& z : v) m = std::max(m, std::sqrt(norm(z)));
  return m;
}

}  // namespace

TEST(Grid, ThetasAndStep) {
  const auto g = Grid<double>::make(3, kDouble);
  ASSERT_EQ(g.thetas.size(), 3u);
  EXPECT_DOUBLE_EQ(g.thetas[0], M_PI / 4);
  EXPECT_DOUBLE_EQ(g.thetas[2], 3 * M_PI / 4);
  EXPECT_EQ(g.h, 0.25);
  EXPECT_EQ(expansion_size(100, 0), 100u);
  EXPECT_EQ(expansion_size(100, 3), 807u);
}

TEST(GridProperty, NestingIsBitwiseExact) {
  for (int bits : {53, 128, 512}) {
    const PrecisionContext ctx(bits);
    with_scalar(ctx, [&]<class Real>() {
      for (std::size_t n0 : {1u, 24u, 100u}) {
        for (std::size_t k = 1; k <= 3; ++k) {
          const std::size_t nk = expansion_size(n0, k);
          for (std::size_t j = 1; j <= n0; ++j) {
            ASSERT_EQ(grid_theta<Real>(j << k, nk, ctx), grid_theta<Real>(j, n0, ctx))
                << bits << " bits, n0=" << n0 << " k=" << k << " j=" << j;
          }
        }
      }
    });
  }
}

TEST(GridProperty, StrictlyIncreasingInsideOpenInterval) {
  const PrecisionContext ctx(96);
  const auto g = Grid<MP>::make(50, ctx);
  const MP pi = num::pi<MP>(ctx);
  EXPECT_GT(g.thetas.front(), MP(0L, 96));
  EXPECT_LT(g.thetas.back(), pi);
  for (std::size_t i = 1; i < g.thetas.size(); ++i) EXPECT_LT(g.thetas[i - 1], g.thetas[i]);
  EXPECT_EQ(g.h * MP(51L, 96), MP(1L, 96));
}

TEST(ComputeExpansion, SamplerGivesSymbolAndZeroCorrections) {
  const PrecisionContext ctx(128);
  const auto g = example1_spectral_symbol<MP>(ctx);
  const auto table = compute_expansion<MP>(10, 3, sampler_eig_source<MP>(g), ctx);
  ASSERT_EQ(table.c.rows(), 4u);
  ASSERT_EQ(table.c.cols(), 10u);
  EXPECT_EQ(table.sizes_used, (std::vector<std::size_t>{10, 21, 43, 87}));
  EXPECT_EQ(table.precision_bits, 128);
  const auto thetas = table.thetas(ctx);
  for (std::size_t j = 0; j < 10; ++j) {
    const auto exact = tspectra::testing::example1_g(thetas[j], ctx);
    EXPECT_LT(d(abs(table.c(0, j) - exact)), 1e-35);
    for (std::size_t k = 1; k <= 3; ++k) EXPECT_LT(d(abs(table.c(k, j))), 1e-30) << "k=" << k;
  }
}

TEST(ComputeExpansion, AlphaZeroIsTheOrderedSpectrum) {
  const auto sym = preset<double>(Preset::example2, kDouble);
  const auto source = toeplitz_eig_source<double>(sym, OrderingStrategy<double>::imag_asc());
  const auto table = compute_expansion<double>(12, 0, source, kDouble);
  ASSERT_EQ(table.c.rows(), 1u);
  EXPECT_EQ(table.row(0), source(12, kDouble).values);
}

TEST(ComputeExpansion, RejectsBadArguments) {
  const auto g = parse_symbol<double>("0:1+0i", kDouble);
  EXPECT_THROW(compute_expansion<double>(2, 2, sampler_eig_source<double>(g), kDouble), InputError);
  EigSource<double> short_source = [](std::size_t n, const PrecisionContext& ctx) {
    OrderedSpectrum<double> s;
    s.n = n;
    s.values.assign(n - 1, num::complex_zero<double>(ctx));
    return s;
  };
  EXPECT_THROW(compute_expansion<double>(4, 1, short_source, kDouble), EigSourceError);
  EigSource<double> throwing = [](std::size_t, const PrecisionContext&) -> OrderedSpectrum<double> {
    throw std::runtime_error("backend down");
  };
  EXPECT_THROW(compute_expansion<double>(4, 1, throwing, kDouble), EigSourceError);
}

TEST(ComputeExpansion, WarnsAboveAlphaFour) {
  const auto g = parse_symbol<double>("0:1+0i", kDouble);
  EXPECT_TRUE(compute_expansion<double>(8, 4, sampler_eig_source<double>(g), kDouble).warnings.empty());
  EXPECT_FALSE(compute_expansion<double>(8, 5, sampler_eig_source<double>(g), kDouble).warnings.empty());
}

TEST(ExpansionProperty, ExactOnPolynomialData) {
  for (int bits : {53, 128, 256}) {
    const PrecisionContext ctx(bits);
    with_scalar(ctx, [&]<class Real>() {
      for (std::size_t alpha : {0u, 1u, 2u, 3u}) {
        for (std::size_t n0 : {alpha + 1, std::size_t{7}}) {
          const auto table = compute_expansion<Real>(n0, alpha, polynomial_source<Real>(alpha), ctx);
          const auto thetas = table.thetas(ctx);
          // c_k is only determined up to eps / h0^k by O(1) data, so compare
          // the terms c_k h0^k.
          const double h0 = 1.0 / static_cast<double>(n0 + 1);
          for (std::size_t k = 0; k <= alpha; ++k) {
            for (std::size_t j = 0; j < n0; ++j) {
              const auto expected = poly_coeff<Real>(k, thetas[j], ctx);
              const auto scale = d(abs(expected)) + 1;
              const double weight = std::pow(h0, static_cast<double>(k));
              EXPECT_LE(d(abs(table.c(k, j) - expected)) * weight, 1e3 * ctx.eps() * scale)
                  << bits << " bits, alpha=" << alpha << " n0=" << n0 << " k=" << k << " j=" << j;
            }
          }
        }
      }
    });
  }
}

TEST(ExpansionProperty, IndependentOfThreadCount) {
  const auto sym = preset<double>(Preset::example2, kDouble);
  const auto source = toeplitz_eig_source<double>(sym, OrderingStrategy<double>::imag_asc());
  const auto one = compute_expansion<double>(20, 3, source, kDouble, {.threads = 1});
  const auto four = compute_expansion<double>(20, 3, source, kDouble, {.threads = 4});
  for (std::size_t k = 0; k <= 3; ++k) EXPECT_EQ(one.row(k), four.row(k));
}

// Error of the fitted expansion, measured one doubling beyond the fit against
// eigenvalues of the larger matrix, on the points theta_{j,24}. Halving h0
// should shrink it by about 2^(alpha+1).
TEST(ExpansionProperty, ErrorDecaysLikeHToTheAlphaPlusOne) {
  const auto sym = preset<double>(Preset::example2, kDouble);
  const auto source = toeplitz_eig_source<double>(sym, OrderingStrategy<double>::imag_asc());
  for (std::size_t alpha : {1u, 2u}) {
    std::vector<double> errors;
    for (std::size_t m = 0; m < 3; ++m) {
      const std::size_t n0 = (std::size_t{25} << m) - 1;
      const auto table = compute_expansion<double>(n0, alpha, source, kDouble);
      const std::size_t n = expansion_size(n0, alpha + 1);
      const auto exact = source(n, kDouble).values;
      const auto approx = interp_extrap_eigs(table, n, kDouble).values;
      double err = 0;
      for (std::size_t j = 1; j <= 24; ++j) {
        const std::size_t i = j << (m + alpha + 1);
        err = std::max(err, std::sqrt(norm(exact[i - 1] - approx[i - 1])));
      }
      errors.push_back(err);
    }
    for (std::size_t m = 1; m < errors.size(); ++m) {
      const double rate = std::log2(errors[m - 1] / errors[m]);
      EXPECT_GE(rate, alpha + 0.5) << "alpha=" << alpha << " errors " << errors[m - 1] << " -> " << errors[m];
      EXPECT_LE(rate, alpha + 1.5) << "alpha=" << alpha << " errors " << errors[m - 1] << " -> " << errors[m];
    }
  }
}

TEST(InterpExtrap, SmoothSymbolAtLargerSize) {
  const auto g = example1_spectral_symbol<double>(kDouble);
  const auto table = compute_expansion<double>(498, 3, sampler_eig_source<double>(g), kDouble);
  const auto approx = interp_extrap_eigs(table, 997, kDouble);
  ASSERT_EQ(approx.values.size(), 997u);
  double err = 0;
  for (std::size_t j = 1; j <= 997; ++j) {
    const auto exact = tspectra::testing::example1_g(grid_theta<double>(j, 997, kDouble), kDouble);
    err = std::max(err, std::sqrt(norm(approx.values[j - 1] - exact)));
  }
  EXPECT_LE(err, 1e-10);
}

TEST(InterpExtrap, BaseSizeReproducesTheTable) {
  const PrecisionContext ctx(128);
  const auto sym = preset<MP>(Preset::example2, ctx);
  const auto table =
      compute_expansion<MP>(9, 2, toeplitz_eig_source<MP>(sym, OrderingStrategy<MP>::imag_asc()), ctx);
  const auto out = interp_extrap_eigs(table, 9, ctx);
  const MP h = MP(1L, 128) / MP(10L, 128);
  for (std::size_t j = 0; j < 9; ++j) {
    Complex<MP> acc = num::complex_zero<MP>(ctx);
    MP hp(1L, 128);
    for (std::size_t k = 0; k <= 2; ++k) {
      acc += table.c(k, j) * hp;
      hp *= h;
    }
    EXPECT_EQ(out.values[j], acc) << j;
  }
  EXPECT_THROW(interp_extrap_eigs(table, 8, ctx), TargetTooSmall);
}

TEST(InterpExtrap, ExpansionBeatsSymbolSampling) {
  // Example 2 matrices are complex symmetric and well conditioned, so a
  // double-precision solve of T_1000 is an adequate reference here.
  const auto sym = preset<double>(Preset::example2, kDouble);
  const auto source = toeplitz_eig_source<double>(sym, OrderingStrategy<double>::imag_asc());
  const auto table = compute_expansion<double>(100, 3, source, kDouble);
  const std::size_t n = 1000;
  const auto exact = source(n, kDouble).values;
  const auto approx = interp_extrap_eigs(table, n, kDouble).values;
  std::vector<Complex<double>> expansion_err, sampling_err;
  for (std::size_t j = 1; j <= n; ++j) {
    expansion_err.push_back(approx[j - 1] - exact[j - 1]);
    sampling_err.push_back(evaluate(sym, grid_theta<double>(j, n, kDouble), kDouble) - exact[j - 1]);
  }
  EXPECT_LT(max_abs(expansion_err), max_abs(sampling_err));
}

TEST(ExpansionCsv, HeaderAndRows) {
  const auto g = parse_symbol<double>("0:1+2i", kDouble);
  const auto table = compute_expansion<double>(2, 1, sampler_eig_source<double>(g), kDouble);
  std::ostringstream os;
  write_expansion_csv(os, table, kDouble);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "theta,c0_re,c0_im,c1_re,c1_im");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 2);
}
