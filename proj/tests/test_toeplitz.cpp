#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"

using namespace tspectra;
using tspectra::testing::MP;
using tspectra::testing::cplx;

namespace {
const PrecisionContext kDouble;
}

TEST(BuildToeplitz, TridiagonalDisplay) {
  const auto t = build_toeplitz(preset<double>(Preset::example1, kDouble), 3, kDouble);
  const double expected[3][3][2] = {
      {{2, 0}, {-2, 1}, {0, 0}},
      {{-1, 0}, {2, 0}, {-2, 1}},
      {{0, 0}, {-1, 0}, {2, 0}},
  };
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      EXPECT_EQ(t(i, j).re, expected[i][j][0]) << i << "," << j;
      EXPECT_EQ(t(i, j).im, expected[i][j][1]) << i << "," << j;
    }
  }
}

TEST(BuildToeplitz, GrcarDisplay) {
  const auto t = build_toeplitz(preset<double>(Preset::example4, kDouble), 5, kDouble);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const int k = i - j;
      double v = 0;
      if (k == 1) v = -1;
      if (k <= 0 && k >= -3) v = 1;
      EXPECT_EQ(t(i, j).re, v) << i << "," << j;
      EXPECT_EQ(t(i, j).im, 0.0);
    }
  }
  EXPECT_EQ(t(0, 0).re, 1.0);
  EXPECT_EQ(t(0, 3).re, 1.0);
  EXPECT_EQ(t(0, 4).re, 0.0);
}

TEST(BuildToeplitz, ZeroSymbolAndEdgeSizes) {
  const auto z = build_toeplitz(parse_symbol<double>("0:0+0i", kDouble), 2, kDouble);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) EXPECT_EQ(z(i, j), cplx<double>(0, 0, kDouble));
  }
  EXPECT_THROW(build_toeplitz(preset<double>(Preset::example1, kDouble), 0, kDouble), InputError);
  // Offsets wider than the matrix are simply cut off.
  const auto one = build_toeplitz(preset<double>(Preset::example4, kDouble), 1, kDouble);
  EXPECT_EQ(one(0, 0), cplx<double>(1, 0, kDouble));
}

TEST(BuildToeplitz, Invariants) {
  const PrecisionContext ctx(128);
  for (const auto& p : preset_table()) {
    const auto s = preset<MP>(p.id, ctx);
    const auto sr = real_part_symbol(s);
    const auto si = imag_part_symbol(s);
    for (std::size_t n : {1u, 2u, 5u, 9u}) {
      const auto t = build_toeplitz(s, n, ctx);
      const auto tr = build_toeplitz(sr, n, ctx);
      const auto ti = build_toeplitz(si, n, ctx);
      Complex<MP> trace = num::complex_zero<MP>(ctx);
      for (std::size_t i = 0; i < n; ++i) trace += t(i, i);
      const Complex<MP> f0 = s.find(0) ? *s.find(0) : num::complex_zero<MP>(ctx);
      EXPECT_EQ(trace, f0 * MP(static_cast<long>(n), 128)) << p.name;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          EXPECT_EQ(t(i, j).re, tr(i, j).re - ti(i, j).im);
          EXPECT_EQ(t(i, j).im, tr(i, j).im + ti(i, j).re);
          if (i > 0 && j > 0) EXPECT_EQ(t(i, j), t(i - 1, j - 1)) << "diagonal not constant";
          EXPECT_EQ(t(i, j).re.precision(), 128);
        }
      }
    }
  }
}

TEST(BuildToeplitz, CsvDump) {
  const auto t = build_toeplitz(preset<double>(Preset::example1, kDouble), 2, kDouble);
  std::ostringstream os;
  write_matrix_csv(os, t, kDouble);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line,
            "2.00000000000000000e+00,0.00000000000000000e+00,-2.00000000000000000e+00,1.00000000000000000e+00");
}
