#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "support.hpp"

using namespace tspectra;
using tspectra::testing::MP;
using tspectra::testing::cplx;
using tspectra::testing::d;

TEST(PrecisionContext, DerivedQuantities) {
  EXPECT_EQ(PrecisionContext(53).decimal_digits(), 16);
  EXPECT_EQ(PrecisionContext(24).decimal_digits(), 8);
  EXPECT_EQ(PrecisionContext(128).decimal_digits(), 39);
  EXPECT_EQ(PrecisionContext(256).decimal_digits(), 78);
  EXPECT_EQ(PrecisionContext(512).decimal_digits(), 155);
  EXPECT_EQ(PrecisionContext(53).output_digits(), 18);
  EXPECT_EQ(PrecisionContext(53).eps(), std::ldexp(1.0, -52));
  EXPECT_EQ(PrecisionContext(512).eps_exponent(), -511);
  EXPECT_TRUE(PrecisionContext(53).is_native_double());
  EXPECT_FALSE(PrecisionContext(64).is_native_double());
}

TEST(PrecisionContext, RejectsNarrowWidths) {
  EXPECT_THROW(PrecisionContext(23), std::invalid_argument);
  EXPECT_NO_THROW(PrecisionContext(24));
}

TEST(PrecisionContext, EpsilonIsExactPowerOfTwo) {
  const PrecisionContext ctx(300);
  const MP e = num::epsilon<MP>(ctx);
  MP one_plus = MP(1L, 300) + e;
  EXPECT_GT(one_plus, 1.0);
  MP half = e;
  half.scale_pow2(-1);
  EXPECT_EQ(MP(1L, 300) + half, 1.0);  // ties to even
  EXPECT_EQ(mpfr_get_exp(e.get()), -298);
}

TEST(MpFloat, PrecisionFollowsWidestOperand) {
  const MP a(1L, 100);
  const MP b(3L, 200);
  EXPECT_EQ((a + b).precision(), 200);
  EXPECT_EQ((a / b).precision(), 200);
  EXPECT_EQ((a * 2).precision(), 100);
  EXPECT_EQ(MP().precision(), MPFR_PREC_MIN);
}

TEST(MpFloat, ParseIsCorrectlyRounded) {
  const MP tenth = MP::parse("0.1", 200);
  const MP ref = MP(1L, 200) / MP(10L, 200);
  EXPECT_EQ(tenth, ref);
  EXPECT_THROW(MP::parse("0.1x", 64), std::invalid_argument);
  EXPECT_THROW(MP::parse("", 64), std::invalid_argument);
}

TEST(MpFloat, FormatRoundTripsAtOutputDigits) {
  for (int bits : {64, 128, 256, 512}) {
    const PrecisionContext ctx(bits);
    const MP x = num::pi<MP>(ctx) / MP(7L, bits);
    const MP back = MP::parse(num::format(x, ctx), bits);
    EXPECT_EQ(back, x) << bits;
  }
  const PrecisionContext dbl;
  const double y = 1.0 / 3.0;
  EXPECT_EQ(std::stod(num::format(y, dbl)), y);
  EXPECT_EQ(MP(-1.25, 64).to_string(3), "-1.25e+00");
  EXPECT_EQ(MP(0L, 64).to_string(2), "0.0e+00");
}

TEST(MpFloat, MovedFromObjectsStayUsable) {
  MP a(2L, 128);
  MP b(std::move(a));
  a = MP(5L, 64);
  EXPECT_EQ(a, 5.0);
  EXPECT_EQ(b, 2.0);
  MP c = std::move(b) + MP(1L, 128);
  EXPECT_EQ(c, 3.0);
}

TEST(Complex, PrincipalSquareRoot) {
  const PrecisionContext ctx;
  auto s = sqrt(cplx<double>(-4, 0, ctx));
  EXPECT_DOUBLE_EQ(s.re, 0.0);
  EXPECT_DOUBLE_EQ(s.im, 2.0);
  s = sqrt(cplx<double>(-2, -0.0, ctx));
  EXPECT_GE(s.re, 0.0);
  s = sqrt(cplx<double>(3, -4, ctx));
  EXPECT_NEAR(s.re, 2.0, 1e-15);
  EXPECT_NEAR(s.im, -1.0, 1e-15);
  s = sqrt(cplx<double>(-3, 4, ctx));
  EXPECT_NEAR(s.re, 1.0, 1e-15);
  EXPECT_NEAR(s.im, 2.0, 1e-15);
}

TEST(Complex, AbsDoesNotOverflow) {
  const PrecisionContext ctx;
  const double big = 1e300;
  const auto z = cplx<double>(big, big, ctx);
  EXPECT_TRUE(std::isfinite(abs(z)));
  EXPECT_NEAR(abs(z) / big, std::sqrt(2.0), 1e-15);
}

TEST(Complex, DivisionInvertsMultiplication) {
  const PrecisionContext ctx(192);
  const auto a = cplx<MP>(1.5, -2.25, ctx);
  const auto b = cplx<MP>(-0.125, 3.0, ctx);
  const auto q = (a * b) / b;
  EXPECT_LT(d(abs(q - a)), 1e-55);
  const auto c = cplx<MP>(1e-3, 7.0, ctx);
  EXPECT_LT(d(abs((a / c) * c - a)), 1e-55);
}

TEST(Complex, LexicographicOrder) {
  const PrecisionContext ctx;
  EXPECT_TRUE(lex_less(cplx<double>(1, 5, ctx), cplx<double>(2, 0, ctx)));
  EXPECT_TRUE(lex_less(cplx<double>(1, 0, ctx), cplx<double>(1, 1, ctx)));
  EXPECT_FALSE(lex_less(cplx<double>(1, 1, ctx), cplx<double>(1, 1, ctx)));
}

TEST(LuSolve, Examples) {
  const PrecisionContext ctx;
  Matrix<Complex<double>> a1(1, 1, cplx<double>(1, 0, ctx));
  auto x1 = lu_solve<double>(a1, {cplx<double>(7, 0, ctx)}, ctx);
  EXPECT_EQ(x1[0].re, 7.0);

  Matrix<Complex<double>> a2(2, 2, cplx<double>(0, 0, ctx));
  a2(0, 0) = cplx<double>(2, 0, ctx);
  a2(1, 1) = cplx<double>(4, 0, ctx);
  auto x2 = lu_solve<double>(a2, {cplx<double>(2, 0, ctx), cplx<double>(8, 0, ctx)}, ctx);
  EXPECT_EQ(x2[0].re, 1.0);
  EXPECT_EQ(x2[1].re, 2.0);

  // x + y = 3, x - y = 1 by elimination: y = 1, x = 2.
  Matrix<Complex<double>> a3(2, 2, cplx<double>(1, 0, ctx));
  a3(1, 1) = cplx<double>(-1, 0, ctx);
  auto x3 = lu_solve<double>(a3, {cplx<double>(3, 0, ctx), cplx<double>(1, 0, ctx)}, ctx);
  EXPECT_DOUBLE_EQ(x3[0].re, 2.0);
  EXPECT_DOUBLE_EQ(x3[1].re, 1.0);
  EXPECT_EQ(x3[0].im, 0.0);
}

TEST(RealSolve, Examples) {
  const PrecisionContext ctx;
  Matrix<double> a1(1, 1, 1.0);
  EXPECT_EQ(real_solve<double>(a1, {0.0}, ctx)[0], 0.0);

  // Cramer: det = 3, x = (4*2 - 1*5)/3 = 1, y = (2*5 - 1*4)/3 = 2.
  Matrix<double> a2(2, 2, 1.0);
  a2(0, 0) = 2.0;
  a2(1, 1) = 2.0;
  auto x2 = real_solve<double>(a2, {4.0, 5.0}, ctx);
  EXPECT_NEAR(x2[0], 1.0, 1e-15);
  EXPECT_NEAR(x2[1], 2.0, 1e-15);

  Matrix<double> id(2, 2, 0.0);
  id(0, 0) = id(1, 1) = 1.0;
  auto x3 = real_solve<double>(id, {-3.5, 0.25}, ctx);
  EXPECT_EQ(x3[0], -3.5);
  EXPECT_EQ(x3[1], 0.25);
}

TEST(LuSolve, SingularMatrixIsReported) {
  const PrecisionContext ctx;
  Matrix<double> a(2, 2, 1.0);
  a(0, 1) = 2.0;
  a(1, 0) = 2.0;
  a(1, 1) = 4.0;
  EXPECT_THROW(real_solve<double>(a, {1.0, 2.0}, ctx), SingularMatrix);

  // Second pivot ~1e-20 relative to ||A|| = 2: below eps * ||A||.
  Matrix<double> b(2, 2, 1.0);
  b(1, 1) = 1.0 + 1e-20;
  EXPECT_THROW(real_solve<double>(b, {1.0, 2.0}, ctx), SingularMatrix);

  Matrix<Complex<double>> z(1, 1, cplx<double>(0, 0, ctx));
  EXPECT_THROW(lu_solve<double>(z, {cplx<double>(1, 0, ctx)}, ctx), SingularMatrix);
}

TEST(LuSolve, DimensionMismatchIsInputError) {
  const PrecisionContext ctx;
  Matrix<double> a(2, 2, 1.0);
  EXPECT_THROW(real_solve<double>(a, {1.0}, ctx), InputError);
}

namespace {

template <RealScalar Real>
Matrix<Complex<Real>> random_system(std::mt19937& rng, std::size_t n, const PrecisionContext& ctx) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix<Complex<Real>> a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = cplx<Real>(u(rng), u(rng), ctx);
    a(i, i) += cplx<Real>(static_cast<double>(n), 0, ctx);  // diagonally dominant
  }
  return a;
}

template <RealScalar Real>
void check_residual_bound(int bits) {
  const PrecisionContext ctx(bits);
  std::mt19937 rng(1234 + bits);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t n = 1; n <= 8; ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto a = random_system<Real>(rng, n, ctx);
      std::vector<Complex<Real>> b;
      for (std::size_t i = 0; i < n; ++i) b.push_back(cplx<Real>(u(rng), u(rng), ctx));
      const auto x = lu_solve<Real>(a, b, ctx);
      Real res = num::from_int<Real>(0, ctx);
      Real xn = res;
      Real bn = res;
      for (std::size_t i = 0; i < n; ++i) {
        Complex<Real> r = -b[i];
        for (std::size_t j = 0; j < n; ++j) r += a(i, j) * x[j];
        if (res < abs(r)) res = abs(r);
        if (xn < abs(x[i])) xn = abs(x[i]);
        if (bn < abs(b[i])) bn = abs(b[i]);
      }
      const Real bound = num::epsilon<Real>(ctx) * static_cast<long>(64 * n) *
                         (tspectra::testing::inf_norm(a, ctx) * xn + bn);
      EXPECT_LE(res, bound) << "n=" << n << " bits=" << bits;
    }
  }
}

}  // namespace

TEST(LuSolve, ResidualBoundOnRandomSystems) {
  check_residual_bound<double>(53);
  check_residual_bound<MP>(113);
  check_residual_bound<MP>(256);
}

TEST(LuSolve, RefiningPrecisionStaysWithinCoarseBound) {
  // Integer entries are exact in both contexts.
  const PrecisionContext coarse(53);
  const PrecisionContext fine(106);
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> u(-9, 9);
  for (std::size_t n = 2; n <= 8; ++n) {
    Matrix<Complex<double>> ad(n, n);
    Matrix<Complex<MP>> am(n, n);
    std::vector<Complex<double>> bd;
    std::vector<Complex<MP>> bm;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        int re = u(rng), im = u(rng);
        if (i == j) re += 40;
        ad(i, j) = cplx<double>(re, im, coarse);
        am(i, j) = cplx<MP>(re, im, fine);
      }
      int re = u(rng), im = u(rng);
      bd.push_back(cplx<double>(re, im, coarse));
      bm.push_back(cplx<MP>(re, im, fine));
    }
    const auto xd = lu_solve<double>(ad, bd, coarse);
    const auto xm = lu_solve<MP>(am, bm, fine);
    // Residual of the coarse solution, evaluated in the fine context.
    MP res(0L, 106), xn(0L, 106), bn(0L, 106);
    for (std::size_t i = 0; i < n; ++i) {
      Complex<MP> r = -bm[i];
      for (std::size_t j = 0; j < n; ++j) r += am(i, j) * cplx<MP>(xd[j].re, xd[j].im, fine);
      if (res < abs(r)) res = abs(r);
      if (xn < abs(xm[i])) xn = abs(xm[i]);
      if (bn < abs(bm[i])) bn = abs(bm[i]);
    }
    const double bound = 64.0 * n * coarse.eps() * (d(tspectra::testing::inf_norm(am, fine) * xn) + d(bn));
    EXPECT_LE(d(res), bound) << n;
  }
}

TEST(WithScalar, DispatchesOnWidth) {
  EXPECT_TRUE(with_scalar(PrecisionContext(53), []<class Real>() { return std::is_same_v<Real, double>; }));
  EXPECT_TRUE(with_scalar(PrecisionContext(54), []<class Real>() { return std::is_same_v<Real, MP>; }));
}

TEST(ParallelFor, RethrowsLowestFailingIndex) {
  std::vector<int> hits(16, 0);
  try {
    parallel_for(16, 4, [&](std::size_t i) {
      hits[i] = 1;
      if (i == 3 || i == 11) throw std::runtime_error(std::to_string(i));
    });
    FAIL() << "expected an exception";
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "3");
  }
  for (int h : hits) EXPECT_EQ(h, 1);
}
