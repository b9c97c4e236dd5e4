#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cubeq/averages.hpp"
#include "cubeq/reference.hpp"

using namespace cubeq;

namespace {

const CubicForm kCusp(1, {{{3}, 1}});

CubicForm mixed2() { return CubicForm(2, {{{3, 0}, 1}, {{1, 2}, -2}, {{0, 3}, 3}, {{2, 1}, 1}}); }

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST(Averages, CuspidalD) {
  SpectrumCache cache(kCusp);
  const auto r = compute_D(AugmentedForm(kCusp), 5, 0, cache);
  EXPECT_NEAR(r.value, 20.0 * std::sqrt(5.0), 1e-9);
  EXPECT_NEAR(r.bound, std::pow(5.0, 2.5), 1e-9);
  EXPECT_NEAR(r.ratio, 0.8, 1e-12);
  EXPECT_DOUBLE_EQ(compute_D(AugmentedForm(kCusp), 1, 0, cache).value, 1.0);
}

TEST(Averages, DMatchesLiteralSum) {
  const AugmentedForm f(mixed2());
  SpectrumCache cache(f.base());
  for (std::int64_t k : {3, 5, 7, 9, 4}) {
    for (std::int64_t b : {0, 1, 2}) {
      double direct = 0.0;
      for (std::int64_t x = 0; x < k; ++x) {
        for (std::int64_t y = 0; y < k; ++y) {
          const std::vector<std::int64_t> m{x, y, b};
          direct += std::abs(reference::q_literal(f, m, k));
        }
      }
      EXPECT_LT(rel(compute_D(f, k, b, cache).value, direct), 1e-9) << k << " " << b;
    }
  }
}

TEST(Averages, DMultiplicative) {
  const AugmentedForm f(CubicForm::fermat(2));
  SpectrumCache cache(f.base());
  const double d15 = compute_D(f, 15, 0, cache).value;
  const double d3 = compute_D(f, 3, 0, cache).value;
  const double d5 = compute_D(f, 5, 0, cache).value;
  EXPECT_LT(rel(d15, d3 * d5), 1e-6);
  const double d35 = compute_D(f, 35, 0, cache).value;
  EXPECT_LT(rel(d35, d5 * compute_D(f, 7, 0, cache).value), 1e-6);
}

TEST(Averages, CuspidalD2) {
  SpectrumCache cache(kCusp);
  const auto r = compute_D2(AugmentedForm(kCusp), 5, 1, 0, cache);
  EXPECT_NEAR(r.value, 500.0, 1e-8);
  ASSERT_TRUE(r.check && r.closed);
  EXPECT_NEAR(*r.check, 500.0, 1e-8);
  EXPECT_NEAR(*r.closed, 500.0, 1e-8);
  EXPECT_DOUBLE_EQ(r.bound, 625.0);
}

TEST(Averages, D2DualRoute) {
  for (const auto& C : {kCusp, mixed2(), CubicForm::fermat(2)}) {
    const AugmentedForm f(C);
    SpectrumCache cache(C);
    for (auto [p, alpha] : std::vector<std::pair<std::int64_t, int>>{{3, 2}, {3, 1}, {5, 1}, {2, 2}, {5, 2}, {3, 3}}) {
      if (C.n() == 2 && p == 5 && alpha == 2) continue;
      for (std::int64_t b : {0, 1, 4}) {
        const auto r = compute_D2(f, p, alpha, b, cache);
        ASSERT_TRUE(r.check);
        EXPECT_LT(rel(r.value, *r.check), 1e-6) << p << "^" << alpha << " b=" << b;
        if (r.closed) EXPECT_LT(rel(r.value, *r.closed), 1e-6);
        EXPECT_LE(r.value, r.bound);
      }
    }
  }
}

TEST(Averages, EIdentities) {
  const AugmentedForm f(mixed2());
  SpectrumCache cache(f.base());
  for (std::int64_t p : {3, 5, 7}) {
    const double d = compute_D(f, p, 0, cache).value;
    EXPECT_LT(rel(compute_E(f, p, 0, cache).value, (p - 1) * d), 1e-12);
  }
  const double e15 = compute_E(f, 15, 0, cache).value;
  EXPECT_LT(rel(e15, compute_E(f, 3, 0, cache).value * compute_E(f, 5, 0, cache).value), 1e-6);
}

TEST(Averages, E2ClosedForm) {
  {
    SpectrumCache cache(kCusp);
    const auto r = compute_E2(AugmentedForm(kCusp), 5, 1, cache);
    ASSERT_TRUE(r.check);
    EXPECT_LT(rel(r.value, *r.check), 1e-6);
  }
  for (const auto& C : {mixed2(), CubicForm::fermat(3)}) {
    SpectrumCache cache(C);
    for (std::int64_t p : {3, 5, 7}) {
      for (std::int64_t r : {1, 2}) {
        const auto rep = compute_E2(AugmentedForm(C), p, r, cache);
        ASSERT_TRUE(rep.check);
        EXPECT_LT(rel(rep.value, *rep.check), 1e-6);
        EXPECT_LE(rep.value, rep.bound);
      }
    }
  }
}

TEST(Averages, RootCounts) {
  const CubicForm lin(1, {{{3}, 1}});
  // C(l) = l^3: l = 1 gives 1, l = 0 gives 0.
  const std::vector<std::int64_t> one{1}, zero{0};
  EXPECT_EQ(r1_r2_counts(lin, 5, 1, one).R1, 2);
  EXPECT_EQ(r1_r2_counts(lin, 5, 1, zero).R1, 1);
  const CubicForm three(1, {{{3}, 3}});
  const auto rc = r1_r2_counts(three, 3, 2, one);
  EXPECT_EQ(rc.R1, 0);
  EXPECT_EQ(rc.kappa, 1);
  const auto z = r1_r2_counts(lin, 3, 2, zero);
  EXPECT_EQ(z.kappa, 2);
  EXPECT_TRUE(z.within_bounds());
}

TEST(Averages, RootCountsSumToPointCount) {
  for (const auto& C : {mixed2(), CubicForm::fermat(2)}) {
    for (std::int64_t p : {3, 5, 7, 11}) {
      std::uint64_t total = 0;
      for (std::int64_t a = 0; a < p; ++a) {
        for (std::int64_t b = 0; b < p; ++b) {
          const std::vector<std::int64_t> l{a, b};
          const auto rc = r1_r2_counts(C, p, 1, l);
          EXPECT_LE(rc.R1, 2);
          EXPECT_TRUE(rc.within_bounds());
          total += rc.R1;
        }
      }
      EXPECT_EQ(total, reference::point_count_literal(AugmentedForm(C), p));
      for (int alpha : {2, 3}) {
        for (std::int64_t a = 0; a < 9; ++a) {
          const std::vector<std::int64_t> l{a, 2 * a + 1};
          EXPECT_TRUE(r1_r2_counts(C, p, alpha, l).within_bounds());
        }
      }
    }
  }
}

TEST(Averages, LatticeCounts) {
  const IntPolynomial m1(3, {{{1, 0, 0}, 1}});
  const IntPolynomial m2(3, {{{0, 1, 0}, 1}});
  const IntPolynomial sq(3, {{{2, 0, 0}, 1}, {{0, 2, 0}, 1}});
  const std::vector<std::int64_t> r0{0, 0, 0};
  const auto a = n_count({m1}, 10, r0, 1);
  EXPECT_EQ(a.count, 441u);
  EXPECT_LE(a.ratio, 27.0);
  EXPECT_EQ(n_count({m1, m2}, 10, r0, 1).count, 21u);
  EXPECT_EQ(n_count({sq}, 5, r0, 1).count, 11u);
  // Residue classes: m = (1, *, *) mod 3 never has m1 = 0.
  const std::vector<std::int64_t> r1{1, 0, 2};
  EXPECT_EQ(n_count({m1}, 10, r1, 3).count, 0u);
  const std::vector<std::int64_t> r2{0, 1, 2};
  EXPECT_EQ(n_count({m1}, 10, r2, 3).count, 7u * 7u);
  EXPECT_THROW(n_count({m1}, 1000, r0, 1, 1000), BudgetExceeded);
}

TEST(Averages, BadSetScanCuspidal) {
  const auto T = build_spectrum(kCusp, 5);
  const auto s = bad_set_scan(T, {4, 2, 0.5});
  EXPECT_EQ(s.thresholds, (std::vector<double>{0.5, 2, 4}));
  EXPECT_EQ(s.exceed_counts, (std::vector<std::uint64_t>{4, 0, 0}));
  EXPECT_NEAR(s.max_ratio, 1.0, 1e-12);
  std::uint64_t total = 0;
  for (auto c : s.histogram) total += c;
  EXPECT_EQ(total, 5u);
  EXPECT_EQ(s.histogram[0], 1u);   // T(0) = 0
  EXPECT_EQ(s.histogram[16], 4u);  // ratio 1 = 2^0
}

TEST(Averages, BadSetMonotone) {
  const auto T = build_spectrum(CubicForm::fermat(3), 7);
  const auto s = bad_set_scan(T, {0.1, 0.5, 1, 2, 3, 8});
  for (std::size_t i = 1; i < s.exceed_counts.size(); ++i) EXPECT_LE(s.exceed_counts[i], s.exceed_counts[i - 1]);
  EXPECT_LE(s.exceed_counts[0], 343u);
}

// Fermat n=3 has |T| = 2 p^{3/2} exactly on many entries; numpy FFT oracle.
TEST(Averages, BadSetTiesAtThreshold) {
  const std::vector<std::pair<std::int64_t, std::uint64_t>> at_one{{5, 16}, {7, 0}, {11, 190}, {13, 216}};
  for (auto [p, expect] : at_one) {
    const auto s = bad_set_scan(build_spectrum(CubicForm::fermat(3), p), {1, 2});
    EXPECT_EQ(s.exceed_counts[0], expect) << p;
    EXPECT_EQ(s.exceed_counts[1], 0u) << p;
  }
}

TEST(Averages, Tables) {
  SpectrumCache cache(kCusp);
  const auto t = average_table({compute_D(AugmentedForm(kCusp), 5, 0, cache)});
  std::ostringstream out;
  t.write_csv(out);
  EXPECT_EQ(out.str().substr(0, 37), "p,quantity,parameter,value,bound,rati");
  const auto b = bad_set_table({bad_set_scan(build_spectrum(kCusp, 5), {2})});
  std::ostringstream o2;
  b.write_csv(o2);
  EXPECT_EQ(o2.str(), "p,tau,exceed_count,p_pow_nminus1,fraction\n5,2,0,1,0\n");
}
