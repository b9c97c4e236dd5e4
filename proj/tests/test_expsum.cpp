#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cubeq/expsum.hpp"
#include "cubeq/reference.hpp"

using namespace cubeq;

namespace {

const CubicForm kCusp(1, {{{3}, 1}});

CubicForm mixed2() { return CubicForm(2, {{{3, 0}, 1}, {{1, 2}, -2}, {{0, 3}, 3}, {{2, 1}, 1}}); }

std::vector<std::int64_t> random_m(std::mt19937_64& rng, int len, std::int64_t k) {
  std::uniform_int_distribution<std::int64_t> d(-k, 2 * k);
  std::vector<std::int64_t> m(len);
  for (auto& v : m) v = d(rng);
  return m;
}

void expect_close(const Complex& a, const Complex& b, double tol) {
  EXPECT_LE(std::abs(a - b), tol) << a << " vs " << b;
}

}  // namespace

TEST(ExpSum, TrivialModulus) {
  const AugmentedForm f(CubicForm::fermat(3));
  const std::vector<std::int64_t> m{4, -1, 2, 9};
  const auto v = q_naive(f, m, 1);
  EXPECT_EQ(v.value, Complex(1.0, 0.0));
  EXPECT_EQ(q_crt(f, m, Modulus(1)).value, Complex(1.0, 0.0));
}

TEST(ExpSum, CuspidalZeroFrequency) {
  const AugmentedForm f(kCusp);
  const std::vector<std::int64_t> m{0, 0};
  for (std::int64_t k : {5, 7}) {
    const auto v = q_naive(f, m, k);
    EXPECT_LT(std::abs(v.value), 1e-9);
    EXPECT_LT(std::abs(q_gauss(f, m, k).value), 1e-9);
  }
}

TEST(ExpSum, CuspidalGaussMagnitude) {
  const AugmentedForm f(kCusp);
  const std::vector<std::int64_t> m{1, 0};
  EXPECT_NEAR(std::abs(q_gauss(f, m, 5).value), 5.0 * std::sqrt(5.0), 1e-9);
  EXPECT_NEAR(std::abs(q_naive(f, m, 5).value), 11.180339887498949, 1e-9);
}

TEST(ExpSum, NaiveMatchesLiteral) {
  std::mt19937_64 rng(21);
  const std::vector<CubicForm> forms{kCusp, CubicForm::fermat(2), mixed2()};
  for (const auto& C : forms) {
    const AugmentedForm f(C);
    for (std::int64_t k : {2, 3, 4, 5, 6, 8, 9, 12}) {
      for (int s = 0; s < 4; ++s) {
        const auto m = random_m(rng, f.arity(), k);
        const auto v = q_naive(f, m, k);
        const auto lit = reference::q_literal(f, m, k);
        expect_close(v.value, lit, 1e-8 * std::pow(k, f.arity() + 1));
        EXPECT_LE(v.err, 1e-6 * std::pow(k, f.n() + 2));
      }
    }
  }
}

// The Gauss route is exact as a complex number (not only in magnitude).
TEST(ExpSum, GaussMatchesNaive) {
  std::mt19937_64 rng(5);
  const std::vector<CubicForm> forms{kCusp, CubicForm::fermat(2), mixed2(), CubicForm::fermat(3)};
  for (const auto& C : forms) {
    const AugmentedForm f(C);
    for (std::int64_t k : {3, 5, 7, 9, 15}) {
      for (int s = 0; s < 6; ++s) {
        const auto m = random_m(rng, f.arity(), k);
        const auto a = q_gauss(f, m, k);
        const auto b = q_naive(f, m, k);
        EXPECT_LE(relative_gap(a.value, b.value), 1e-9) << k;
        EXPECT_NEAR(std::abs(a.value), std::abs(b.value), a.err + b.err + 1e-9);
      }
    }
  }
}

TEST(ExpSum, GaussRejectsEvenModulus) {
  const AugmentedForm f(CubicForm::fermat(2));
  const std::vector<std::int64_t> m{0, 0, 0};
  EXPECT_THROW(q_gauss(f, m, 4), InvalidInput);
  EXPECT_THROW(q_gauss(f, std::vector<std::int64_t>{0, 0}, 5), InvalidInput);
}

TEST(ExpSum, BudgetRefusal) {
  const AugmentedForm f(CubicForm::fermat(6));
  const std::vector<std::int64_t> m(7, 0);
  Budget tight;
  tight.terms = 1000;
  EXPECT_THROW(q_naive(f, m, 7, tight), BudgetExceeded);
  EXPECT_THROW(q_gauss(f, m, 7, tight), BudgetExceeded);
  tight.entries = 100;
  tight.terms = 1'000'000'000;
  EXPECT_THROW(build_spectrum(CubicForm::fermat(6), 7, tight), BudgetExceeded);
}

TEST(ExpSum, CuspidalSpectrum) {
  const auto T = build_spectrum(kCusp, 5);
  const std::vector<std::int64_t> zero{0};
  EXPECT_LT(std::abs(T.at(zero)), 1e-12);
  for (std::int64_t b = 1; b < 5; ++b) {
    const std::vector<std::int64_t> mb{b};
    EXPECT_NEAR(std::abs(T.at(mb)), std::sqrt(5.0), 1e-12);
  }
  EXPECT_EQ(T.zero_count(), 1u);
  EXPECT_LT(std::abs(q_char(T, zero).value), 1e-12);
  const std::vector<std::int64_t> one{1};
  EXPECT_NEAR(std::abs(q_char(T, one).value), 5.0 * std::sqrt(5.0), 1e-10);
}

TEST(ExpSum, SpectrumMatchesLiteral) {
  std::mt19937_64 rng(8);
  for (const auto& C : {CubicForm::fermat(2), mixed2(), CubicForm::fermat(3)}) {
    for (std::int64_t p : {3, 5, 7, 11}) {
      const auto T = build_spectrum(C, p);
      EXPECT_EQ(T.zero_count(), reference::zero_count_literal(C, p));
      for (int s = 0; s < 10; ++s) {
        const auto m = random_m(rng, C.n(), p);
        expect_close(T.at(m), reference::spectrum_literal(C, m, p), 1e-9);
      }
    }
  }
}

TEST(ExpSum, Parseval) {
  const auto T = build_spectrum(CubicForm::fermat(3), 7);
  EXPECT_EQ(T.zero_count(), 55u);
  EXPECT_NEAR(T.parseval_sum() / T.parseval_expected(), 1.0, 1e-8);
  EXPECT_DOUBLE_EQ(T.parseval_expected(), 343.0 * (343 - 55));
  for (std::int64_t p : {3, 5, 11, 13}) {
    const auto S = build_spectrum(mixed2(), p);
    EXPECT_NEAR(S.parseval_sum() / S.parseval_expected(), 1.0, 1e-8);
  }
}

TEST(ExpSum, CharMatchesNaiveExhaustive) {
  const AugmentedForm f(CubicForm::fermat(2));
  const auto T = build_spectrum(f.base(), 7);
  for (std::int64_t a = 0; a < 7; ++a) {
    for (std::int64_t b = 0; b < 7; ++b) {
      const std::vector<std::int64_t> mh{a, b}, m{a, b, 0};
      const auto c = q_char(T, mh);
      const auto v = q_naive(f, m, 7);
      EXPECT_LE(std::abs(c.value - v.value), c.err + v.err + 1e-9);
    }
  }
}

TEST(ExpSum, QTableMatchesGauss) {
  std::mt19937_64 rng(3);
  for (const auto& C : {kCusp, mixed2(), CubicForm::fermat(3)}) {
    const AugmentedForm f(C);
    for (std::int64_t p : {3, 5, 7}) {
      const auto table = build_q_table(f, p);
      for (int s = 0; s < 15; ++s) {
        const auto m = random_m(rng, f.arity(), p);
        const auto t = table.at(m);
        const auto g = q_gauss(f, m, p);
        EXPECT_LE(std::abs(t.value - g.value), t.err + g.err + 1e-9);
      }
      const auto slice = table.slice(0);
      EXPECT_EQ(slice.size(), table.data().size() / p);
    }
  }
}

TEST(ExpSum, CrtMatchesNaive) {
  std::mt19937_64 rng(17);
  const AugmentedForm f(CubicForm::fermat(2));
  for (std::int64_t k : {6, 10, 15, 35, 45, 12}) {
    for (int s = 0; s < 5; ++s) {
      const auto m = random_m(rng, 3, k);
      const auto c = q_crt(f, m, Modulus(k));
      const auto v = q_naive(f, m, k);
      EXPECT_LE(relative_gap(c.value, v.value), 1e-6) << k;
    }
  }
  // m = 0 factors without twists.
  const std::vector<std::int64_t> zero{0, 0, 0};
  expect_close(q_naive(f, zero, 35).value, q_naive(f, zero, 5).value * q_naive(f, zero, 7).value, 1e-6);
}

TEST(ExpSum, UnitTwistMagnitude) {
  const AugmentedForm f(mixed2());
  std::mt19937_64 rng(2);
  for (std::int64_t k : {5, 9, 15, 35}) {
    const auto m = random_m(rng, 3, k);
    const std::vector<std::int64_t> base{m[0], m[1], 0};
    const double ref = std::abs(q_crt(f, base, Modulus(k)).value);
    for (std::int64_t a = 1; a < k; ++a) {
      if (gcd64(a, k) != 1) continue;
      const std::vector<std::int64_t> twisted{a * m[0], a * m[1], 0};
      EXPECT_NEAR(std::abs(q_crt(f, twisted, Modulus(k)).value), ref, 1e-6 * std::max(1.0, ref));
    }
  }
}

TEST(ExpSum, StationaryMatchesNaive) {
  std::mt19937_64 rng(4);
  struct Case {
    CubicForm C;
    std::int64_t p;
    int alpha;
  };
  const std::vector<Case> cases{{kCusp, 3, 2}, {kCusp, 3, 3}, {kCusp, 5, 2}, {CubicForm::fermat(2), 5, 3},
                                {CubicForm::fermat(2), 3, 2}, {mixed2(), 7, 2}, {mixed2(), 3, 3}};
  for (const auto& c : cases) {
    const AugmentedForm f(c.C);
    const StationaryPlan plan(f, c.p, c.alpha);
    std::int64_t q = 1;
    for (int i = 0; i < c.alpha; ++i) q *= c.p;
    EXPECT_EQ(plan.modulus(), q);
    for (int s = 0; s < 8; ++s) {
      auto m = random_m(rng, f.arity(), q);
      if (s == 0) std::fill(m.begin(), m.end(), 0);
      const auto st = plan.evaluate(m);
      const auto nv = q_naive(f, m, q);
      EXPECT_LE(relative_gap(st.value, nv.value), 1e-6) << c.p << "^" << c.alpha;
      if (s == 0) {
        EXPECT_LE(std::abs(st.value.imag()), st.err + 1e-9);
        EXPECT_LE(std::abs(nv.value.imag()), nv.err);
      }
    }
  }
}

TEST(ExpSum, PrimePowerRouting) {
  const AugmentedForm f(kCusp);
  const std::vector<std::int64_t> m{1, 1};
  EXPECT_EQ(q_prime_power(f, m, 2, 3).method, Method::Naive);
  EXPECT_EQ(q_prime_power(f, m, 3, 2).method, Method::Stationary);
  EXPECT_THROW(q_prime_power(f, m, 3, 1), InvalidInput);
  EXPECT_THROW(StationaryPlan(f, 2, 3), InvalidInput);
}

TEST(ExpSum, ThreadCountDoesNotChangeBits) {
  const AugmentedForm f(CubicForm::fermat(3));
  const std::vector<std::int64_t> m{1, 2, 3, 4};
  const auto a = q_naive(f, m, 25, {}, ParallelContext{1});
  const auto b = q_naive(f, m, 25, {}, ParallelContext{4});
  EXPECT_EQ(a.value, b.value);
  const auto s1 = build_spectrum(f.base(), 11, {}, ParallelContext{1});
  const auto s8 = build_spectrum(f.base(), 11, {}, ParallelContext{8});
  EXPECT_EQ(s1.data(), s8.data());
  const auto g1 = q_gauss(f, m, 27, {}, ParallelContext{1});
  const auto g3 = q_gauss(f, m, 27, {}, ParallelContext{3});
  EXPECT_EQ(g1.value, g3.value);
}
