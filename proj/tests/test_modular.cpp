#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cubeq/modular.hpp"
#include "cubeq/reference.hpp"

using namespace cubeq;

TEST(Modular, JacobiExamples) {
  for (std::int64_t k = 1; k < 60; k += 2) EXPECT_EQ(jacobi(1, k), 1);
  EXPECT_EQ(jacobi(3, 7), -1);
  EXPECT_EQ(jacobi(2, 15), 1);
  EXPECT_EQ(jacobi(5, 15), 0);
  EXPECT_EQ(jacobi(-1, 7), -1);
  EXPECT_THROW(jacobi(3, 8), InvalidInput);
}

TEST(Modular, JacobiMatchesSquaresModPrime) {
  for (std::int64_t p : primes_up_to(60)) {
    if (p == 2) continue;
    std::vector<int> sq(p, -1);
    sq[0] = 0;
    for (std::int64_t t = 1; t < p; ++t) sq[(t * t) % p] = 1;
    for (std::int64_t a = -p; a < 2 * p; ++a) EXPECT_EQ(jacobi(a, p), sq[mod(a, p)]);
  }
}

TEST(Modular, JacobiMultiplicative) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::int64_t> a(-500, 500), k(0, 200);
  for (int i = 0; i < 500; ++i) {
    const std::int64_t a1 = a(rng), a2 = a(rng);
    const std::int64_t k1 = 2 * k(rng) + 1, k2 = 2 * k(rng) + 1;
    EXPECT_EQ(jacobi(a1 * a2, k1), jacobi(a1, k1) * jacobi(a2, k1));
    EXPECT_EQ(jacobi(a1, k1 * k2), jacobi(a1, k1) * jacobi(a1, k2));
  }
}

TEST(Modular, RamanujanExamples) {
  EXPECT_EQ(ramanujan(3, 2, 9), 6);
  EXPECT_EQ(ramanujan(3, 2, 3), -3);
  EXPECT_EQ(ramanujan(5, 1, 2), -1);
  EXPECT_EQ(ramanujan(5, 1, 0), 4);
}

TEST(Modular, RamanujanMatchesCharacterSum) {
  for (std::int64_t p : primes_up_to(343)) {
    std::int64_t q = p;
    for (int alpha = 1; q <= 343; ++alpha, q *= p) {
      for (std::int64_t d = -q; d <= q; ++d) {
        const auto lit = reference::ramanujan_literal(p, alpha, d);
        EXPECT_NEAR(lit.real(), static_cast<double>(ramanujan(p, alpha, d)), 1e-9 * q);
        EXPECT_NEAR(lit.imag(), 0.0, 1e-9 * q);
      }
    }
  }
}

TEST(Modular, GaussSums) {
  auto g5 = gauss_sum(5);
  EXPECT_NEAR(g5.real(), std::sqrt(5.0), 1e-12);
  EXPECT_NEAR(g5.imag(), 0.0, 1e-12);
  auto g3 = gauss_sum(3);
  EXPECT_NEAR(g3.real(), 0.0, 1e-12);
  EXPECT_NEAR(g3.imag(), std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(std::norm(gauss_sum(13)), 13.0, 1e-8);
  for (std::int64_t p : primes_up_to(100)) {
    if (p == 2) continue;
    const auto g = gauss_sum(p);
    const double sign = (p % 4 == 1) ? 1.0 : -1.0;
    EXPECT_NEAR(std::abs(g * g - Complex(sign * p)), 0.0, 1e-8 * p);
  }
  EXPECT_THROW(gauss_sum(9), InvalidInput);
}

TEST(Modular, CrtPair) {
  EXPECT_EQ(crt_pair(5, 7), (std::pair<std::int64_t, std::int64_t>{3, 3}));
  EXPECT_EQ(crt_pair(4, 9), (std::pair<std::int64_t, std::int64_t>{1, 7}));
  EXPECT_EQ(crt_pair(1, 9), (std::pair<std::int64_t, std::int64_t>{0, 1}));
  EXPECT_THROW(crt_pair(6, 9), InvalidInput);
  for (std::int64_t k = 1; k < 40; ++k) {
    for (std::int64_t k2 = 1; k2 < 40; ++k2) {
      if (gcd64(k, k2) != 1) continue;
      const auto [a, b] = crt_pair(k, k2);
      EXPECT_EQ((a * k2) % k, 1 % k);
      EXPECT_EQ((b * k) % k2, 1 % k2);
    }
  }
}

TEST(Modular, ModulusFactorization) {
  const Modulus m(2 * 2 * 2 * 9 * 25 * 7);
  ASSERT_EQ(m.factors().size(), 4u);
  std::int64_t prod = 1;
  for (const auto& f : m.factors()) prod *= f.value();
  EXPECT_EQ(prod, m.k());
  EXPECT_EQ(m.totient(), 4 * 6 * 20 * 6);
  const auto s = m.cube_full_split();
  EXPECT_EQ(s.k1, 7);
  EXPECT_EQ(s.k2, 225);
  EXPECT_EQ(s.l3, 8);
  EXPECT_TRUE(Modulus(13).is_prime());
  EXPECT_FALSE(Modulus(1).is_prime());
  EXPECT_THROW(Modulus(0), InvalidInput);
}

TEST(Modular, SquareFullSplit) {
  for (std::int64_t p : {3, 5, 7}) {
    for (int alpha = 2; alpha < 7; ++alpha) {
      const auto s = square_full_split(p, alpha);
      std::int64_t q = 1;
      for (int i = 0; i < alpha; ++i) q *= p;
      EXPECT_EQ(s.q1 * s.q1 * s.q2, q);
      EXPECT_EQ(s.q1 % s.q2, 0);
      EXPECT_TRUE(s.q2 == 1 || s.q2 == p);
    }
  }
}

TEST(Modular, UnitRoots) {
  for (std::int64_t k : {1, 2, 7, 343, 1000}) {
    const UnitRootTable e(k);
    for (std::int64_t t = 0; t < k; ++t) {
      EXPECT_NEAR(std::abs(e[t]), 1.0, 4 * 2.2e-16);
      const std::int64_t s = (t * 7 + 3) % k;
      EXPECT_LT(std::abs(e[t] * e[s] - e[(t + s) % k]), 1e-12);
    }
  }
}

TEST(Modular, Inverse) {
  EXPECT_EQ(inverse_mod(3, 7), 5);
  EXPECT_EQ(inverse_mod(-1, 7), 6);
  EXPECT_EQ(inverse_mod(5, 1), 0);
  EXPECT_THROW(inverse_mod(3, 9), InvalidInput);
}
