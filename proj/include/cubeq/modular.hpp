#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "cubeq/errors.hpp"

namespace cubeq {

using Complex = std::complex<double>;

std::int64_t gcd64(std::int64_t a, std::int64_t b);
bool is_prime(std::int64_t n);
std::vector<std::int64_t> primes_up_to(std::int64_t limit);

// Inverse of a modulo k; for k == 1 returns 0. Throws InvalidInput when
// gcd(a, k) != 1.
std::int64_t inverse_mod(std::int64_t a, std::int64_t k);

// Jacobi symbol (a|k) for odd k >= 1.
int jacobi(std::int64_t a, std::int64_t k);

// Ramanujan sum c_{p^alpha}(d) by its closed form.
std::int64_t ramanujan(std::int64_t p, int alpha, std::int64_t d);

// sum_{t mod p} e_p(t^2), by direct summation.
Complex gauss_sum(std::int64_t p);
// sum_{t mod k} e_k(a t^2), by direct summation.
Complex quadratic_gauss_sum(std::int64_t a, std::int64_t k);

// For coprime k, k2: the inverse of k2 mod k and the inverse of k mod k2.
std::pair<std::int64_t, std::int64_t> crt_pair(std::int64_t k, std::int64_t k2);

struct PrimePower {
  std::int64_t p = 0;
  int alpha = 0;
  std::int64_t value() const;
};

// A positive modulus with its factorization, primes increasing.
class Modulus {
 public:
  explicit Modulus(std::int64_t k);

  std::int64_t k() const noexcept { return k_; }
  const std::vector<PrimePower>& factors() const noexcept { return factors_; }
  bool is_prime() const noexcept { return factors_.size() == 1 && factors_[0].alpha == 1; }
  std::int64_t totient() const;

  // k = k1 * k2 * l3 with k1 squarefree (alpha = 1), k2 the product of exact
  // prime squares and l3 cube-full.
  struct CubeFullSplit {
    std::int64_t k1 = 1, k2 = 1, l3 = 1;
  };
  CubeFullSplit cube_full_split() const;

 private:
  std::int64_t k_;
  std::vector<PrimePower> factors_;
};

// q = q1^2 q2 with q2 squarefree and q2 | q1, for square-full q = p^alpha.
struct SquareFullSplit {
  std::int64_t q1 = 1;
  std::int64_t q2 = 1;
};
SquareFullSplit square_full_split(std::int64_t p, int alpha);

// Table of e_k(t) = exp(2 pi i t / k) for t = 0..k-1.
class UnitRootTable {
 public:
  explicit UnitRootTable(std::int64_t k);

  std::int64_t modulus() const noexcept { return k_; }
  // t must already be reduced into [0, k).
  const Complex& operator[](std::int64_t t) const { return roots_[static_cast<std::size_t>(t)]; }
  const Complex& at(std::int64_t t) const;

 private:
  std::int64_t k_;
  std::vector<Complex> roots_;
};

}  // namespace cubeq
