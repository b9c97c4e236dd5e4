#include "cubeq/modular.hpp"

#include <cmath>
#include <numbers>

#include "cubeq/forms.hpp"

namespace cubeq {

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    const std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::int64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<std::int64_t> primes_up_to(std::int64_t limit) {
  std::vector<std::int64_t> out;
  for (std::int64_t p = 2; p <= limit; ++p) {
    if (is_prime(p)) out.push_back(p);
  }
  return out;
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t k) {
  if (k < 1) throw InvalidInput("modulus must be positive");
  if (k == 1) return 0;
  std::int64_t old_r = mod(a, k), r = k;
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::int64_t t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) throw InvalidInput("element is not invertible modulo k");
  return mod(old_s, k);
}

int jacobi(std::int64_t a, std::int64_t k) {
  if (k < 1 || k % 2 == 0) throw InvalidInput("Jacobi symbol needs an odd positive modulus");
  a = mod(a, k);
  int result = 1;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      const std::int64_t r = k % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, k);
    if (a % 4 == 3 && k % 4 == 3) result = -result;
    a %= k;
  }
  return k == 1 ? result : 0;
}

std::int64_t ramanujan(std::int64_t p, int alpha, std::int64_t d) {
  if (alpha < 1) throw InvalidInput("Ramanujan sum needs alpha >= 1");
  std::int64_t pa1 = 1;
  for (int i = 0; i < alpha - 1; ++i) pa1 *= p;
  const std::int64_t pa = pa1 * p;
  if (d % pa == 0) return pa1 * (p - 1);
  if (d % pa1 == 0) return -pa1;
  return 0;
}

Complex quadratic_gauss_sum(std::int64_t a, std::int64_t k) {
  if (k < 1) throw InvalidInput("modulus must be positive");
  const UnitRootTable e(k);
  Complex s = 0.0;
  for (std::int64_t t = 0; t < k; ++t) s += e[mod(mod(a, k) * ((t * t) % k), k)];
  return s;
}

Complex gauss_sum(std::int64_t p) {
  if (p < 3 || !is_prime(p)) throw InvalidInput("gauss_sum needs an odd prime");
  return quadratic_gauss_sum(1, p);
}

std::pair<std::int64_t, std::int64_t> crt_pair(std::int64_t k, std::int64_t k2) {
  if (k < 1 || k2 < 1) throw InvalidInput("moduli must be positive");
  if (gcd64(k, k2) != 1) throw InvalidInput("CRT moduli must be coprime");
  return {inverse_mod(k2, k), inverse_mod(k, k2)};
}

std::int64_t PrimePower::value() const {
  std::int64_t v = 1;
  for (int i = 0; i < alpha; ++i) v *= p;
  return v;
}

Modulus::Modulus(std::int64_t k) : k_(k) {
  if (k < 1) throw InvalidInput("modulus must be positive");
  std::int64_t rest = k;
  for (std::int64_t p = 2; p * p <= rest; ++p) {
    if (rest % p != 0) continue;
    PrimePower pp{p, 0};
    while (rest % p == 0) {
      rest /= p;
      ++pp.alpha;
    }
    factors_.push_back(pp);
  }
  if (rest > 1) factors_.push_back({rest, 1});
}

std::int64_t Modulus::totient() const {
  std::int64_t phi = 1;
  for (const auto& f : factors_) phi *= (f.p - 1) * (f.value() / f.p);
  return phi;
}

Modulus::CubeFullSplit Modulus::cube_full_split() const {
  CubeFullSplit s;
  for (const auto& f : factors_) {
    if (f.alpha == 1) {
      s.k1 *= f.value();
    } else if (f.alpha == 2) {
      s.k2 *= f.value();
    } else {
      s.l3 *= f.value();
    }
  }
  return s;
}

SquareFullSplit square_full_split(std::int64_t p, int alpha) {
  if (alpha < 2) throw InvalidInput("square-full split needs alpha >= 2");
  SquareFullSplit s;
  const int half = alpha / 2;
  for (int i = 0; i < half; ++i) s.q1 *= p;
  if (alpha % 2 == 1) s.q2 = p;
  return s;
}

UnitRootTable::UnitRootTable(std::int64_t k) : k_(k) {
  if (k < 1) throw InvalidInput("modulus must be positive");
  roots_.resize(static_cast<std::size_t>(k));
  const double step = 2.0 * std::numbers::pi / static_cast<double>(k);
  for (std::int64_t t = 0; t < k; ++t) {
    // Use the symmetric representative to keep the angle small.
    const std::int64_t s = (2 * t > k) ? t - k : t;
    const double angle = step * static_cast<double>(s);
    roots_[static_cast<std::size_t>(t)] = Complex(std::cos(angle), std::sin(angle));
  }
}

const Complex& UnitRootTable::at(std::int64_t t) const { return roots_[static_cast<std::size_t>(mod(t, k_))]; }

}  // namespace cubeq
