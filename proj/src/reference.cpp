#include "cubeq/reference.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace cubeq::reference {

namespace {

std::complex<double> unit_root(std::int64_t t, std::int64_t k) {
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(mod(t, k)) / static_cast<double>(k));
}

// Odometer over (Z/k)^len.
bool next(std::vector<std::int64_t>& x, std::int64_t k) {
  for (auto& v : x) {
    if (++v < k) return true;
    v = 0;
  }
  return false;
}

std::int64_t powmod(std::int64_t b, std::int64_t e, std::int64_t m) {
  std::int64_t r = 1 % m;
  b = mod(b, m);
  while (e > 0) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

int legendre(std::int64_t a, std::int64_t p) {
  a = mod(a, p);
  if (a == 0) return 0;
  return powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

}  // namespace

std::complex<double> q_literal(const AugmentedForm& form, std::span<const std::int64_t> m, std::int64_t k) {
  const int len = form.arity();
  std::complex<double> total = 0.0;
  for (std::int64_t h = 0; h < k; ++h) {
    if (std::gcd(h, k) != 1) continue;
    std::vector<std::int64_t> l(len, 0);
    do {
      std::int64_t phase = h * form.evaluate_mod(l, k);
      for (int i = 0; i < len; ++i) phase += mod(m[i], k) * l[i];
      total += unit_root(phase, k);
    } while (next(l, k));
  }
  return total;
}

std::complex<double> spectrum_literal(const CubicForm& form, std::span<const std::int64_t> m_hat, std::int64_t p) {
  std::vector<std::int64_t> l(form.n(), 0);
  std::complex<double> total = 0.0;
  do {
    const int chi = legendre(form.evaluate_mod(l, p), p);
    if (chi == 0) continue;
    std::int64_t phase = 0;
    for (int i = 0; i < form.n(); ++i) phase += mod(m_hat[i], p) * l[i];
    total += static_cast<double>(chi) * unit_root(phase, p);
  } while (next(l, p));
  return total;
}

std::uint64_t point_count_literal(const AugmentedForm& form, std::int64_t q) {
  std::vector<std::int64_t> x(form.arity(), 0);
  std::uint64_t count = 0;
  do {
    if (form.evaluate_mod(x, q) == 0) ++count;
  } while (next(x, q));
  return count;
}

std::uint64_t zero_count_literal(const CubicForm& form, std::int64_t p) {
  std::vector<std::int64_t> x(form.n(), 0);
  std::uint64_t count = 0;
  do {
    if (form.evaluate_mod(x, p) == 0) ++count;
  } while (next(x, p));
  return count;
}

UpsilonLiteral upsilon_literal(const AugmentedForm& form, std::span<const double> a_hat, double X) {
  const int n = form.n();
  std::vector<std::int64_t> lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    lo[i] = static_cast<std::int64_t>(std::floor(X * (a_hat[i] - 1))) - 1;
    hi[i] = static_cast<std::int64_t>(std::ceil(X * (a_hat[i] + 1))) + 1;
  }
  const double Y = std::pow(X, 1.5);
  const auto ymax = static_cast<std::int64_t>(std::ceil(Y)) + 1;
  UpsilonLiteral out;
  std::vector<std::int64_t> x(lo);
  std::vector<std::int64_t> full(n + 1);
  std::vector<double> t(n + 1);
  while (true) {
    for (std::int64_t y = -ymax; y <= ymax; ++y) {
      std::copy(x.begin(), x.end(), full.begin());
      full[n] = y;
      bool inside = std::abs(static_cast<double>(y) / Y) < 1.0;
      for (int i = 0; i < n && inside; ++i) inside = std::abs(static_cast<double>(x[i]) / X - a_hat[i]) < 1.0;
      if (!inside || form.evaluate(full) != 0) continue;
      for (int i = 0; i < n; ++i) t[i] = static_cast<double>(x[i]) / X - a_hat[i];
      t[n] = static_cast<double>(y) / Y;
      ++out.raw;
      out.upsilon += weight_Gamma(t);
    }
    int i = 0;
    for (; i < n; ++i) {
      if (++x[i] <= hi[i]) break;
      x[i] = lo[i];
    }
    if (i == n) break;
  }
  return out;
}

std::complex<double> ramanujan_literal(std::int64_t p, int alpha, std::int64_t d) {
  std::int64_t q = 1;
  for (int i = 0; i < alpha; ++i) q *= p;
  std::complex<double> s = 0.0;
  for (std::int64_t h = 1; h < q; ++h) {
    if (h % p != 0) s += unit_root((h % q) * mod(d, q), q);
  }
  return s;
}

}  // namespace cubeq::reference
