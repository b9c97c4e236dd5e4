#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "cubeq/forms.hpp"
#include "cubeq/modular.hpp"
#include "cubeq/parallel.hpp"

namespace cubeq {

enum class Method { Naive, Gauss, Character, Crt, Stationary };
std::string_view method_name(Method m);

// Q(m, k) with an absolute error bound.
struct ExpSumValue {
  Complex value{0.0, 0.0};
  double err = 0.0;
  Method method = Method::Naive;
};

// |a - b| / max(1, |b|).
double relative_gap(const Complex& a, const Complex& b);

struct Budget {
  std::uint64_t terms = 1'000'000'000;           // term evaluations
  std::uint64_t entries = std::uint64_t{1} << 31;  // table entries held in memory
};

// Defining double sum over units h mod k and l mod k. Terms are grouped by
// the residues (f(l), m.l) before the h-sum; no Gauss or character
// identities are used.
ExpSumValue q_naive(const AugmentedForm& form, std::span<const std::int64_t> m, std::int64_t k,
                    const Budget& budget = {}, const ParallelContext& ctx = {});

// Odd k: the y-sum is a quadratic Gauss sum, leaving
//   Q = G(-1, k) * sum*_h (h|k) e_k(inv(4h) m_{n+1}^2) sum_{l_hat} e_k(h C(l_hat) + m_hat.l_hat)
// with G(-1, k) = sum_t e_k(-t^2) evaluated numerically.
ExpSumValue q_gauss(const AugmentedForm& form, std::span<const std::int64_t> m, std::int64_t k,
                    const Budget& budget = {}, const ParallelContext& ctx = {});

// T(m_hat) = sum_{l_hat mod p} (C(l_hat)|p) e_p(m_hat.l_hat) over (Z/p)^n.
// Entry index is sum_i m_i p^i.
class SpectrumTable {
 public:
  SpectrumTable(std::int64_t p, int n, std::vector<Complex> data, std::uint64_t zero_count, double err);

  std::int64_t p() const noexcept { return p_; }
  int n() const noexcept { return n_; }
  std::uint64_t zero_count() const noexcept { return zero_count_; }
  double err() const noexcept { return err_; }  // per-entry absolute bound
  const std::vector<Complex>& data() const noexcept { return data_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::size_t index(std::span<const std::int64_t> m_hat) const;
  const Complex& at(std::span<const std::int64_t> m_hat) const { return data_[index(m_hat)]; }

  double parseval_sum() const;
  // p^n (p^n - M_C(p)).
  double parseval_expected() const;

 private:
  std::int64_t p_;
  int n_;
  std::vector<Complex> data_;
  std::uint64_t zero_count_;
  double err_;
};

// Axis-wise direct DFTs of length p over the character table.
SpectrumTable build_spectrum(const CubicForm& form, std::int64_t p, const Budget& budget = {},
                             const ParallelContext& ctx = {});

// Q((m_hat, 0), p) = p * T(m_hat) for odd p.
ExpSumValue q_char(const SpectrumTable& spectrum, std::span<const std::int64_t> m_hat);

// All Q(m, p), m in (Z/p)^{n+1}, for odd prime p: one n-dimensional DFT of
// e_p(h C(l_hat)) per unit h, twisted as in q_gauss. Entry index is
// sum_i m_i p^i with m_{n+1} slowest.
class PrimeQTable {
 public:
  PrimeQTable(std::int64_t p, int n, std::vector<Complex> data, double err);

  std::int64_t p() const noexcept { return p_; }
  int n() const noexcept { return n_; }
  double err() const noexcept { return err_; }
  const std::vector<Complex>& data() const noexcept { return data_; }
  std::size_t index(std::span<const std::int64_t> m) const;
  ExpSumValue at(std::span<const std::int64_t> m) const;
  // Slice for fixed m_{n+1}: p^n consecutive entries.
  std::span<const Complex> slice(std::int64_t m_last) const;

 private:
  std::int64_t p_;
  int n_;
  std::vector<Complex> data_;
  double err_;
};

PrimeQTable build_q_table(const AugmentedForm& form, std::int64_t p, const Budget& budget = {},
                          const ParallelContext& ctx = {});

// Reduction of Q(m, q) for q = p^alpha = q1^2 q2 (p odd, alpha >= 2):
//   Q(m, q) = q1^{n+2} q2 sum*_{t mod q1} sum_{L mod q1 q2 : q1 | t grad f(L) + m, q1 q2 | f(L)}
//             e_q(t f(L) + m.L).
// The L with q1 q2 | f(L) are collected once; evaluate() handles any m.
class StationaryPlan {
 public:
  StationaryPlan(const AugmentedForm& form, std::int64_t p, int alpha, const Budget& budget = {},
                 const ParallelContext& ctx = {});

  std::int64_t modulus() const noexcept { return q_; }
  ExpSumValue evaluate(std::span<const std::int64_t> m, const ParallelContext& ctx = {}) const;

 private:
  int arity_;
  std::int64_t q_, q1_, q2_;
  std::vector<std::int64_t> coords_;  // kept L, arity_ entries each, in [0, q1 q2)
  std::vector<std::int64_t> fvals_;   // f(L) mod q
  std::vector<std::int64_t> grads_;   // grad f(L) mod q1
};

// p = 2 falls back to q_naive; odd p uses StationaryPlan.
ExpSumValue q_prime_power(const AugmentedForm& form, std::span<const std::int64_t> m, std::int64_t p, int alpha,
                          const Budget& budget = {}, const ParallelContext& ctx = {});

// Q(0, p^alpha) for odd p, alpha >= 2, by the same reduction specialised to
// m = 0: only L with q1 | grad f(L) and q1 q2 | f(L) contribute, each with
// the Ramanujan sum c_{q1}(f(L) / (q1 q2)). Streams over L without storing it.
ExpSumValue q_zero_stationary(const AugmentedForm& form, std::int64_t p, int alpha, const Budget& budget = {},
                              const ParallelContext& ctx = {});

// Supplies spectrum tables for q_crt (may cache or persist them).
class SpectrumSource {
 public:
  virtual ~SpectrumSource() = default;
  virtual std::shared_ptr<const SpectrumTable> spectrum(std::int64_t p) = 0;
};

// Q(m, k) = prod_i Q(inv(k / k_i) m, k_i) over the prime-power factors k_i.
// Primes use q_char when m_{n+1} vanishes mod p and a source is given, q_gauss
// otherwise; p = 2 uses q_naive; prime powers use q_prime_power.
ExpSumValue q_crt(const AugmentedForm& form, std::span<const std::int64_t> m, const Modulus& modulus,
                  const Budget& budget = {}, const ParallelContext& ctx = {}, SpectrumSource* source = nullptr);

}  // namespace cubeq
