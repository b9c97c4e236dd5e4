#include "cubeq/expsum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "kernels.hpp"

namespace cubeq {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

Complex add_complex(const Complex& a, const Complex& b) { return a + b; }

std::vector<std::int64_t> reduce_vector(std::span<const std::int64_t> v, std::int64_t k) {
  std::vector<std::int64_t> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = mod(v[i], k);
  return out;
}

void check_m(const AugmentedForm& form, std::span<const std::int64_t> m) {
  if (static_cast<int>(m.size()) != form.arity()) throw InvalidInput("m must have length n+1");
}

std::uint64_t checked_pow(std::int64_t base, int exp, std::uint64_t limit, const char* what) {
  std::uint64_t out = 0;
  if (!detail::pow_within(base, exp, limit, out)) throw BudgetExceeded(what);
  return out;
}

std::int64_t block_for(std::int64_t count) { return std::max<std::int64_t>(256, (count + 63) / 64); }

// H[d * k + s] = #{l_hat mod k : C(l_hat) = d, m_hat.l_hat = s (mod k)}.
std::vector<std::int64_t> residue_histogram(const CubicForm& form, std::span<const std::int64_t> m_hat,
                                            std::int64_t k, const ParallelContext& ctx) {
  const int n = form.n();
  const detail::AxisSplit split(form);
  const std::int64_t outer = detail::ipow64(k, n - 1);
  const std::size_t bins = static_cast<std::size_t>(k * k);
  using Hist = std::vector<std::int64_t>;
  return blocked_reduce<Hist>(
      outer, block_for(outer), ctx, Hist{},
      [&](std::int64_t begin, std::int64_t end) {
        Hist h(bins, 0);
        std::vector<std::int64_t> x(n, 0);
        detail::decode_outer(begin, k, x);
        for (std::int64_t o = begin; o < end; ++o) {
          const auto c = split.coeffs_mod(x, k);
          std::int64_t s_outer = 0;
          for (int i = 1; i < n; ++i) s_outer = (s_outer + m_hat[i] * x[i]) % k;
          std::int64_t s = s_outer;
          for (std::int64_t x0 = 0; x0 < k; ++x0) {
            ++h[static_cast<std::size_t>(c.at_mod(x0, k) * k + s)];
            s += m_hat[0];
            if (s >= k) s -= k;
          }
          detail::advance_outer(k, x);
        }
        return h;
      },
      [](const Hist& a, const Hist& b) {
        if (a.empty()) return b;
        if (b.empty()) return a;
        Hist r(a);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
        return r;
      });
}

std::vector<std::int64_t> units_mod(std::int64_t k) {
  std::vector<std::int64_t> u;
  for (std::int64_t h = 0; h < k; ++h) {
    if (gcd64(h, k) == 1) u.push_back(h);
  }
  return u;
}

// In-place DFT along every axis of an array over (Z/p)^n (index sum_i x_i p^i):
// out(m) = sum_l in(l) e_p(m.l).
void axis_dft(std::vector<Complex>& data, std::int64_t p, int n, const UnitRootTable& e, const ParallelContext& ctx) {
  const std::int64_t lines = detail::ipow64(p, n - 1);
  std::int64_t stride = 1;
  for (int axis = 0; axis < n; ++axis) {
    blocked_for(lines, std::max<std::int64_t>(64, lines / 64), ctx, [&](std::int64_t begin, std::int64_t end) {
      std::vector<Complex> in(static_cast<std::size_t>(p)), out(static_cast<std::size_t>(p));
      for (std::int64_t line = begin; line < end; ++line) {
        const std::int64_t low = line % stride;
        const std::int64_t high = line / stride;
        const std::int64_t base = low + high * stride * p;
        for (std::int64_t i = 0; i < p; ++i) in[i] = data[static_cast<std::size_t>(base + i * stride)];
        for (std::int64_t j = 0; j < p; ++j) {
          Complex acc = 0.0;
          std::int64_t idx = 0;
          for (std::int64_t i = 0; i < p; ++i) {
            acc += in[i] * e[idx];
            idx += j;
            if (idx >= p) idx -= p;
          }
          out[j] = acc;
        }
        for (std::int64_t i = 0; i < p; ++i) data[static_cast<std::size_t>(base + i * stride)] = out[i];
      }
    });
    stride *= p;
  }
}

// C(l_hat) mod p for every l_hat, index sum_i l_i p^i.
std::vector<std::int32_t> form_values_mod(const CubicForm& form, std::int64_t p, const ParallelContext& ctx) {
  const int n = form.n();
  const detail::AxisSplit split(form);
  const std::int64_t outer = detail::ipow64(p, n - 1);
  std::vector<std::int32_t> values(static_cast<std::size_t>(outer * p));
  blocked_for(outer, block_for(outer), ctx, [&](std::int64_t begin, std::int64_t end) {
    std::vector<std::int64_t> x(n, 0);
    detail::decode_outer(begin, p, x);
    for (std::int64_t o = begin; o < end; ++o) {
      const auto c = split.coeffs_mod(x, p);
      for (std::int64_t x0 = 0; x0 < p; ++x0) {
        values[static_cast<std::size_t>(o * p + x0)] = static_cast<std::int32_t>(c.at_mod(x0, p));
      }
      detail::advance_outer(p, x);
    }
  });
  return values;
}

void require_odd_prime(std::int64_t p) {
  if (p < 3 || !is_prime(p)) throw InvalidInput("an odd prime is required");
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::Naive:
      return "naive";
    case Method::Gauss:
      return "gauss";
    case Method::Character:
      return "char";
    case Method::Crt:
      return "crt";
    case Method::Stationary:
      return "stationary";
  }
  return "unknown";
}

double relative_gap(const Complex& a, const Complex& b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

ExpSumValue q_naive(const AugmentedForm& form, std::span<const std::int64_t> m, std::int64_t k, const Budget& budget,
                    const ParallelContext& ctx) {
  check_m(form, m);
  if (k < 1) throw InvalidInput("modulus must be positive");
  const int n = form.n();
  checked_pow(k, n + 2, budget.terms, "naive evaluation exceeds the term budget");
  const auto mr = reduce_vector(m, k);
  const auto hist = residue_histogram(form.base(), std::span(mr).first(n), k, ctx);

  // Fold in the last variable: N[d][s] = #{l : f(l) = d, m.l = s}.
  std::vector<std::int64_t> joint(static_cast<std::size_t>(k * k), 0);
  for (std::int64_t y = 0; y < k; ++y) {
    const std::int64_t e = (y * y) % k;
    const std::int64_t u = (mr[n] * y) % k;
    for (std::int64_t d0 = 0; d0 < k; ++d0) {
      const std::int64_t d = mod(d0 - e, k);
      for (std::int64_t s0 = 0; s0 < k; ++s0) {
        const std::int64_t c = hist[static_cast<std::size_t>(d0 * k + s0)];
        if (c == 0) continue;
        std::int64_t s = s0 + u;
        if (s >= k) s -= k;
        joint[static_cast<std::size_t>(d * k + s)] += c;
      }
    }
  }

  const UnitRootTable roots(k);
  const auto units = units_mod(k);
  const Complex total = blocked_reduce<Complex>(
      k, 8, ctx, Complex(0.0),
      [&](std::int64_t begin, std::int64_t end) {
        Complex acc = 0.0;
        for (std::int64_t d = begin; d < end; ++d) {
          for (std::int64_t s = 0; s < k; ++s) {
            const std::int64_t c = joint[static_cast<std::size_t>(d * k + s)];
            if (c == 0) continue;
            Complex w = 0.0;
            for (std::int64_t h : units) w += roots[(h * d + s) % k];
            acc += static_cast<double>(c) * w;
          }
        }
        return acc;
      },
      add_complex);
  const double terms = static_cast<double>(units.size()) * std::pow(static_cast<double>(k), n + 1);
  return {total, 8.0 * kEps * terms, Method::Naive};
}

ExpSumValue q_gauss(const AugmentedForm& form, std::span<const std::int64_t> m, std::int64_t k, const Budget& budget,
                    const ParallelContext& ctx) {
  check_m(form, m);
  if (k < 1 || k % 2 == 0) throw InvalidInput("the Gauss-reduced route needs an odd modulus");
  const int n = form.n();
  checked_pow(k, n + 1, budget.terms, "Gauss-reduced evaluation exceeds the term budget");
  const auto mr = reduce_vector(m, k);
  const auto hist = residue_histogram(form.base(), std::span(mr).first(n), k, ctx);

  struct Bin {
    std::int64_t d, s, count;
  };
  std::vector<Bin> bins;
  for (std::int64_t d = 0; d < k; ++d) {
    for (std::int64_t s = 0; s < k; ++s) {
      const auto c = hist[static_cast<std::size_t>(d * k + s)];
      if (c != 0) bins.push_back({d, s, c});
    }
  }
  const UnitRootTable roots(k);
  const auto units = units_mod(k);
  const std::int64_t mlast_sq = (mr[n] * mr[n]) % k;
  const Complex twisted = blocked_reduce<Complex>(
      static_cast<std::int64_t>(units.size()), 8, ctx, Complex(0.0),
      [&](std::int64_t begin, std::int64_t end) {
        Complex acc = 0.0;
        for (std::int64_t i = begin; i < end; ++i) {
          const std::int64_t h = units[static_cast<std::size_t>(i)];
          Complex inner = 0.0;
          for (const auto& b : bins) inner += static_cast<double>(b.count) * roots[(h * b.d + b.s) % k];
          const std::int64_t phase = (inverse_mod(4 * h, k) * mlast_sq) % k;
          acc += static_cast<double>(jacobi(h, k)) * roots[phase] * inner;
        }
        return acc;
      },
      add_complex);
  const Complex g = quadratic_gauss_sum(-1, k);
  const Complex value = g * twisted;
  const double sqrtk = std::sqrt(static_cast<double>(k));
  const double terms = static_cast<double>(units.size()) * std::pow(static_cast<double>(k), n);
  const double err = 8.0 * kEps * (sqrtk * terms + static_cast<double>(k) * std::abs(value) + sqrtk * k);
  return {value, err, Method::Gauss};
}

SpectrumTable::SpectrumTable(std::int64_t p, int n, std::vector<Complex> data, std::uint64_t zero_count, double err)
    : p_(p), n_(n), data_(std::move(data)), zero_count_(zero_count), err_(err) {
  if (data_.size() != static_cast<std::size_t>(detail::ipow64(p, n))) {
    throw InvalidInput("spectrum data has the wrong size");
  }
}

std::size_t SpectrumTable::index(std::span<const std::int64_t> m_hat) const {
  if (static_cast<int>(m_hat.size()) != n_) throw InvalidInput("m_hat must have length n");
  std::int64_t idx = 0;
  for (int i = n_ - 1; i >= 0; --i) idx = idx * p_ + mod(m_hat[i], p_);
  return static_cast<std::size_t>(idx);
}

double SpectrumTable::parseval_sum() const {
  // Fixed-order summation keeps the value reproducible.
  double s = 0.0;
  for (const auto& v : data_) s += std::norm(v);
  return s;
}

double SpectrumTable::parseval_expected() const {
  const double pn = std::pow(static_cast<double>(p_), n_);
  return pn * (pn - static_cast<double>(zero_count_));
}

SpectrumTable build_spectrum(const CubicForm& form, std::int64_t p, const Budget& budget, const ParallelContext& ctx) {
  require_odd_prime(p);
  const int n = form.n();
  std::uint64_t entries = 0;
  if (!detail::pow_within(p, n, budget.entries, entries)) {
    const double bytes = std::pow(static_cast<double>(p), n) * sizeof(Complex);
    throw BudgetExceeded("spectrum table needs " + std::to_string(static_cast<std::uint64_t>(bytes)) +
                         " bytes, beyond the memory budget");
  }
  checked_pow(p, n + 1, budget.terms / std::max(1, n) + 1, "spectrum build exceeds the term budget");
  const auto values = form_values_mod(form, p, ctx);
  std::vector<double> chi(static_cast<std::size_t>(p));
  for (std::int64_t t = 0; t < p; ++t) chi[t] = jacobi(t, p);
  std::vector<Complex> data(values.size());
  std::uint64_t zeros = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    data[i] = chi[values[i]];
    if (values[i] == 0) ++zeros;
  }
  const UnitRootTable roots(p);
  axis_dft(data, p, n, roots, ctx);
  const double err = 8.0 * kEps * n * static_cast<double>(entries);
  return SpectrumTable(p, n, std::move(data), zeros, err);
}

ExpSumValue q_char(const SpectrumTable& spectrum, std::span<const std::int64_t> m_hat) {
  const double p = static_cast<double>(spectrum.p());
  return {p * spectrum.at(m_hat), p * spectrum.err(), Method::Character};
}

PrimeQTable::PrimeQTable(std::int64_t p, int n, std::vector<Complex> data, double err)
    : p_(p), n_(n), data_(std::move(data)), err_(err) {
  if (data_.size() != static_cast<std::size_t>(detail::ipow64(p, n + 1))) {
    throw InvalidInput("Q table data has the wrong size");
  }
}

std::size_t PrimeQTable::index(std::span<const std::int64_t> m) const {
  if (static_cast<int>(m.size()) != n_ + 1) throw InvalidInput("m must have length n+1");
  std::int64_t idx = 0;
  for (int i = n_; i >= 0; --i) idx = idx * p_ + mod(m[i], p_);
  return static_cast<std::size_t>(idx);
}

ExpSumValue PrimeQTable::at(std::span<const std::int64_t> m) const {
  return {data_[index(m)], err_, Method::Gauss};
}

std::span<const Complex> PrimeQTable::slice(std::int64_t m_last) const {
  const std::size_t len = data_.size() / static_cast<std::size_t>(p_);
  return std::span<const Complex>(data_).subspan(static_cast<std::size_t>(mod(m_last, p_)) * len, len);
}

PrimeQTable build_q_table(const AugmentedForm& form, std::int64_t p, const Budget& budget, const ParallelContext& ctx) {
  require_odd_prime(p);
  const int n = form.n();
  std::uint64_t entries = 0;
  if (!detail::pow_within(p, n + 1, budget.entries, entries)) {
    throw BudgetExceeded("full Q table exceeds the memory budget");
  }
  checked_pow(p, n + 2, budget.terms / std::max(1, n) + 1, "full Q table exceeds the term budget");
  const auto values = form_values_mod(form.base(), p, ctx);
  const std::size_t len = values.size();
  const UnitRootTable roots(p);
  std::vector<Complex> table(static_cast<std::size_t>(entries), Complex(0.0));
  std::vector<Complex> work(len);
  for (std::int64_t h = 1; h < p; ++h) {
    for (std::size_t i = 0; i < len; ++i) work[i] = roots[(h * values[i]) % p];
    axis_dft(work, p, n, roots, ctx);
    const std::int64_t inv4h = inverse_mod(4 * h, p);
    const double chi = jacobi(h, p);
    for (std::int64_t ml = 0; ml < p; ++ml) {
      const Complex coef = chi * roots[(inv4h * ((ml * ml) % p)) % p];
      Complex* out = table.data() + static_cast<std::size_t>(ml) * len;
      blocked_for(static_cast<std::int64_t>(len), 4096, ctx, [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t i = begin; i < end; ++i) out[i] += coef * work[static_cast<std::size_t>(i)];
      });
    }
  }
  const Complex g = quadratic_gauss_sum(-1, p);
  for (auto& v : table) v *= g;
  const double pn = static_cast<double>(len);
  const double err = 8.0 * kEps * std::sqrt(static_cast<double>(p)) * (p - 1) * pn * (n + 2);
  return PrimeQTable(p, n, std::move(table), err);
}

StationaryPlan::StationaryPlan(const AugmentedForm& form, std::int64_t p, int alpha, const Budget& budget,
                               const ParallelContext& ctx)
    : arity_(form.arity()) {
  require_odd_prime(p);
  if (alpha < 2) throw InvalidInput("the stationary-phase route needs alpha >= 2");
  const auto split = square_full_split(p, alpha);
  q1_ = split.q1;
  q2_ = split.q2;
  q_ = detail::ipow64(p, alpha);
  const std::int64_t r = q1_ * q2_;
  const int n = form.n();
  checked_pow(r, n + 1, budget.terms, "stationary-phase enumeration exceeds the term budget");
  const detail::AxisSplit axis(form.base());
  const std::int64_t outer = detail::ipow64(r, n - 1);

  struct Kept {
    std::vector<std::int64_t> coords, fvals, grads;
  };
  const Kept kept = blocked_reduce<Kept>(
      outer, block_for(outer), ctx, Kept{},
      [&](std::int64_t begin, std::int64_t end) {
        Kept out;
        std::vector<std::int64_t> x(n, 0), full(n + 1, 0);
        detail::decode_outer(begin, r, x);
        for (std::int64_t o = begin; o < end; ++o) {
          const auto c = axis.coeffs_mod(x, q_);
          for (std::int64_t x0 = 0; x0 < r; ++x0) {
            const std::int64_t cval = c.at_mod(x0, q_);
            for (std::int64_t y = 0; y < r; ++y) {
              const std::int64_t fval = mod(cval - (y * y) % q_, q_);
              if (fval % r != 0) continue;
              x[0] = x0;
              std::copy(x.begin(), x.end(), full.begin());
              full[n] = y;
              const auto g = form.gradient_mod(full, q1_);
              out.coords.insert(out.coords.end(), full.begin(), full.end());
              out.fvals.push_back(fval);
              out.grads.insert(out.grads.end(), g.begin(), g.end());
            }
          }
          x[0] = 0;
          detail::advance_outer(r, x);
        }
        return out;
      },
      [](const Kept& a, const Kept& b) {
        Kept r2(a);
        r2.coords.insert(r2.coords.end(), b.coords.begin(), b.coords.end());
        r2.fvals.insert(r2.fvals.end(), b.fvals.begin(), b.fvals.end());
        r2.grads.insert(r2.grads.end(), b.grads.begin(), b.grads.end());
        return r2;
      });
  coords_ = kept.coords;
  fvals_ = kept.fvals;
  grads_ = kept.grads;
}

ExpSumValue StationaryPlan::evaluate(std::span<const std::int64_t> m, const ParallelContext& ctx) const {
  if (static_cast<int>(m.size()) != arity_) throw InvalidInput("m must have length n+1");
  const auto mq = reduce_vector(m, q_);
  std::vector<std::int64_t> m1(mq.size());
  for (std::size_t i = 0; i < mq.size(); ++i) m1[i] = mq[i] % q1_;
  const auto units = units_mod(q1_);
  const UnitRootTable roots(q_);
  const std::int64_t count = static_cast<std::int64_t>(fvals_.size());
  const Complex sum = blocked_reduce<Complex>(
      count, 1024, ctx, Complex(0.0),
      [&](std::int64_t begin, std::int64_t end) {
        Complex acc = 0.0;
        for (std::int64_t e = begin; e < end; ++e) {
          const std::int64_t* g = grads_.data() + e * arity_;
          const std::int64_t* L = coords_.data() + e * arity_;
          std::int64_t dot = 0;
          for (int i = 0; i < arity_; ++i) dot = (dot + mq[i] * L[i]) % q_;
          for (std::int64_t t : units) {
            bool ok = true;
            for (int i = 0; i < arity_ && ok; ++i) ok = (t * g[i] + m1[i]) % q1_ == 0;
            if (ok) acc += roots[(t * fvals_[static_cast<std::size_t>(e)] + dot) % q_];
          }
        }
        return acc;
      },
      add_complex);
  const double factor = std::pow(static_cast<double>(q1_), arity_ + 1) * static_cast<double>(q2_);
  const double terms = static_cast<double>(count) * static_cast<double>(units.size());
  return {factor * sum, 8.0 * kEps * factor * std::max(1.0, terms), Method::Stationary};
}

ExpSumValue q_prime_power(const AugmentedForm& form, std::span<const std::int64_t> m, std::int64_t p, int alpha,
                          const Budget& budget, const ParallelContext& ctx) {
  check_m(form, m);
  if (!is_prime(p)) throw InvalidInput("q_prime_power needs a prime");
  if (alpha < 2) throw InvalidInput("q_prime_power needs alpha >= 2");
  if (p == 2) return q_naive(form, m, detail::ipow64(2, alpha), budget, ctx);
  return StationaryPlan(form, p, alpha, budget, ctx).evaluate(m, ctx);
}

ExpSumValue q_crt(const AugmentedForm& form, std::span<const std::int64_t> m, const Modulus& modulus,
                  const Budget& budget, const ParallelContext& ctx, SpectrumSource* source) {
  check_m(form, m);
  const std::int64_t k = modulus.k();
  ExpSumValue result{Complex(1.0, 0.0), 0.0, Method::Crt};
  const int n = form.n();
  for (const auto& f : modulus.factors()) {
    const std::int64_t ki = f.value();
    const std::int64_t twist = inverse_mod((k / ki) % ki, ki);
    std::vector<std::int64_t> mi(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) mi[i] = (twist * mod(m[i], ki)) % ki;
    ExpSumValue part;
    if (f.alpha >= 2) {
      part = q_prime_power(form, mi, f.p, f.alpha, budget, ctx);
    } else if (f.p == 2) {
      part = q_naive(form, mi, 2, budget, ctx);
    } else if (mi[n] == 0 && source != nullptr) {
      part = q_char(*source->spectrum(f.p), std::span(mi).first(n));
    } else {
      part = q_gauss(form, mi, f.p, budget, ctx);
    }
    const double err = std::abs(result.value) * part.err + std::abs(part.value) * result.err + result.err * part.err;
    result.value *= part.value;
    result.err = err + 8.0 * kEps * std::abs(result.value);
  }
  return result;
}

ExpSumValue q_zero_stationary(const AugmentedForm& form, std::int64_t p, int alpha, const Budget& budget,
                              const ParallelContext& ctx) {
  require_odd_prime(p);
  if (alpha < 2) throw InvalidInput("the stationary-phase route needs alpha >= 2");
  const auto split = square_full_split(p, alpha);
  const std::int64_t q1 = split.q1, q2 = split.q2;
  const std::int64_t q = detail::ipow64(p, alpha);
  const std::int64_t r = q1 * q2;
  const int n = form.n();
  const int beta = alpha / 2;
  checked_pow(r, n, budget.terms, "stationary-phase enumeration exceeds the term budget");
  const detail::AxisSplit axis(form.base());
  const std::int64_t outer = detail::ipow64(r, n - 1);
  // 2y = 0 mod q1 forces y = 0 mod q1, so y runs over j * q1, j < q2.
  const i128 total = blocked_reduce<i128>(
      outer, block_for(outer), ctx, i128{0},
      [&](std::int64_t begin, std::int64_t end) {
        i128 acc = 0;
        std::vector<std::int64_t> x(n, 0), full(n + 1);
        detail::decode_outer(begin, r, x);
        for (std::int64_t o = begin; o < end; ++o) {
          const auto c = axis.coeffs_mod(x, q);
          for (std::int64_t x0 = 0; x0 < r; ++x0) {
            const std::int64_t cval = c.at_mod(x0, q);
            bool grad_checked = false, grad_zero = false;
            for (std::int64_t j = 0; j < q2; ++j) {
              const std::int64_t y = j * q1;
              const std::int64_t fval = mod(cval - (y * y) % q, q);
              if (fval % r != 0) continue;
              if (!grad_checked) {
                x[0] = x0;
                const auto g = form.base().gradient_mod(x, q1);
                grad_zero = std::all_of(g.begin(), g.end(), [](std::int64_t v) { return v == 0; });
                grad_checked = true;
              }
              if (grad_zero) acc += ramanujan(p, beta, fval / r);
            }
          }
          x[0] = 0;
          detail::advance_outer(r, x);
        }
        return acc;
      },
      [](i128 a, i128 b) { return a + b; });
  const double scale = std::pow(static_cast<double>(q1), n + 2) * static_cast<double>(q2);
  const double value = static_cast<double>(total) * scale;
  return {Complex(value, 0.0), 8.0 * kEps * std::abs(value), Method::Stationary};
}

}  // namespace cubeq
