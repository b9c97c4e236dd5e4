#include "cubeq/averages.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "kernels.hpp"

namespace cubeq {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::int64_t> decode(std::int64_t idx, std::int64_t k, int n) {
  std::vector<std::int64_t> b(n);
  for (int i = 0; i < n; ++i) {
    b[i] = idx % k;
    idx /= k;
  }
  return b;
}

std::vector<std::uint64_t> value_histogram(const CubicForm& form, std::int64_t q, const Budget& budget,
                                           const ParallelContext& ctx) {
  std::uint64_t total = 0;
  if (!detail::pow_within(q, form.n(), budget.terms, total)) {
    throw BudgetExceeded("value histogram exceeds the term budget");
  }
  return detail::value_histogram(form, q, ctx);
}

// (M(p), M_C(p)) from the value histogram, for odd p.
std::pair<double, double> counts_mod_p(const std::vector<std::uint64_t>& hist, std::int64_t p) {
  std::vector<int> roots(static_cast<std::size_t>(p), 0);
  for (std::int64_t y = 0; y < p; ++y) ++roots[(y * y) % p];
  double M = 0.0;
  for (std::int64_t d = 0; d < p; ++d) M += static_cast<double>(hist[d]) * roots[d];
  return {M, static_cast<double>(hist[0])};
}

double sum_of(const std::vector<double>& v, bool square) {
  std::vector<double> terms(v);
  if (square) {
    for (auto& t : terms) t *= t;
  }
  return pairwise_reduce(std::move(terms), 0.0, [](double a, double b) { return a + b; });
}

void finish(AverageReport& r) { r.ratio = std::isnan(r.bound) ? kNaN : r.value / r.bound; }

bool odd_prime(std::int64_t k) { return k > 2 && is_prime(k); }

}  // namespace

std::string_view quantity_name(Quantity q) {
  switch (q) {
    case Quantity::D:
      return "D";
    case Quantity::D2:
      return "D2";
    case Quantity::E:
      return "E";
    case Quantity::E2:
      return "E2";
  }
  return "?";
}

std::vector<double> abs_q_slice(const AugmentedForm& form, std::int64_t k, std::int64_t b_last, SpectrumCache& cache,
                                const Budget& budget, const ParallelContext& ctx) {
  const int n = form.n();
  if (k < 1) throw InvalidInput("modulus must be positive");
  if (k == 1) return {1.0};
  std::uint64_t count = 0;
  if (!detail::pow_within(k, n, budget.entries, count)) throw BudgetExceeded("b_hat range exceeds the memory budget");
  std::vector<double> out(static_cast<std::size_t>(count));
  const std::int64_t b = mod(b_last, k);
  const Modulus modulus(k);

  if (odd_prime(k)) {
    if (b == 0) {
      const auto T = cache.spectrum(k);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<double>(k) * std::abs(T->data()[i]);
    } else {
      const auto slice = cache.qtable(k)->slice(b);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::abs(slice[i]);
    }
    return out;
  }

  const auto& f = modulus.factors();
  const ParallelContext inner = ParallelContext::serial();
  if (f.size() == 1 && f[0].alpha >= 2 && f[0].p != 2) {
    const StationaryPlan plan(form, f[0].p, f[0].alpha, budget, ctx);
    blocked_for(static_cast<std::int64_t>(count), 16, ctx, [&](std::int64_t begin, std::int64_t end) {
      for (std::int64_t i = begin; i < end; ++i) {
        auto m = decode(i, k, n);
        m.push_back(b);
        out[static_cast<std::size_t>(i)] = std::abs(plan.evaluate(m, inner).value);
      }
    });
    return out;
  }
  // Warm the shared tables serially so workers only read them.
  for (const auto& pf : f) {
    if (pf.alpha == 1 && pf.p != 2) cache.spectrum(pf.p);
  }
  blocked_for(static_cast<std::int64_t>(count), 16, ctx, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      auto m = decode(i, k, n);
      m.push_back(b);
      out[static_cast<std::size_t>(i)] = std::abs(q_crt(form, m, modulus, budget, inner, &cache).value);
    }
  });
  return out;
}

AverageReport compute_D(const AugmentedForm& form, std::int64_t k, std::int64_t b_last, SpectrumCache& cache,
                        const Budget& budget, const ParallelContext& ctx) {
  AverageReport r;
  r.k = k;
  r.quantity = Quantity::D;
  r.parameter = b_last;
  r.value = sum_of(abs_q_slice(form, k, b_last, cache, budget, ctx), false);
  const int n = form.n();
  r.bound = (odd_prime(k) && mod(b_last, k) == 0) ? std::pow(static_cast<double>(k), (3.0 * n + 2.0) / 2.0) : kNaN;
  finish(r);
  return r;
}

AverageReport compute_D2(const AugmentedForm& form, std::int64_t p, int alpha, std::int64_t b_last,
                         SpectrumCache& cache, const Budget& budget, const ParallelContext& ctx) {
  if (!is_prime(p) || alpha < 1) throw InvalidInput("D2 needs a prime power modulus");
  const int n = form.n();
  const std::int64_t q = detail::ipow64(p, alpha);
  const std::int64_t b = mod(b_last, q);
  AverageReport r;
  r.k = q;
  r.quantity = Quantity::D2;
  r.parameter = b_last;
  r.value = sum_of(abs_q_slice(form, q, b, cache, budget, ctx), true);

  // Ramanujan route: group l_hat by C(l_hat) mod q.
  const auto hist = value_histogram(form.base(), q, budget, ctx);
  const UnitRootTable e(q);
  double acc = 0.0;
  for (std::int64_t d = 0; d < q; ++d) {
    if (hist[d] == 0) continue;
    Complex A = 0.0;
    for (std::int64_t y = 0; y < q; ++y) {
      const auto c = ramanujan(p, alpha, d - (y * y) % q);
      if (c != 0) A += static_cast<double>(c) * e[(b * y) % q];
    }
    acc += static_cast<double>(hist[d]) * std::norm(A);
  }
  r.check = std::pow(static_cast<double>(q), n) * acc;

  if (alpha == 1 && b == 0 && p != 2) {
    const auto [M, MC] = counts_mod_p(hist, p);
    (void)M;
    const double pn = std::pow(static_cast<double>(p), n);
    r.closed = std::pow(static_cast<double>(p), n + 2) * (pn - MC);
    r.bound = std::pow(static_cast<double>(p), 2 * n + 2);
  } else {
    r.bound = 4.0 * alpha * std::pow(static_cast<double>(p), (2.0 * n + 2.0) * alpha);
  }
  finish(r);
  return r;
}

AverageReport compute_E(const AugmentedForm& form, std::int64_t k, std::int64_t r, SpectrumCache& cache,
                        const Budget& budget, const ParallelContext& ctx) {
  AverageReport out;
  out.k = k;
  out.quantity = Quantity::E;
  out.parameter = r;
  std::map<std::int64_t, double> by_residue;
  std::vector<double> terms;
  for (std::int64_t c = 0; c < k; ++c) {
    if (gcd64(c, k) != 1) continue;
    const std::int64_t b = mod(c * mod(r, k), k);
    auto it = by_residue.find(b);
    if (it == by_residue.end()) it = by_residue.emplace(b, compute_D(form, k, b, cache, budget, ctx).value).first;
    terms.push_back(it->second);
  }
  out.value = pairwise_reduce(std::move(terms), 0.0, [](double a, double b) { return a + b; });
  const int n = form.n();
  if (odd_prime(k)) {
    const double p = static_cast<double>(k);
    out.bound = std::pow(p, (3.0 * n + 4.0) / 2.0) + 2.0 * std::pow(p, (3.0 * n + 3.0) / 2.0);
  } else {
    out.bound = kNaN;
  }
  finish(out);
  return out;
}

AverageReport compute_E2(const AugmentedForm& form, std::int64_t k, std::int64_t r, SpectrumCache& cache,
                         const Budget& budget, const ParallelContext& ctx) {
  AverageReport out;
  out.k = k;
  out.quantity = Quantity::E2;
  out.parameter = r;
  std::map<std::int64_t, double> by_residue;
  std::vector<double> terms;
  for (std::int64_t c = 0; c < k; ++c) {
    if (gcd64(c, k) != 1) continue;
    const std::int64_t b = mod(c * mod(r, k), k);
    auto it = by_residue.find(b);
    if (it == by_residue.end()) {
      it = by_residue.emplace(b, sum_of(abs_q_slice(form, k, b, cache, budget, ctx), true)).first;
    }
    terms.push_back(it->second);
  }
  out.value = pairwise_reduce(std::move(terms), 0.0, [](double a, double b) { return a + b; });
  const int n = form.n();
  if (odd_prime(k)) {
    const double p = static_cast<double>(k);
    out.bound = std::pow(p, 2 * n + 3) + 2.0 * std::pow(p, 2 * n + 2);
    if (mod(r, k) != 0) {
      // c_p(f(l)) is p - 1 on the M(p) zeros of f and -1 elsewhere.
      const auto hist = value_histogram(form.base(), k, budget, ctx);
      const auto [M, MC] = counts_mod_p(hist, k);
      const double total = std::pow(p, n + 1);
      const double moment = M * (p - 1) * (p - 1) + (total - M);
      const double d2_zero = std::pow(p, n + 2) * (std::pow(p, n) - MC);
      out.check = std::pow(p, n + 1) * moment - d2_zero;
    }
  } else {
    out.bound = kNaN;
  }
  finish(out);
  return out;
}

RootCounts r1_r2_counts(const CubicForm& form, std::int64_t p, int alpha, std::span<const std::int64_t> l_hat) {
  if (!is_prime(p) || p == 2) throw InvalidInput("root counts need an odd prime");
  if (alpha < 1) throw InvalidInput("alpha must be positive");
  const std::int64_t q = detail::ipow64(p, alpha);
  const std::int64_t pa1 = q / p;
  const std::int64_t c = form.evaluate_mod(l_hat, q);
  RootCounts out;
  std::int64_t v = c;
  out.kappa = 0;
  if (v == 0) {
    out.kappa = alpha;
  } else {
    while (v % p == 0) {
      v /= p;
      ++out.kappa;
    }
  }
  for (std::int64_t y = 0; y < q; ++y) {
    const std::int64_t d = mod(c - (y * y) % q, q);
    if (d == 0) ++out.R1;
    if (d % pa1 == 0 && d != 0) ++out.R2;
  }
  out.r1_bound = 2.0 * std::pow(static_cast<double>(p), out.kappa / 2.0);
  out.r2_bound = 2.0 * std::pow(static_cast<double>(p), out.kappa / 2.0 + 1.0);
  return out;
}

LatticeCount n_count(const std::vector<IntPolynomial>& polys, double y, std::span<const std::int64_t> r_hat,
                     std::int64_t k, std::uint64_t budget, const ParallelContext& ctx) {
  if (polys.empty() || polys.size() > 2) throw InvalidInput("supply one or two polynomials");
  if (!(y > 0) || k < 1) throw InvalidInput("y and k must be positive");
  const int n = polys[0].n();
  for (const auto& p : polys) {
    if (p.n() != n) throw InvalidInput("polynomials must share the variable count");
  }
  if (static_cast<int>(r_hat.size()) != n) throw InvalidInput("r_hat must have length n");
  const auto Y = static_cast<std::int64_t>(std::floor(y));
  // Values m in [-Y, Y] with m = r (mod k), per coordinate.
  std::vector<std::vector<std::int64_t>> axis(n);
  double total = 1.0;
  for (int i = 0; i < n; ++i) {
    const std::int64_t r = mod(r_hat[i], k);
    const std::int64_t start = -Y + mod(r + Y, k);
    for (std::int64_t m = start; m <= Y; m += k) axis[i].push_back(m);
    total *= static_cast<double>(axis[i].size());
  }
  if (total > static_cast<double>(budget)) throw BudgetExceeded("lattice enumeration exceeds the budget");
  LatticeCount out;
  if (total == 0) {
    out.normalizer = std::pow(y / k + 1.0, n - static_cast<int>(polys.size()));
    return out;
  }
  const auto count = static_cast<std::int64_t>(total);
  out.count = blocked_reduce<std::uint64_t>(
      count, 4096, ctx, 0,
      [&](std::int64_t begin, std::int64_t end) {
        std::uint64_t c = 0;
        std::vector<std::int64_t> m(n);
        for (std::int64_t idx = begin; idx < end; ++idx) {
          std::int64_t t = idx;
          for (int i = 0; i < n; ++i) {
            const auto sz = static_cast<std::int64_t>(axis[i].size());
            m[i] = axis[i][static_cast<std::size_t>(t % sz)];
            t /= sz;
          }
          bool all = true;
          for (const auto& p : polys) {
            if (p.evaluate(m) != 0) {
              all = false;
              break;
            }
          }
          if (all) ++c;
        }
        return c;
      },
      [](std::uint64_t a, std::uint64_t b) { return a + b; });
  out.normalizer = std::pow(y / k + 1.0, n - static_cast<int>(polys.size()));
  out.ratio = static_cast<double>(out.count) / out.normalizer;
  return out;
}

BadSetScan bad_set_scan(const SpectrumTable& spectrum, std::vector<double> thresholds) {
  std::sort(thresholds.begin(), thresholds.end());
  BadSetScan s;
  s.p = spectrum.p();
  s.n = spectrum.n();
  s.thresholds = thresholds;
  s.exceed_counts.assign(thresholds.size(), 0);
  s.histogram.assign(32, 0);
  const double scale = std::pow(static_cast<double>(s.p), s.n / 2.0);
  // Exact ties with the threshold are common (Jacobi-sum magnitudes), so an
  // entry counts only when it exceeds by more than its error bound.
  const double slack = spectrum.err() / scale;
  for (const auto& v : spectrum.data()) {
    const double ratio = std::abs(v) / scale;
    s.max_ratio = std::max(s.max_ratio, ratio);
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
      if (ratio - slack > thresholds[i]) ++s.exceed_counts[i];
    }
    int bin = 0;
    if (ratio > 0) bin = static_cast<int>(std::floor((std::log2(ratio) + 8.0) * 2.0));
    ++s.histogram[static_cast<std::size_t>(std::clamp(bin, 0, 31))];
  }
  return s;
}

Table average_table(const std::vector<AverageReport>& reports) {
  Table t;
  t.columns = {"p", "quantity", "parameter", "value", "bound", "ratio"};
  for (const auto& r : reports) {
    t.add({r.k, std::string(quantity_name(r.quantity)), r.parameter, r.value, r.bound, r.ratio});
  }
  return t;
}

Table bad_set_table(const std::vector<BadSetScan>& scans) {
  Table t;
  t.columns = {"p", "tau", "exceed_count", "p_pow_nminus1", "fraction"};
  for (const auto& s : scans) {
    const double pn = std::pow(static_cast<double>(s.p), s.n);
    const auto pn1 = detail::ipow64(s.p, s.n - 1);
    for (std::size_t i = 0; i < s.thresholds.size(); ++i) {
      t.add({s.p, s.thresholds[i], static_cast<std::int64_t>(s.exceed_counts[i]), pn1,
             static_cast<double>(s.exceed_counts[i]) / pn});
    }
  }
  return t;
}

}  // namespace cubeq
