#include "cubeq/verify.hpp"

#include <cmath>
#include <functional>
#include <numeric>

#include "cubeq/averages.hpp"
#include "cubeq/density.hpp"
#include "cubeq/expsum.hpp"
#include "cubeq/modular.hpp"
#include "cubeq/reference.hpp"

namespace cubeq {

namespace {

// Accumulates one invariant. Each case reports a statistic that must stay
// at or below the limit.
class Tally {
 public:
  Tally(std::string suite, std::string name, double limit) {
    r_.suite = std::move(suite);
    r_.name = std::move(name);
    r_.limit = limit;
  }
  void add(double stat) {
    ++r_.cases;
    // NaN counts as a violation and sticks.
    if (std::isnan(stat) || std::isnan(r_.observed)) {
      r_.observed = std::nan("");
    } else {
      r_.observed = std::max(r_.observed, stat);
    }
  }
  void require(bool ok) {
    ++r_.cases;
    if (!ok) r_.observed += 1.0;
  }
  InvariantResult done() {
    r_.pass = r_.cases > 0 && !std::isnan(r_.observed) && r_.observed <= r_.limit;
    return r_;
  }

 private:
  InvariantResult r_;
};

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

std::vector<std::int64_t> random_vec(std::mt19937_64& rng, int len, std::int64_t k) {
  std::vector<std::int64_t> m(len);
  for (auto& v : m) v = draw(rng, 0, k - 1);
  return m;
}

std::vector<std::int64_t> scaled(std::span<const std::int64_t> m, std::int64_t c, std::int64_t k) {
  std::vector<std::int64_t> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = mod(mod(m[i], k) * c, k);
  return out;
}

const CubicForm& cusp() {
  static const CubicForm c(1, {{{3}, 1}});
  return c;
}

std::vector<CubicForm> suite_forms(std::mt19937_64& rng, std::initializer_list<int> ns, int randoms) {
  std::vector<CubicForm> out;
  for (int n : ns) {
    out.push_back(CubicForm::fermat(n));
    for (int i = 0; i < randoms; ++i) out.push_back(random_form(n, rng));
  }
  return out;
}

const std::vector<std::int64_t> kOddPrimes{3, 5, 7, 11, 13};

// identities: route agreement and the exact sum identities on n <= 2 (3 for
// the cheap ones).
std::vector<InvariantResult> identities(std::uint64_t seed, const ParallelContext& ctx) {
  std::mt19937_64 rng(seed);
  const std::string s = "identities";
  Tally gauss(s, "oracle_gauss", 1e-6), chr(s, "oracle_char", 1e-6), crt(s, "oracle_crt", 1e-6),
      stat(s, "oracle_stationary", 1e-6), qtab(s, "oracle_qtable", 1e-6);
  Tally pm(s, "pseudo_multiplicativity", 1e-6), twist(s, "unit_twist", 1e-6), pars(s, "parseval", 1e-8),
      orth(s, "orthogonality", 1e-6);
  const std::vector<std::int64_t> moduli{3, 5, 7, 9, 15, 25, 27, 35, 49};
  auto forms = suite_forms(rng, {1, 2}, 3);
  forms.push_back(cusp());
  for (const auto& C : forms) {
    const AugmentedForm f(C);
    SpectrumCache cache(C, {}, ctx);
    for (std::int64_t k : moduli) {
      const Modulus mod_k(k);
      for (int s_i = 0; s_i < 10; ++s_i) {
        auto m = random_vec(rng, f.arity(), k);
        if (s_i == 0) std::fill(m.begin(), m.end(), 0);
        if (s_i == 1) m.back() = 0;
        const auto ref = q_naive(f, m, k, {}, ctx).value;
        gauss.add(relative_gap(q_gauss(f, m, k, {}, ctx).value, ref));
        crt.add(relative_gap(q_crt(f, m, mod_k, {}, ctx, &cache).value, ref));
        if (mod_k.is_prime()) {
          qtab.add(relative_gap(cache.qtable(k)->at(m).value, ref));
          if (m.back() == 0) {
            const std::span<const std::int64_t> m_hat(m.data(), m.size() - 1);
            chr.add(relative_gap(q_char(*cache.spectrum(k), m_hat).value, ref));
          }
        } else if (mod_k.factors().size() == 1) {
          const auto& pp = mod_k.factors()[0];
          stat.add(relative_gap(q_prime_power(f, m, pp.p, pp.alpha, {}, ctx).value, ref));
        }
      }
    }
    // Q(m, k k') = Q(inv(k') m, k) Q(inv(k) m, k').
    const std::vector<std::pair<std::int64_t, std::int64_t>> pairs{{3, 5}, {5, 7}, {4, 9}, {3, 7}, {2, 15}};
    for (auto [a, b] : pairs) {
      for (int t = 0; t < 4; ++t) {
        const auto m = random_vec(rng, f.arity(), a * b);
        const auto [inv_b, inv_a] = crt_pair(a, b);
        const auto lhs = q_naive(f, m, a * b, {}, ctx).value;
        const auto rhs = q_naive(f, scaled(m, inv_b, a), a, {}, ctx).value *
                         q_naive(f, scaled(m, inv_a, b), b, {}, ctx).value;
        pm.add(relative_gap(rhs, lhs));
      }
    }
    // |Q((a m_hat, 0), k)| is constant over units a.
    for (std::int64_t k : {5, 9, 15}) {
      auto m = random_vec(rng, f.arity(), k);
      m.back() = 0;
      const double ref = std::abs(q_naive(f, m, k, {}, ctx).value);
      for (std::int64_t a = 1; a < k; ++a) {
        if (gcd64(a, k) != 1) continue;
        twist.add(rel(std::abs(q_naive(f, scaled(m, a, k), k, {}, ctx).value), ref));
      }
    }
  }
  auto with3 = suite_forms(rng, {3}, 1);
  with3.insert(with3.begin(), forms.begin(), forms.end());
  for (const auto& C : with3) {
    const AugmentedForm f(C);
    const std::vector<std::int64_t> zero(f.arity(), 0);
    for (std::int64_t p : kOddPrimes) {
      const auto sp = build_spectrum(C, p, {}, ctx);
      pars.add(rel(sp.parseval_sum(), sp.parseval_expected()));
      const double M = static_cast<double>(point_count(f, p, {}, ctx));
      const double expect = static_cast<double>(p) * M - std::pow(static_cast<double>(p), f.arity());
      orth.add(rel(q_naive(f, zero, p, {}, ctx).value.real(), expect));
    }
  }

  Tally ram(s, "ramanujan_formula", 1.0), gsq(s, "gauss_sum_square", 1e-8), jac(s, "jacobi_multiplicative", 0.0),
      roots(s, "unit_root_closure", 1e-12);
  for (std::int64_t p : {2, 3, 5, 7, 11, 13, 17, 19}) {
    std::int64_t q = p;
    for (int alpha = 1; q <= 343; ++alpha, q *= p) {
      for (std::int64_t d = -q; d <= q; ++d) {
        const Complex lit = reference::ramanujan_literal(p, alpha, d);
        // Scaled so the limit 1 means 1e-9 * p^alpha.
        ram.add(std::abs(static_cast<double>(ramanujan(p, alpha, d)) - lit) / (1e-9 * q));
      }
    }
  }
  for (std::int64_t p : {3, 5, 7, 11, 13, 17, 19, 23, 29, 31}) {
    const Complex g = gauss_sum(p);
    const double sign = (p % 4 == 1) ? 1.0 : -1.0;
    gsq.add(std::abs(g * g - Complex(sign * p, 0.0)) / p);
  }
  for (int t = 0; t < 200; ++t) {
    const std::int64_t a = draw(rng, -50, 50), b = draw(rng, -50, 50);
    const std::int64_t k = 2 * draw(rng, 0, 40) + 1, k2 = 2 * draw(rng, 0, 40) + 1;
    jac.require(jacobi(a * b, k) == jacobi(a, k) * jacobi(b, k));
    jac.require(jacobi(a, k * k2) == jacobi(a, k) * jacobi(a, k2));
  }
  for (std::int64_t k : {7, 12, 35, 49}) {
    const UnitRootTable e(k);
    for (std::int64_t a = 0; a < k; ++a)
      for (std::int64_t b = 0; b < k; ++b) roots.add(std::abs(e[a] * e[b] - e[(a + b) % k]));
  }
  return {gauss.done(), chr.done(), crt.done(), stat.done(), qtab.done(), pm.done(), twist.done(),
          pars.done(),  orth.done(), ram.done(), gsq.done(), jac.done(), roots.done()};
}

// bounds: the constant-1 inequalities and the constant-4 surrogates, as
// ratios to their right-hand sides.
std::vector<InvariantResult> bounds(std::uint64_t seed, const ParallelContext& ctx) {
  std::mt19937_64 rng(seed + 1);
  const std::string s = "bounds";
  Tally d(s, "D_constant_one", 1.0), d2(s, "D2_constant_one", 1.0), e2(s, "E2_constant_one", 1.0);
  Tally deligne(s, "prime_unconditional_c4", 4.0), generic(s, "prime_generic_c4", 4.0),
      square(s, "prime_square_c4", 4.0);
  const auto forms = suite_forms(rng, {1, 2, 3}, 4);
  for (const auto& C : forms) {
    const AugmentedForm f(C);
    const int n = C.n();
    SpectrumCache cache(C, {}, ctx);
    for (std::int64_t p : kOddPrimes) {
      const double P = static_cast<double>(p);
      d.add(compute_D(f, p, 0, cache, {}, ctx).ratio);
      d2.add(compute_D2(f, p, 1, 0, cache, {}, ctx).value / std::pow(P, 2 * n + 2));
      for (std::int64_t r : {1, 2}) e2.add(compute_E2(f, p, r, cache, {}, ctx).ratio);
      if (!is_nonsingular_mod_p(C, p, 100'000'000, ctx)) continue;
      const auto table = cache.qtable(p);
      const auto& data = table->data();
      const std::size_t slice = data.size() / static_cast<std::size_t>(p);
      for (std::size_t i = 0; i < data.size(); ++i) {
        const double a = std::abs(data[i]);
        deligne.add(a / std::pow(P, 0.5 * n + 1.5));
        if (i >= slice) generic.add(a / std::pow(P, 0.5 * n + 1.0));
      }
      if (p <= 7 || n <= 2) {
        const StationaryPlan plan(f, p, 2, {}, ctx);
        for (int t = 0; t < 12; ++t) {
          const auto m = random_vec(rng, f.arity(), p * p);
          const double g = static_cast<double>(gcd64(m.back(), p));
          square.add(std::abs(plan.evaluate(m, ctx).value) / (std::pow(P, n + 2) * g));
        }
      }
    }
  }
  return {d.done(), d2.done(), e2.done(), deligne.done(), generic.done(), square.done()};
}

std::vector<InvariantResult> averages(std::uint64_t seed, const ParallelContext& ctx) {
  std::mt19937_64 rng(seed + 2);
  const std::string s = "averages";
  Tally d2dual(s, "D2_dual_route", 1e-6), d2closed(s, "D2_closed_form", 1e-6), e2dual(s, "E2_dual_route", 1e-6),
      e_vs_d(s, "E_equals_p_minus_1_D", 1e-9), dmult(s, "D_multiplicative", 1e-6), emult(s, "E_multiplicative", 1e-6),
      parity(s, "R1_parity", 0.0), total(s, "R1_total", 0.0), rbounds(s, "R_bounds", 0.0), lattice(s, "n_count_ratio", 1.0),
      bad(s, "bad_set_scarcity", 1.0);
  auto forms = suite_forms(rng, {1, 2}, 2);
  forms.push_back(cusp());
  for (const auto& C : forms) {
    const AugmentedForm f(C);
    const int n = C.n();
    SpectrumCache cache(C, {}, ctx);
    for (std::int64_t p : {3, 5, 7}) {
      for (int alpha = 1; alpha <= 2; ++alpha) {
        for (std::int64_t b : {0, 1}) {
          const auto r = compute_D2(f, p, alpha, b, cache, {}, ctx);
          if (r.check) d2dual.add(rel(*r.check, r.value));
          if (r.closed) d2closed.add(rel(*r.closed, r.value));
        }
      }
      for (std::int64_t r : {1, 2, 3}) {
        const auto e = compute_E2(f, p, r, cache, {}, ctx);
        if (e.check) e2dual.add(rel(*e.check, e.value));
      }
      const double dp = compute_D(f, p, 0, cache, {}, ctx).value;
      e_vs_d.add(rel(compute_E(f, p, 0, cache, {}, ctx).value, (p - 1) * dp));

      std::int64_t sum = 0;
      std::vector<std::int64_t> l(n, 0);
      const std::int64_t cells = static_cast<std::int64_t>(std::pow(p, n));
      for (std::int64_t idx = 0; idx < cells; ++idx) {
        std::int64_t rest = idx;
        for (int i = 0; i < n; ++i) {
          l[i] = rest % p;
          rest /= p;
        }
        const auto rc = r1_r2_counts(C, p, 1, l);
        parity.require(rc.R1 >= 0 && rc.R1 <= 2);
        sum += rc.R1;
        for (int alpha = 1; alpha <= 3; ++alpha) rbounds.require(r1_r2_counts(C, p, alpha, l).within_bounds());
      }
      total.require(static_cast<std::uint64_t>(sum) == point_count(f, p, {}, ctx));
    }
    for (auto [a, b] : std::vector<std::pair<std::int64_t, std::int64_t>>{{3, 5}, {3, 7}, {5, 7}}) {
      const double prod = compute_D(f, a, 0, cache, {}, ctx).value * compute_D(f, b, 0, cache, {}, ctx).value;
      dmult.add(rel(compute_D(f, a * b, 0, cache, {}, ctx).value, prod));
      const double eprod = compute_E(f, a, 1, cache, {}, ctx).value * compute_E(f, b, 1, cache, {}, ctx).value;
      emult.add(rel(compute_E(f, a * b, 1, cache, {}, ctx).value, eprod));
    }
  }
  // Linear systems: count <= 3^n (y/k + 1)^{n - c}.
  const std::vector<std::vector<IntPolynomial>> systems{
      {IntPolynomial(2, {{{1, 0}, 1}, {{0, 1}, -1}})},
      {IntPolynomial(3, {{{1, 0, 0}, 1}, {{0, 1, 0}, 1}, {{0, 0, 1}, 1}})},
      {IntPolynomial(3, {{{1, 0, 0}, 1}, {{0, 0, 1}, -1}}), IntPolynomial(3, {{{0, 1, 0}, 2}, {{1, 0, 0}, -1}})},
  };
  for (const auto& sys : systems) {
    const int n = sys[0].n();
    const double cap = std::pow(3.0, n);
    for (std::int64_t k : {1, 2, 3, 5}) {
      for (double y : {5.0, 12.0, 20.0}) {
        const auto r_hat = random_vec(rng, n, k);
        lattice.add(n_count(sys, y, r_hat, k, 100'000'000, ctx).ratio / cap);
      }
    }
  }
  for (std::int64_t p : {5, 7, 11, 13}) {
    const auto sp = build_spectrum(CubicForm::fermat(3), p, {}, ctx);
    const auto scan = bad_set_scan(sp, {2.0});
    bad.add(static_cast<double>(scan.exceed_counts[0]) / (10.0 * p * p));
  }
  return {d2dual.done(), d2closed.done(), e2dual.done(), e_vs_d.done(), dmult.done(), emult.done(),
          parity.done(), total.done(),    rbounds.done(), lattice.done(), bad.done()};
}

std::vector<InvariantResult> density(std::uint64_t seed, const ParallelContext& ctx) {
  std::mt19937_64 rng(seed + 3);
  const std::string s = "density";
  Tally routes(s, "local_factor_routes", 1e-6), stable(s, "hensel_stabilization", 1e-9),
      witness(s, "hensel_witness", 0.0), series(s, "singular_series_positive", 0.0),
      tail(s, "sigma_tail_decreasing", 0.0), integral(s, "singular_integral_positive", 0.0),
      cauchy(s, "singular_integral_cauchy", 0.0), one(s, "upsilon_at_one", 1e-12), raw(s, "upsilon_le_raw", 0.0),
      mono(s, "raw_monotone", 0.0);
  auto forms = suite_forms(rng, {1, 2}, 2);
  forms.push_back(cusp());
  for (const auto& C : forms) {
    const AugmentedForm f(C);
    for (std::int64_t p : {2, 3, 5, 7}) {
      const auto lf = local_factor(f, p, 3, {}, ctx);
      routes.add(std::abs(lf.route_expsum - lf.route_count) / std::max(1.0, lf.route_count));
      const auto w = hensel_soluble(f, p, {}, ctx);
      if (w.soluble) {
        const auto g = f.gradient_mod(w.witness, p);
        witness.require(f.evaluate_mod(w.witness, p) == 0 &&
                        std::any_of(g.begin(), g.end(), [](std::int64_t v) { return v != 0; }));
        stable.add(std::abs(lf.levels[2] - lf.levels[1]));
      }
    }
  }
  const AugmentedForm f2(CubicForm::fermat(2)), f6(CubicForm::fermat(6));
  series.require(singular_series(f2, 13, 2, {}, ctx).value > 0.0);
  const auto s6 = singular_series(f6, 13, 2, {}, ctx);
  series.require(s6.value > 0.0);
  double last = INFINITY;
  for (const auto& lf : s6.factors) {
    if (lf.p < 5) continue;
    const double dev = std::abs(lf.sigma_p - 1.0);
    tail.require(dev < last);
    last = dev;
  }
  SingularIntegralOptions opt;
  opt.seed = seed;
  for (const auto* f : {&f2, &f6}) {
    const auto anchor = find_anchor(f->base(), AnchorStrategy::DiagonalBalance);
    const auto J = singular_integral(*f, anchor, opt, ctx);
    integral.require(J.J > 0.0);
    if (!J.monte_carlo) cauchy.require(std::abs(J.J_eps[2] - J.J_eps[1]) <= std::abs(J.J_eps[1] - J.J_eps[0]));
  }
  const auto anchor6 = find_anchor(f6.base(), AnchorStrategy::DiagonalBalance);
  one.add(std::abs(count_upsilon(f6, anchor6, 1.0, NAN, 4e9, ctx).upsilon - std::exp(-14.0)));
  std::uint64_t prev = 0;
  for (double X : {1.0, 2.0, 3.0, 4.0, 5.0}) {
    const auto r = count_upsilon(f6, anchor6, X, NAN, 4e9, ctx);
    raw.require(r.upsilon >= 0.0 && r.upsilon <= static_cast<double>(r.raw) && (r.raw > 0 || r.upsilon == 0.0));
    mono.require(r.raw >= prev);
    prev = r.raw;
  }
  return {routes.done(), stable.done(), witness.done(), series.done(), tail.done(),
          integral.done(), cauchy.done(), one.done(), raw.done(), mono.done()};
}

}  // namespace

std::int64_t draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(rng() % span);
}

CubicForm random_form(int n, std::mt19937_64& rng, int bound) {
  std::vector<std::vector<int>> exps;
  std::vector<int> e(n, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == n - 1) {
      e[i] = left;
      exps.push_back(e);
      return;
    }
    for (int v = left; v >= 0; --v) {
      e[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, 3);
  while (true) {
    std::vector<Term> terms;
    std::int64_t g = 0;
    for (const auto& x : exps) {
      const std::int64_t c = draw(rng, -bound, bound);
      if (c == 0) continue;
      terms.push_back({x, c});
      g = gcd64(g, c);
    }
    if (g == 1) return CubicForm(n, terms);
  }
}

std::vector<std::string> suite_names() { return {"identities", "bounds", "averages", "density"}; }

VerifyReport run_suite(std::string_view suite, std::uint64_t seed, const ParallelContext& ctx) {
  VerifyReport rep;
  if (suite == "identities") {
    rep.results = identities(seed, ctx);
  } else if (suite == "bounds") {
    rep.results = bounds(seed, ctx);
  } else if (suite == "averages") {
    rep.results = averages(seed, ctx);
  } else if (suite == "density") {
    rep.results = density(seed, ctx);
  } else {
    throw InvalidInput("unknown suite: " + std::string(suite));
  }
  return rep;
}

bool VerifyReport::all_pass() const {
  return std::all_of(results.begin(), results.end(), [](const InvariantResult& r) { return r.pass; });
}

Table VerifyReport::table() const {
  Table t;
  t.columns = {"suite", "invariant", "cases", "observed", "limit", "pass"};
  for (const auto& r : results) t.add({r.suite, r.name, r.cases, r.observed, r.limit, r.pass});
  return t;
}

}  // namespace cubeq
