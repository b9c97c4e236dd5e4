// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cubeq/averages.hpp"
#include "cubeq/density.hpp"
#include "cubeq/expsum.hpp"
#include "cubeq/modular.hpp"
#include "cubeq/reference.hpp"
#include "cubeq/verify.hpp"

using namespace cubeq;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

std::vector<std::int64_t> rand_vec(std::mt19937_64& rng, int len, std::int64_t k) {
  std::vector<std::int64_t> v(len);
  for (auto& x : v) x = draw(rng, 0, k - 1);
  return v;
}

std::vector<std::int64_t> times(std::span<const std::int64_t> m, std::int64_t c, std::int64_t k) {
  std::vector<std::int64_t> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = mod(mod(m[i], k) * c, k);
  return out;
}

// Fermat plus `randoms` random forms for each n.
std::vector<CubicForm> grid(std::uint64_t seed, std::initializer_list<int> ns, int randoms) {
  std::mt19937_64 rng(seed);
  std::vector<CubicForm> out;
  for (int n : ns) {
    out.push_back(CubicForm::fermat(n));
    for (int i = 0; i < randoms; ++i) out.push_back(random_form(n, rng));
  }
  return out;
}

const std::vector<std::int64_t> kModuli{3, 5, 7, 9, 15, 25, 27, 35, 49};
const std::vector<std::int64_t> kOdd{3, 5, 7, 11, 13};

// Criteria 1 and 3 share the grid.
double c3_worst = 0.0;

Outcome criterion1() {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  std::int64_t cases = 0;
  for (const auto& C : grid(11, {1, 2, 3}, 10)) {
    const AugmentedForm f(C);
    SpectrumCache cache(C);
    for (std::int64_t k : kModuli) {
      const Modulus mk(k);
      for (int s = 0; s < 100; ++s) {
        auto m = rand_vec(rng, f.arity(), k);
        if (s % 4 == 0) m.back() = 0;
        const auto ref = q_naive(f, m, k).value;
        auto cmp = [&](const Complex& v) {
          worst = std::max(worst, relative_gap(v, ref));
          ++cases;
        };
        const auto g = q_gauss(f, m, k).value;
        cmp(g);
        c3_worst = std::max(c3_worst, rel(std::abs(g), std::abs(ref)));
        cmp(q_crt(f, m, mk, {}, {}, &cache).value);
        if (mk.is_prime()) {
          cmp(cache.qtable(k)->at(m).value);
          if (m.back() == 0) cmp(q_char(*cache.spectrum(k), std::span(m.data(), m.size() - 1)).value);
        } else if (mk.factors().size() == 1) {
          cmp(q_prime_power(f, m, mk.factors()[0].p, mk.factors()[0].alpha).value);
        }
      }
    }
  }
  return {worst <= 1e-6, std::to_string(cases) + " comparisons, max relative gap " + fmt("%.3g", worst)};
}

Outcome criterion2() {
  std::mt19937_64 rng(202);
  const auto forms = grid(22, {1, 2, 3}, 3);
  const std::vector<std::pair<std::int64_t, std::int64_t>> pairs{{3, 5}, {5, 7}, {4, 9}, {3, 7}, {2, 15},
                                                                 {8, 5}, {7, 9}, {3, 16}, {11, 4}, {5, 9}};
  double pm = 0.0, tw = 0.0;
  for (int t = 0; t < 500; ++t) {
    const auto& C = forms[draw(rng, 0, forms.size() - 1)];
    const AugmentedForm f(C);
    const auto [a, b] = pairs[draw(rng, 0, pairs.size() - 1)];
    const auto m = rand_vec(rng, f.arity(), a * b);
    const auto [inv_b, inv_a] = crt_pair(a, b);
    const auto lhs = q_naive(f, m, a * b).value;
    pm = std::max(pm, relative_gap(q_naive(f, times(m, inv_b, a), a).value * q_naive(f, times(m, inv_a, b), b).value,
                                   lhs));
  }
  for (int t = 0; t < 500; ++t) {
    const auto& C = forms[draw(rng, 0, forms.size() - 1)];
    const AugmentedForm f(C);
    const std::int64_t k = kModuli[draw(rng, 0, kModuli.size() - 1)];
    std::int64_t u = 0;
    do u = draw(rng, 1, k - 1);
    while (gcd64(u, k) != 1);
    auto m = rand_vec(rng, f.arity(), k);
    m.back() = 0;
    const double ref = std::abs(q_naive(f, m, k).value);
    tw = std::max(tw, rel(std::abs(q_naive(f, times(m, u, k), k).value), ref));
  }
  return {pm <= 1e-6 && tw <= 1e-6,
          "pseudo-multiplicativity max " + fmt("%.3g", pm) + ", unit twist max " + fmt("%.3g", tw)};
}

Outcome criterion3() {
  return {c3_worst <= 1e-6, "max relative magnitude gap " + fmt("%.3g", c3_worst) + " over odd k"};
}

// Criteria 4, 6 and 7 share the forms and the spectrum caches.
struct BoundsGrid {
  double d = 0, d2 = 0, e2 = 0, dual = 0;
  double unconditional = 0, generic = 0, square = 0, parseval = 0;
  std::int64_t nonsingular_cases = 0, tables = 0;
};

const BoundsGrid& bounds_grid() {
  static const BoundsGrid g = [] {
    BoundsGrid g;
    std::mt19937_64 rng(404);
    for (const auto& C : grid(44, {1, 2, 3}, 19)) {
      const AugmentedForm f(C);
      const int n = C.n();
      SpectrumCache cache(C);
      for (std::int64_t p : kOdd) {
        const double P = static_cast<double>(p);
        const auto sp = cache.spectrum(p);
        g.parseval = std::max(g.parseval, rel(sp->parseval_sum(), sp->parseval_expected()));
        ++g.tables;
        g.d = std::max(g.d, compute_D(f, p, 0, cache).ratio);
        const auto d2 = compute_D2(f, p, 1, 0, cache);
        g.d2 = std::max(g.d2, d2.value / std::pow(P, 2 * n + 2));
        if (d2.check) g.dual = std::max(g.dual, rel(*d2.check, d2.value));
        if (d2.closed) g.dual = std::max(g.dual, rel(*d2.closed, d2.value));
        for (std::int64_t r : {1, 2}) {
          const auto e2 = compute_E2(f, p, r, cache);
          g.e2 = std::max(g.e2, e2.ratio);
          if (e2.check) g.dual = std::max(g.dual, rel(*e2.check, e2.value));
        }
        if (!is_nonsingular_mod_p(C, p)) continue;
        ++g.nonsingular_cases;
        const auto& data = cache.qtable(p)->data();
        const std::size_t slice = data.size() / static_cast<std::size_t>(p);
        for (std::size_t i = 0; i < data.size(); ++i) {
          const double a = std::abs(data[i]);
          g.unconditional = std::max(g.unconditional, a / std::pow(P, 0.5 * n + 1.5));
          if (i >= slice) g.generic = std::max(g.generic, a / std::pow(P, 0.5 * n + 1.0));
        }
        const StationaryPlan plan(f, p, 2);
        for (int t = 0; t < 20; ++t) {
          const auto m = rand_vec(rng, f.arity(), p * p);
          const double gc = static_cast<double>(gcd64(m.back(), p));
          g.square = std::max(g.square, std::abs(plan.evaluate(m).value) / (std::pow(P, n + 2) * gc));
        }
      }
    }
    return g;
  }();
  return g;
}

Outcome criterion4() {
  const auto& g = bounds_grid();
  const bool ok = g.d <= 1.0 && g.d2 <= 1.0 && g.e2 <= 1.0 && g.dual <= 1e-6;
  return {ok, "max D/p^{(3n+2)/2} " + fmt("%.6g", g.d) + ", D2/p^{2n+2} " + fmt("%.6g", g.d2) + ", E2/bound " +
                  fmt("%.6g", g.e2) + ", dual-route gap " + fmt("%.3g", g.dual)};
}

Outcome criterion5() {
  double worst = 0.0;
  for (std::int64_t p : primes_up_to(343)) {
    std::int64_t q = p;
    for (int alpha = 1; q <= 343; ++alpha, q *= p) {
      for (std::int64_t d = -q; d <= q; ++d) {
        const double gap = std::abs(static_cast<double>(ramanujan(p, alpha, d)) - reference::ramanujan_literal(p, alpha, d));
        worst = std::max(worst, gap / (1e-9 * q));
      }
    }
  }
  return {worst <= 1.0, "max gap " + fmt("%.3g", worst) + " x 1e-9 p^alpha"};
}

Outcome criterion6() {
  const auto& g = bounds_grid();
  const bool ok = g.unconditional <= 4 && g.generic <= 4 && g.square <= 4;
  return {ok, std::to_string(g.nonsingular_cases) + " nonsingular (form,p); max |Q(m,p)|/p^{n/2+3/2} " +
                  fmt("%.4g", g.unconditional) + ", p!|m_{n+1}: |Q|/p^{n/2+1} " + fmt("%.4g", g.generic) +
                  ", |Q(m,p^2)|/(p^{n+2}(m_{n+1},p)) " + fmt("%.4g", g.square)};
}

Outcome criterion7() {
  const auto& g = bounds_grid();
  return {g.parseval <= 1e-8, std::to_string(g.tables) + " tables, max relative gap " + fmt("%.3g", g.parseval)};
}

Outcome criterion8() {
  auto forms = grid(88, {1, 2}, 5);
  forms.push_back(CubicForm(1, {{{3}, 2}}));
  double gap = 0.0, drift = 0.0;
  int soluble = 0;
  try {
    for (const auto& C : forms) {
      const AugmentedForm f(C);
      for (std::int64_t p : {2, 3, 5, 7}) {
        const auto lf = local_factor(f, p, 3);
        for (int A = 1; A <= 3; ++A) {
          const auto cut = local_factor(f, p, A);
          gap = std::max(gap, std::abs(cut.route_expsum - cut.route_count));
        }
        if (hensel_soluble(f, p).soluble) {
          ++soluble;
          drift = std::max(drift, std::abs(lf.levels[2] - lf.levels[1]));
        }
      }
    }
  } catch (const VerificationFailure& e) {
    return {false, std::string("route disagreement: ") + e.what()};
  }
  return {gap <= 1e-6 && drift <= 1e-9, "max route gap " + fmt("%.3g", gap) + "; " + std::to_string(soluble) +
                                            " soluble (form,p), max |d(A=3) - d(A=2)| " + fmt("%.3g", drift)};
}

Outcome criterion9() {
  const AugmentedForm f(CubicForm::fermat(6));
  bool ok = true;
  for (std::int64_t p : primes_up_to(13)) ok = ok && hensel_soluble(f, p).soluble;
  const auto S = singular_series(f, 13, 2);
  for (const auto& lf : S.factors) ok = ok && lf.sigma_p > 0;
  SingularIntegralOptions opt;
  opt.seed = 9;
  const auto J = singular_integral(f, find_anchor(f.base(), AnchorStrategy::DiagonalBalance), opt);
  ok = ok && S.value > 0 && J.J > 0;
  return {ok, "S(13, A=2) " + fmt("%.9g", S.value) + ", J " + fmt("%.6g", J.J) + " (Monte Carlo)"};
}

Outcome criterion10() {
  std::string detail;
  bool ok = true;
  double prev = INFINITY;
  for (std::int64_t p : {5, 7, 11, 13}) {
    const auto s = bad_set_scan(build_spectrum(CubicForm::fermat(3), p), {2.0});
    const double frac = static_cast<double>(s.exceed_counts[0]) / std::pow(p, 3);
    ok = ok && s.exceed_counts[0] <= static_cast<std::uint64_t>(10 * p * p) && frac <= prev;
    prev = frac;
    detail += (detail.empty() ? "" : ", ") + std::to_string(p) + ":" + std::to_string(s.exceed_counts[0]);
  }
  return {ok, "exceed counts " + detail + " (fraction non-increasing)"};
}

Outcome criterion11() {
  const AugmentedForm f(CubicForm::fermat(6));
  const auto anchor = find_anchor(f.base(), AnchorStrategy::DiagonalBalance);
  std::vector<double> lx, ly;
  for (int X = 3; X <= 10; ++X) {
    lx.push_back(std::log(X));
    ly.push_back(std::log(count_upsilon(f, anchor, X).upsilon));
  }
  const double slope = least_squares_slope(lx, ly);
  const double one = count_upsilon(f, anchor, 1.0).upsilon;
  const bool ok = slope >= 3.7 && slope <= 5.3 && std::abs(one - std::exp(-14.0)) <= 1e-12;
  return {ok, "slope " + fmt("%.4f", slope) + " (window [3.7, 5.3]), |U(1) - e^-14| " +
                  fmt("%.3g", std::abs(one - std::exp(-14.0)))};
}

Outcome criterion12() {
  bool ok = true;
  for (const auto& s : suite_names()) {
    std::string first;
    for (int threads : {1, 4, 8}) {
      std::ostringstream out;
      run_suite(s, 7, ParallelContext{threads}).table().write_csv(out);
      if (threads == 1) {
        first = out.str();
      } else {
        ok = ok && out.str() == first;
      }
    }
  }
  return {ok, "suites identities, bounds, averages, density at 1, 4, 8 workers"};
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3,  criterion4,
                                                       criterion5, criterion6, criterion7,  criterion8,
                                                       criterion9, criterion10, criterion11, criterion12};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %zu: %s  %s\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
