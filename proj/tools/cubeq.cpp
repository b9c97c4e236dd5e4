#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "cubeq/averages.hpp"
#include "cubeq/density.hpp"
#include "cubeq/expsum.hpp"
#include "cubeq/form_io.hpp"
#include "cubeq/store.hpp"
#include "cubeq/verify.hpp"

using namespace cubeq;

namespace {

struct Common {
  std::string form_path;
  int threads = 0;
  std::string out;
  std::string format = "csv";
  std::string store;
};

ParallelContext context(const Common& c) { return {resolve_threads(c.threads)}; }

void emit(const Common& c, const Table& t) {
  std::ostringstream buf;
  if (c.format == "json") {
    t.write_json(buf);
  } else {
    t.write_csv(buf);
  }
  if (c.out.empty()) {
    std::cout << buf.str();
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw InvalidInput("cannot open output file " + c.out);
  f << buf.str();
}

std::string join(const std::vector<std::int64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::unique_ptr<ResultStore> open_store(const Common& c) {
  if (c.store.empty()) return nullptr;
  return std::make_unique<ResultStore>(c.store);
}

AnchorPoint anchor_for(const CubicForm& C, const std::vector<double>& user, double lambda) {
  AnchorOptions opt;
  opt.lambda = lambda;
  if (user.empty()) return find_anchor(C, AnchorStrategy::DiagonalBalance, opt);
  opt.user_point = user;
  return find_anchor(C, AnchorStrategy::UserSupplied, opt);
}

void add_common(CLI::App* sub, Common& c, bool needs_form) {
  auto* f = sub->add_option("--form", c.form_path, "form JSON file");
  if (needs_form) f->required()->check(CLI::ExistingFile);
  sub->add_option("--threads", c.threads, "worker count (CUBEQ_THREADS overrides)")->check(CLI::PositiveNumber);
  sub->add_option("--out", c.out, "output file (default stdout)");
  sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--store", c.store, "result store directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cubeq: exponential sums and densities for C(x) = y^2"};
  app.require_subcommand(1);
  Common common;

  // expsum
  std::vector<std::int64_t> m;
  std::int64_t k = 1;
  bool check = false;
  auto* expsum = app.add_subcommand("expsum", "evaluate Q(m, k)");
  add_common(expsum, common, true);
  expsum->add_option("--m", m, "frequency vector, n+1 entries")->required()->delimiter(',');
  expsum->add_option("--k", k, "modulus")->required()->check(CLI::Range(std::int64_t{1}, std::int64_t{1} << 21));
  expsum->add_flag("--check", check, "compare every applicable route with the naive sum");

  // verify
  std::string suite;
  std::uint64_t seed = 1;
  auto* verify = app.add_subcommand("verify", "run an invariant suite");
  add_common(verify, common, false);
  verify->add_option("--suite", suite, "identities, bounds, averages or density")
      ->required()
      ->check(CLI::IsMember(suite_names()));
  verify->add_option("--seed", seed, "random seed for forms and Monte Carlo")->required();

  // scan
  std::vector<std::int64_t> primes;
  std::vector<double> thresholds;
  auto* scan = app.add_subcommand("scan", "bad-set scan of the spectrum");
  add_common(scan, common, true);
  scan->add_option("--p", primes, "odd primes")->required()->delimiter(',');
  scan->add_option("--thresholds", thresholds, "multiples of p^{n/2}")->required()->delimiter(',');

  // sseries
  std::int64_t P = 13;
  int A = 2;
  auto* sseries = app.add_subcommand("sseries", "local factors and truncated singular series");
  add_common(sseries, common, true);
  sseries->add_option("--P", P, "prime cutoff")->check(CLI::PositiveNumber);
  sseries->add_option("--A", A, "lifting level")->check(CLI::Range(1, 12));

  // count / asymptotic
  std::vector<double> xs, anchor_pt, eps{0.2, 0.1, 0.05};
  double lambda = 2.0;
  std::uint64_t mc_samples = 1 << 22;
  auto* count = app.add_subcommand("count", "weighted solution count");
  add_common(count, common, true);
  count->add_option("--X", xs, "box sizes")->required()->delimiter(',');
  count->add_option("--anchor", anchor_pt, "real zero a' of C (default: sign-balanced diagonal)")->delimiter(',');
  count->add_option("--lambda", lambda, "anchor scale");
  auto* asym = app.add_subcommand("asymptotic", "counts against X^{n-3/2} J S");
  add_common(asym, common, true);
  asym->add_option("--X", xs, "box sizes")->required()->delimiter(',');
  asym->add_option("--anchor", anchor_pt, "real zero a' of C")->delimiter(',');
  asym->add_option("--lambda", lambda, "anchor scale");
  asym->add_option("--P", P, "prime cutoff")->check(CLI::PositiveNumber);
  asym->add_option("--A", A, "lifting level")->check(CLI::Range(1, 12));
  asym->add_option("--eps", eps, "slab widths")->delimiter(',');
  asym->add_option("--seed", seed, "Monte Carlo seed");
  asym->add_option("--mc-samples", mc_samples, "Monte Carlo samples per width");

  // average
  std::string quantity = "D";
  std::int64_t param = 0;
  auto* average = app.add_subcommand("average", "D, D2, E or E2 at one modulus");
  add_common(average, common, true);
  average->add_option("--quantity", quantity)->check(CLI::IsMember({"D", "D2", "E", "E2"}));
  average->add_option("--k", k, "modulus (a prime power for D2)")->required()->check(CLI::PositiveNumber);
  average->add_option("--param", param, "b_{n+1} for D and D2, r for E and E2");

  // ncount
  std::string polys_path;
  double y = 10.0;
  std::vector<std::int64_t> r_hat;
  auto* ncount = app.add_subcommand("ncount", "lattice points on a polynomial system");
  add_common(ncount, common, false);
  ncount->add_option("--polys", polys_path, "polynomial JSON file")->required()->check(CLI::ExistingFile);
  ncount->add_option("--y", y, "box radius")->required();
  ncount->add_option("--k", k, "modulus")->check(CLI::PositiveNumber);
  ncount->add_option("--r", r_hat, "residue vector")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const ParallelContext ctx = context(common);
    auto store = open_store(common);

    if (*verify) {
      const auto rep = run_suite(suite, seed, ctx);
      emit(common, rep.table());
      return rep.all_pass() ? 0 : 3;
    }
    if (*ncount) {
      const auto polys = load_polynomials(polys_path);
      if (r_hat.empty()) r_hat.assign(polys.at(0).n(), 0);
      const auto r = n_count(polys, y, r_hat, k, 100'000'000, ctx);
      Table t;
      t.columns = {"count", "normalizer", "ratio"};
      t.add({static_cast<std::int64_t>(r.count), r.normalizer, r.ratio});
      emit(common, t);
      return 0;
    }

    const CubicForm C = load_form(common.form_path);
    const AugmentedForm f(C);

    if (*expsum) {
      if (static_cast<int>(m.size()) != f.arity()) throw InvalidInput("--m needs n+1 entries");
      for (auto& v : m) v = mod(v, k);
      const Modulus mk(k);
      SpectrumCache cache(C, {}, ctx, store.get());
      Table t;
      t.columns = {"k", "m", "route", "re", "im", "abs", "err"};
      auto row = [&](const char* route, const ExpSumValue& v) {
        t.add({k, join(m), std::string(route), v.value.real(), v.value.imag(), std::abs(v.value), v.err});
      };
      if (!check) {
        const auto v = q_crt(f, m, mk, {}, ctx, &cache);
        row(std::string(method_name(v.method)).c_str(), v);
        emit(common, t);
        return 0;
      }
      const auto ref = q_naive(f, m, k, {}, ctx);
      row("naive", ref);
      bool ok = true;
      auto compare = [&](const char* route, const ExpSumValue& v) {
        row(route, v);
        if (relative_gap(v.value, ref.value) > 1e-6 && std::abs(v.value - ref.value) > v.err + ref.err) ok = false;
      };
      if (k % 2 == 1) compare("gauss", q_gauss(f, m, k, {}, ctx));
      compare("crt", q_crt(f, m, mk, {}, ctx, &cache));
      if (k > 2 && mk.is_prime()) {
        compare("qtable", cache.qtable(k)->at(m));
        if (m.back() == 0) compare("char", q_char(*cache.spectrum(k), std::span(m.data(), m.size() - 1)));
      } else if (mk.factors().size() == 1 && k % 2 == 1) {
        compare("stationary", q_prime_power(f, m, mk.factors()[0].p, mk.factors()[0].alpha, {}, ctx));
      }
      emit(common, t);
      return ok ? 0 : 3;
    }
    if (*scan) {
      SpectrumCache cache(C, {}, ctx, store.get());
      std::vector<BadSetScan> scans;
      std::sort(primes.begin(), primes.end());
      for (auto p : primes) scans.push_back(bad_set_scan(*cache.spectrum(p), thresholds));
      emit(common, bad_set_table(scans));
      return 0;
    }
    if (*average) {
      SpectrumCache cache(C, {}, ctx, store.get());
      AverageReport r;
      if (quantity == "D") {
        r = compute_D(f, k, param, cache, {}, ctx);
      } else if (quantity == "E") {
        r = compute_E(f, k, param, cache, {}, ctx);
      } else if (quantity == "E2") {
        r = compute_E2(f, k, param, cache, {}, ctx);
      } else {
        const Modulus mk(k);
        if (mk.factors().size() != 1) throw InvalidInput("D2 needs a prime power modulus");
        r = compute_D2(f, mk.factors()[0].p, mk.factors()[0].alpha, param, cache, {}, ctx);
      }
      emit(common, average_table({r}));
      return 0;
    }
    if (*sseries) {
      const auto series = singular_series(f, P, A, {}, ctx);
      emit(common, singular_series_csv(series));
      std::cerr << "S_truncated " << format_cell(series.value) << "\n";
      return 0;
    }
    if (*count) {
      const auto anchor = anchor_for(C, anchor_pt, lambda);
      Table t;
      t.columns = {"X", "upsilon", "raw"};
      for (double X : xs) {
        const auto r = count_upsilon(f, anchor, X, NAN, 4'000'000'000ULL, ctx);
        t.add({X, r.upsilon, static_cast<std::int64_t>(r.raw)});
      }
      emit(common, t);
      return 0;
    }
    if (*asym) {
      const auto anchor = anchor_for(C, anchor_pt, lambda);
      SingularIntegralOptions opt;
      opt.eps_schedule = eps;
      opt.seed = seed;
      opt.mc_samples = mc_samples;
      emit(common, asymptotic_csv(asymptotic_table(f, anchor, xs, P, A, opt, {}, ctx)));
      return 0;
    }
  } catch (const VerificationFailure& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return 3;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
