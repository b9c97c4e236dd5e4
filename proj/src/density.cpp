#include "cubeq/density.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "kernels.hpp"

namespace cubeq {

namespace {

using u128 = unsigned __int128;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t narrow(u128 v) {
  if (v > std::numeric_limits<std::uint64_t>::max()) throw std::range_error("point count exceeds 64 bits");
  return static_cast<std::uint64_t>(v);
}

u128 upow(std::int64_t base, int exp) {
  u128 r = 1;
  for (int i = 0; i < exp; ++i) {
    r *= static_cast<u128>(base);
    if (r > (u128{1} << 100)) throw std::range_error("power exceeds the supported range");
  }
  return r;
}

void require_prime(std::int64_t p) {
  if (!is_prime(p)) throw InvalidInput("a prime is required");
}

bool all_zero(const std::vector<std::int64_t>& v) {
  return std::all_of(v.begin(), v.end(), [](std::int64_t t) { return t == 0; });
}

// Number of solutions mod p^A lying over the singular solutions mod p.
// For x over a singular point and j >= 1, f(x + p^j t) = f(x) mod p^{j+1},
// so either every lift of x to level j+1 is a solution or none is.
std::uint64_t singular_lifts(const AugmentedForm& form, std::int64_t p, int A,
                             const std::vector<std::vector<std::int64_t>>& singular, const Budget& budget,
                             const ParallelContext& ctx) {
  if (singular.empty()) return 0;
  if (A == 1) return singular.size();
  const int len = form.arity();
  const std::int64_t fiber = detail::ipow64(p, len);  // lifts per level
  const u128 fiber_count = static_cast<u128>(fiber);
  const double work = static_cast<double>(singular.size()) * std::pow(static_cast<double>(fiber), A - 2);
  if (work > static_cast<double>(budget.terms)) throw BudgetExceeded("Hensel lifting exceeds the term budget");

  // Counts solutions mod p^A over x, a solution mod p^j.
  std::function<u128(std::vector<std::int64_t>&, int, std::int64_t)> lift = [&](std::vector<std::int64_t>& x, int j,
                                                                               std::int64_t pj) -> u128 {
    const std::int64_t next = pj * p;
    if (form.evaluate_mod(x, next) != 0) return 0;
    if (j + 1 == A) return fiber_count;
    u128 total = 0;
    std::vector<std::int64_t> y(x);
    for (std::int64_t t = 0; t < fiber; ++t) {
      std::int64_t rest = t;
      for (int i = 0; i < len; ++i) {
        y[i] = x[i] + pj * (rest % p);
        rest /= p;
      }
      total += lift(y, j + 1, next);
    }
    return total;
  };

  if (A == 2) {
    u128 total = 0;
    for (auto x : singular) total += lift(x, 1, p);
    return narrow(total);
  }
  // A >= 3: parallel over (singular point, first-level lift).
  const std::int64_t items = static_cast<std::int64_t>(singular.size()) * fiber;
  const u128 total = blocked_reduce<u128>(
      items, 64, ctx, u128{0},
      [&](std::int64_t begin, std::int64_t end) {
        u128 acc = 0;
        std::vector<std::int64_t> y(len);
        for (std::int64_t it = begin; it < end; ++it) {
          const auto& x = singular[static_cast<std::size_t>(it / fiber)];
          if (form.evaluate_mod(x, p * p) != 0) continue;
          std::int64_t rest = it % fiber;
          for (int i = 0; i < len; ++i) {
            y[i] = x[i] + p * (rest % p);
            rest /= p;
          }
          acc += lift(y, 2, p * p);
        }
        return acc;
      },
      [](u128 a, u128 b) { return a + b; });
  return narrow(total);
}

std::uint64_t prime_power_count(const AugmentedForm& form, std::int64_t p, int A, const Budget& budget,
                                const ParallelContext& ctx) {
  const auto base = base_solutions(form, p, budget, ctx);
  if (A == 1) return base.total;
  const u128 lifted = static_cast<u128>(base.nonsingular) * upow(p, form.n() * (A - 1));
  return narrow(lifted + singular_lifts(form, p, A, base.singular, budget, ctx));
}

struct Cell2 {
  double upsilon = 0.0;
  std::uint64_t raw = 0;
};

// int_0^s gamma on a uniform table with cubic Hermite interpolation.
class GammaPrimitive {
 public:
  explicit GammaPrimitive(int cells = 1 << 14) : cells_(cells), h_(1.0 / cells) {
    // 8-point Gauss-Legendre per cell.
    static const double xs[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
    static const double ws[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
    G_.assign(cells_ + 1, 0.0);
    g_.assign(cells_ + 1, 0.0);
    for (int j = 0; j <= cells_; ++j) g_[j] = weight_gamma(j * h_);
    for (int j = 0; j < cells_; ++j) {
      const double mid = (j + 0.5) * h_, half = 0.5 * h_;
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += ws[k] * (weight_gamma(mid - half * xs[k]) + weight_gamma(mid + half * xs[k]));
      G_[j + 1] = G_[j] + half * s;
    }
  }

  double operator()(double s) const {
    if (s <= 0) return 0.0;
    if (s >= 1) return G_[cells_];
    const double u = s / h_;
    const int j = std::min(cells_ - 1, static_cast<int>(u));
    const double t = u - j;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * G_[j] + (t3 - 2 * t2 + t) * h_ * g_[j] + (-2 * t3 + 3 * t2) * G_[j + 1] +
           (t3 - t2) * h_ * g_[j + 1];
  }

  double total() const { return G_[cells_]; }
  int cells() const { return cells_; }
  double cell_mass(int j) const { return G_[j + 1] - G_[j]; }
  double width() const { return h_; }

 private:
  int cells_;
  double h_;
  std::vector<double> G_, g_;
};

// int_{-1}^{1} gamma(s) [|c - s^2| < eps] ds.
double slab_last(const GammaPrimitive& G, double c, double eps) {
  if (c + eps <= 0) return 0.0;
  const double hi = std::min(1.0, std::sqrt(c + eps));
  const double lo = std::min(1.0, std::sqrt(std::max(0.0, c - eps)));
  return 2.0 * (G(hi) - G(lo));
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Moments {
  std::vector<double> sum, sq;
};

Moments combine_moments(const Moments& a, const Moments& b) {
  if (a.sum.empty()) return b;
  if (b.sum.empty()) return a;
  Moments r(a);
  for (std::size_t i = 0; i < r.sum.size(); ++i) {
    r.sum[i] += b.sum[i];
    r.sq[i] += b.sq[i];
  }
  return r;
}

// Neville extrapolation to eps = 0 in the variable eps^2.
std::pair<double, double> extrapolate(const std::vector<double>& eps, const std::vector<double>& J) {
  const std::size_t m = eps.size();
  if (m == 1) return {J[0], kNaN};
  std::vector<double> t(J);
  std::vector<double> x(m);
  for (std::size_t i = 0; i < m; ++i) x[i] = eps[i] * eps[i];
  double previous = t[m - 1];
  for (std::size_t level = 1; level < m; ++level) {
    for (std::size_t i = 0; i + level < m; ++i) {
      t[i] = (x[i] * t[i + 1] - x[i + level] * t[i]) / (x[i] - x[i + level]);
    }
    if (level == m - 2) previous = t[1];
  }
  return {t[0], std::abs(t[0] - previous)};
}

}  // namespace

BaseSolutions base_solutions(const AugmentedForm& form, std::int64_t p, const Budget& budget,
                             const ParallelContext& ctx) {
  require_prime(p);
  const int n = form.n();
  std::uint64_t points = 0;
  if (!detail::pow_within(p, n, budget.terms, points)) throw BudgetExceeded("p^n exceeds the term budget");
  const auto roots = detail::square_root_counts(p);
  const detail::AxisSplit split(form.base());
  const std::int64_t outer = detail::ipow64(p, n - 1);
  struct Part {
    std::uint64_t total = 0, singular_count = 0;
    std::vector<std::vector<std::int64_t>> singular;
  };
  Part all = blocked_reduce<Part>(
      outer, std::max<std::int64_t>(64, (outer + 63) / 64), ctx, Part{},
      [&](std::int64_t begin, std::int64_t end) {
        Part part;
        std::vector<std::int64_t> x(n, 0);
        detail::decode_outer(begin, p, x);
        for (std::int64_t o = begin; o < end; ++o) {
          const auto c = split.coeffs_mod(x, p);
          for (std::int64_t x0 = 0; x0 < p; ++x0) {
            const std::int64_t v = c.at_mod(x0, p);
            part.total += roots[v];
            // df/dy = -2y vanishes mod p only at y = 0 (odd p) or always (p = 2).
            const bool candidate = (p == 2) || v == 0;
            if (!candidate) continue;
            x[0] = x0;
            if (!all_zero(form.base().gradient_mod(x, p))) continue;
            std::vector<std::int64_t> pt(x);
            pt.push_back(p == 2 ? v : 0);  // y^2 = y mod 2
            part.singular.push_back(std::move(pt));
          }
          x[0] = 0;
          detail::advance_outer(p, x);
        }
        return part;
      },
      [](const Part& a, const Part& b) {
        Part r(a);
        r.total += b.total;
        r.singular.insert(r.singular.end(), b.singular.begin(), b.singular.end());
        return r;
      });
  std::sort(all.singular.begin(), all.singular.end());
  BaseSolutions out;
  out.total = all.total;
  out.nonsingular = all.total - all.singular.size();
  out.singular = std::move(all.singular);
  return out;
}

std::uint64_t point_count(const AugmentedForm& form, std::int64_t q, const Budget& budget,
                          const ParallelContext& ctx) {
  if (q < 1) throw InvalidInput("modulus must be positive");
  if (q > (1 << 21)) throw InvalidInput("modulus too large for point counting");
  u128 total = 1;
  const Modulus mod(q);
  for (const auto& f : mod.factors()) {
    total *= prime_power_count(form, f.p, f.alpha, budget, ctx);
    narrow(total);
  }
  return narrow(total);
}

std::uint64_t point_count_enumerate(const AugmentedForm& form, std::int64_t q, const Budget& budget,
                                    const ParallelContext& ctx) {
  if (q < 1) throw InvalidInput("modulus must be positive");
  if (q > (1 << 21)) throw InvalidInput("modulus too large for point counting");
  std::uint64_t points = 0;
  if (!detail::pow_within(q, form.n(), budget.terms, points)) throw BudgetExceeded("q^n exceeds the term budget");
  const auto hist = detail::value_histogram(form.base(), q, ctx);
  const auto roots = detail::square_root_counts(q);
  u128 total = 0;
  for (std::int64_t d = 0; d < q; ++d) total += static_cast<u128>(hist[d]) * roots[d];
  return narrow(total);
}

LocalFactor local_factor(const AugmentedForm& form, std::int64_t p, int A, const Budget& budget,
                         const ParallelContext& ctx) {
  require_prime(p);
  if (A < 1) throw InvalidInput("level A must be at least 1");
  const int n = form.n();
  const std::vector<std::int64_t> zero(form.arity(), 0);
  LocalFactor lf;
  lf.p = p;
  lf.A = A;
  double expsum = 1.0;
  double err = 0.0;
  const double P = static_cast<double>(p);
  for (int alpha = 1; alpha <= A; ++alpha) {
    ExpSumValue v;
    if (p == 2) {
      v = q_naive(form, zero, detail::ipow64(2, alpha), budget, ctx);
    } else if (alpha == 1) {
      v = q_gauss(form, zero, p, budget, ctx);
    } else {
      v = q_zero_stationary(form, p, alpha, budget, ctx);
    }
    lf.q_zero.push_back(v.value.real());
    const double scale = std::pow(P, -alpha * (n + 1.0));
    expsum += scale * v.value.real();
    err += scale * v.err;
  }
  lf.route_expsum = expsum;

  const auto base = base_solutions(form, p, budget, ctx);
  lf.lift_density = static_cast<double>(base.nonsingular) / std::pow(P, n);
  for (int alpha = 1; alpha <= A; ++alpha) {
    std::uint64_t M = 0;
    if (alpha == 1) {
      M = base.total;
    } else {
      const u128 lifted = static_cast<u128>(base.nonsingular) * upow(p, n * (alpha - 1));
      M = narrow(lifted + singular_lifts(form, p, alpha, base.singular, budget, ctx));
    }
    lf.levels.push_back(static_cast<double>(M) / std::pow(P, alpha * n));
  }
  lf.route_count = lf.levels.back();
  lf.stabilized = A >= 2 && std::abs(lf.levels[A - 1] - lf.levels[A - 2]) <= 1e-9;
  lf.sigma_p = lf.route_count;
  const double gap = std::abs(lf.route_expsum - lf.route_count);
  if (gap > 1e-6 * std::max(1.0, lf.route_count)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "local factor routes disagree at p=" << p << " A=" << A << ": exponential sums give " << lf.route_expsum
        << ", point count gives " << lf.route_count << " (error bound " << err << ")";
    throw VerificationFailure(msg.str());
  }
  return lf;
}

HenselWitness hensel_soluble(const AugmentedForm& form, std::int64_t p, const Budget& budget,
                             const ParallelContext&) {
  require_prime(p);
  const int len = form.arity();
  std::uint64_t points = 0;
  if (!detail::pow_within(p, len, budget.terms, points)) throw BudgetExceeded("p^{n+1} exceeds the term budget");
  std::vector<std::int64_t> x(len, 0);
  for (std::uint64_t idx = 0; idx < points; ++idx) {
    // First coordinate most significant.
    std::uint64_t rest = idx;
    for (int i = len - 1; i >= 0; --i) {
      x[i] = static_cast<std::int64_t>(rest % p);
      rest /= p;
    }
    if (form.evaluate_mod(x, p) != 0) continue;
    if (!all_zero(form.gradient_mod(x, p))) return {true, x};
  }
  return {false, {}};
}

SingularSeries singular_series(const AugmentedForm& form, std::int64_t P, int A, const Budget& budget,
                               const ParallelContext& ctx) {
  if (P < 2) throw InvalidInput("prime cutoff must be at least 2");
  SingularSeries s;
  s.P = P;
  s.A = A;
  s.value = 1.0;
  for (std::int64_t p : primes_up_to(P)) {
    s.factors.push_back(local_factor(form, p, A, budget, ctx));
    s.value *= s.factors.back().sigma_p;
  }
  return s;
}

SingularIntegral singular_integral(const AugmentedForm& form, const AnchorPoint& anchor,
                                   const SingularIntegralOptions& options, const ParallelContext& ctx) {
  const int n = form.n();
  if (static_cast<int>(anchor.base.size()) != n) throw InvalidInput("anchor has wrong dimension");
  if (options.eps_schedule.empty()) throw InvalidInput("empty eps schedule");
  for (double e : options.eps_schedule) {
    if (!(e > 0)) throw InvalidInput("slab widths must be positive");
  }
  const auto a = anchor.a_hat();
  const GammaPrimitive G;
  const auto& eps = options.eps_schedule;
  const std::size_t m = eps.size();
  SingularIntegral out;
  out.eps = eps;
  out.J_eps.assign(m, 0.0);
  out.J_err.assign(m, 0.0);

  if (n + 1 <= options.grid_max_arity) {
    int N = static_cast<int>(std::floor(std::pow(static_cast<double>(options.grid_budget), 1.0 / n) + 1e-9));
    N = std::clamp(N, 2, options.max_per_axis);
    out.per_axis = N;
    const double h = 2.0 / N;
    std::vector<double> node(N), w(N);
    for (int j = 0; j < N; ++j) {
      node[j] = -1.0 + (j + 0.5) * h;
      w[j] = weight_gamma(node[j]) * h;
    }
    const std::int64_t total = detail::ipow64(N, n);
    const auto sums = blocked_reduce<std::vector<double>>(
        total, 4096, ctx, std::vector<double>{},
        [&](std::int64_t begin, std::int64_t end) {
          std::vector<double> acc(m, 0.0);
          std::vector<double> t(n);
          for (std::int64_t idx = begin; idx < end; ++idx) {
            std::int64_t rest = idx;
            double weight = 1.0;
            for (int i = 0; i < n; ++i) {
              const int j = static_cast<int>(rest % N);
              rest /= N;
              t[i] = a[i] + node[j];
              weight *= w[j];
            }
            if (weight == 0.0) continue;
            const double c = form.base().evaluate_real(t);
            for (std::size_t e = 0; e < m; ++e) acc[e] += weight * slab_last(G, c, eps[e]);
          }
          return acc;
        },
        [](const std::vector<double>& x, const std::vector<double>& y) {
          if (x.empty()) return y;
          if (y.empty()) return x;
          std::vector<double> r(x);
          for (std::size_t i = 0; i < r.size(); ++i) r[i] += y[i];
          return r;
        });
    for (std::size_t e = 0; e < m; ++e) out.J_eps[e] = sums.empty() ? 0.0 : sums[e] / (2.0 * eps[e]);
  } else {
    // Importance sampling: each coordinate is drawn from the piecewise
    // constant density proportional to the gamma mass of its table cell.
    out.monte_carlo = true;
    const int K = G.cells();
    std::vector<double> cum(K + 1, 0.0);
    for (int j = 0; j < K; ++j) cum[j + 1] = cum[j] + G.cell_mass(j) / G.total();
    const double width = G.width();
    const std::int64_t block = 1 << 16;
    const std::int64_t samples = static_cast<std::int64_t>(options.mc_samples);
    const std::int64_t nblocks = (samples + block - 1) / block;
    const auto mom = blocked_reduce<Moments>(
        nblocks, 1, ctx, Moments{},
        [&](std::int64_t begin, std::int64_t end) {
          Moments acc{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0)};
          std::vector<double> t(n);
          for (std::int64_t b = begin; b < end; ++b) {
            std::mt19937_64 rng(splitmix(options.seed * 0x100000001b3ULL + static_cast<std::uint64_t>(b)));
            const auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
            const std::int64_t count = std::min(block, samples - b * block);
            for (std::int64_t s = 0; s < count; ++s) {
              double weight = 1.0;
              for (int i = 0; i < n; ++i) {
                const double u = uniform();
                int j = static_cast<int>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin()) - 1;
                j = std::clamp(j, 0, K - 1);
                const double r = (j + uniform()) * width;
                const double sign = (rng() & 1) ? 1.0 : -1.0;
                const double mass = G.cell_mass(j);
                if (mass <= 0) {
                  weight = 0.0;
                  break;
                }
                weight *= weight_gamma(r) * 2.0 * G.total() * width / mass;
                t[i] = a[i] + sign * r;
              }
              if (weight == 0.0) continue;
              const double c = form.base().evaluate_real(t);
              for (std::size_t e = 0; e < m; ++e) {
                const double v = weight * slab_last(G, c, eps[e]) / (2.0 * eps[e]);
                acc.sum[e] += v;
                acc.sq[e] += v * v;
              }
            }
          }
          return acc;
        },
        combine_moments);
    for (std::size_t e = 0; e < m; ++e) {
      const double mean = mom.sum[e] / static_cast<double>(samples);
      const double var = std::max(0.0, mom.sq[e] / static_cast<double>(samples) - mean * mean);
      out.J_eps[e] = mean;
      out.J_err[e] = std::sqrt(var / static_cast<double>(samples));
    }
  }
  const auto [J, err] = extrapolate(eps, out.J_eps);
  out.J = J;
  out.extrapolation_error = err;
  if (options.require_positive && !(out.J > 0)) {
    throw VerificationFailure("singular integral is not positive; check the anchor");
  }
  return out;
}

CountResult count_upsilon(const AugmentedForm& form, const AnchorPoint& anchor, double X, double coefficient,
                          std::uint64_t budget, const ParallelContext& ctx) {
  const int n = form.n();
  if (!(X > 0)) throw InvalidInput("X must be positive");
  if (static_cast<int>(anchor.base.size()) != n) throw InvalidInput("anchor has wrong dimension");
  const auto a = anchor.a_hat();
  // Candidate coordinates per axis, filtered by the strict box condition.
  std::vector<std::vector<std::int64_t>> axis(n);
  double total = 1.0;
  std::int64_t reach = 0;
  for (int i = 0; i < n; ++i) {
    const auto lo = static_cast<std::int64_t>(std::floor(X * (a[i] - 1))) - 1;
    const auto hi = static_cast<std::int64_t>(std::ceil(X * (a[i] + 1))) + 1;
    for (std::int64_t v = lo; v <= hi; ++v) {
      if (std::abs(static_cast<double>(v) / X - a[i]) < 1.0) axis[i].push_back(v);
    }
    total *= static_cast<double>(axis[i].size());
    reach = std::max({reach, std::abs(lo), std::abs(hi)});
  }
  if (total > static_cast<double>(budget)) throw BudgetExceeded("counting box exceeds the enumeration budget");
  const double magnitude = static_cast<double>(form.base().coefficient_l1()) * std::pow(static_cast<double>(reach), 3);
  if (magnitude > 1e18) throw std::range_error("box too large for 64-bit evaluation");

  const double Y = std::pow(X, 1.5);
  const double Y2 = X * X * X;
  const detail::AxisSplit split(form.base());
  std::int64_t outer = 1;
  for (int i = 1; i < n; ++i) outer *= static_cast<std::int64_t>(axis[i].size());
  CountResult res;
  res.X = X;
  if (total == 0) {
    res.main_term = std::isnan(coefficient) ? kNaN : coefficient * std::pow(X, n - 1.5);
    res.ratio = kNaN;
    return res;
  }
  // Per-axis weights gamma(x_i / X - a_i).
  std::vector<std::vector<double>> wt(n);
  for (int i = 0; i < n; ++i) {
    for (auto v : axis[i]) wt[i].push_back(weight_gamma(static_cast<double>(v) / X - a[i]));
  }
  const auto cell = blocked_reduce<Cell2>(
      outer, std::max<std::int64_t>(16, (outer + 255) / 256), ctx, Cell2{},
      [&](std::int64_t begin, std::int64_t end) {
        Cell2 acc;
        std::vector<std::int64_t> x(n, 0);
        for (std::int64_t o = begin; o < end; ++o) {
          std::int64_t rest = o;
          double w_outer = 1.0;
          for (int i = 1; i < n; ++i) {
            const auto sz = static_cast<std::int64_t>(axis[i].size());
            const auto j = static_cast<std::size_t>(rest % sz);
            rest /= sz;
            x[i] = axis[i][j];
            w_outer *= wt[i][j];
          }
          const auto c = split.coeffs_exact(x);
          for (std::size_t j0 = 0; j0 < axis[0].size(); ++j0) {
            const std::int64_t C = c.at_exact(axis[0][j0]);
            if (C < 0 || static_cast<double>(C) >= Y2 + 1) continue;
            auto y = static_cast<std::int64_t>(std::sqrt(static_cast<double>(C)));
            while (y * y > C) --y;
            while ((y + 1) * (y + 1) <= C) ++y;
            if (y * y != C) continue;
            if (!(std::abs(static_cast<double>(y) / Y) < 1.0)) continue;
            const double w = w_outer * wt[0][j0] * weight_gamma(static_cast<double>(y) / Y);
            const int mult = y == 0 ? 1 : 2;  // +-y share the weight (gamma is even)
            acc.raw += mult;
            acc.upsilon += mult * w;
          }
        }
        return acc;
      },
      [](const Cell2& l, const Cell2& r) { return Cell2{l.upsilon + r.upsilon, l.raw + r.raw}; });
  res.upsilon = cell.upsilon;
  res.raw = cell.raw;
  res.main_term = std::isnan(coefficient) ? kNaN : coefficient * std::pow(X, n - 1.5);
  res.ratio = std::isnan(res.main_term) ? kNaN : res.upsilon / res.main_term;
  return res;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidInput("slope needs at least two points");
  const double k = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / k, my = sy / k;
  double num = 0, den = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  return num / den;
}

AsymptoticTable asymptotic_table(const AugmentedForm& form, const AnchorPoint& anchor,
                                 const std::vector<double>& X_list, std::int64_t P, int A,
                                 const SingularIntegralOptions& options, const Budget& budget,
                                 const ParallelContext& ctx) {
  AsymptoticTable t;
  t.integral = singular_integral(form, anchor, options, ctx);
  t.series = singular_series(form, P, A, budget, ctx);
  const double coefficient = t.integral.J * t.series.value;
  std::vector<double> lx, ly;
  for (double X : X_list) {
    t.rows.push_back(count_upsilon(form, anchor, X, coefficient, 4'000'000'000ULL, ctx));
    if (t.rows.back().upsilon > 0) {
      lx.push_back(std::log(X));
      ly.push_back(std::log(t.rows.back().upsilon));
    }
  }
  t.slope = lx.size() >= 2 ? least_squares_slope(lx, ly) : kNaN;
  return t;
}

Table asymptotic_csv(const AsymptoticTable& table) {
  Table t;
  t.columns = {"X", "upsilon", "raw", "main_term", "ratio", "slope_estimate"};
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    double slope = kNaN;
    if (i > 0) {
      const auto& q = table.rows[i - 1];
      if (r.upsilon > 0 && q.upsilon > 0) slope = std::log(r.upsilon / q.upsilon) / std::log(r.X / q.X);
    }
    t.add({r.X, r.upsilon, static_cast<std::int64_t>(r.raw), r.main_term, r.ratio, slope});
  }
  return t;
}

Table singular_series_csv(const SingularSeries& series) {
  Table t;
  t.columns = {"p", "A", "route_expsum", "route_count", "sigma_p", "stabilized"};
  for (const auto& f : series.factors) {
    t.add({f.p, static_cast<std::int64_t>(f.A), f.route_expsum, f.route_count, f.sigma_p, f.stabilized});
  }
  return t;
}

}  // namespace cubeq
