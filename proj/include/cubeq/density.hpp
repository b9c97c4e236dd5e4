#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "cubeq/expsum.hpp"
#include "cubeq/table.hpp"

namespace cubeq {

// Solutions of f = 0 mod p split by the gradient of f mod p.
struct BaseSolutions {
  std::uint64_t total = 0;        // M(p)
  std::uint64_t nonsingular = 0;  // grad f != 0 mod p
  std::vector<std::vector<std::int64_t>> singular;  // grad f = 0 mod p, lexicographic
};
BaseSolutions base_solutions(const AugmentedForm& form, std::int64_t p, const Budget& budget = {},
                             const ParallelContext& ctx = {});

// M(q) = #{x mod q : f(x) = 0}. Prime powers p^A with A >= 2 use Hensel
// lifting: each nonsingular solution mod p has p^{n(A-1)} lifts, and lifts of
// singular ones are walked level by level; coprime factors multiply.
std::uint64_t point_count(const AugmentedForm& form, std::int64_t q, const Budget& budget = {},
                          const ParallelContext& ctx = {});
// Independent route: histogram of C mod q over x_hat, times square-root
// counts of y. Costs q^n.
std::uint64_t point_count_enumerate(const AugmentedForm& form, std::int64_t q, const Budget& budget = {},
                                    const ParallelContext& ctx = {});

struct LocalFactor {
  std::int64_t p = 0;
  int A = 0;
  double route_expsum = 0.0;  // sum_{alpha <= A} p^{-alpha(n+1)} Q(0, p^alpha)
  double route_count = 0.0;   // p^{-An} M(p^A)
  // |p^{-An} M(p^A) - p^{-(A-1)n} M(p^{A-1})| <= 1e-9
  bool stabilized = false;
  // p^{-n} times the number of nonsingular solutions mod p: the part of the
  // density that Hensel lifting carries unchanged to every level.
  double lift_density = 0.0;
  double sigma_p = 0.0;
  std::vector<double> levels;  // p^{-alpha n} M(p^alpha), alpha = 1..A
  std::vector<double> q_zero;  // Q(0, p^alpha), alpha = 1..A
};

// Both routes; throws VerificationFailure if they differ by more than
// 1e-6 * max(1, route_count).
LocalFactor local_factor(const AugmentedForm& form, std::int64_t p, int A, const Budget& budget = {},
                         const ParallelContext& ctx = {});

struct HenselWitness {
  bool soluble = false;
  std::vector<std::int64_t> witness;  // first x mod p (lexicographic) with f = 0, grad f != 0
};
HenselWitness hensel_soluble(const AugmentedForm& form, std::int64_t p, const Budget& budget = {},
                             const ParallelContext& ctx = {});

struct SingularSeries {
  std::int64_t P = 0;
  int A = 0;
  std::vector<LocalFactor> factors;  // increasing p
  double value = 0.0;                // prod sigma_p
};
SingularSeries singular_series(const AugmentedForm& form, std::int64_t P, int A, const Budget& budget = {},
                               const ParallelContext& ctx = {});

struct SingularIntegralOptions {
  std::vector<double> eps_schedule{0.2, 0.1, 0.05};
  // Tensor grid: points per axis = min(max_per_axis, floor(grid_budget^{1/n})).
  std::uint64_t grid_budget = 16'000'000;
  int max_per_axis = 4000;
  // Monte Carlo above this arity (n + 1).
  int grid_max_arity = 5;
  std::uint64_t mc_samples = 1 << 22;
  std::uint64_t seed = 1;
  bool require_positive = true;
};

struct SingularIntegral {
  std::vector<double> eps;
  std::vector<double> J_eps;
  std::vector<double> J_err;  // Monte Carlo standard error per eps (0 on the grid)
  double J = 0.0;             // Richardson extrapolation in eps^2
  double extrapolation_error = 0.0;
  bool monte_carlo = false;
  int per_axis = 0;
};

// J(eps) = (1/2 eps) int_{|f(t)| < eps} Gamma(t - a) dt. The last coordinate
// is integrated in closed form from a table of int_0^s gamma.
SingularIntegral singular_integral(const AugmentedForm& form, const AnchorPoint& anchor,
                                   const SingularIntegralOptions& options = {}, const ParallelContext& ctx = {});

struct CountResult {
  double X = 0.0;
  double upsilon = 0.0;
  std::uint64_t raw = 0;
  double main_term = 0.0;  // X^{n-3/2} J S
  double ratio = 0.0;
};

// Weighted count over x_hat with |x_i / X - a_i| < 1 and |y| < X^{3/2}.
// `coefficient` is J * S for the main term (NaN leaves it unset).
CountResult count_upsilon(const AugmentedForm& form, const AnchorPoint& anchor, double X,
                          double coefficient = std::numeric_limits<double>::quiet_NaN(),
                          std::uint64_t budget = 4'000'000'000ULL, const ParallelContext& ctx = {});

struct AsymptoticTable {
  SingularIntegral integral;
  SingularSeries series;
  std::vector<CountResult> rows;
  double slope = 0.0;  // least squares, log upsilon against log X
};

AsymptoticTable asymptotic_table(const AugmentedForm& form, const AnchorPoint& anchor,
                                 const std::vector<double>& X_list, std::int64_t P, int A,
                                 const SingularIntegralOptions& options = {}, const Budget& budget = {},
                                 const ParallelContext& ctx = {});

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

// X,upsilon,raw,main_term,ratio,slope_estimate (local slope to the previous row)
Table asymptotic_csv(const AsymptoticTable& table);
// p,A,route_expsum,route_count,sigma_p,stabilized
Table singular_series_csv(const SingularSeries& series);

}  // namespace cubeq
