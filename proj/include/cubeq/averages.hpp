#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "cubeq/expsum.hpp"
#include "cubeq/store.hpp"
#include "cubeq/table.hpp"

namespace cubeq {

enum class Quantity { D, D2, E, E2 };
std::string_view quantity_name(Quantity q);

struct AverageReport {
  std::int64_t k = 1;
  Quantity quantity = Quantity::D;
  std::int64_t parameter = 0;  // b_{n+1} for D/D2, r for E/E2
  double value = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  // Second route, when one applies (Ramanujan identity for D2, closed form
  // for E2 at p not dividing r).
  std::optional<double> check;
  // D2(p, 0) = p^{n+2} sum chi(C)^2 at alpha = 1, odd p.
  std::optional<double> closed;
};

// |Q((b_hat, b_last), k)| for every b_hat mod k, index sum_i b_i k^i.
// Odd primes read spectrum (b_last = 0) or Q tables from `cache`.
std::vector<double> abs_q_slice(const AugmentedForm& form, std::int64_t k, std::int64_t b_last, SpectrumCache& cache,
                                const Budget& budget = {}, const ParallelContext& ctx = {});

// D(k, b) = sum_{b_hat mod k} |Q(b, k)|. Bound p^{(3n+2)/2} for odd prime k
// and b = 0, NaN otherwise.
AverageReport compute_D(const AugmentedForm& form, std::int64_t k, std::int64_t b_last, SpectrumCache& cache,
                        const Budget& budget = {}, const ParallelContext& ctx = {});

// D2(p^alpha, b) = sum_{b_hat} |Q(b, p^alpha)|^2, with check
//   p^{n alpha} sum_{l_hat} |sum_y c_{p^alpha}(C(l_hat) - y^2) e(b y / p^alpha)|^2.
AverageReport compute_D2(const AugmentedForm& form, std::int64_t p, int alpha, std::int64_t b_last,
                         SpectrumCache& cache, const Budget& budget = {}, const ParallelContext& ctx = {});

// E(k, r) = sum*_{c mod k} D(k, c r).
AverageReport compute_E(const AugmentedForm& form, std::int64_t k, std::int64_t r, SpectrumCache& cache,
                        const Budget& budget = {}, const ParallelContext& ctx = {});

// E2(k, r) = sum*_c D2(k, c r). For prime p not dividing r the check is
//   p^{n+1} sum_l c_p(f(l))^2 - D2(p, 0),
// the full second moment minus the b_{n+1} = 0 slice.
AverageReport compute_E2(const AugmentedForm& form, std::int64_t k, std::int64_t r, SpectrumCache& cache,
                         const Budget& budget = {}, const ParallelContext& ctx = {});

struct RootCounts {
  std::int64_t R1 = 0;
  std::int64_t R2 = 0;
  int kappa = 0;  // p-adic valuation of C(l_hat), capped at alpha
  double r1_bound = 0.0;  // 2 p^{kappa/2}
  double r2_bound = 0.0;  // 2 p^{kappa/2 + 1}
  bool within_bounds() const { return R1 <= r1_bound && R2 <= r2_bound; }
};

// R1 = #{y mod p^alpha : y^2 = C(l_hat)}, R2 = #{y : p^{alpha-1} || C(l_hat) - y^2}.
RootCounts r1_r2_counts(const CubicForm& form, std::int64_t p, int alpha, std::span<const std::int64_t> l_hat);

struct LatticeCount {
  std::uint64_t count = 0;
  double normalizer = 0.0;  // (y/k + 1)^{n - c}
  double ratio = 0.0;
};

// #{m_hat : |m_i| <= y, m_hat = r_hat mod k, every poly vanishes}.
LatticeCount n_count(const std::vector<IntPolynomial>& polys, double y, std::span<const std::int64_t> r_hat,
                     std::int64_t k, std::uint64_t budget = 100'000'000, const ParallelContext& ctx = {});

struct BadSetScan {
  std::int64_t p = 0;
  int n = 0;
  std::vector<double> thresholds;  // ascending
  std::vector<std::uint64_t> exceed_counts;
  double max_ratio = 0.0;
  // 32 log2-spaced bins of |T|/p^{n/2} over [2^-8, 2^8); smaller values
  // (zero included) land in bin 0, larger in bin 31.
  std::vector<std::uint64_t> histogram;
};

BadSetScan bad_set_scan(const SpectrumTable& spectrum, std::vector<double> thresholds);

// CSV schemas.
Table average_table(const std::vector<AverageReport>& reports);    // p,quantity,parameter,value,bound,ratio
Table bad_set_table(const std::vector<BadSetScan>& scans);         // p,tau,exceed_count,p_pow_nminus1,fraction

}  // namespace cubeq
