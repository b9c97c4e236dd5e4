#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cubeq/errors.hpp"
#include "cubeq/parallel.hpp"

namespace cubeq {

using i128 = __int128;
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

i128 checked_add(i128 a, i128 b);
i128 checked_mul(i128 a, i128 b);
std::string to_string(i128 v);

// Canonical residue of a modulo k (k >= 1), in [0, k).
constexpr std::int64_t mod(std::int64_t a, std::int64_t k) {
  const std::int64_t r = a % k;
  return r < 0 ? r + k : r;
}

struct Term {
  std::vector<int> exponents;  // length n, entries sum to 3
  std::int64_t coeff = 0;
};

// A term c * x_a * x_b * x_c with a <= b <= c; every cubic monomial has
// exactly three variable factors counted with multiplicity.
struct CubicMonomial {
  std::array<int, 3> vars{};
  std::int64_t coeff = 0;
};

// Homogeneous cubic form with integer coefficients in n variables.
class CubicForm {
 public:
  CubicForm(int n, std::vector<Term> terms);

  static CubicForm fermat(int n);
  static CubicForm diagonal(std::span<const std::int64_t> coeffs);

  int n() const noexcept { return n_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  const std::vector<CubicMonomial>& monomials() const noexcept { return monomials_; }

  // Coefficients a_i when the form is sum a_i x_i^3 with every a_i nonzero.
  std::optional<std::vector<std::int64_t>> diagonal_coefficients() const;

  // Exact value; throws std::range_error if the 128-bit range is exceeded.
  i128 evaluate(std::span<const std::int64_t> x) const;
  std::vector<i128> gradient(std::span<const std::int64_t> x) const;

  // Values reduced into [0, q). Inputs may be arbitrary integers; q must be
  // at most 2^21 so that intermediate products stay within 64 bits.
  std::int64_t evaluate_mod(std::span<const std::int64_t> x, std::int64_t q) const;
  std::vector<std::int64_t> gradient_mod(std::span<const std::int64_t> x, std::int64_t q) const;

  double evaluate_real(std::span<const double> x) const;

  // Sum of |coeff|; bounds |C(x)| <= l1 * max|x_i|^3.
  std::int64_t coefficient_l1() const;

  bool operator==(const CubicForm& other) const;

 private:
  void check_arity(std::size_t size) const;

  int n_;
  std::vector<Term> terms_;
  std::vector<CubicMonomial> monomials_;
};

// f(x) = C(x_1..x_n) - x_{n+1}^2 in n+1 variables.
class AugmentedForm {
 public:
  explicit AugmentedForm(CubicForm base) : base_(std::move(base)) {}

  const CubicForm& base() const noexcept { return base_; }
  int n() const noexcept { return base_.n(); }
  int arity() const noexcept { return base_.n() + 1; }

  i128 evaluate(std::span<const std::int64_t> x) const;
  std::vector<i128> gradient(std::span<const std::int64_t> x) const;
  std::int64_t evaluate_mod(std::span<const std::int64_t> x, std::int64_t q) const;
  std::vector<std::int64_t> gradient_mod(std::span<const std::int64_t> x, std::int64_t q) const;

 private:
  void check_arity(std::size_t size) const;

  CubicForm base_;
};

// Exact determinant of the Hessian of C at a rational point (fraction-free
// elimination).
Rational hessian_det_C(const CubicForm& form, std::span<const Rational> x);
// Exact determinant of the full (n+1)x(n+1) Hessian of f. By the block
// structure this equals -2 * hessian_det_C(x_hat).
Rational hessian_det_f(const AugmentedForm& form, std::span<const Rational> x);

Rational exact_rational(double v);

// Center of the counting box: a = (lambda * a', 0) with C(a') = 0 and
// H_C(a') != 0.
struct AnchorPoint {
  std::vector<double> base;  // a', length n
  double lambda = 2.0;
  Rational hessian;          // H_C(a') exactly

  std::vector<double> a_hat() const;
  // Full (n+1)-vector (lambda * a', 0).
  std::vector<double> point() const;
};

enum class AnchorStrategy { DiagonalBalance, UserSupplied };

struct AnchorOptions {
  double lambda = 2.0;
  double hessian_margin = 1e-9;
  std::vector<double> user_point;  // for UserSupplied
};

AnchorPoint find_anchor(const CubicForm& form, AnchorStrategy strategy,
                        const AnchorOptions& options = {});
// Re-checks |C(a')| <= 1e-9 |a'|^3 and |H_C(a')| >= margin.
bool anchor_is_valid(const CubicForm& form, const AnchorPoint& anchor, double hessian_margin = 1e-9);

double weight_gamma(double t);
double weight_Gamma(std::span<const double> v);

// True iff no nonzero x mod p has C(x) = 0 and grad C(x) = 0 mod p.
// Refuses (BudgetExceeded) when p^n exceeds `budget`.
bool is_nonsingular_mod_p(const CubicForm& form, std::int64_t p,
                          std::uint64_t budget = 100'000'000,
                          const ParallelContext& ctx = {});

// General sparse integer polynomial, used for the lattice-point counts.
class IntPolynomial {
 public:
  IntPolynomial(int n, std::vector<Term> terms);

  int n() const noexcept { return n_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  i128 evaluate(std::span<const std::int64_t> x) const;

 private:
  int n_;
  std::vector<Term> terms_;
};

}  // namespace cubeq
