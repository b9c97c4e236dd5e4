#include "cubeq/forms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "kernels.hpp"

namespace cubeq {

i128 checked_add(i128 a, i128 b) {
  i128 r;
  if (__builtin_add_overflow(a, b, &r)) throw std::range_error("128-bit integer overflow in addition");
  return r;
}

i128 checked_mul(i128 a, i128 b) {
  i128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::range_error("128-bit integer overflow in multiplication");
  return r;
}

std::string to_string(i128 v) {
  if (v == 0) return "0";
  const bool negative = v < 0;
  unsigned __int128 u = negative ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  std::string s;
  while (u > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (negative) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

namespace {

void validate_exponents(int n, const std::vector<int>& e, int required_degree) {
  if (static_cast<int>(e.size()) != n) throw InvalidInput("exponent vector length does not match n");
  int total = 0;
  for (int v : e) {
    if (v < 0) throw InvalidInput("negative exponent");
    total += v;
  }
  if (required_degree >= 0 && total != required_degree) {
    throw InvalidInput("exponents of a cubic term must sum to 3");
  }
}

std::vector<Term> canonical_terms(int n, std::vector<Term> terms, int required_degree) {
  if (n < 1) throw InvalidInput("number of variables must be at least 1");
  if (terms.empty()) throw InvalidInput("polynomial needs at least one term");
  for (const auto& t : terms) {
    validate_exponents(n, t.exponents, required_degree);
    if (t.coeff == 0) throw InvalidInput("term coefficients must be nonzero");
  }
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.exponents > b.exponents; });
  for (std::size_t i = 1; i < terms.size(); ++i) {
    if (terms[i].exponents == terms[i - 1].exponents) throw InvalidInput("duplicate exponent vector");
  }
  return terms;
}

i128 ipow128(i128 base, int exp) {
  i128 r = 1;
  for (int i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

}  // namespace

CubicForm::CubicForm(int n, std::vector<Term> terms) : n_(n), terms_(canonical_terms(n, std::move(terms), 3)) {
  for (const auto& t : terms_) {
    CubicMonomial m;
    m.coeff = t.coeff;
    int k = 0;
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < t.exponents[i]; ++j) m.vars[k++] = i;
    }
    monomials_.push_back(m);
  }
}

CubicForm CubicForm::fermat(int n) {
  std::vector<std::int64_t> ones(static_cast<std::size_t>(std::max(n, 0)), 1);
  return diagonal(ones);
}

CubicForm CubicForm::diagonal(std::span<const std::int64_t> coeffs) {
  const int n = static_cast<int>(coeffs.size());
  std::vector<Term> terms;
  for (int i = 0; i < n; ++i) {
    if (coeffs[i] == 0) continue;
    Term t;
    t.exponents.assign(n, 0);
    t.exponents[i] = 3;
    t.coeff = coeffs[i];
    terms.push_back(std::move(t));
  }
  return CubicForm(n, std::move(terms));
}

std::optional<std::vector<std::int64_t>> CubicForm::diagonal_coefficients() const {
  std::vector<std::int64_t> coeffs(n_, 0);
  for (const auto& m : monomials_) {
    if (m.vars[0] != m.vars[2]) return std::nullopt;
    coeffs[m.vars[0]] = m.coeff;
  }
  for (auto c : coeffs) {
    if (c == 0) return std::nullopt;
  }
  return coeffs;
}

void CubicForm::check_arity(std::size_t size) const {
  if (static_cast<int>(size) != n_) throw InvalidInput("point has wrong dimension for this form");
}

i128 CubicForm::evaluate(std::span<const std::int64_t> x) const {
  check_arity(x.size());
  i128 acc = 0;
  for (const auto& m : monomials_) {
    i128 t = m.coeff;
    for (int v : m.vars) t = checked_mul(t, x[v]);
    acc = checked_add(acc, t);
  }
  return acc;
}

std::vector<i128> CubicForm::gradient(std::span<const std::int64_t> x) const {
  check_arity(x.size());
  std::vector<i128> g(n_, 0);
  for (const auto& m : monomials_) {
    for (int pos = 0; pos < 3; ++pos) {
      i128 t = m.coeff;
      for (int other = 0; other < 3; ++other) {
        if (other != pos) t = checked_mul(t, x[m.vars[other]]);
      }
      g[m.vars[pos]] = checked_add(g[m.vars[pos]], t);
    }
  }
  return g;
}

std::int64_t CubicForm::evaluate_mod(std::span<const std::int64_t> x, std::int64_t q) const {
  check_arity(x.size());
  std::int64_t acc = 0;
  for (const auto& m : monomials_) {
    std::int64_t t = mod(m.coeff, q);
    for (int v : m.vars) t = (t * mod(x[v], q)) % q;
    acc = (acc + t) % q;
  }
  return acc;
}

std::vector<std::int64_t> CubicForm::gradient_mod(std::span<const std::int64_t> x, std::int64_t q) const {
  check_arity(x.size());
  std::vector<std::int64_t> g(n_, 0);
  for (const auto& m : monomials_) {
    for (int pos = 0; pos < 3; ++pos) {
      std::int64_t t = mod(m.coeff, q);
      for (int other = 0; other < 3; ++other) {
        if (other != pos) t = (t * mod(x[m.vars[other]], q)) % q;
      }
      g[m.vars[pos]] = (g[m.vars[pos]] + t) % q;
    }
  }
  return g;
}

double CubicForm::evaluate_real(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n_) throw InvalidInput("point has wrong dimension for this form");
  double acc = 0.0;
  for (const auto& m : monomials_) {
    acc += static_cast<double>(m.coeff) * x[m.vars[0]] * x[m.vars[1]] * x[m.vars[2]];
  }
  return acc;
}

std::int64_t CubicForm::coefficient_l1() const {
  std::int64_t s = 0;
  for (const auto& m : monomials_) s += m.coeff < 0 ? -m.coeff : m.coeff;
  return s;
}

bool CubicForm::operator==(const CubicForm& other) const {
  if (n_ != other.n_ || terms_.size() != other.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].exponents != other.terms_[i].exponents || terms_[i].coeff != other.terms_[i].coeff) return false;
  }
  return true;
}

void AugmentedForm::check_arity(std::size_t size) const {
  if (static_cast<int>(size) != arity()) throw InvalidInput("point has wrong dimension for the augmented form");
}

i128 AugmentedForm::evaluate(std::span<const std::int64_t> x) const {
  check_arity(x.size());
  const i128 y = x[n()];
  return checked_add(base_.evaluate(x.first(n())), -checked_mul(y, y));
}

std::vector<i128> AugmentedForm::gradient(std::span<const std::int64_t> x) const {
  check_arity(x.size());
  auto g = base_.gradient(x.first(n()));
  g.push_back(checked_mul(-2, x[n()]));
  return g;
}

std::int64_t AugmentedForm::evaluate_mod(std::span<const std::int64_t> x, std::int64_t q) const {
  check_arity(x.size());
  const std::int64_t y = mod(x[n()], q);
  return mod(base_.evaluate_mod(x.first(n()), q) - (y * y) % q, q);
}

std::vector<std::int64_t> AugmentedForm::gradient_mod(std::span<const std::int64_t> x, std::int64_t q) const {
  check_arity(x.size());
  auto g = base_.gradient_mod(x.first(n()), q);
  g.push_back(mod(-2 * mod(x[n()], q), q));
  return g;
}

namespace {

// Integer matrix of second partials of C at the integer point X. Entries are
// linear in X.
std::vector<std::vector<BigInt>> integer_hessian(const CubicForm& form, const std::vector<BigInt>& X, int size) {
  std::vector<std::vector<BigInt>> h(size, std::vector<BigInt>(size, 0));
  for (const auto& m : form.monomials()) {
    for (int u = 0; u < 3; ++u) {
      for (int v = 0; v < 3; ++v) {
        if (u == v) continue;
        const int w = 3 - u - v;
        h[m.vars[u]][m.vars[v]] += BigInt(m.coeff) * X[m.vars[w]];
      }
    }
  }
  return h;
}

// Bareiss fraction-free elimination.
BigInt bareiss_det(std::vector<std::vector<BigInt>> a) {
  const int n = static_cast<int>(a.size());
  if (n == 0) return 1;
  BigInt prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[k][k] == 0) {
      int swap = -1;
      for (int i = k + 1; i < n; ++i) {
        if (a[i][k] != 0) {
          swap = i;
          break;
        }
      }
      if (swap < 0) return 0;
      std::swap(a[k], a[swap]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

// Common denominator D and integer numerators X with x = X / D.
BigInt clear_denominators(std::span<const Rational> x, std::vector<BigInt>& X) {
  BigInt d = 1;
  for (const auto& v : x) d = boost::multiprecision::lcm(d, boost::multiprecision::denominator(v));
  X.clear();
  for (const auto& v : x) X.push_back(boost::multiprecision::numerator(v) * (d / boost::multiprecision::denominator(v)));
  return d;
}

BigInt big_pow(const BigInt& b, int e) {
  BigInt r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

Rational hessian_det_C(const CubicForm& form, std::span<const Rational> x) {
  if (static_cast<int>(x.size()) != form.n()) throw InvalidInput("point has wrong dimension for this form");
  std::vector<BigInt> X;
  const BigInt d = clear_denominators(x, X);
  const BigInt det = bareiss_det(integer_hessian(form, X, form.n()));
  return Rational(det, big_pow(d, form.n()));
}

Rational hessian_det_f(const AugmentedForm& form, std::span<const Rational> x) {
  const int n = form.n();
  if (static_cast<int>(x.size()) != n + 1) throw InvalidInput("point has wrong dimension for the augmented form");
  std::vector<BigInt> X;
  const BigInt d = clear_denominators(x.first(n), X);
  // d * Hessian(f) has C-block H_C(X) and last diagonal entry -2d.
  auto h = integer_hessian(form.base(), X, n + 1);
  h[n][n] = -2 * d;
  const BigInt det = bareiss_det(std::move(h));
  return Rational(det, big_pow(d, n + 1));
}

Rational exact_rational(double v) {
  if (!std::isfinite(v)) throw InvalidInput("non-finite coordinate");
  int exp = 0;
  const double mant = std::frexp(v, &exp);
  // mant * 2^53 is an exact integer.
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  Rational r{BigInt(scaled)};
  if (exp > 0) {
    r *= Rational(big_pow(BigInt(2), exp));
  } else if (exp < 0) {
    r /= Rational(big_pow(BigInt(2), -exp));
  }
  return r;
}

std::vector<double> AnchorPoint::a_hat() const {
  std::vector<double> a(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) a[i] = lambda * base[i];
  return a;
}

std::vector<double> AnchorPoint::point() const {
  auto a = a_hat();
  a.push_back(0.0);
  return a;
}

bool anchor_is_valid(const CubicForm& form, const AnchorPoint& anchor, double hessian_margin) {
  if (static_cast<int>(anchor.base.size()) != form.n() || !(anchor.lambda > 0)) return false;
  double norm = 0.0;
  long double value = 0.0L;
  for (double v : anchor.base) norm = std::max(norm, std::abs(v));
  for (const auto& m : form.monomials()) {
    value += static_cast<long double>(m.coeff) * anchor.base[m.vars[0]] * anchor.base[m.vars[1]] *
             anchor.base[m.vars[2]];
  }
  if (std::abs(static_cast<double>(value)) > 1e-9 * norm * norm * norm) return false;
  std::vector<Rational> exact;
  for (double v : anchor.base) exact.push_back(exact_rational(v));
  const Rational h = hessian_det_C(form, exact);
  return boost::multiprecision::abs(h) >= exact_rational(hessian_margin) && h == anchor.hessian;
}

AnchorPoint find_anchor(const CubicForm& form, AnchorStrategy strategy, const AnchorOptions& options) {
  if (!(options.lambda > 0)) throw InvalidInput("anchor scale must be positive");
  AnchorPoint anchor;
  anchor.lambda = options.lambda;
  if (strategy == AnchorStrategy::UserSupplied) {
    if (static_cast<int>(options.user_point.size()) != form.n()) {
      throw InvalidInput("user-supplied anchor has wrong dimension");
    }
    anchor.base = options.user_point;
    std::vector<Rational> exact;
    for (double v : anchor.base) exact.push_back(exact_rational(v));
    anchor.hessian = hessian_det_C(form, exact);
  } else {
    const auto coeffs = form.diagonal_coefficients();
    if (!coeffs) {
      throw InvalidInput("diagonal-balance anchors need a diagonal form; supply an anchor point instead");
    }
    const int n = form.n();
    if (n > 30) throw InvalidInput("diagonal-balance search supports at most 30 variables");
    bool found = false;
    // Sign vectors in lexicographic order with + before -.
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n) && !found; ++bits) {
      i128 total = 0;
      for (int i = 0; i < n; ++i) {
        const bool negative = (bits >> (n - 1 - i)) & 1;
        total += negative ? -(*coeffs)[i] : (*coeffs)[i];
      }
      if (total != 0) continue;
      anchor.base.assign(n, 0.0);
      for (int i = 0; i < n; ++i) anchor.base[i] = ((bits >> (n - 1 - i)) & 1) ? -1.0 : 1.0;
      std::vector<Rational> exact(anchor.base.begin(), anchor.base.end());
      anchor.hessian = hessian_det_C(form, exact);
      found = anchor.hessian != 0;
    }
    if (!found) {
      throw InvalidInput("no sign-balanced zero among +-1 vectors; supply an anchor point instead");
    }
  }
  if (!anchor_is_valid(form, anchor, options.hessian_margin)) {
    throw InvalidInput("anchor is not a zero of C with nonvanishing Hessian; supply a different anchor");
  }
  return anchor;
}

double weight_gamma(double t) {
  if (!(std::abs(t) < 1.0)) return 0.0;
  return std::exp(-2.0 / (1.0 - t * t));
}

double weight_Gamma(std::span<const double> v) {
  double w = 1.0;
  for (double t : v) {
    w *= weight_gamma(t);
    if (w == 0.0) break;
  }
  return w;
}

bool is_nonsingular_mod_p(const CubicForm& form, std::int64_t p, std::uint64_t budget,
                          const ParallelContext& ctx) {
  std::uint64_t points = 0;
  if (!detail::pow_within(p, form.n(), budget, points)) {
    throw BudgetExceeded("p^n exceeds the enumeration budget for the singularity check");
  }
  const detail::AxisSplit split(form);
  const std::int64_t outer = static_cast<std::int64_t>(points) / p;
  const int n = form.n();
  const bool singular = blocked_reduce<int>(
      outer, 4096, ctx, 0,
      [&](std::int64_t begin, std::int64_t end) {
        std::vector<std::int64_t> x(n, 0);
        detail::decode_outer(begin, p, x);
        for (std::int64_t o = begin; o < end; ++o) {
          const auto c = split.coeffs_mod(x, p);
          for (std::int64_t x0 = 0; x0 < p; ++x0) {
            if (c.at_mod(x0, p) != 0) continue;
            x[0] = x0;
            if (std::all_of(x.begin(), x.end(), [](std::int64_t v) { return v == 0; })) continue;
            const auto g = form.gradient_mod(x, p);
            if (std::all_of(g.begin(), g.end(), [](std::int64_t v) { return v == 0; })) return 1;
          }
          x[0] = 0;
          detail::advance_outer(p, x);
        }
        return 0;
      },
      [](int a, int b) { return a | b; });
  return !singular;
}

IntPolynomial::IntPolynomial(int n, std::vector<Term> terms) : n_(n), terms_(canonical_terms(n, std::move(terms), -1)) {}

i128 IntPolynomial::evaluate(std::span<const std::int64_t> x) const {
  if (static_cast<int>(x.size()) != n_) throw InvalidInput("point has wrong dimension for this polynomial");
  i128 acc = 0;
  for (const auto& t : terms_) {
    i128 v = t.coeff;
    for (int i = 0; i < n_; ++i) v = checked_mul(v, ipow128(x[i], t.exponents[i]));
    acc = checked_add(acc, v);
  }
  return acc;
}

}  // namespace cubeq
