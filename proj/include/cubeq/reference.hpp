#pragma once

// Serial, literal implementations used as oracles in tests and as the
// baseline in benchmarks. They share no code with the kernels beyond form
// evaluation and are deliberately slow.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "cubeq/forms.hpp"

namespace cubeq::reference {

// sum over units h mod k and l in (Z/k)^{n+1} of exp(2 pi i (h f(l) + m.l) / k).
std::complex<double> q_literal(const AugmentedForm& form, std::span<const std::int64_t> m, std::int64_t k);

// sum over l_hat mod p of (C(l_hat)|p) exp(2 pi i m_hat.l_hat / p), Legendre
// symbol by Euler's criterion.
std::complex<double> spectrum_literal(const CubicForm& form, std::span<const std::int64_t> m_hat, std::int64_t p);

// #{x mod q : f(x) = 0 mod q} by full enumeration.
std::uint64_t point_count_literal(const AugmentedForm& form, std::int64_t q);

// #{l_hat mod p : C(l_hat) = 0 mod p}.
std::uint64_t zero_count_literal(const CubicForm& form, std::int64_t p);

struct UpsilonLiteral {
  double upsilon = 0.0;
  std::uint64_t raw = 0;
};
// Enumerates the whole box including the last coordinate.
UpsilonLiteral upsilon_literal(const AugmentedForm& form, std::span<const double> a_hat, double X);

// sum over units h mod p^alpha of exp(2 pi i h d / p^alpha).
std::complex<double> ramanujan_literal(std::int64_t p, int alpha, std::int64_t d);

}  // namespace cubeq::reference
