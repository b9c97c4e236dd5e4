#pragma once

// Internal enumeration helpers shared by the parallel kernels. A cubic form
// is split along its first variable,
//   C(x) = B3 x0^3 + B2 x0^2 + B1 x0 + B0,
// with B_j depending only on x1..x_{n-1}; the B_j are refreshed once per
// outer point and the x0 loop is a Horner step.

#include <cstdint>
#include <vector>

#include "cubeq/forms.hpp"
#include "cubeq/parallel.hpp"

namespace cubeq::detail {

class AxisSplit {
 public:
  explicit AxisSplit(const CubicForm& form) {
    for (const auto& m : form.monomials()) {
      Part part;
      part.coeff = m.coeff;
      int deg0 = 0;
      for (int v : m.vars) {
        if (v == 0) {
          ++deg0;
        } else {
          part.others.push_back(v);
        }
      }
      parts_[deg0].push_back(std::move(part));
    }
  }

  struct Coeffs {
    std::int64_t b[4] = {0, 0, 0, 0};

    std::int64_t at_mod(std::int64_t x0, std::int64_t q) const {
      std::int64_t v = b[3];
      v = (v * x0 + b[2]) % q;
      v = (v * x0 + b[1]) % q;
      v = (v * x0 + b[0]) % q;
      return v;
    }
    std::int64_t at_exact(std::int64_t x0) const {
      return ((b[3] * x0 + b[2]) * x0 + b[1]) * x0 + b[0];
    }
  };

  // Coefficients reduced into [0, q) for the outer point `x` (x[0] unused).
  Coeffs coeffs_mod(const std::vector<std::int64_t>& x, std::int64_t q) const {
    Coeffs c;
    for (int j = 0; j < 4; ++j) {
      std::int64_t acc = 0;
      for (const auto& part : parts_[j]) {
        std::int64_t t = mod(part.coeff, q);
        for (int v : part.others) t = (t * mod(x[v], q)) % q;
        acc += t;
      }
      c.b[j] = acc % q;
    }
    return c;
  }

  // Exact coefficients; the caller guarantees the magnitudes fit in 64 bits.
  Coeffs coeffs_exact(const std::vector<std::int64_t>& x) const {
    Coeffs c;
    for (int j = 0; j < 4; ++j) {
      std::int64_t acc = 0;
      for (const auto& part : parts_[j]) {
        std::int64_t t = part.coeff;
        for (int v : part.others) t *= x[v];
        acc += t;
      }
      c.b[j] = acc;
    }
    return c;
  }

 private:
  struct Part {
    std::int64_t coeff = 0;
    std::vector<int> others;
  };
  std::vector<Part> parts_[4];
};

// Decodes a flat index over coordinates 1..n-1 (each in [0, q)) into x,
// with coordinate 1 varying fastest.
inline void decode_outer(std::int64_t index, std::int64_t q, std::vector<std::int64_t>& x) {
  for (std::size_t i = 1; i < x.size(); ++i) {
    x[i] = index % q;
    index /= q;
  }
}

// Odometer increment over coordinates 1..n-1.
inline void advance_outer(std::int64_t q, std::vector<std::int64_t>& x) {
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (++x[i] < q) return;
    x[i] = 0;
  }
}

// Integer power with overflow check against `limit`; returns false if
// base^exp would exceed it.
inline bool pow_within(std::int64_t base, int exp, std::uint64_t limit, std::uint64_t& out) {
  unsigned __int128 acc = 1;
  for (int i = 0; i < exp; ++i) {
    acc *= static_cast<unsigned __int128>(base);
    if (acc > limit) return false;
  }
  out = static_cast<std::uint64_t>(acc);
  return true;
}

inline std::int64_t ipow64(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// #{x_hat mod q : C(x_hat) = d} for every d in [0, q). The caller checks
// the q^n budget.
inline std::vector<std::uint64_t> value_histogram(const CubicForm& form, std::int64_t q, const ParallelContext& ctx) {
  const int n = form.n();
  const AxisSplit split(form);
  const std::int64_t outer = ipow64(q, n - 1);
  using Hist = std::vector<std::uint64_t>;
  return blocked_reduce<Hist>(
      outer, std::max<std::int64_t>(256, (outer + 63) / 64), ctx, Hist{},
      [&](std::int64_t begin, std::int64_t end) {
        Hist h(static_cast<std::size_t>(q), 0);
        std::vector<std::int64_t> x(n, 0);
        decode_outer(begin, q, x);
        for (std::int64_t o = begin; o < end; ++o) {
          const auto c = split.coeffs_mod(x, q);
          for (std::int64_t x0 = 0; x0 < q; ++x0) ++h[static_cast<std::size_t>(c.at_mod(x0, q))];
          advance_outer(q, x);
        }
        return h;
      },
      [](const Hist& a, const Hist& b) {
        if (a.empty()) return b;
        if (b.empty()) return a;
        Hist r(a);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
        return r;
      });
}

// #{y mod q : y^2 = d} for every d.
inline std::vector<std::uint64_t> square_root_counts(std::int64_t q) {
  std::vector<std::uint64_t> r(static_cast<std::size_t>(q), 0);
  for (std::int64_t y = 0; y < q; ++y) ++r[static_cast<std::size_t>((y * y) % q)];
  return r;
}

}  // namespace cubeq::detail
