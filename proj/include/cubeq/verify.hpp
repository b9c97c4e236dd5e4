#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "cubeq/forms.hpp"
#include "cubeq/parallel.hpp"
#include "cubeq/table.hpp"

namespace cubeq {

// One named invariant: the worst observed statistic over all cases against
// its limit. Boolean invariants count violations with limit 0.
struct InvariantResult {
  std::string suite;
  std::string name;
  std::int64_t cases = 0;
  double observed = 0.0;
  double limit = 0.0;
  bool pass = true;
};

struct VerifyReport {
  std::vector<InvariantResult> results;
  bool all_pass() const;
  Table table() const;  // suite,invariant,cases,observed,limit,pass
};

std::vector<std::string> suite_names();

// Runs one of identities, bounds, averages, density. Output depends only on
// the seed.
VerifyReport run_suite(std::string_view suite, std::uint64_t seed, const ParallelContext& ctx = {});

// Random cubic form: every monomial gets a coefficient in [-bound, bound],
// redrawn until the coefficients are coprime.
CubicForm random_form(int n, std::mt19937_64& rng, int bound = 3);

// Uniform integer in [lo, hi] from raw 64-bit draws, so sequences agree
// across standard libraries.
std::int64_t draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi);

}  // namespace cubeq
