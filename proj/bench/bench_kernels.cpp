#include <benchmark/benchmark.h>

#include "cubeq/density.hpp"
#include "cubeq/expsum.hpp"
#include "cubeq/reference.hpp"

using namespace cubeq;

namespace {

const AugmentedForm& fermat(int n) {
  static const AugmentedForm f2(CubicForm::fermat(2)), f3(CubicForm::fermat(3)), f6(CubicForm::fermat(6));
  return n == 2 ? f2 : n == 3 ? f3 : f6;
}

ParallelContext threads(const benchmark::State& s) { return {static_cast<int>(s.range(1))}; }

void BM_QNaive(benchmark::State& s) {
  const std::vector<std::int64_t> m{1, 2, 3, 4};
  for (auto _ : s) benchmark::DoNotOptimize(q_naive(fermat(3), m, s.range(0), {}, threads(s)));
}
BENCHMARK(BM_QNaive)->Args({25, 1})->Args({49, 1})->Args({49, 4});

void BM_QLiteral(benchmark::State& s) {
  const std::vector<std::int64_t> m{1, 2, 3, 4};
  for (auto _ : s) benchmark::DoNotOptimize(reference::q_literal(fermat(3), m, s.range(0)));
}
BENCHMARK(BM_QLiteral)->Arg(25);

void BM_QCrt(benchmark::State& s) {
  const std::vector<std::int64_t> m{1, 2, 3, 4};
  const Modulus k(s.range(0));
  for (auto _ : s) benchmark::DoNotOptimize(q_crt(fermat(3), m, k, {}, threads(s)));
}
BENCHMARK(BM_QCrt)->Args({35, 1})->Args({49, 1});

void BM_Spectrum(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(build_spectrum(fermat(3).base(), s.range(0), {}, threads(s)));
}
BENCHMARK(BM_Spectrum)->Args({13, 1})->Args({31, 1})->Args({31, 4});

// One entry by the literal sum; a table has p^n of them.
void BM_SpectrumLiteralEntry(benchmark::State& s) {
  const std::vector<std::int64_t> m{1, 2, 3};
  for (auto _ : s) benchmark::DoNotOptimize(reference::spectrum_literal(fermat(3).base(), m, s.range(0)));
}
BENCHMARK(BM_SpectrumLiteralEntry)->Arg(13)->Arg(31);

void BM_PointCount(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(point_count(fermat(2), s.range(0), {}, threads(s)));
}
BENCHMARK(BM_PointCount)->Args({343, 1})->Args({2401, 1});

void BM_PointCountLiteral(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(reference::point_count_literal(fermat(2), s.range(0)));
}
BENCHMARK(BM_PointCountLiteral)->Arg(343);

void BM_Upsilon(benchmark::State& s) {
  const auto anchor = find_anchor(fermat(6).base(), AnchorStrategy::DiagonalBalance);
  for (auto _ : s)
    benchmark::DoNotOptimize(count_upsilon(fermat(6), anchor, static_cast<double>(s.range(0)), NAN, 4e9, threads(s)));
}
BENCHMARK(BM_Upsilon)->Args({6, 1})->Args({6, 4})->Unit(benchmark::kMillisecond);

void BM_UpsilonLiteral(benchmark::State& s) {
  const auto anchor = find_anchor(fermat(6).base(), AnchorStrategy::DiagonalBalance);
  for (auto _ : s)
    benchmark::DoNotOptimize(reference::upsilon_literal(fermat(6), anchor.a_hat(), static_cast<double>(s.range(0))));
}
BENCHMARK(BM_UpsilonLiteral)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
