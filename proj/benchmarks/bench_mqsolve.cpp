// Microbenchmarks for the hot paths: field arithmetic, row reduction,
// change of variables, triangularization, and full solves.
#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "mqsolve/reducer.hpp"
#include "mqsolve/solver.hpp"

using mq::Elem;
using mq::Field;
using mq::Matrix;
using mq::MQSystem;
using mq::Rng;

namespace {

Field field_for(std::int64_t tag) {
  switch (tag) {
    case 0: return Field::prime(7);
    case 1: return Field::prime(65521);
    case 2: return Field::binary(4);
    default: return Field::binary(16);
  }
}

const char* field_name(std::int64_t tag) {
  switch (tag) {
    case 0: return "GF(7)";
    case 1: return "GF(65521)";
    case 2: return "GF(16)";
    default: return "GF(65536)";
  }
}

void bm_field_mul(benchmark::State& state) {
  const Field f = field_for(state.range(0));
  Rng rng(1);
  std::vector<Elem> xs(1024), ys(1024);
  for (auto& v : xs) v = f.random_element(rng);
  for (auto& v : ys) v = f.random_element(rng);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.mul(xs[i & 1023], ys[i & 1023]));
    ++i;
  }
  state.SetLabel(field_name(state.range(0)));
}
BENCHMARK(bm_field_mul)->Arg(0)->Arg(1)->Arg(2)->Arg(3);

void bm_field_inv(benchmark::State& state) {
  const Field f = field_for(state.range(0));
  Rng rng(2);
  std::vector<Elem> xs(1024);
  for (auto& v : xs) {
    do {
      v = f.random_element(rng);
    } while (v == 0);
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.inv(xs[i & 1023]));
    ++i;
  }
  state.SetLabel(field_name(state.range(0)));
}
BENCHMARK(bm_field_inv)->Arg(0)->Arg(1)->Arg(2)->Arg(3);

void bm_rref(benchmark::State& state) {
  const Field f = Field::binary(16);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  Matrix a(f, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = f.random_element(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mq::rref(a));
  }
  state.SetComplexityN(static_cast<std::int64_t>(n));
}
BENCHMARK(bm_rref)->Arg(8)->Arg(16)->Arg(32)->Arg(64)->Complexity(benchmark::oNCubed);

void bm_substitute(benchmark::State& state) {
  const Field f = Field::binary(16);
  const std::size_t m = static_cast<std::size_t>(state.range(0));
  const std::size_t n = m * (m + 1) / 2 + 2;
  Rng rng(4);
  const MQSystem sys = mq::random_system(f, n, m, false, rng);
  const Matrix t = mq::random_invertible(f, n, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mq::substitute(sys, t));
  }
}
BENCHMARK(bm_substitute)->Arg(3)->Arg(5)->Arg(7);

void bm_triangularize(benchmark::State& state) {
  const Field f = Field::binary(16);
  const std::size_t m = static_cast<std::size_t>(state.range(0));
  const std::size_t n = m * (m + 1) / 2 + 2;
  mq::RetryPolicy policy;
  std::uint64_t round = 0;
  for (auto _ : state) {
    state.PauseTiming();
    Rng rng(mq::mix_seed(5, round++));
    const MQSystem sys = mq::random_system(f, n, m, false, rng);
    state.ResumeTiming();
    benchmark::DoNotOptimize(mq::triangularize(sys, policy, rng));
  }
}
BENCHMARK(bm_triangularize)->Arg(2)->Arg(3)->Arg(4)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

void bm_solve(benchmark::State& state) {
  const Field f = Field::binary(4);
  const std::size_t m = static_cast<std::size_t>(state.range(0));
  const std::size_t n = m * (m + 1) / 2 + 2;
  std::uint64_t round = 0;
  for (auto _ : state) {
    state.PauseTiming();
    const std::uint64_t seed = mq::mix_seed(6, round++);
    Rng rng(seed);
    MQSystem sys = mq::random_system(f, n, m, false, rng);
    mq::Assignment target(n);
    for (auto& v : target) v = f.random_element(rng);
    sys = mq::plant_solution(sys, target);
    mq::SolveConfig cfg;
    cfg.seed = seed;
    state.ResumeTiming();
    benchmark::DoNotOptimize(mq::solve(sys, cfg));
  }
}
BENCHMARK(bm_solve)->Arg(2)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
