// Serial reference vs OpenMP kernel, pairwise. Threads follow OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <vector>

#include "ldlab/cumulant.hpp"
#include "ldlab/kernels.hpp"
#include "ldlab/primes.hpp"
#include "ldlab/weights.hpp"

using namespace ldlab;

namespace {

const Ensemble& ensemble() {
  static const Ensemble e(WeightFamily::primes(), ModelAssignment::parse("circle"), 1e6);
  return e;
}

void BM_K_real_serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(K_real_serial(ensemble(), 50.0));
}
void BM_K_real_omp(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(K_real(ensemble(), 50.0));
}

struct Mc {
  std::vector<TiltedSampler> samplers;
  kernels::McProblem p;
  Mc() {
    const Ensemble& e = ensemble();
    const double s = 30.0;
    for (std::size_t i = 0; i < e.size(); ++i) samplers.emplace_back(e.model(i), s * e.inv_q()[i]);
    p.inv_q = e.inv_q();
    p.samplers = samplers;
    p.V = 2.0;
    p.s = s;
    p.log_norm = K_real(e, s);
    p.head = 200;
    p.reuse = 10;
  }
};
const Mc& mc() {
  static const Mc m;
  return m;
}

void BM_mc_serial(benchmark::State& st) {
  const int w = int(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::mc_run_serial(mc().p, 2000, 1, w));
}
void BM_mc_omp(benchmark::State& st) {
  const int w = int(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::mc_run(mc().p, 2000, 1, w));
}

std::vector<double> t_grid(std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t k = 0; k < n; ++k) t[k] = 1000.0 + 0.01 * double(k);
  return t;
}

void BM_zeta_scan_serial(benchmark::State& st) {
  const auto p = primes_up_to(100000);
  const auto t = t_grid(2000);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::zeta_scan_serial(p, t));
}
void BM_zeta_scan_omp(benchmark::State& st) {
  const auto p = primes_up_to(100000);
  const auto t = t_grid(2000);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::zeta_scan(p, t));
}

void BM_kloosterman_serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(kernels::kloosterman_table_serial(std::uint64_t(st.range(0))));
}
void BM_kloosterman_omp(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(kernels::kloosterman_table(std::uint64_t(st.range(0))));
}

void char_fn_args(std::vector<const RandomModel*>& models) {
  const Ensemble& e = ensemble();
  for (std::size_t i = 0; i < e.size(); ++i) models.push_back(&e.model(i));
}
void BM_char_fn_serial(benchmark::State& st) {
  std::vector<const RandomModel*> m;
  char_fn_args(m);
  const auto t = t_grid(64);
  for (auto _ : st)
    benchmark::DoNotOptimize(kernels::log_abs_char_fn_grid_serial(m, ensemble().inv_q(), t));
}
void BM_char_fn_omp(benchmark::State& st) {
  std::vector<const RandomModel*> m;
  char_fn_args(m);
  const auto t = t_grid(64);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::log_abs_char_fn_grid(m, ensemble().inv_q(), t));
}

}  // namespace

BENCHMARK(BM_K_real_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_K_real_omp)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_mc_serial)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_mc_omp)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_zeta_scan_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_zeta_scan_omp)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_kloosterman_serial)->Arg(499)->Arg(1009)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_kloosterman_omp)->Arg(499)->Arg(1009)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_char_fn_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_char_fn_omp)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
