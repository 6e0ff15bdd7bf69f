#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "gpam/fields.hpp"
#include "gpam/kernels.hpp"
#include "gpam/models.hpp"
#include "gpam/spde_solver.hpp"

using namespace gpam;

namespace {

template <void (*Axpy)(double, const double*, double*, std::size_t)>
void BM_axpy(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0)) * state.range(0);
  std::vector<double> x(n, 1.5), y(n, 0.5);
  for (auto _ : state) {
    Axpy(1e-3, x.data(), y.data(), n);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * n * 3 * sizeof(double)));
}

template <void (*Etd)(const double*, const double*, double, const std::complex<double>*, std::complex<double>*,
                      std::size_t)>
void BM_etd(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0)) * (state.range(0) / 2 + 1);
  std::vector<double> decay(n, 0.9), phi(n, 0.95);
  std::vector<std::complex<double>> f(n, {1.0, -1.0}), s(n, {0.5, 0.25});
  for (auto _ : state) {
    Etd(decay.data(), phi.data(), 1e-3, f.data(), s.data(), n);
    benchmark::DoNotOptimize(s.data());
  }
}

template <void (*Exp)(double, const double*, double*, std::size_t)>
void BM_exp_scale(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0)) * state.range(0);
  std::vector<double> pot(n, 0.3), y(n, 1.0);
  for (auto _ : state) {
    Exp(1e-6, pot.data(), y.data(), n);
    benchmark::DoNotOptimize(y.data());
  }
}

void BM_solver_step(benchmark::State& state) {
  kernels::set_exec(state.range(1) ? kernels::Exec::Parallel : kernels::Exec::Serial);
  PDEConfig cfg;
  cfg.grid = Grid2D{static_cast<int>(state.range(0))};
  cfg.epsilon = 0.25;
  cfg.dt = 1e-3;
  cfg.t_end = 0.01;
  cfg.u0 = Field(cfg.grid, 0.1);
  const Field xi = mollify(sample_white_noise(1, cfg.grid), Mollifier{Profile::Bump, cfg.epsilon});
  const Nonlinearity g = nonlinearity("sin");
  for (auto _ : state) benchmark::DoNotOptimize(solve_coupled(cfg, g, xi, {TangentSpec{Field(cfg.grid, 0.0), xi}}));
  kernels::set_exec(kernels::Exec::Parallel);
}

void BM_model_norm(benchmark::State& state) {
  const Grid2D grid{static_cast<int>(state.range(0))};
  const AdmissibleModel z = canonical_model(mollify(sample_white_noise(2, grid), Mollifier{Profile::Bump, 0.25}));
  const WaveletBasis b(grid, 4);
  const Symbol tau = Symbol::parse("I(Xi)*Xi");
  for (auto _ : state) benchmark::DoNotOptimize(measure_model_norm(z, tau, b, 3));
}

}  // namespace

BENCHMARK(BM_axpy<kernels::serial::axpy>)->Name("axpy/serial")->Arg(256)->Arg(1024);
BENCHMARK(BM_axpy<kernels::parallel::axpy>)->Name("axpy/parallel")->Arg(256)->Arg(1024);
BENCHMARK(BM_etd<kernels::serial::etd_update>)->Name("etd_update/serial")->Arg(256)->Arg(1024);
BENCHMARK(BM_etd<kernels::parallel::etd_update>)->Name("etd_update/parallel")->Arg(256)->Arg(1024);
BENCHMARK(BM_exp_scale<kernels::serial::exp_scale>)->Name("exp_scale/serial")->Arg(256)->Arg(1024);
BENCHMARK(BM_exp_scale<kernels::parallel::exp_scale>)->Name("exp_scale/parallel")->Arg(256)->Arg(1024);
BENCHMARK(BM_solver_step)->Args({128, 0})->Args({128, 1})->Args({256, 0})->Args({256, 1})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_model_norm)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
