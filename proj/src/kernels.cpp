#include "gpam/kernels.hpp"

#include <omp.h>

#include <atomic>
#include <cmath>

namespace gpam::kernels {

namespace {
std::atomic<Exec> g_exec{Exec::Parallel};
std::atomic<int> g_threads{0};
// Below this many entries the fork/join cost dominates.
constexpr std::size_t kMinParallel = 1 << 14;
}  // namespace

void set_exec(Exec e) { g_exec = e; }
Exec exec() { return g_exec; }

void set_threads(int t) {
  g_threads = t;
  if (t > 0) omp_set_num_threads(t);
}

int threads() { return g_threads > 0 ? g_threads.load() : omp_get_max_threads(); }

namespace serial {

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void multiply(const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] *= x[i];
}

void scale(double a, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] *= a;
}

void spectral_multiply(const double* m, std::complex<double>* s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) s[i] *= m[i];
}

void etd_update(const double* decay, const double* phi, double dt, const std::complex<double>* forcing,
                std::complex<double>* s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) s[i] = decay[i] * s[i] + dt * phi[i] * forcing[i];
}

void exp_scale(double dt, const double* potential, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] *= std::exp(dt * potential[i]);
}

}  // namespace serial

namespace parallel {

using index_t = long long;

void axpy(double a, const double* x, double* y, std::size_t n) {
#pragma omp parallel for schedule(static)
  for (index_t i = 0; i < static_cast<index_t>(n); ++i) y[i] += a * x[i];
}

void multiply(const double* x, double* y, std::size_t n) {
#pragma omp parallel for schedule(static)
  for (index_t i = 0; i < static_cast<index_t>(n); ++i) y[i] *= x[i];
}

void scale(double a, double* y, std::size_t n) {
#pragma omp parallel for schedule(static)
  for (index_t i = 0; i < static_cast<index_t>(n); ++i) y[i] *= a;
}

void spectral_multiply(const double* m, std::complex<double>* s, std::size_t n) {
#pragma omp parallel for schedule(static)
  for (index_t i = 0; i < static_cast<index_t>(n); ++i) s[i] *= m[i];
}

void etd_update(const double* decay, const double* phi, double dt, const std::complex<double>* forcing,
                std::complex<double>* s, std::size_t n) {
#pragma omp parallel for schedule(static)
  for (index_t i = 0; i < static_cast<index_t>(n); ++i) s[i] = decay[i] * s[i] + dt * phi[i] * forcing[i];
}

void exp_scale(double dt, const double* potential, double* y, std::size_t n) {
#pragma omp parallel for schedule(static)
  for (index_t i = 0; i < static_cast<index_t>(n); ++i) y[i] *= std::exp(dt * potential[i]);
}

}  // namespace parallel

// Nested calls from inside a Monte-Carlo worker stay serial.
static bool use_parallel(std::size_t n) { return g_exec == Exec::Parallel && n >= kMinParallel && !omp_in_parallel(); }

void axpy(double a, const double* x, double* y, std::size_t n) {
  use_parallel(n) ? parallel::axpy(a, x, y, n) : serial::axpy(a, x, y, n);
}

void multiply(const double* x, double* y, std::size_t n) {
  use_parallel(n) ? parallel::multiply(x, y, n) : serial::multiply(x, y, n);
}

void scale(double a, double* y, std::size_t n) {
  use_parallel(n) ? parallel::scale(a, y, n) : serial::scale(a, y, n);
}

void spectral_multiply(const double* m, std::complex<double>* s, std::size_t n) {
  use_parallel(n) ? parallel::spectral_multiply(m, s, n) : serial::spectral_multiply(m, s, n);
}

void etd_update(const double* decay, const double* phi, double dt, const std::complex<double>* forcing,
                std::complex<double>* s, std::size_t n) {
  use_parallel(n) ? parallel::etd_update(decay, phi, dt, forcing, s, n)
                  : serial::etd_update(decay, phi, dt, forcing, s, n);
}

void exp_scale(double dt, const double* potential, double* y, std::size_t n) {
  use_parallel(n) ? parallel::exp_scale(dt, potential, y, n) : serial::exp_scale(dt, potential, y, n);
}

}  // namespace gpam::kernels
