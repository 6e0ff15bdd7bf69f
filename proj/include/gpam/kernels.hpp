#pragma once

#include <complex>
#include <cstddef>

// Pointwise loops used on every grid operation. Each kernel has a serial reference
// and an OpenMP version; the dispatching entry point picks one from the process-wide mode.
namespace gpam::kernels {

enum class Exec { Serial, Parallel };

void set_exec(Exec e);
Exec exec();
/// Thread count for the parallel kernels and Monte-Carlo loops; 0 keeps the OpenMP default.
void set_threads(int threads);
int threads();

namespace serial {
void axpy(double a, const double* x, double* y, std::size_t n);
void multiply(const double* x, double* y, std::size_t n);
void scale(double a, double* y, std::size_t n);
void spectral_multiply(const double* m, std::complex<double>* s, std::size_t n);
void etd_update(const double* decay, const double* phi, double dt, const std::complex<double>* forcing,
                std::complex<double>* s, std::size_t n);
void exp_scale(double dt, const double* potential, double* y, std::size_t n);
}  // namespace serial

namespace parallel {
void axpy(double a, const double* x, double* y, std::size_t n);
void multiply(const double* x, double* y, std::size_t n);
void scale(double a, double* y, std::size_t n);
void spectral_multiply(const double* m, std::complex<double>* s, std::size_t n);
void etd_update(const double* decay, const double* phi, double dt, const std::complex<double>* forcing,
                std::complex<double>* s, std::size_t n);
void exp_scale(double dt, const double* potential, double* y, std::size_t n);
}  // namespace parallel

/// y += a x
void axpy(double a, const double* x, double* y, std::size_t n);
/// y *= x
void multiply(const double* x, double* y, std::size_t n);
void scale(double a, double* y, std::size_t n);
/// s *= m (real multiplier on complex coefficients)
void spectral_multiply(const double* m, std::complex<double>* s, std::size_t n);
/// s = decay s + dt phi forcing
void etd_update(const double* decay, const double* phi, double dt, const std::complex<double>* forcing,
                std::complex<double>* s, std::size_t n);
/// y *= exp(dt potential)
void exp_scale(double dt, const double* potential, double* y, std::size_t n);

}  // namespace gpam::kernels
