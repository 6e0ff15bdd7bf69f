#pragma once

// Independent numerical oracles shared by the unit tests and the acceptance suite.
// They use different quadrature rules and substitutions than the library code.

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <functional>
#include <numbers>

#include "gpam/kernel_k.hpp"

namespace oracle {

constexpr double kPi = std::numbers::pi;

/// Composite fixed-order Gauss-Legendre on [a, b].
template <class F>
double composite_gauss(F&& f, double a, double b, int panels) {
  double total = 0.0;
  const double w = (b - a) / panels;
  for (int p = 0; p < panels; ++p)
    total += boost::math::quadrature::gauss<double, 20>::integrate(f, a + p * w, a + (p + 1) * w);
  return total;
}

/// Space-time moment of K against x1^a x2^b t^c, in polar coordinates with r = 2 sqrt(t) rho.
inline double kernel_moment(const gpam::KernelK& k, int a, int b, int c) {
  // Eight equispaced angles integrate the trigonometric polynomials of degree <= 2 exactly.
  constexpr int kAngles = 8;
  auto slice = [&](double t) {
    const double rho_hi = std::min(std::sqrt(1.0 - t) / (2.0 * std::sqrt(t)), 8.0);
    auto radial = [&](double rho) {
      const double r = 2.0 * std::sqrt(t) * rho;
      double ang = 0.0;
      for (int q = 0; q < kAngles; ++q) {
        const double th = 2.0 * kPi * q / kAngles;
        const double x1 = r * std::cos(th), x2 = r * std::sin(th);
        ang += k(t, x1, x2) * std::pow(x1, a) * std::pow(x2, b);
      }
      return ang * (2.0 * kPi / kAngles) * r * 2.0 * std::sqrt(t);
    };
    return composite_gauss(radial, 0.0, rho_hi, 32) * std::pow(t, c);
  };
  return composite_gauss(slice, 0.0, 1.0, 48);
}

/// Hankel transform 2 pi int_0^1 N(r) J0(kr) r dr with N from direct time integration of K.
inline double green_fourier(const gpam::KernelK& k, double kmod) {
  boost::math::quadrature::tanh_sinh<double> ts;
  auto n_of_r = [&](double r) {
    if (r >= 1.0) return 0.0;
    return ts.integrate([&](double t) { return k(t, r, 0.0); }, 0.0, 1.0 - r * r, 1e-12);
  };
  return 2.0 * kPi * ts.integrate([&](double r) { return n_of_r(r) * std::cyl_bessel_j(0.0, kmod * r) * r; }, 0.0, 1.0);
}

/// Mass of a radial function supported in the ball of radius eps.
inline double radial_mass(const std::function<double(double)>& f, double eps) {
  boost::math::quadrature::tanh_sinh<double> ts;
  return 2.0 * kPi * ts.integrate([&](double r) { return f(r) * r; }, 0.0, eps);
}

}  // namespace oracle
