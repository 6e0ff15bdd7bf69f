#pragma once

#include <array>

#include "gpam/fields.hpp"

namespace gpam {

/// Truncated heat kernel K(t,x) = chi(|x|^2+t) G(t,x) - R(t,x) and its time integral N.
/// R = sum_j c_j B(t,x) m_j(t,x) with m = (1, |x|^2, t) kills all moments of parabolic degree < 3.
class KernelK {
 public:
  KernelK() = default;

  static double cutoff(double s);            // chi: 1 on s <= 1/2, 0 on s >= 1
  static double heat(double t, double r);    // G(t, r) for t > 0
  static double correction_bump(double t, double r2);

  const Grid2D& grid() const { return grid_; }
  const std::array<double, 3>& correction() const { return c_; }

  double operator()(double t, double x1, double x2) const;
  double remainder(double t, double r2) const;  // R
  /// N(r) = int_0^1 K(t, r) dt; infinite at r = 0, zero for r >= 1.
  double spatial(double r) const;
  /// Smooth part S with N(r) = E1(r^2/4)/(4 pi) - S(r).
  double smooth_part(double r) const;

  /// Fourier transform of N at integer wavenumber, zero at k = 0.
  double spectrum(int k1, int k2) const;
  const Multiplier& spectrum_table() const { return spectrum_; }
  /// Fourier transform of the periodized smooth part at k = 0; equals 1 when int K = 0.
  double smooth_part_mass() const { return smooth_mass_; }

  Field green_convolve(const Field& f) const;

 private:
  friend KernelK build_kernel_k(Grid2D grid);
  Grid2D grid_;
  std::array<double, 3> c_{};
  Multiplier spectrum_;
  std::vector<double> smooth_table_;
  double smooth_mass_ = 0.0;
  double smooth_part_direct(double r) const;
};

/// Throws std::runtime_error when the moment system is ill-conditioned.
KernelK build_kernel_k(Grid2D grid);

/// Cached kernel per grid size.
const KernelK& kernel_for(Grid2D grid);

}  // namespace gpam
