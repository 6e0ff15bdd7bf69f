#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace gpam {

/// Uniform periodic grid on the torus [0, 2pi)^2.
struct Grid2D {
  int n = 256;

  double spacing() const;
  std::size_t size() const { return static_cast<std::size_t>(n) * n; }
  /// Throws std::invalid_argument unless n is a power of two and n >= 16.
  void validate() const;
  friend bool operator==(const Grid2D& a, const Grid2D& b) { return a.n == b.n; }
};

/// Signed wavenumber of FFT index i on an n-point axis, in (-n/2, n/2].
inline int wavenumber(int i, int n) { return i <= n / 2 ? i : i - n; }

/// Real grid function, row-major with values[i1 * n + i2] at (i1 h, i2 h).
class Field {
 public:
  Field() = default;
  explicit Field(Grid2D grid, double value = 0.0);
  Field(Grid2D grid, std::vector<double> values);
  static Field from_function(Grid2D grid, const std::function<double(double, double)>& f);

  const Grid2D& grid() const { return grid_; }
  int n() const { return grid_.n; }
  std::size_t size() const { return values_.size(); }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }
  const std::vector<double>& values() const { return values_; }
  double& operator()(int i1, int i2) { return values_[index(i1, i2)]; }
  double operator()(int i1, int i2) const { return values_[index(i1, i2)]; }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }
  std::size_t index(int i1, int i2) const;

  double sup_norm() const;
  double l2_norm() const;
  double mean() const;
  double min() const;
  double max() const;
  bool finite() const;

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(const Field& o);
  Field& operator*=(double s);
  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(Field a, const Field& b) { return a *= b; }
  friend Field operator*(double s, Field a) { return a *= s; }
  friend bool operator==(const Field& a, const Field& b) {
    return a.grid_ == b.grid_ && a.values_ == b.values_;
  }

 private:
  Grid2D grid_;
  std::vector<double> values_;
};

double inner(const Field& a, const Field& b);  // L2 inner product on the torus
double sup_diff(const Field& a, const Field& b);
Field coordinate_field(Grid2D grid, int axis);  // x_axis in [0, 2pi)

/// Half spectrum n x (n/2+1) of a real field in the convention f = sum_k F_k e^{ikx}.
class Spectrum {
 public:
  Spectrum() = default;
  explicit Spectrum(Grid2D grid);
  const Grid2D& grid() const { return grid_; }
  int n() const { return grid_.n; }
  int half() const { return grid_.n / 2 + 1; }
  std::complex<double>& operator()(int i1, int j2) { return coeffs_[i1 * half() + j2]; }
  std::complex<double> operator()(int i1, int j2) const { return coeffs_[i1 * half() + j2]; }
  std::complex<double>* data() { return coeffs_.data(); }
  const std::complex<double>* data() const { return coeffs_.data(); }
  std::size_t size() const { return coeffs_.size(); }

 private:
  Grid2D grid_;
  std::vector<std::complex<double>> coeffs_;
};

Spectrum forward(const Field& f);
Field inverse(const Spectrum& s);

/// Real multiplier table over the half spectrum, indexed like Spectrum.
using Multiplier = std::vector<double>;
Multiplier make_multiplier(Grid2D grid, const std::function<double(int, int)>& of_k);
Field apply_multiplier(const Field& f, const Multiplier& m);
void apply_multiplier(Spectrum& s, const Multiplier& m);

Field heat_semigroup(const Field& f, double t);
Multiplier heat_multiplier(Grid2D grid, double t);

/// Squared L2 norm computed from the spectrum (Parseval check).
double spectral_l2_squared(const Spectrum& s);

Field sample_white_noise(std::uint64_t seed, Grid2D grid);

enum class Profile { Bump, SharpBump };
const char* to_string(Profile p);
Profile profile_from_string(const std::string& s);

/// Radial C-infinity bump of unit mass supported in the ball of radius epsilon.
struct Mollifier {
  Profile profile = Profile::Bump;
  double epsilon = 0.0625;

  /// rho_eps at distance r.
  double value(double r) const;
  /// Fourier transform of rho_eps at frequency modulus k (unit at k = 0).
  double fourier(double k) const;
};

/// Unscaled profile on the unit ball and its normalization.
double profile_raw(Profile p, double r);
double profile_mass(Profile p);
/// Fourier transform of the unit-scale normalized profile at modulus kappa.
double profile_fourier(Profile p, double kappa);

Multiplier mollifier_multiplier(Grid2D grid, const Mollifier& rho);
/// Throws std::invalid_argument("under-resolved mollifier") when epsilon < 2 h.
Field mollify(const Field& xi, const Mollifier& rho);

void write_field(const std::string& path, const Field& f);
Field read_field(const std::string& path);
void write_field_csv(const std::string& path, const Field& f);

}  // namespace gpam
