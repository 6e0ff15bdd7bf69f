#pragma once

#include <cstdint>
#include <vector>

#include "gpam/fields.hpp"

namespace gpam {

/// Periodized orthonormal Daubechies basis on the torus at grid resolution.
/// Level m lives on the lattice with spacing 2 pi 2^-m; atoms are L2-normalized.
class WaveletBasis {
 public:
  /// `vanishing` moments (1..19); `regularity` is the r used in the decay exponents.
  WaveletBasis(Grid2D grid, int vanishing = 12, double regularity = 5.0);

  const Grid2D& grid() const { return grid_; }
  int vanishing_moments() const { return p_; }
  double regularity() const { return r_; }
  int log2n() const { return log2n_; }
  /// Finest usable level; levels 0..depth() are exposed.
  int depth() const { return log2n_ - 2; }
  const std::vector<double>& lowpass() const { return h_; }
  const std::vector<double>& highpass() const { return g_; }

  /// One periodic analysis step on data[0..len) with stride; len even.
  void forward_step(double* data, int len, int stride) const;
  void inverse_step(double* data, int len, int stride) const;

  /// Unit discrete atom on n points: scaling (wavelet=false) or wavelet of level m at position k.
  std::vector<double> atom(int level, bool wavelet, int k) const;
  /// Centre (in fractional grid index) of the atom at k = 0.
  double atom_center(int level, bool wavelet) const;

 private:
  Grid2D grid_;
  int p_;
  double r_;
  int log2n_;
  std::vector<double> h_, g_;
  std::vector<double> centers_;
};

/// Coefficients in Mallat layout: the n x n array after a full decomposition.
class WaveletCoeffs {
 public:
  WaveletCoeffs() = default;
  explicit WaveletCoeffs(Grid2D grid);

  const Grid2D& grid() const { return grid_; }
  int levels() const;  // number of detail levels (log2 n)
  double scaling() const { return data_[0]; }
  double& scaling() { return data_[0]; }
  /// type 0: psi(x1) phi(x2), 1: phi(x1) psi(x2), 2: psi(x1) psi(x2)
  double& detail(int level, int type, int k1, int k2);
  double detail(int level, int type, int k1, int k2) const;
  double level_sup(int level) const;
  double level_sum_squares(int level) const;
  double sum_squares() const;
  std::vector<double>& raw() { return data_; }
  const std::vector<double>& raw() const { return data_; }

 private:
  Grid2D grid_;
  std::vector<double> data_;
  std::size_t offset(int level, int type, int k1, int k2) const;
};

/// Coefficients <f, psi> with the L2 inner product on the torus.
WaveletCoeffs analyze(const Field& f, const WaveletBasis& b);
Field synthesize(const WaveletCoeffs& c, const WaveletBasis& b);

/// Grid values of an L2-normalized 2D atom (func = discrete atom / h).
Field atom_field(const WaveletBasis& b, int level, int type, int k1, int k2);

/// sqrt(scaling^2 + sum_m 2^{2 m beta} sum_y <f, psi^m_y>^2); throws when |beta| >= r.
double sobolev_norm(const Field& f, double beta, const WaveletBasis& b);
double sobolev_norm(const WaveletCoeffs& c, double beta, double regularity);
/// max(|scaling|, sup_m 2^{m(alpha+1)} sup_y |<f, psi^m_y>|) over levels 0..max_level.
double holder_estimate(const Field& f, double alpha, const WaveletBasis& b, int max_level = -1);
double holder_estimate(const WaveletCoeffs& c, double alpha, int max_level);
/// Per-level sup 2^{m(alpha+1)} sup_y |<f, psi^m_y>| for m = 0..max_level.
std::vector<double> holder_profile(const WaveletCoeffs& c, double alpha, int max_level);

struct TripleScan {
  double worst_ratio = 0.0;
  double worst_value = 0.0;
  int evaluated = 0;
};

/// max |<psi^n_x psi^m_y, psi^p_z>| / (2^{n} 2^{-r'(p-m)}) over sampled overlapping triples,
/// r' = floor(r/2) + 2 on the 2-torus.
TripleScan triple_product_scan(const WaveletBasis& b, int n, int m, int p, int samples, std::uint64_t seed = 1);
/// Single triple product of 2D atoms (psi types 0..2).
double triple_product(const WaveletBasis& b, int n, int tn, int xn1, int xn2, int m, int tm, int xm1, int xm2, int p,
                      int tp, int xp1, int xp2);

}  // namespace gpam
