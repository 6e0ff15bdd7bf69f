#include "gpam/kernel_k.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace gpam {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTableStep = 2.5e-4;
// Beyond this radius S = E1(r^2/4)/(4 pi) < 1e-17.
constexpr double kTableRadius = 12.0;

double psi(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }

double unit_bump(double z) {
  if (std::abs(z) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - z * z));
}

template <class F>
double integrate(F&& f, double a, double b) {
  if (b <= a) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 12, 1e-12);
}

double monomial(int j, double t, double r2) { return j == 0 ? 1.0 : (j == 1 ? r2 : t); }

}  // namespace

double KernelK::cutoff(double s) {
  if (s <= 0.5) return 1.0;
  if (s >= 1.0) return 0.0;
  const double a = psi(1.0 - s), b = psi(s - 0.5);
  return a / (a + b);
}

double KernelK::heat(double t, double r) {
  if (t <= 0.0) return 0.0;
  return std::exp(-r * r / (4.0 * t)) / (4.0 * kPi * t);
}

double KernelK::correction_bump(double t, double r2) {
  return unit_bump((r2 + t - 0.75) / 0.25) * unit_bump(2.0 * t - 1.0);
}

double KernelK::remainder(double t, double r2) const {
  const double b = correction_bump(t, r2);
  if (b == 0.0) return 0.0;
  return b * (c_[0] + c_[1] * r2 + c_[2] * t);
}

double KernelK::operator()(double t, double x1, double x2) const {
  if (t <= 0.0) return 0.0;
  const double r2 = x1 * x1 + x2 * x2;
  return cutoff(r2 + t) * heat(t, std::sqrt(r2)) - remainder(t, r2);
}

double KernelK::smooth_part_direct(double r) const {
  const double r2 = r * r;
  if (r >= 1.0) return boost::math::expint(1, r2 / 4.0) / (4.0 * kPi);
  const double lo = std::max(0.0, 0.5 - r2);
  const double tail = integrate([&](double t) { return (1.0 - cutoff(r2 + t)) * heat(t, r); }, lo, 1.0);
  const double t_lo = std::max(0.0, 0.5 - r2), t_hi = std::min(1.0, 1.0 - r2);
  const double corr = integrate([&](double t) { return remainder(t, r2); }, t_lo, t_hi);
  return tail + corr;
}

double KernelK::smooth_part(double r) const {
  r = std::abs(r);
  if (smooth_table_.empty() || r >= kTableRadius - 2 * kTableStep) return smooth_part_direct(r);
  const double x = r / kTableStep;
  const auto i = static_cast<std::size_t>(x);
  const auto at = [&](long m) { return smooth_table_[static_cast<std::size_t>(std::abs(m))]; };
  const long li = static_cast<long>(i);
  const double f0 = at(li - 1), f1 = at(li), f2 = at(li + 1), f3 = at(li + 2);
  const double u = x - static_cast<double>(i);
  return f1 + 0.5 * u * (f2 - f0 + u * (2.0 * f0 - 5.0 * f1 + 4.0 * f2 - f3 + u * (3.0 * (f1 - f2) + f3 - f0)));
}

double KernelK::spatial(double r) const {
  r = std::abs(r);
  if (r >= 1.0) return 0.0;
  if (r == 0.0) return HUGE_VAL;
  return boost::math::expint(1, r * r / 4.0) / (4.0 * kPi) - smooth_part(r);
}

double KernelK::spectrum(int k1, int k2) const {
  const int n = grid_.n, half = n / 2 + 1;
  int i = k1 % n;
  if (i < 0) i += n;
  int j = std::abs(k2);
  if (j >= half) throw std::out_of_range("wavenumber outside the grid spectrum");
  if (k2 < 0) i = (n - i) % n;
  return spectrum_[static_cast<std::size_t>(i) * half + j];
}

Field KernelK::green_convolve(const Field& f) const {
  if (!(f.grid() == grid_)) return kernel_for(f.grid()).green_convolve(f);
  return apply_multiplier(f, spectrum_);
}

namespace {

// Grid-independent part: correction coefficients and the tabulated smooth part.
struct RadialData {
  std::array<double, 3> c{};
  std::vector<double> table;
};

RadialData compute_radial_data() {
  RadialData out;

  // Gram system A c = b with A_pj = int B m_j m_p and b_p = int chi G m_p over space-time.
  double a[3][3], b[3];
  for (int p = 0; p < 3; ++p) {
    for (int j = 0; j < 3; ++j)
      a[p][j] = integrate(
          [&](double t) {
            return integrate(
                [&](double u) {
                  return kPi * KernelK::correction_bump(t, u) * monomial(j, t, u) * monomial(p, t, u);
                },
                std::max(0.0, 0.5 - t), 1.0 - t);
          },
          0.0, 1.0);
    // Heat part in w = |x|^2/(4t): pi du G = e^{-w} dw.
    b[p] = integrate(
        [&](double t) {
          const double w_hi = std::min((1.0 - t) / (4.0 * t), 60.0);
          return integrate(
              [&](double w) { return std::exp(-w) * KernelK::cutoff(4.0 * t * w + t) * monomial(p, t, 4.0 * t * w); },
              0.0, w_hi);
        },
        0.0, 1.0);
  }

  // Gaussian elimination with partial pivoting.
  double m[3][4];
  for (int p = 0; p < 3; ++p) {
    for (int j = 0; j < 3; ++j) m[p][j] = a[p][j];
    m[p][3] = b[p];
  }
  double scale = 0.0;
  for (auto& row : a)
    for (double v : row) scale = std::max(scale, std::abs(v));
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (std::abs(m[piv][col]) < 1e-12 * scale) throw std::runtime_error("ill-conditioned moment system");
    for (int j = 0; j < 4; ++j) std::swap(m[col][j], m[piv][j]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      for (int j = col; j < 4; ++j) m[r][j] -= f * m[col][j];
    }
  }
  for (int j = 0; j < 3; ++j) out.c[j] = m[j][3] / m[j][j];
  return out;
}

}  // namespace

KernelK build_kernel_k(Grid2D grid) {
  grid.validate();
  static const RadialData radial = [] {
    RadialData d = compute_radial_data();
    KernelK probe;
    probe.c_ = d.c;
    const auto entries = static_cast<std::size_t>(kTableRadius / kTableStep) + 3;
    d.table.resize(entries);
    for (std::size_t i = 0; i < entries; ++i) d.table[i] = probe.smooth_part_direct(i * kTableStep);
    return d;
  }();
  KernelK k;
  k.grid_ = grid;
  k.c_ = radial.c;
  k.smooth_table_ = radial.table;

  // Periodize S over the nearest images and transform on a sampling grid fine enough
  // that aliasing of the smooth part stays below 1e-12.
  const int n = grid.n;
  const int sampling = std::max(n, 1024);
  static std::mutex spectra_mutex;
  static std::map<int, Spectrum> spectra;
  std::unique_lock<std::mutex> lock(spectra_mutex);
  auto it = spectra.find(sampling);
  if (it == spectra.end()) {
    const Grid2D fine{sampling};
    const double h = fine.spacing();
    Field s_per(fine);
    for (int i1 = 0; i1 < sampling; ++i1)
      for (int i2 = 0; i2 < sampling; ++i2) {
        const double z1 = wavenumber(i1, sampling) * h, z2 = wavenumber(i2, sampling) * h;
        double sum = 0.0;
        for (int m1 = -2; m1 <= 2; ++m1)
          for (int m2 = -2; m2 <= 2; ++m2) {
            const double r = std::hypot(z1 + 2 * kPi * m1, z2 + 2 * kPi * m2);
            if (r < kTableRadius - 2 * kTableStep) sum += k.smooth_part(r);
          }
        s_per(i1, i2) = sum;
      }
    it = spectra.emplace(sampling, forward(s_per)).first;
  }
  const Spectrum& s_hat = it->second;
  lock.unlock();
  k.smooth_mass_ = 4.0 * kPi * kPi * s_hat(0, 0).real();
  k.spectrum_ = make_multiplier(grid, [&](int k1, int k2) {
    if (k1 == 0 && k2 == 0) return 0.0;
    const double q = static_cast<double>(k1 * k1 + k2 * k2);
    const int i = k1 < 0 ? k1 + sampling : k1;
    return -std::expm1(-q) / q - 4.0 * kPi * kPi * s_hat(i, k2).real();
  });
  return k;
}

const KernelK& kernel_for(Grid2D grid) {
  static std::mutex mutex;
  static std::map<int, KernelK> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(grid.n);
  if (it == cache.end()) it = cache.emplace(grid.n, build_kernel_k(grid)).first;
  return it->second;
}

}  // namespace gpam
