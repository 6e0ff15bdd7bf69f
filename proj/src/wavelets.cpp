#include "gpam/wavelets.hpp"

#include <algorithm>
#include <bit>
#include <boost/math/filters/daubechies.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>

namespace gpam {

namespace {

template <std::size_t... P>
std::vector<double> scaling_filter(int p, std::index_sequence<P...>) {
  std::vector<double> out;
  ((P + 1 == static_cast<std::size_t>(p)
        ? (void)[&] {
            auto f = boost::math::filters::daubechies_scaling_filter<double, P + 1>();
            out.assign(f.begin(), f.end());
          }()
        : (void)0),
   ...);
  return out;
}

}  // namespace

WaveletBasis::WaveletBasis(Grid2D grid, int vanishing, double regularity)
    : grid_(grid), p_(vanishing), r_(regularity) {
  grid_.validate();
  if (vanishing < 1 || vanishing > 19) throw std::invalid_argument("vanishing moments must be in 1..19");
  log2n_ = std::countr_zero(static_cast<unsigned>(grid.n));
  h_ = scaling_filter(vanishing, std::make_index_sequence<19>{});
  const std::size_t len = h_.size();
  g_.resize(len);
  for (std::size_t i = 0; i < len; ++i) g_[i] = (i % 2 ? -1.0 : 1.0) * h_[len - 1 - i];
  for (int level = 0; level < log2n_; ++level)
    for (bool wavelet : {false, true}) {
      const std::vector<double> a = atom(level, wavelet, 0);
      std::complex<double> z{0.0, 0.0};
      for (int i = 0; i < grid.n; ++i) z += a[i] * a[i] * std::polar(1.0, 2.0 * std::numbers::pi * i / grid.n);
      double c = std::arg(z) * grid.n / (2.0 * std::numbers::pi);
      if (c < 0) c += grid.n;
      centers_.push_back(c);
    }
}

void WaveletBasis::forward_step(double* data, int len, int stride) const {
  const int half = len / 2, taps = static_cast<int>(h_.size());
  std::vector<double> out(len, 0.0);
  for (int k = 0; k < half; ++k) {
    double a = 0.0, d = 0.0;
    for (int j = 0; j < taps; ++j) {
      const double x = data[static_cast<std::ptrdiff_t>((2 * k + j) % len) * stride];
      a += h_[j] * x;
      d += g_[j] * x;
    }
    out[k] = a;
    out[half + k] = d;
  }
  for (int i = 0; i < len; ++i) data[static_cast<std::ptrdiff_t>(i) * stride] = out[i];
}

void WaveletBasis::inverse_step(double* data, int len, int stride) const {
  const int half = len / 2, taps = static_cast<int>(h_.size());
  std::vector<double> out(len, 0.0);
  for (int k = 0; k < half; ++k) {
    const double a = data[static_cast<std::ptrdiff_t>(k) * stride];
    const double d = data[static_cast<std::ptrdiff_t>(half + k) * stride];
    for (int j = 0; j < taps; ++j) out[(2 * k + j) % len] += h_[j] * a + g_[j] * d;
  }
  for (int i = 0; i < len; ++i) data[static_cast<std::ptrdiff_t>(i) * stride] = out[i];
}

std::vector<double> WaveletBasis::atom(int level, bool wavelet, int k) const {
  if (level < 0 || level >= log2n_) throw std::out_of_range("wavelet level out of range");
  std::vector<double> v(grid_.n, 0.0);
  const int size = 1 << level;
  v[(wavelet ? size : 0) + ((k % size) + size) % size] = 1.0;
  for (int len = 2 * size; len <= grid_.n; len *= 2) inverse_step(v.data(), len, 1);
  return v;
}

double WaveletBasis::atom_center(int level, bool wavelet) const {
  return centers_.at(static_cast<std::size_t>(2 * level + (wavelet ? 1 : 0)));
}

WaveletCoeffs::WaveletCoeffs(Grid2D grid) : grid_(grid), data_(grid.size(), 0.0) {}

int WaveletCoeffs::levels() const { return std::countr_zero(static_cast<unsigned>(grid_.n)); }

std::size_t WaveletCoeffs::offset(int level, int type, int k1, int k2) const {
  const int s = 1 << level;
  if (level < 0 || level >= levels() || type < 0 || type > 2 || k1 < 0 || k2 < 0 || k1 >= s || k2 >= s)
    throw std::out_of_range("wavelet coefficient index out of range");
  const int r = (type == 1 ? 0 : s) + k1;
  const int c = (type == 0 ? 0 : s) + k2;
  return static_cast<std::size_t>(r) * grid_.n + c;
}

double& WaveletCoeffs::detail(int level, int type, int k1, int k2) { return data_[offset(level, type, k1, k2)]; }
double WaveletCoeffs::detail(int level, int type, int k1, int k2) const { return data_[offset(level, type, k1, k2)]; }

double WaveletCoeffs::level_sup(int level) const {
  double m = 0.0;
  const int s = 1 << level;
  for (int t = 0; t < 3; ++t)
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) m = std::max(m, std::abs(detail(level, t, i, j)));
  return m;
}

double WaveletCoeffs::level_sum_squares(int level) const {
  double m = 0.0;
  const int s = 1 << level;
  for (int t = 0; t < 3; ++t)
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) m += detail(level, t, i, j) * detail(level, t, i, j);
  return m;
}

double WaveletCoeffs::sum_squares() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return s;
}

WaveletCoeffs analyze(const Field& f, const WaveletBasis& b) {
  if (!(f.grid() == b.grid())) throw std::invalid_argument("wavelet basis and field grid differ");
  const int n = f.n();
  WaveletCoeffs c(f.grid());
  std::vector<double>& d = c.raw();
  const double h = f.grid().spacing();
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = h * f[k];
  for (int len = n; len >= 2; len /= 2) {
    for (int r = 0; r < len; ++r) b.forward_step(d.data() + static_cast<std::size_t>(r) * n, len, 1);
    for (int col = 0; col < len; ++col) b.forward_step(d.data() + col, len, n);
  }
  return c;
}

Field synthesize(const WaveletCoeffs& c, const WaveletBasis& b) {
  const int n = c.grid().n;
  std::vector<double> d = c.raw();
  for (int len = 2; len <= n; len *= 2) {
    for (int col = 0; col < len; ++col) b.inverse_step(d.data() + col, len, n);
    for (int r = 0; r < len; ++r) b.inverse_step(d.data() + static_cast<std::size_t>(r) * n, len, 1);
  }
  const double inv_h = 1.0 / c.grid().spacing();
  for (double& v : d) v *= inv_h;
  return Field(c.grid(), std::move(d));
}

Field atom_field(const WaveletBasis& b, int level, int type, int k1, int k2) {
  const std::vector<double> a1 = b.atom(level, type != 1, k1);
  const std::vector<double> a2 = b.atom(level, type != 0, k2);
  const int n = b.grid().n;
  const double inv_h = 1.0 / b.grid().spacing();
  Field f(b.grid());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) f(i, j) = a1[i] * a2[j] * inv_h;
  return f;
}

double sobolev_norm(const WaveletCoeffs& c, double beta, double regularity) {
  if (!(std::abs(beta) < regularity)) throw std::invalid_argument("sobolev exponent must satisfy |beta| < r");
  double s = c.scaling() * c.scaling();
  for (int m = 0; m < c.levels(); ++m) s += std::exp2(2.0 * m * beta) * c.level_sum_squares(m);
  return std::sqrt(s);
}

double sobolev_norm(const Field& f, double beta, const WaveletBasis& b) {
  return sobolev_norm(analyze(f, b), beta, b.regularity());
}

std::vector<double> holder_profile(const WaveletCoeffs& c, double alpha, int max_level) {
  std::vector<double> out;
  for (int m = 0; m <= max_level; ++m) out.push_back(std::exp2(m * (alpha + 1.0)) * c.level_sup(m));
  return out;
}

double holder_estimate(const WaveletCoeffs& c, double alpha, int max_level) {
  double best = std::abs(c.scaling());
  for (double v : holder_profile(c, alpha, max_level)) best = std::max(best, v);
  return best;
}

double holder_estimate(const Field& f, double alpha, const WaveletBasis& b, int max_level) {
  if (!(std::abs(alpha) < b.regularity())) throw std::invalid_argument("holder exponent must satisfy |alpha| < r");
  return holder_estimate(analyze(f, b), alpha, max_level < 0 ? b.depth() : max_level);
}

double triple_product(const WaveletBasis& b, int n, int tn, int xn1, int xn2, int m, int tm, int xm1, int xm2, int p,
                      int tp, int xp1, int xp2) {
  const int size = b.grid().n;
  const std::vector<double> a1 = b.atom(n, tn != 1, xn1), a2 = b.atom(n, tn != 0, xn2);
  const std::vector<double> b1 = b.atom(m, tm != 1, xm1), b2 = b.atom(m, tm != 0, xm2);
  const std::vector<double> c1 = b.atom(p, tp != 1, xp1), c2 = b.atom(p, tp != 0, xp2);
  double s1 = 0.0;
  std::vector<double> row(size);
  for (int i = 0; i < size; ++i) row[i] = a1[i] * b1[i] * c1[i];
  double s2 = 0.0;
  for (int j = 0; j < size; ++j) s2 += a2[j] * b2[j] * c2[j];
  for (int i = 0; i < size; ++i) s1 += row[i];
  // Functions are atom / h, product of three integrated with h^2.
  return s1 * s2 / b.grid().spacing();
}

TripleScan triple_product_scan(const WaveletBasis& b, int n, int m, int p, int samples, std::uint64_t seed) {
  if (!(0 <= n && n <= m && m <= p && p <= b.depth())) throw std::invalid_argument("triple scan needs n <= m <= p <= depth");
  const int size = b.grid().n;
  const double r_prime = std::floor(b.regularity() / 2.0) + 2.0;
  std::mt19937_64 rng(seed);
  TripleScan out;
  // Positions are drawn so the three supports overlap: y near x, z near y on their lattices.
  auto lattice_index = [&](int level, double centre_index, bool wavelet) {
    const double cell = static_cast<double>(size >> level);
    double k = (centre_index - b.atom_center(level, wavelet)) / cell;
    int ki = static_cast<int>(std::lround(k));
    const int s = 1 << level;
    return ((ki % s) + s) % s;
  };
  for (int q = 0; q < samples; ++q) {
    const int s_n = 1 << n;
    std::uniform_int_distribution<int> pos_n(0, s_n - 1), type(0, 2);
    const int tn = type(rng), tm = type(rng), tp = type(rng);
    const int xn1 = pos_n(rng), xn2 = pos_n(rng);
    const double cn1 = xn1 * (size >> n) + b.atom_center(n, tn != 1);
    const double cn2 = xn2 * (size >> n) + b.atom_center(n, tn != 0);
    std::uniform_real_distribution<double> jitter_m(-2.0 * (size >> m), 2.0 * (size >> m));
    const double cm1 = cn1 + jitter_m(rng), cm2 = cn2 + jitter_m(rng);
    const int xm1 = lattice_index(m, cm1, tm != 1), xm2 = lattice_index(m, cm2, tm != 0);
    std::uniform_real_distribution<double> jitter_p(-2.0 * (size >> p), 2.0 * (size >> p));
    const double cp1 = xm1 * (size >> m) + b.atom_center(m, tm != 1) + jitter_p(rng);
    const double cp2 = xm2 * (size >> m) + b.atom_center(m, tm != 0) + jitter_p(rng);
    const int xp1 = lattice_index(p, cp1, tp != 1), xp2 = lattice_index(p, cp2, tp != 0);
    const double v = std::abs(triple_product(b, n, tn, xn1, xn2, m, tm, xm1, xm2, p, tp, xp1, xp2));
    const double bound = std::exp2(n) * std::exp2(-r_prime * (p - m));
    ++out.evaluated;
    if (v / bound > out.worst_ratio) {
      out.worst_ratio = v / bound;
      out.worst_value = v;
    }
  }
  return out;
}

}  // namespace gpam
