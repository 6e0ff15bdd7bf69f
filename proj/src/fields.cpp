#include "gpam/fields.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "gpam/kernels.hpp"

namespace gpam {

namespace {

constexpr double kPi = std::numbers::pi;

struct Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Plans are created once per grid size; new-array execution keeps them shareable across threads.
const Plans& plans_for(int n) {
  static std::map<int, Plans> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<double> real(static_cast<std::size_t>(n) * n);
  std::vector<fftw_complex> cplx(static_cast<std::size_t>(n) * (n / 2 + 1));
  Plans p;
  p.r2c = fftw_plan_dft_r2c_2d(n, n, real.data(), cplx.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.c2r = fftw_plan_dft_c2r_2d(n, n, cplx.data(), real.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  return cache.emplace(n, p).first->second;
}

}  // namespace

double Grid2D::spacing() const { return 2.0 * kPi / n; }

void Grid2D::validate() const {
  if (n < 16 || !std::has_single_bit(static_cast<unsigned>(n)))
    throw std::invalid_argument("grid size must be a power of two >= 16, got " + std::to_string(n));
}

Field::Field(Grid2D grid, double value) : grid_(grid) {
  grid_.validate();
  values_.assign(grid_.size(), value);
}

Field::Field(Grid2D grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  grid_.validate();
  if (values_.size() != grid_.size()) throw std::invalid_argument("field size does not match grid");
}

Field Field::from_function(Grid2D grid, const std::function<double(double, double)>& f) {
  Field out(grid);
  const double h = grid.spacing();
  for (int i = 0; i < grid.n; ++i)
    for (int j = 0; j < grid.n; ++j) out(i, j) = f(i * h, j * h);
  return out;
}

std::size_t Field::index(int i1, int i2) const {
  const int n = grid_.n;
  i1 %= n;
  i2 %= n;
  if (i1 < 0) i1 += n;
  if (i2 < 0) i2 += n;
  return static_cast<std::size_t>(i1) * n + i2;
}

double Field::sup_norm() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double Field::l2_norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  const double h = grid_.spacing();
  return std::sqrt(s * h * h);
}

double Field::mean() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s / static_cast<double>(values_.size());
}

double Field::min() const { return *std::min_element(values_.begin(), values_.end()); }
double Field::max() const { return *std::max_element(values_.begin(), values_.end()); }

bool Field::finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

static void require_same(const Grid2D& a, const Grid2D& b) {
  if (!(a == b)) throw std::invalid_argument("fields live on different grids");
}

Field& Field::operator+=(const Field& o) {
  require_same(grid_, o.grid_);
  kernels::axpy(1.0, o.data(), data(), size());
  return *this;
}

Field& Field::operator-=(const Field& o) {
  require_same(grid_, o.grid_);
  kernels::axpy(-1.0, o.data(), data(), size());
  return *this;
}

Field& Field::operator*=(const Field& o) {
  require_same(grid_, o.grid_);
  kernels::multiply(o.data(), data(), size());
  return *this;
}

Field& Field::operator*=(double s) {
  kernels::scale(s, data(), size());
  return *this;
}

double inner(const Field& a, const Field& b) {
  require_same(a.grid(), b.grid());
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  const double h = a.grid().spacing();
  return s * h * h;
}

double sup_diff(const Field& a, const Field& b) {
  require_same(a.grid(), b.grid());
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

Field coordinate_field(Grid2D grid, int axis) {
  return Field::from_function(grid, [axis](double x1, double x2) { return axis == 1 ? x1 : x2; });
}

Spectrum::Spectrum(Grid2D grid) : grid_(grid) {
  grid_.validate();
  coeffs_.assign(static_cast<std::size_t>(grid.n) * (grid.n / 2 + 1), {0.0, 0.0});
}

Spectrum forward(const Field& f) {
  const int n = f.n();
  Spectrum s(f.grid());
  std::vector<double> in(f.values());
  fftw_execute_dft_r2c(plans_for(n).r2c, in.data(), reinterpret_cast<fftw_complex*>(s.data()));
  const double norm = 1.0 / (static_cast<double>(n) * n);
  kernels::scale(norm, reinterpret_cast<double*>(s.data()), 2 * s.size());
  return s;
}

Field inverse(const Spectrum& s) {
  const int n = s.n();
  std::vector<std::complex<double>> in(s.data(), s.data() + s.size());
  std::vector<double> out(static_cast<std::size_t>(n) * n);
  fftw_execute_dft_c2r(plans_for(n).c2r, reinterpret_cast<fftw_complex*>(in.data()), out.data());
  return Field(s.grid(), std::move(out));
}

Multiplier make_multiplier(Grid2D grid, const std::function<double(int, int)>& of_k) {
  const int n = grid.n, half = n / 2 + 1;
  Multiplier m(static_cast<std::size_t>(n) * half);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < half; ++j) m[static_cast<std::size_t>(i) * half + j] = of_k(wavenumber(i, n), j);
  return m;
}

void apply_multiplier(Spectrum& s, const Multiplier& m) {
  if (m.size() != s.size()) throw std::invalid_argument("multiplier size does not match spectrum");
  kernels::spectral_multiply(m.data(), s.data(), s.size());
}

Field apply_multiplier(const Field& f, const Multiplier& m) {
  Spectrum s = forward(f);
  apply_multiplier(s, m);
  return inverse(s);
}

Multiplier heat_multiplier(Grid2D grid, double t) {
  return make_multiplier(grid, [t](int k1, int k2) {
    return std::exp(-static_cast<double>(k1 * k1 + k2 * k2) * t);
  });
}

Field heat_semigroup(const Field& f, double t) {
  if (t < 0.0) throw std::invalid_argument("heat_semigroup needs t >= 0");
  if (t == 0.0) return f;
  return apply_multiplier(f, heat_multiplier(f.grid(), t));
}

double spectral_l2_squared(const Spectrum& s) {
  const int n = s.n(), half = s.half();
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < half; ++j) {
      const double w = (j == 0 || (j == n / 2)) ? 1.0 : 2.0;
      sum += w * std::norm(s(i, j));
    }
  return 4.0 * kPi * kPi * sum;
}

Field sample_white_noise(std::uint64_t seed, Grid2D grid) {
  grid.validate();
  const int n = grid.n, half = n / 2 + 1;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  // E|F_k|^2 = 1/(4 pi^2) gives Var<xi, phi> = ||phi||^2 for f = sum_k F_k e^{ikx}.
  const double sigma = 1.0 / (2.0 * kPi);
  Spectrum s(grid);
  for (int j = 0; j < half; ++j) {
    const bool self_conjugate_column = (j == 0 || j == n / 2);
    for (int i = 0; i < n; ++i) {
      const int mirror = (n - i) % n;
      if (self_conjugate_column) {
        if (i == mirror) {
          s(i, j) = {sigma * normal(rng), 0.0};
        } else if (i < mirror) {
          const double re = normal(rng), im = normal(rng);
          s(i, j) = {sigma * re / std::sqrt(2.0), sigma * im / std::sqrt(2.0)};
          s(mirror, j) = std::conj(s(i, j));
        }
      } else {
        const double re = normal(rng), im = normal(rng);
        s(i, j) = {sigma * re / std::sqrt(2.0), sigma * im / std::sqrt(2.0)};
      }
    }
  }
  return inverse(s);
}

const char* to_string(Profile p) { return p == Profile::Bump ? "bump" : "sharp_bump"; }

Profile profile_from_string(const std::string& s) {
  if (s == "bump") return Profile::Bump;
  if (s == "sharp_bump") return Profile::SharpBump;
  throw std::invalid_argument("unknown mollifier profile: " + s);
}

double profile_raw(Profile p, double r) {
  if (r >= 1.0) return 0.0;
  const double a = p == Profile::Bump ? 1.0 : 2.0;
  return std::exp(a - a / (1.0 - r * r));
}

namespace {

// Composite Gauss-Legendre on [0, 1]; the profiles are flat at r = 1 so this converges fast.
template <class F>
double unit_interval_quadrature(F&& f, int panels = 24) {
  using boost::math::quadrature::gauss;
  double total = 0.0;
  const double w = 1.0 / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = p * w;
    total += gauss<double, 30>::integrate([&](double r) { return f(r); }, a, a + w);
  }
  return total;
}

struct FourierTable {
  static constexpr double kStep = 0.005;
  std::mutex mutex;
  std::vector<double> values;
};

FourierTable& table_for(Profile p) {
  static FourierTable tables[2];
  return tables[p == Profile::Bump ? 0 : 1];
}

double profile_fourier_direct(Profile p, double kappa) {
  const double mass = profile_mass(p);
  return 2.0 * kPi *
         unit_interval_quadrature([&](double r) { return profile_raw(p, r) * std::cyl_bessel_j(0.0, kappa * r) * r; }) /
         mass;
}

}  // namespace

double profile_mass(Profile p) {
  static const double masses[2] = {
      2.0 * kPi * unit_interval_quadrature([](double r) { return profile_raw(Profile::Bump, r) * r; }),
      2.0 * kPi * unit_interval_quadrature([](double r) { return profile_raw(Profile::SharpBump, r) * r; })};
  return masses[p == Profile::Bump ? 0 : 1];
}

double profile_fourier(Profile p, double kappa) {
  kappa = std::abs(kappa);
  if (kappa == 0.0) return 1.0;
  // Beyond this modulus both profiles have transforms below 1e-13.
  constexpr double kCutoff = 400.0;
  if (kappa >= kCutoff) return 0.0;
  FourierTable& t = table_for(p);
  const double x = kappa / FourierTable::kStep;
  const auto i = static_cast<std::size_t>(x);
  std::vector<double> local;
  {
    std::lock_guard<std::mutex> lock(t.mutex);
    const std::size_t need = i + 3;
    if (t.values.size() < need) {
      const std::size_t start = t.values.size();
      const std::size_t grow = std::max(need, start + start / 2 + 64);
      t.values.resize(grow);
      for (std::size_t m = start; m < grow; ++m) t.values[m] = profile_fourier_direct(p, m * FourierTable::kStep);
      t.values[0] = 1.0;
    }
    local.assign(t.values.begin() + static_cast<long>(i == 0 ? 0 : i - 1), t.values.begin() + static_cast<long>(i + 3));
  }
  // Catmull-Rom on the uniform table; the transform is even so f(-step) = f(step).
  const double f0 = i == 0 ? local[1] : local[0];
  const double f1 = i == 0 ? local[0] : local[1];
  const double f2 = i == 0 ? local[1] : local[2];
  const double f3 = i == 0 ? local[2] : local[3];
  const double u = x - static_cast<double>(i);
  return f1 + 0.5 * u * (f2 - f0 + u * (2.0 * f0 - 5.0 * f1 + 4.0 * f2 - f3 + u * (3.0 * (f1 - f2) + f3 - f0)));
}

double Mollifier::value(double r) const {
  return profile_raw(profile, r / epsilon) / (profile_mass(profile) * epsilon * epsilon);
}

double Mollifier::fourier(double k) const { return profile_fourier(profile, epsilon * k); }

Multiplier mollifier_multiplier(Grid2D grid, const Mollifier& rho) {
  std::map<int, double> by_norm;
  return make_multiplier(grid, [&](int k1, int k2) {
    const int m = k1 * k1 + k2 * k2;
    auto it = by_norm.find(m);
    if (it == by_norm.end()) it = by_norm.emplace(m, rho.fourier(std::sqrt(static_cast<double>(m)))).first;
    return it->second;
  });
}

Field mollify(const Field& xi, const Mollifier& rho) {
  if (!(rho.epsilon >= 2.0 * xi.grid().spacing())) throw std::invalid_argument("under-resolved mollifier");
  return apply_multiplier(xi, mollifier_multiplier(xi.grid(), rho));
}

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

void write_field(const std::string& path, const Field& f) {
  static_assert(std::endian::native == std::endian::little, "GPF1 writer assumes a little-endian host");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os.write("GPF1", 4);
  put_u32(os, static_cast<std::uint32_t>(f.n()));
  put_u32(os, 0);
  put_u32(os, 0);
  os.write(reinterpret_cast<const char*>(f.data()), static_cast<std::streamsize>(f.size() * sizeof(double)));
  if (!os) throw std::runtime_error("write failed: " + path);
}

Field read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "GPF1", 4) != 0) throw std::runtime_error("not a GPF1 file: " + path);
  const auto n = static_cast<int>(get_u32(is));
  get_u32(is);
  get_u32(is);
  Grid2D grid{n};
  grid.validate();
  std::vector<double> values(grid.size());
  is.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!is) throw std::runtime_error("truncated GPF1 file: " + path);
  return Field(grid, std::move(values));
}

void write_field_csv(const std::string& path, const Field& f) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os.precision(17);
  os << "x1,x2,value\n";
  const double h = f.grid().spacing();
  for (int i = 0; i < f.n(); ++i)
    for (int j = 0; j < f.n(); ++j) os << i * h << ',' << j * h << ',' << f(i, j) << '\n';
}

}  // namespace gpam
