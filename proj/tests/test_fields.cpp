#include <cmath>
#include <cstdio>
#include <doctest.h>
#include <numbers>
#include <random>

#include "gpam/fields.hpp"
#include "gpam/kernel_k.hpp"
#include "gpam/kernels.hpp"
#include "oracles.hpp"

using namespace gpam;
using std::numbers::pi;

namespace {

Field shifted(const Field& f, int s1, int s2) {
  Field out(f.grid());
  for (int i = 0; i < f.n(); ++i)
    for (int j = 0; j < f.n(); ++j) out(i, j) = f(i - s1, j - s2);
  return out;
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_NOTHROW(Grid2D{16}.validate());
  CHECK_THROWS_AS(Grid2D{8}.validate(), std::invalid_argument);
  CHECK_THROWS_AS(Grid2D{48}.validate(), std::invalid_argument);
  CHECK(Grid2D{64}.spacing() == doctest::Approx(2 * pi / 64));
}

TEST_CASE("periodic indexing wraps") {
  Field f = coordinate_field(Grid2D{16}, 1);
  CHECK(f(-1, 3) == f(15, 3));
  CHECK(f(17, 0) == f(1, 0));
}

TEST_CASE("forward and inverse round trip") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  Field f(Grid2D{32});
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = nd(rng);
  CHECK(sup_diff(inverse(forward(f)), f) < 1e-12);
}

TEST_CASE("parseval") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Field f = sample_white_noise(seed, Grid2D{64});
    const double phys = f.l2_norm() * f.l2_norm();
    CHECK(std::abs(spectral_l2_squared(forward(f)) - phys) < 1e-10 * phys);
  }
}

TEST_CASE("heat semigroup") {
  Grid2D g{32};
  Field f = Field::from_function(g, [](double x1, double) { return std::sin(x1); });
  CHECK(heat_semigroup(f, 0.0) == f);
  for (double t : {0.1, 0.7, 2.0}) {
    Field want = Field::from_function(g, [t](double x1, double) { return std::exp(-t) * std::sin(x1); });
    CHECK(sup_diff(heat_semigroup(f, t), want) < 1e-13);
  }
  Field c = Field::from_function(g, [](double x1, double x2) { return std::cos(2 * x1 + 3 * x2); });
  Field want = Field::from_function(g, [](double x1, double x2) { return std::exp(-13 * 0.05) * std::cos(2 * x1 + 3 * x2); });
  CHECK(sup_diff(heat_semigroup(c, 0.05), want) < 1e-13);
  CHECK_THROWS_AS(heat_semigroup(f, -1.0), std::invalid_argument);
}

TEST_CASE("white noise is deterministic per seed") {
  Grid2D g{32};
  CHECK(sample_white_noise(7, g) == sample_white_noise(7, g));
  CHECK(!(sample_white_noise(7, g) == sample_white_noise(8, g)));
}

TEST_CASE("white noise covariance") {
  Grid2D g{32};
  Field phi = Field::from_function(g, [](double x1, double) { return std::exp(std::cos(x1)); });
  Field psi = Field::from_function(g, [](double x1, double x2) { return std::sin(x1) * std::exp(std::cos(x2)); });
  REQUIRE(std::abs(inner(phi, psi)) < 1e-12);
  const int seeds = 10000;
  double s_pp = 0, s_qq = 0, s_pq = 0;
  for (int s = 0; s < seeds; ++s) {
    Field xi = sample_white_noise(static_cast<std::uint64_t>(s), g);
    const double a = inner(xi, phi), b = inner(xi, psi);
    s_pp += a * a;
    s_qq += b * b;
    s_pq += a * b;
  }
  const double np = inner(phi, phi), nq = inner(psi, psi);
  CHECK(s_pp / seeds / np == doctest::Approx(1.0).epsilon(0.03));
  CHECK(s_qq / seeds / nq == doctest::Approx(1.0).epsilon(0.03));
  // Correlation coefficient has standard error 1/sqrt(seeds).
  CHECK(std::abs(s_pq / std::sqrt(s_pp * s_qq)) < 4.0 / std::sqrt(double(seeds)));
}

TEST_CASE("mollifier profile mass and transform") {
  for (Profile p : {Profile::Bump, Profile::SharpBump}) {
    for (double eps : {0.25, 0.0625}) {
      Mollifier rho{p, eps};
      CHECK(std::abs(oracle::radial_mass([&](double r) { return rho.value(r); }, eps) - 1.0) < 1e-8);
      CHECK(rho.value(eps) == 0.0);
      CHECK(rho.fourier(0.0) == 1.0);
    }
    boost::math::quadrature::tanh_sinh<double> ts;
    const double mass = oracle::radial_mass([&](double r) { return profile_raw(p, r); }, 1.0);
    for (double kappa : {0.3, 1.7, 5.0, 12.345, 40.0}) {
      const double want =
          2 * pi * ts.integrate([&](double r) { return profile_raw(p, r) * std::cyl_bessel_j(0.0, kappa * r) * r; }, 0.0, 1.0) / mass;
      CHECK(std::abs(profile_fourier(p, kappa) - want) < 1e-8);
    }
  }
  CHECK(std::abs(profile_fourier(Profile::Bump, 1.0) - profile_fourier(Profile::SharpBump, 1.0)) > 1e-3);
}

TEST_CASE("mollify") {
  Grid2D g{64};
  Mollifier rho{Profile::Bump, 0.25};
  Field c(g, 3.5);
  CHECK(sup_diff(mollify(c, rho), c) < 1e-13);
  Field xi = sample_white_noise(11, g);
  Mollifier rho2{Profile::SharpBump, 0.4};
  CHECK(sup_diff(mollify(mollify(xi, rho), rho2), mollify(mollify(xi, rho2), rho)) < 1e-10);
  CHECK_THROWS_WITH_AS(mollify(xi, Mollifier{Profile::Bump, 0.1}), "under-resolved mollifier", std::invalid_argument);
}

TEST_CASE("mollified noise sup grows as epsilon shrinks") {
  Grid2D g{1024};
  Field xi = sample_white_noise(5, g);
  double prev = 0.0;
  for (int m = 3; m <= 6; ++m) {
    const double sup = mollify(xi, Mollifier{Profile::Bump, std::ldexp(1.0, -m)}).sup_norm();
    CHECK(sup > prev);
    prev = sup;
  }
}

TEST_CASE("field io round trip") {
  Field xi = sample_white_noise(2, Grid2D{16});
  const std::string path = "test_fields_roundtrip.gpf";
  write_field(path, xi);
  CHECK(read_field(path) == xi);
  std::FILE* fp = std::fopen(path.c_str(), "rb");
  REQUIRE(fp);
  std::fseek(fp, 0, SEEK_END);
  CHECK(std::ftell(fp) == 16 + 16 * 16 * 8);
  std::fclose(fp);
  std::remove(path.c_str());
  CHECK_THROWS(read_field("does_not_exist.gpf"));
}

TEST_CASE("serial and parallel kernels agree") {
  const std::size_t n = 1 << 16;
  std::vector<double> x(n), y1(n), y2(n), pot(n), dec(n), ph(n);
  std::vector<std::complex<double>> s1(n), s2(n), frc(n);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = u(rng);
    y1[i] = y2[i] = u(rng);
    pot[i] = u(rng);
    dec[i] = u(rng);
    ph[i] = u(rng);
    s1[i] = s2[i] = {u(rng), u(rng)};
    frc[i] = {u(rng), u(rng)};
  }
  kernels::serial::axpy(0.3, x.data(), y1.data(), n);
  kernels::parallel::axpy(0.3, x.data(), y2.data(), n);
  kernels::serial::multiply(x.data(), y1.data(), n);
  kernels::parallel::multiply(x.data(), y2.data(), n);
  kernels::serial::exp_scale(0.1, pot.data(), y1.data(), n);
  kernels::parallel::exp_scale(0.1, pot.data(), y2.data(), n);
  kernels::serial::scale(1.7, y1.data(), n);
  kernels::parallel::scale(1.7, y2.data(), n);
  CHECK(y1 == y2);
  kernels::serial::spectral_multiply(x.data(), s1.data(), n);
  kernels::parallel::spectral_multiply(x.data(), s2.data(), n);
  kernels::serial::etd_update(dec.data(), ph.data(), 0.01, frc.data(), s1.data(), n);
  kernels::parallel::etd_update(dec.data(), ph.data(), 0.01, frc.data(), s2.data(), n);
  CHECK(s1 == s2);
}

TEST_CASE("kernel K agrees with the heat kernel near the origin and is symmetric") {
  const KernelK& k = kernel_for(Grid2D{64});
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1), ut(0, 1);
  for (int q = 0; q < 200; ++q) {
    const double t = 0.5 * ut(rng), x1 = u(rng), x2 = u(rng);
    const double s = x1 * x1 + x2 * x2 + t;
    if (s < 0.5) {
      const double g = std::exp(-(x1 * x1 + x2 * x2) / (4 * t)) / (4 * pi * t);
      CHECK(std::abs(k(t, x1, x2) - g) <= 1e-12 * g);
    }
    if (s > 1.0) CHECK(k(t, x1, x2) == 0.0);
    CHECK(k(t, x1, x2) == k(t, -x1, -x2));
    CHECK(k(t, x1, x2) == k(t, x2, x1));
  }
  const double g01 = 1.0 / (4 * pi * 0.1);
  CHECK(k(0.1, 0.0, 0.0) == doctest::Approx(g01).epsilon(1e-14));
}

TEST_CASE("kernel K annihilates polynomials of parabolic degree below 3") {
  const KernelK& k = kernel_for(Grid2D{64});
  const int monomials[7][3] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {2, 0, 0}, {1, 1, 0}, {0, 2, 0}, {0, 0, 1}};
  for (auto& m : monomials) {
    const double moment = oracle::kernel_moment(k, m[0], m[1], m[2]);
    INFO("x1^" << m[0] << " x2^" << m[1] << " t^" << m[2] << " moment " << moment);
    CHECK(std::abs(moment) < 1e-8);
  }
  // Without the correction the heat part alone has unit mass defect.
  CHECK(k.smooth_part_mass() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("green spectrum matches the Hankel transform of N") {
  const KernelK& k = kernel_for(Grid2D{64});
  CHECK(k.spectrum(0, 0) == 0.0);
  for (auto [k1, k2] : {std::pair{1, 0}, {0, 2}, {3, 4}, {7, 1}, {-5, 2}}) {
    const double want = oracle::green_fourier(k, std::hypot(k1, k2));
    INFO(k1 << "," << k2);
    CHECK(std::abs(k.spectrum(k1, k2) - want) < 1e-8);
  }
  CHECK(k.spectrum(3, 4) == k.spectrum(-3, -4));
  CHECK(k.spectrum(3, 4) == k.spectrum(4, 3));
  for (double r : {0.05, 0.3, 0.8}) {
    boost::math::quadrature::tanh_sinh<double> ts;
    const double direct = ts.integrate([&](double t) { return k(t, r, 0.0); }, 0.0, 1.0 - r * r, 1e-12);
    CHECK(std::abs(k.spatial(r) - direct) < 1e-9);
  }
  CHECK(k.spatial(1.0) == 0.0);
  CHECK(k.spatial(1.5) == 0.0);
}

TEST_CASE("green convolution and heat commute with grid translations") {
  Grid2D g{64};
  const KernelK& k = kernel_for(g);
  Field h = sample_white_noise(4, g);
  CHECK(sup_diff(k.green_convolve(shifted(h, 5, -3)), shifted(k.green_convolve(h), 5, -3)) < 1e-10);
  CHECK(sup_diff(heat_semigroup(shifted(h, 2, 9), 0.3), shifted(heat_semigroup(h, 0.3), 2, 9)) < 1e-10);
  CHECK(std::abs(k.green_convolve(h).mean()) < 1e-12);
}

TEST_CASE("green convolution gains two derivatives in L2") {
  auto multiplier_sup = [](Grid2D g) {
    const KernelK& k = kernel_for(g);
    double c = 0.0;
    for (int k1 = -g.n / 2 + 1; k1 <= g.n / 2; ++k1)
      for (int k2 = 0; k2 <= g.n / 2; ++k2) c = std::max(c, (1.0 + k1 * k1 + k2 * k2) * std::abs(k.spectrum(k1, k2)));
    return c;
  };
  const double c64 = multiplier_sup(Grid2D{64}), c256 = multiplier_sup(Grid2D{256});
  CHECK(c256 / c64 < 1.05);
  CHECK(c64 < 10.0);
  Grid2D g{64};
  const KernelK& k = kernel_for(g);
  for (std::uint64_t s = 0; s < 20; ++s) {
    Field h = sample_white_noise(100 + s, g);
    if (s % 2) h = mollify(h, Mollifier{Profile::Bump, 0.2 + 0.02 * s});
    const Spectrum nh = forward(k.green_convolve(h));
    double h2 = 0.0;
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j <= g.n / 2; ++j) {
        const double q = wavenumber(i, g.n) * wavenumber(i, g.n) + j * j;
        const double w = (j == 0 || j == g.n / 2) ? 1.0 : 2.0;
        h2 += w * (1 + q) * (1 + q) * std::norm(nh(i, j));
      }
    CHECK(std::sqrt(4 * pi * pi * h2) <= c64 * h.l2_norm() * (1 + 1e-12));
  }
}
