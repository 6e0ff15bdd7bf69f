#include "gpam/models.hpp"

#include <omp.h>

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "gpam/kernels.hpp"

namespace gpam {

namespace {

constexpr double kPi = std::numbers::pi;

using Key = std::pair<std::array<int, kSources>, std::array<int, kSources + 2>>;

Key key_of(const ModelTerm& t) {
  return {t.y_pow, {t.x_pow[0], t.x_pow[1], t.x_pow[2], t.x_pow[3], t.p1, t.p2}};
}

TermSum merge(const TermSum& in) {
  std::map<Key, ModelTerm> acc;
  for (const ModelTerm& t : in) {
    auto [it, fresh] = acc.emplace(key_of(t), t);
    if (!fresh) it->second.coeff += t.coeff;
  }
  TermSum out;
  for (auto& [k, t] : acc)
    if (t.coeff != 0.0) out.push_back(t);
  return out;
}

TermSum multiply(const TermSum& a, const TermSum& b) {
  TermSum out;
  for (const ModelTerm& s : a)
    for (const ModelTerm& t : b) {
      ModelTerm u;
      u.coeff = s.coeff * t.coeff;
      for (int k = 0; k < kSources; ++k) {
        u.y_pow[k] = s.y_pow[k] + t.y_pow[k];
        u.x_pow[k] = s.x_pow[k] + t.x_pow[k];
      }
      u.p1 = s.p1 + t.p1;
      u.p2 = s.p2 + t.p2;
      out.push_back(u);
    }
  return merge(out);
}

ModelTerm y_term(Source s, double c = 1.0) {
  ModelTerm t;
  t.coeff = c;
  t.y_pow[static_cast<int>(s)] = 1;
  return t;
}

ModelTerm x_term(Source s, double c) {
  ModelTerm t;
  t.coeff = c;
  t.x_pow[static_cast<int>(s)] = 1;
  return t;
}

// Canonical realization: products are pointwise, I(tau)(y) = (N * Pi_x tau)(y) - (N * Pi_x tau)(x).
TermSum canonical_terms(const Symbol& tau) {
  switch (tau.kind()) {
    case Kind::One:
      return {ModelTerm{1.0, {}, {}, 0, 0}};
    case Kind::Xi:
      return {y_term(Source::Xi)};
    case Kind::H:
      return {y_term(Source::H)};
    case Kind::X: {
      ModelTerm t{1.0, {}, {}, 0, 0};
      (tau.index() == 1 ? t.p1 : t.p2) = tau.power();
      return {t};
    }
    case Kind::Integ: {
      const Symbol& c = tau.children().front();
      if (c.kind() == Kind::Xi) return {y_term(Source::KXi), x_term(Source::KXi, -1.0)};
      if (c.kind() == Kind::H) return {y_term(Source::NH), x_term(Source::NH, -1.0)};
      throw std::domain_error("no realization for " + tau.str());
    }
    case Kind::Prod: {
      TermSum acc{ModelTerm{1.0, {}, {}, 0, 0}};
      for (const Symbol& f : tau.children()) acc = multiply(acc, canonical_terms(f));
      return acc;
    }
  }
  throw std::logic_error("unreachable symbol kind");
}

TermSum renormalized_terms(const Symbol& tau, double C) {
  static const Symbol target = Symbol::parse("I(Xi)*Xi");
  TermSum t = canonical_terms(tau);
  if (tau == target && C != 0.0) t.push_back(ModelTerm{-C, {}, {}, 0, 0});
  return merge(t);
}

// Index offset wrapped into [-n/2, n/2), times the spacing.
double local_displacement(int offset, const Grid2D& g) {
  int u = ((offset % g.n) + g.n) % g.n;
  if (u >= g.n / 2) u -= g.n;
  return u * g.spacing();
}

}  // namespace

struct AdmissibleModel::Cache {
  std::mutex mutex;
  std::map<std::array<int, kSources>, Field> products;
};

AdmissibleModel make_model(AdmissibleModel::Kind kind, Structure s, const Field& xi_eps, const Field& h, double C,
                           const StructureParams& params) {
  if (!(xi_eps.grid() == h.grid())) throw std::invalid_argument("model fields live on different grids");
  AdmissibleModel z;
  z.kind_ = kind;
  z.structure_ = s;
  z.basis_ = enumerate_basis(s, params);
  z.c_ = C;
  z.xi_ = xi_eps;
  z.h_ = h;
  const KernelK& k = kernel_for(xi_eps.grid());
  z.kxi_ = k.green_convolve(xi_eps);
  z.nh_ = k.green_convolve(h);
  z.cache_ = std::make_shared<AdmissibleModel::Cache>();
  for (const Symbol& tau : z.basis_.symbols) {
    if (kind == AdmissibleModel::Kind::Translated) {
      TermSum all;
      for (const auto& [sigma, c] : translate_symbol(tau))
        for (ModelTerm t : renormalized_terms(sigma, C)) {
          t.coeff *= from_rational<double>(c);
          all.push_back(t);
        }
      z.terms_.push_back(merge(all));
    } else {
      z.terms_.push_back(renormalized_terms(tau, C));
    }
  }
  return z;
}

const TermSum& AdmissibleModel::terms(const Symbol& tau) const { return terms_.at(basis_.index_of(tau)); }

double AdmissibleModel::source_at(Source s, GridPoint p) const {
  switch (s) {
    case Source::Xi:
      return xi_(p.i1, p.i2);
    case Source::H:
      return h_(p.i1, p.i2);
    case Source::KXi:
      return kxi_(p.i1, p.i2);
    case Source::NH:
      return nh_(p.i1, p.i2);
  }
  return 0.0;
}

const Field& AdmissibleModel::product_field(const std::array<int, kSources>& pow) const {
  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto it = cache_->products.find(pow);
  if (it != cache_->products.end()) return it->second;
  Field f(grid(), 1.0);
  const Field* src[kSources] = {&xi_, &h_, &kxi_, &nh_};
  for (int s = 0; s < kSources; ++s)
    for (int e = 0; e < pow[s]; ++e) f *= *src[s];
  return cache_->products.emplace(pow, std::move(f)).first->second;
}

Field AdmissibleModel::pi(const Symbol& tau, GridPoint x, Chart chart) const {
  const int n = grid().n;
  const double h = grid().spacing();
  Field out(grid(), 0.0);
  for (const ModelTerm& t : terms(tau)) {
    double c = t.coeff;
    for (int s = 0; s < kSources; ++s)
      for (int e = 0; e < t.x_pow[s]; ++e) c *= source_at(static_cast<Source>(s), x);
    const Field& p = product_field(t.y_pow);
    if (t.p1 == 0 && t.p2 == 0) {
      kernels::axpy(c, p.data(), out.data(), out.size());
      continue;
    }
    for (int i = 0; i < n; ++i) {
      const double d1 = chart == Chart::Local ? local_displacement(i - x.i1, grid()) : (i - x.i1) * h;
      const double w1 = std::pow(d1, t.p1);
      for (int j = 0; j < n; ++j) {
        const double d2 = chart == Chart::Local ? local_displacement(j - x.i2, grid()) : (j - x.i2) * h;
        out(i, j) += c * w1 * std::pow(d2, t.p2) * p(i, j);
      }
    }
  }
  return out;
}

double AdmissibleModel::pi_at(const Symbol& tau, GridPoint x, GridPoint y, Chart chart) const {
  const double h = grid().spacing();
  double d1 = (y.i1 - x.i1) * h, d2 = (y.i2 - x.i2) * h;
  if (chart == Chart::Local) {
    d1 = local_displacement(y.i1 - x.i1, grid());
    d2 = local_displacement(y.i2 - x.i2, grid());
  }
  double sum = 0.0;
  for (const ModelTerm& t : terms(tau)) {
    double c = t.coeff * std::pow(d1, t.p1) * std::pow(d2, t.p2);
    for (int s = 0; s < kSources; ++s) {
      for (int e = 0; e < t.x_pow[s]; ++e) c *= source_at(static_cast<Source>(s), x);
      for (int e = 0; e < t.y_pow[s]; ++e) c *= source_at(static_cast<Source>(s), y);
    }
    sum += c;
  }
  return sum;
}

Character AdmissibleModel::f_char(GridPoint x) const {
  const double h = grid().spacing();
  Character extended{-kxi_(x.i1, x.i2), -nh_(x.i1, x.i2), -x.i1 * h, -x.i2 * h};
  if (kind_ != Kind::Translated) {
    if (structure_ == Structure::Tg) extended.jH = 0.0;
    return extended;
  }
  // f^h = f^{e_h} o tau_H^+ on the generators of Tg+.
  Character out{0.0, 0.0, extended.x1, extended.x2};
  for (const auto& [m, c] : translate_plus(Monomial{{PlusGen::J(Symbol::xi()), 1}}))
    out.jXi += from_rational<double>(c) * evaluate(extended, m);
  return out;
}

MatrixT<double> AdmissibleModel::gamma(GridPoint x, GridPoint y) const {
  return gamma_matrix(compose(invert(f_char(x)), f_char(y)), basis_);
}

AdmissibleModel canonical_model(const Field& xi_eps, Structure s, const StructureParams& params) {
  const auto kind = s == Structure::Tg ? AdmissibleModel::Kind::Canonical : AdmissibleModel::Kind::Extended;
  return make_model(kind, s, xi_eps, Field(xi_eps.grid(), 0.0), 0.0, params);
}

AdmissibleModel canonical_model(const Field& xi_eps, const Field& h, const StructureParams& params) {
  return make_model(AdmissibleModel::Kind::Extended, Structure::TgH, xi_eps, h, 0.0, params);
}

AdmissibleModel renormalize(const AdmissibleModel& z, double C) {
  if (C == 0.0) return z;
  return make_model(z.kind(), z.structure(), z.xi(), z.h(), z.renorm_constant() + C, z.params());
}

AdmissibleModel extend(const AdmissibleModel& z, const Field& h) {
  if (z.kind() != AdmissibleModel::Kind::Canonical) throw std::invalid_argument("extend expects a model on Tg");
  if (!(h.grid() == z.grid())) throw std::invalid_argument("grid mismatch between model and h");
  return make_model(AdmissibleModel::Kind::Extended, Structure::TgH, z.xi(), h, z.renorm_constant(), z.params());
}

AdmissibleModel translate(const AdmissibleModel& z, const Field& h) {
  if (z.structure() != Structure::Tg) throw std::invalid_argument("translate expects a model on Tg");
  if (!(h.grid() == z.grid())) throw std::invalid_argument("grid mismatch between model and h");
  const Field shift = z.kind() == AdmissibleModel::Kind::Translated ? z.h() + h : h;
  return make_model(AdmissibleModel::Kind::Translated, Structure::Tg, z.xi(), shift, z.renorm_constant(), z.params());
}

AdmissibilityReport check_admissibility(const AdmissibleModel& z, int pairs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pos(0, z.grid().n - 1);
  AdmissibilityReport rep;
  const Basis& b = z.basis();
  for (int q = 0; q < pairs; ++q) {
    const GridPoint x{pos(rng), pos(rng)}, y{pos(rng), pos(rng)};
    const MatrixT<double> g = z.gamma(x, y);
    std::vector<Field> pix;
    for (const Symbol& s : b.symbols) pix.push_back(z.pi(s, x));
    for (std::size_t j = 0; j < b.size(); ++j) {
      Field lhs(z.grid(), 0.0);
      for (std::size_t r = 0; r < b.size(); ++r)
        if (g(r, j) != 0.0) kernels::axpy(g(r, j), pix[r].data(), lhs.data(), lhs.size());
      const double err = sup_diff(lhs, z.pi(b.symbols[j], y));
      if (err > rep.worst) {
        rep.worst = err;
        rep.worst_symbol = b.symbols[j].str();
      }
    }
    ++rep.pairs;
  }
  return rep;
}

namespace {

// Autocorrelation q = rho * rho of the unit-scale profile at fixed nodes s = u^2, u in [0, sqrt 2].
struct Autocorrelation {
  std::vector<double> s, weight_q;  // weight_q = quadrature weight * q(s) * s * ds/du
};

const Autocorrelation& autocorrelation(Profile p) {
  static std::mutex mutex;
  static std::map<Profile, Autocorrelation> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(p);
  if (it != cache.end()) return it->second;
  using G = boost::math::quadrature::gauss<double, 20>;
  const double mass = profile_mass(p);
  auto rho = [&](double r) { return profile_raw(p, r) / mass; };
  auto q_of = [&](double s) {
    constexpr int kTheta = 256;
    double total = 0.0;
    constexpr int panels = 20;
    for (int k = 0; k < panels; ++k)
      total += G::integrate(
          [&](double r) {
            double ang = 0.0;
            for (int t = 0; t < kTheta; ++t) {
              const double th = 2.0 * kPi * (t + 0.5) / kTheta;
              ang += rho(std::sqrt(std::max(0.0, r * r + s * s - 2.0 * r * s * std::cos(th))));
            }
            return rho(r) * r * ang * 2.0 * kPi / kTheta;
          },
          static_cast<double>(k) / panels, static_cast<double>(k + 1) / panels);
    return total;
  };
  Autocorrelation a;
  const double u_max = std::sqrt(2.0);
  constexpr int panels = 16;
  const auto& x = G::abscissa();
  const auto& w = G::weights();
  for (int k = 0; k < panels; ++k) {
    const double lo = u_max * k / panels, hi = u_max * (k + 1) / panels;
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < x.size(); ++i)
      for (int sign : {-1, 1}) {
        if (x[i] == 0.0 && sign < 0) continue;
        const double u = mid + sign * half * x[i];
        const double s = u * u;
        a.s.push_back(s);
        a.weight_q.push_back(half * w[i] * q_of(s) * s * 2.0 * u);
      }
  }
  return cache.emplace(p, std::move(a)).first->second;
}

}  // namespace

double renorm_constant(double epsilon, const Mollifier& rho) {
  if (!(epsilon > 0.0) || epsilon > 0.5) throw std::invalid_argument("renorm_constant needs 0 < epsilon <= 1/2");
  const KernelK& k = kernel_for(Grid2D{16});
  const Autocorrelation& a = autocorrelation(rho.profile);
  double c = 0.0;
  for (std::size_t i = 0; i < a.s.size(); ++i) c += a.weight_q[i] * k.spatial(epsilon * a.s[i]);
  return 2.0 * kPi * c;
}

double renorm_constant_grid(double epsilon, const Mollifier& rho, Grid2D grid) {
  const Mollifier r{rho.profile, epsilon};
  if (!(epsilon >= 2.0 * grid.spacing())) throw std::invalid_argument("under-resolved mollifier");
  const KernelK& k = kernel_for(grid);
  const Multiplier m = mollifier_multiplier(grid, r);
  const Multiplier& nk = k.spectrum_table();
  const int n = grid.n, half = n / 2 + 1;
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < half; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * half + j;
      const double w = (j == 0 || j == n / 2) ? 1.0 : 2.0;
      sum += w * nk[idx] * m[idx] * m[idx];
    }
  return sum / (4.0 * kPi * kPi);
}

MonteCarloEstimate renorm_constant_mc(double epsilon, const Mollifier& rho, Grid2D grid, int seeds,
                                      std::uint64_t first_seed) {
  const Mollifier r{rho.profile, epsilon};
  const KernelK& k = kernel_for(grid);
  const Multiplier m = mollifier_multiplier(grid, r);
  if (!(epsilon >= 2.0 * grid.spacing())) throw std::invalid_argument("under-resolved mollifier");
  std::vector<double> values(static_cast<std::size_t>(seeds));
#pragma omp parallel for schedule(dynamic) num_threads(kernels::threads())
  for (int s = 0; s < seeds; ++s) {
    const Field xe = apply_multiplier(sample_white_noise(first_seed + static_cast<std::uint64_t>(s), grid), m);
    const Field kx = k.green_convolve(xe);
    values[static_cast<std::size_t>(s)] = inner(kx, xe) / (4.0 * kPi * kPi);
  }
  MonteCarloEstimate e;
  e.samples = seeds;
  double sum = 0.0, sum2 = 0.0;
  for (double v : values) sum += v;
  e.mean = sum / seeds;
  for (double v : values) sum2 += (v - e.mean) * (v - e.mean);
  e.standard_error = seeds > 1 ? std::sqrt(sum2 / (seeds - 1) / seeds) : 0.0;
  return e;
}

namespace {

// Discrete atom rolled so that its centre sits on index 0, times the local displacement power.
std::vector<double> centred_atom(const WaveletBasis& b, int level, bool wavelet, int power) {
  const int n = b.grid().n;
  const std::vector<double> a = b.atom(level, wavelet, 0);
  const long shift = std::lround(b.atom_center(level, wavelet));
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int u = 0; u < n; ++u) {
    const double v = a[static_cast<std::size_t>((u + shift) % n)];
    out[static_cast<std::size_t>(u)] = power == 0 ? v : v * std::pow(local_displacement(u, b.grid()), power);
  }
  return out;
}

// y -> h sum_z f(z) a1(z1 - y1) a2(z2 - y2), the L2 pairing with the atom based at y.
Field correlate(const Field& f, const std::vector<double>& a1, const std::vector<double>& a2) {
  const Grid2D g = f.grid();
  Field atom(g);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) atom(i, j) = a1[static_cast<std::size_t>(i)] * a2[static_cast<std::size_t>(j)];
  Spectrum s = forward(f);
  const Spectrum t = forward(atom);
  const double scale = static_cast<double>(g.size()) * g.spacing();
  for (std::size_t k = 0; k < s.size(); ++k) s.data()[k] *= std::conj(t.data()[k]) * scale;
  return inverse(s);
}

}  // namespace

namespace {

// <Pi_y tau, psi_y> for every grid base point y, one wavelet level and type (3 = scaling at level 0).
Field level_coefficients(const AdmissibleModel& z, const Symbol& tau, const WaveletBasis& b, int level, int type) {
  const bool w1 = type == 0 || type == 2, w2 = type == 1 || type == 2;
  const Field* src[kSources] = {&z.xi(), &z.h(), &z.kxi(), &z.nh()};
  Field coef(z.grid(), 0.0);
  for (const ModelTerm& t : z.terms(tau)) {
    Field c = correlate(z.product_field(t.y_pow), centred_atom(b, level, w1, t.p1), centred_atom(b, level, w2, t.p2));
    for (int s = 0; s < kSources; ++s)
      for (int e = 0; e < t.x_pow[s]; ++e) c *= *src[s];
    kernels::axpy(t.coeff, c.data(), coef.data(), coef.size());
  }
  return coef;
}

void check_levels(const AdmissibleModel& z, const WaveletBasis& b, int levels) {
  if (!(b.grid() == z.grid())) throw std::invalid_argument("wavelet basis and model grid differ");
  if (levels < 0 || levels > b.depth()) throw std::invalid_argument("levels exceed wavelet depth");
}

}  // namespace

std::vector<double> measure_model_norm(const AdmissibleModel& z, const Symbol& tau, const WaveletBasis& b,
                                       int levels) {
  check_levels(z, b, levels);
  const double hom = homogeneity(tau, z.params());
  std::vector<double> out;
  for (int level = 0; level <= levels; ++level) {
    double sup = 0.0;
    for (int type = 0; type < (level == 0 ? 4 : 3); ++type)
      sup = std::max(sup, level_coefficients(z, tau, b, level, type).sup_norm());
    out.push_back(std::exp2(level * (hom + 1.0)) * sup);
  }
  return out;
}

std::vector<double> measure_model_distance(const AdmissibleModel& a, const AdmissibleModel& z, const Symbol& tau,
                                           const WaveletBasis& b, int levels) {
  check_levels(a, b, levels);
  check_levels(z, b, levels);
  const double hom = homogeneity(tau, a.params());
  std::vector<double> out;
  for (int level = 0; level <= levels; ++level) {
    double sup = 0.0;
    for (int type = 0; type < (level == 0 ? 4 : 3); ++type)
      sup = std::max(sup, sup_diff(level_coefficients(a, tau, b, level, type), level_coefficients(z, tau, b, level, type)));
    out.push_back(std::exp2(level * (hom + 1.0)) * sup);
  }
  return out;
}

}  // namespace gpam
