#include "gpam/analysis.hpp"

#include "gpam/kernels.hpp"

#include <algorithm>
#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace gpam {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTiny = std::numeric_limits<double>::min();

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::AtMost:
      return "<=";
    case Relation::AtLeast:
      return ">=";
    case Relation::Record:
      return "record";
  }
  return "?";
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

double max_frame_diff(const Trajectory& a, const Trajectory& b) {
  if (a.frames.size() != b.frames.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < a.frames.size(); ++i) worst = std::max(worst, sup_diff(a.frames[i], b.frames[i]));
  return worst;
}

double model_mismatch(const AdmissibleModel& a, const AdmissibleModel& b) {
  const int n = a.grid().n;
  const GridPoint points[] = {{0, 0}, {n / 3, n / 5}, {n - 1, n / 2}, {n / 2, n - 3}};
  double worst = 0.0;
  for (const GridPoint& x : points)
    for (const Symbol& s : a.basis().symbols) worst = std::max(worst, sup_diff(a.pi(s, x), b.pi(s, x)));
  return worst;
}

// Periodic distance from grid point (i, j) to (c1, c2).
double torus_distance(Grid2D g, int i, int j, double c1, double c2) {
  auto wrap = [](double d) { return d - 2.0 * kPi * std::round(d / (2.0 * kPi)); };
  const double h = g.spacing();
  return std::hypot(wrap(i * h - c1), wrap(j * h - c2));
}

double ball_min(const Field& f, double c1, double c2, double radius) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < f.n(); ++i)
    for (int j = 0; j < f.n(); ++j)
      if (torus_distance(f.grid(), i, j, c1, c2) <= radius) m = std::min(m, f(i, j));
  return m;
}

// int_0^t e^{s Lap} f ds
Field heat_integral(const Field& f, double t) {
  return apply_multiplier(f, make_multiplier(f.grid(), [t](int k1, int k2) {
    const double q = static_cast<double>(k1 * k1 + k2 * k2);
    return q == 0.0 ? t : -std::expm1(-q * t) / q;
  }));
}

// Runs body(i) for i < count in parallel and rethrows the first exception on the calling thread.
template <class Body>
void parallel_for(int count, Body body) {
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(gpam_analysis_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

const Metric& StudyReport::check(const std::string& name, double value, Relation rel, double bound,
                                 const std::string& claim) {
  Metric m{name, value, bound, rel, claim, true};
  if (rel == Relation::AtMost) m.pass = value <= bound;
  if (rel == Relation::AtLeast) m.pass = value >= bound;
  metrics.push_back(m);
  return metrics.back();
}

const Metric& StudyReport::record(const std::string& name, double value, const std::string& claim) {
  return check(name, value, Relation::Record, 0.0, claim);
}

const Metric& StudyReport::metric(const std::string& name) const {
  for (const Metric& m : metrics)
    if (m.name == name) return m;
  throw std::out_of_range("no metric '" + name + "' in study " + study);
}

bool StudyReport::passed() const {
  if (inconclusive) return false;
  return std::all_of(metrics.begin(), metrics.end(), [](const Metric& m) { return m.pass; });
}

nlohmann::json StudyReport::to_json() const {
  nlohmann::json j;
  j["study"] = study;
  j["params"] = params;
  j["passed"] = passed();
  j["inconclusive"] = inconclusive;
  if (!note.empty()) j["note"] = note;
  for (const Metric& m : metrics) {
    nlohmann::json e = {{"name", m.name}, {"relation", relation_name(m.relation)}, {"claim", m.claim}, {"pass", m.pass}};
    e["value"] = std::isfinite(m.value) ? nlohmann::json(m.value) : nlohmann::json(std::to_string(m.value));
    if (m.relation != Relation::Record) e["bound"] = m.bound;
    j["metrics"].push_back(e);
  }
  if (!tables.empty()) j["tables"] = tables;
  return j;
}

Field study_noise(std::uint64_t seed, const PDEConfig& cfg) {
  return mollify(sample_white_noise(seed, cfg.grid), Mollifier{Profile::Bump, cfg.epsilon});
}

StudyReport gateaux_check(const PDEConfig& cfg, const Nonlinearity& g, const Field& xi_eps, const Field& h,
                          const std::vector<double>& deltas) {
  if (deltas.size() < 2) throw std::invalid_argument("gateaux_check needs at least two deltas");
  StudyReport rep;
  rep.study = "gateaux";
  rep.params = {{"g", g.name}, {"n", cfg.grid.n}, {"epsilon", cfg.epsilon}, {"t", cfg.t_end}, {"deltas", deltas}};
  const Field zero(cfg.grid, 0.0);
  const CoupledSolution base = solve_coupled(
      cfg, g, xi_eps, {TangentSpec{zero, h, 0, 1.0, 1, true}, TangentSpec{zero, -3.0 * h, 0, 1.0, 1, true}});
  if (base.u.blowup) {
    rep.inconclusive = true;
    rep.note = "base solution blew up";
    return rep;
  }
  Field lin = base.v[1].final();
  kernels::axpy(3.0, base.v[0].final().data(), lin.data(), lin.size());
  rep.check("linearity", lin.sup_norm() / std::max(base.v[0].final().sup_norm(), kTiny), Relation::AtMost, 1e-8,
            "the tangent is linear in the direction h");
  std::vector<double> err(deltas.size());
  std::vector<char> blew(deltas.size(), 0);
  const int count = static_cast<int>(deltas.size());
  parallel_for(count, [&](int i) {
    const Trajectory ud = solve_gpam_shifted(cfg, g, xi_eps, deltas[i] * h);
    blew[i] = ud.blowup;
    Field r = ud.final();
    r -= base.u.final();
    kernels::axpy(-deltas[i], base.v[0].final().data(), r.data(), r.size());
    err[i] = r.sup_norm();
  });
  if (std::any_of(blew.begin(), blew.end(), [](char b) { return b != 0; })) {
    rep.inconclusive = true;
    rep.note = "a shifted branch blew up";
    return rep;
  }
  std::vector<double> lx, ly;
  double worst_r = 0.0;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    worst_r = std::max(worst_r, err[i] / deltas[i]);
    rep.tables["delta"].push_back(deltas[i]);
    rep.tables["remainder"].push_back(err[i]);
    rep.tables["r"].push_back(err[i] / deltas[i]);
    if (err[i] > 0.0) {
      lx.push_back(std::log(deltas[i]));
      ly.push_back(std::log(err[i]));
    }
  }
  rep.record("max_r", worst_r, "difference quotient of the solution map converges to the tangent");
  if (worst_r < 1e-10) {
    rep.check("affine_remainder", worst_r, Relation::AtMost, 1e-10, "solution affine in the noise");
  } else {
    rep.check("order", lx.size() >= 2 ? fitted_slope(lx, ly) : 0.0, Relation::AtLeast, 1.8,
              "Gateaux differentiability with second-order remainder");
  }
  return rep;
}

StudyReport translation_consistency(const PDEConfig& cfg, const Nonlinearity& g, const Field& xi_eps,
                                    const Field& h1, const Field& h2) {
  StudyReport rep;
  rep.study = "translation";
  rep.params = {{"g", g.name}, {"n", cfg.grid.n}, {"epsilon", cfg.epsilon}};
  const AdmissibleModel z = canonical_model(xi_eps);
  rep.check("model_identity", model_mismatch(translate(z, h1), canonical_model(xi_eps + h1)), Relation::AtMost, 1e-10,
            "translated canonical model is the canonical model of the shifted noise");
  rep.check("model_additivity", model_mismatch(translate(translate(z, h1), h2), translate(z, h1 + h2)),
            Relation::AtMost, 1e-10, "two translations compose to one");
  const Trajectory a = solve_gpam(cfg, g, xi_eps + h1), b = solve_gpam_shifted(cfg, g, xi_eps, h1);
  rep.check("solver_identity", max_frame_diff(a, b), Relation::AtMost, 0.0,
            "shifted solve equals the solve driven by the shifted noise");
  return rep;
}

double heat_ball_probability(double distance, double delta, double t) {
  if (t <= 0.0) return distance < delta ? 1.0 : (distance == delta ? 0.5 : 0.0);
  const double lambda = distance * distance / (2.0 * t);
  const boost::math::non_central_chi_squared dist(2.0, lambda);
  return boost::math::cdf(dist, delta * delta / (2.0 * t));
}

double heat_ball_time(double delta, double rho) {
  auto ok = [&](double t) { return heat_ball_probability(delta + t * rho, delta, t) >= 0.25; };
  double lo = 0.0, t = 1e-6;
  while (t < 100.0 && ok(t)) {
    lo = t;
    t *= 1.02;
  }
  if (t >= 100.0) return lo;
  double hi = t;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

Field indicator_bump(Grid2D grid, double c1, double c2, double delta, double width) {
  auto psi = [](double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; };
  Field f(grid);
  for (int i = 0; i < grid.n; ++i)
    for (int j = 0; j < grid.n; ++j) {
      const double s = (torus_distance(grid, i, j, c1, c2) - delta) / width;
      f(i, j) = s <= 0.0 ? 1.0 : (s >= 1.0 ? 0.0 : psi(1.0 - s) / (psi(1.0 - s) + psi(s)));
    }
  return f;
}

StudyReport strong_maximum_principle_check(const PDEConfig& cfg, const Nonlinearity& g, const Field& xi_eps,
                                           double delta, double width) {
  StudyReport rep;
  rep.study = "strong_maximum_principle";
  rep.params = {{"g", g.name}, {"n", cfg.grid.n}, {"epsilon", cfg.epsilon}, {"delta", delta}, {"width", width},
                {"t_end", cfg.t_end}};
  const double c = kPi;
  const Field v0 = indicator_bump(cfg.grid, c, c, delta, width);
  for (double rho : {1.0, 2.0, 4.0}) {
    const std::string tag = "rho" + std::to_string(static_cast<int>(rho));
    const double t_rho = heat_ball_time(delta, rho);
    rep.check("t_" + tag, t_rho, Relation::AtLeast, kTiny, "heat flow of a ball indicator stays above 1/4");
    double lowest = 1.0;
    for (int k = 1; k <= 16; ++k) {
      const double t = t_rho * k / 16.0;
      lowest = std::min(lowest, heat_ball_probability(delta + t * rho, delta, t));
    }
    rep.check("plane_min_" + tag, lowest, Relation::AtLeast, 0.25, "heat flow of a ball indicator stays above 1/4");
    const double th = 0.5 * t_rho;
    rep.check("grid_min_" + tag, ball_min(heat_semigroup(v0, th), c, c, delta + th * rho), Relation::AtLeast,
              0.25 - 1e-9, "heat flow of data >= 1 on the ball stays above 1/4 on the torus grid");
  }
  const Trajectory u = solve_gpam(cfg, g, xi_eps);
  if (u.blowup) {
    rep.inconclusive = true;
    rep.note = "u blew up";
    return rep;
  }
  const Trajectory v = solve_tangent_hom(cfg, g, xi_eps, u, v0);
  for (std::size_t i = 0; i < v.times.size(); ++i) {
    rep.tables["time"].push_back(v.times[i]);
    rep.tables["ball_min"].push_back(ball_min(v.frames[i], c, c, delta + v.times[i]));
  }
  rep.check("min_v_final", v.final().min(), Relation::AtLeast, kTiny, "homogeneous tangent is strictly positive");
  return rep;
}

StudyReport weak_maximum_principle_check(const PDEConfig& cfg, const Nonlinearity& g, const Field& v0,
                                         const std::vector<std::uint64_t>& seeds, double tol) {
  if (v0.min() < 0.0) throw std::invalid_argument("weak maximum principle needs v0 >= 0");
  StudyReport rep;
  rep.study = "weak_maximum_principle";
  rep.params = {{"g", g.name}, {"n", cfg.grid.n}, {"epsilon", cfg.epsilon}, {"seeds", seeds.size()}};
  const int count = static_cast<int>(seeds.size());
  std::vector<double> lows(seeds.size(), 0.0);
  std::vector<char> blew(seeds.size(), 0);
  parallel_for(count, [&](int i) {
    const Field xi = study_noise(seeds[i], cfg);
    const CoupledSolution s = solve_coupled(cfg, g, xi, {TangentSpec{v0, std::nullopt}});
    blew[i] = s.u.blowup;
    double low = std::numeric_limits<double>::infinity();
    for (const Field& f : s.v.front().frames) low = std::min(low, f.min());
    lows[i] = low;
  });
  double worst = std::numeric_limits<double>::infinity();
  int blown = 0;
  for (int i = 0; i < count; ++i) {
    blown += blew[i];
    worst = std::min(worst, lows[i]);
    rep.tables["min_v"].push_back(lows[i]);
  }
  rep.record("blown_up_seeds", blown, "blow-up seeds are still checked up to the blow-up time");
  rep.check("min_v", worst, Relation::AtLeast, -tol, "homogeneous tangent from nonnegative data stays nonnegative");
  return rep;
}

StudyReport comparison_bound_check(const PDEConfig& cfg, const Nonlinearity& g, double bound,
                                   const std::vector<std::uint64_t>& seeds, double tol) {
  if (cfg.u0.sup_norm() > bound) throw std::invalid_argument("comparison bound needs |u0| <= bound");
  StudyReport rep;
  rep.study = "comparison_bound";
  rep.params = {{"g", g.name}, {"n", cfg.grid.n}, {"epsilon", cfg.epsilon}, {"t_end", cfg.t_end},
                {"bound", bound}, {"seeds", seeds.size()}};
  const int count = static_cast<int>(seeds.size());
  std::vector<double> sups(seeds.size(), 0.0);
  parallel_for(count, [&](int i) { sups[i] = solve_gpam(cfg, g, study_noise(seeds[i], cfg)).sup_max; });
  rep.tables["sup_u"] = sups;
  rep.check("sup_u", *std::max_element(sups.begin(), sups.end()), Relation::AtMost, bound + tol,
            "solutions started inside the band between two zeros of g stay inside it");
  return rep;
}

StudyReport feynman_kac_bound_check(const PDEConfig& cfg, const Nonlinearity& g, const Field& xi_eps,
                                    const std::vector<Field>& hs) {
  if (hs.empty()) throw std::invalid_argument("feynman_kac_bound_check needs shifts");
  StudyReport rep;
  rep.study = "feynman_kac";
  rep.params = {{"g", g.name}, {"n", cfg.grid.n}, {"epsilon", cfg.epsilon}, {"T", cfg.t_end}, {"shifts", hs.size()}};
  std::vector<TangentSpec> specs{TangentSpec{Field(cfg.grid, 0.0), Field(cfg.grid, 1.0), 0, 2.0, 2}};
  std::vector<Field> family = hs;
  family.push_back(10.0 * hs.front());
  for (const Field& h : family) specs.push_back(TangentSpec{Field(cfg.grid, 0.0), h});
  const CoupledSolution sol = solve_coupled(cfg, g, xi_eps, specs);
  if (sol.u.blowup) {
    rep.inconclusive = true;
    rep.note = "u blew up";
    return rep;
  }
  const Trajectory& w = sol.v.front();
  const double T = cfg.t_end;
  double w_min = 0.0;
  for (const Field& f : w.frames) w_min = std::min(w_min, f.min());
  rep.check("w_min", w_min, Relation::AtLeast, -1e-8, "auxiliary equation has a nonnegative solution");

  std::vector<double> paper(family.size(), 0.0);
  double cs = 0.0;
  for (std::size_t k = 0; k < family.size(); ++k) {
    const Trajectory& v = sol.v[k + 1];
    const Field h2 = family[k] * family[k];
    const double norm = family[k].l2_norm();
    for (std::size_t i = 1; i < v.times.size(); ++i) {
      const double t = v.times[i];
      const Field a = heat_integral(h2, t);
      const Field& vf = v.frames[i];
      const Field& wf = w.frames[i];
      const bool window = t >= 0.5 * T && t < T;
      for (std::size_t p = 0; p < vf.size(); ++p) {
        const double wa = wf[p] * a[p];
        if (wa > 0.0) cs = std::max(cs, std::abs(vf[p]) / std::sqrt(wa));
        if (window && wf[p] > 0.0 && norm > 0.0)
          paper[k] = std::max(paper[k], std::abs(vf[p]) / (std::log(T / (T - t)) * std::sqrt(wf[p]) * norm));
      }
    }
  }
  rep.check("cauchy_schwarz_ratio", cs, Relation::AtMost, 1.02,
            "|v|^2 <= w(t,x) E int h^2(B_r) dr from the Feynman-Kac representation");
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < family.size(); ++k) {
    worst = std::max(worst, paper[k]);
    rep.tables["ratio"].push_back(paper[k]);
  }
  rep.record("max_log_ratio", worst, "|v| <~ log(T/(T-t)) |w|^(1/2) |h|_2 on t in [T/2, T)");
  rep.check("ratio_scale_invariance", std::abs(paper.back() - paper.front()) / std::max(paper.front(), kTiny),
            Relation::AtMost, 1e-8, "both sides are linear in h");
  return rep;
}

StudyReport epsilon_convergence_study(const PDEConfig& cfg, const Nonlinearity& g, std::uint64_t seed,
                                      const Field& h, const ConvergenceSetup& setup) {
  if (setup.eps_list.size() < 3) throw std::invalid_argument("convergence study needs at least three epsilons");
  StudyReport rep;
  rep.study = setup.renormalize ? "epsilon_convergence" : "epsilon_convergence_unrenormalized";
  rep.params = {{"g", g.name},        {"n", cfg.grid.n},       {"seed", seed},
                {"eps", setup.eps_list}, {"renormalize", setup.renormalize}, {"theta", setup.theta},
                {"t", cfg.t_end}};
  const Field white = sample_white_noise(seed, cfg.grid);
  const WaveletBasis basis(cfg.grid, 4);
  const Symbol tau = Symbol::parse("I(Xi)*Xi");
  const std::size_t m = setup.eps_list.size();
  std::vector<Field> us(m), vs(m);
  std::vector<AdmissibleModel> zs(m);
  std::vector<char> blew(m, 0);
  const int count = static_cast<int>(m);
  parallel_for(count, [&](int k) {
    const Mollifier rho{Profile::Bump, setup.eps_list[k]};
    PDEConfig c = cfg;
    c.epsilon = rho.epsilon;
    c.C = setup.renormalize ? renorm_constant(rho.epsilon, rho) : 0.0;
    const Field xi = mollify(white, rho);
    const CoupledSolution s = solve_coupled(c, g, xi, {TangentSpec{Field(cfg.grid, 0.0), h}});
    blew[k] = s.u.blowup;
    us[k] = s.u.final();
    vs[k] = s.v.front().final();
    zs[k] = renormalize(canonical_model(xi), c.C);
  });
  if (std::any_of(blew.begin(), blew.end(), [](char b) { return b != 0; })) {
    rep.inconclusive = true;
    rep.note = "blow-up at some epsilon";
    return rep;
  }
  std::vector<double> du, dv, dz;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    du.push_back(sup_diff(us[k], us[k + 1]));
    dv.push_back(sup_diff(vs[k], vs[k + 1]));
    const std::vector<double> d = measure_model_distance(zs[k], zs[k + 1], tau, basis, setup.model_levels);
    dz.push_back(*std::max_element(d.begin(), d.end()));
  }
  rep.tables["d_u"] = du;
  rep.tables["d_v"] = dv;
  rep.tables["d_model"] = dz;
  for (std::size_t k = 0; k + 1 < du.size(); ++k) {
    const std::string tag = std::to_string(k);
    rep.check("u_contraction_" + tag, du[k + 1] / du[k], Relation::AtMost, setup.theta,
              "renormalized solutions converge as epsilon -> 0");
    rep.check("v_contraction_" + tag, dv[k + 1] / dv[k], Relation::AtMost, setup.theta,
              "renormalized tangents converge as epsilon -> 0");
    rep.check("model_contraction_" + tag, dz[k + 1] / dz[k], Relation::AtMost, setup.theta,
              "renormalized models converge as epsilon -> 0");
  }
  return rep;
}

double additive_variance(const PDEConfig& cfg) {
  const Multiplier m = mollifier_multiplier(cfg.grid, Mollifier{Profile::Bump, cfg.epsilon});
  const int n = cfg.grid.n, half = n / 2 + 1;
  const double t = cfg.t_end;
  double var = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < half; ++j) {
      const int k1 = wavenumber(i, n);
      const double q = static_cast<double>(k1 * k1 + j * j);
      const double a = q == 0.0 ? t : -std::expm1(-q * t) / q;
      const double w = (j == 0 || j == n / 2) ? 1.0 : 2.0;
      const double mk = m[static_cast<std::size_t>(i) * half + j];
      var += w * mk * mk * a * a;
    }
  return var / (4.0 * kPi * kPi);
}

StudyReport density_nondegeneracy(const PDEConfig& cfg, const Nonlinearity& g, GridPoint x,
                                  const std::vector<std::uint64_t>& seeds) {
  StudyReport rep;
  rep.study = "density";
  rep.params = {{"g", g.name}, {"n", cfg.grid.n}, {"epsilon", cfg.epsilon}, {"t", cfg.t_end}, {"seeds", seeds.size()}};
  const int count = static_cast<int>(seeds.size());
  std::vector<double> u_val(seeds.size()), v_val(seeds.size());
  std::vector<char> blew(seeds.size(), 0);
  parallel_for(count, [&](int i) {
    const Field xi = study_noise(seeds[i], cfg);
    const CoupledSolution s = solve_coupled(cfg, g, xi, {TangentSpec{Field(cfg.grid, 0.0), Field(cfg.grid, 1.0)}});
    blew[i] = s.u.blowup || s.v.front().blowup;
    u_val[i] = s.u.final()(x.i1, x.i2);
    v_val[i] = s.v.front().final()(x.i1, x.i2);
  });
  std::vector<double> values;
  double v_min = std::numeric_limits<double>::infinity();
  int blown = 0;
  for (int i = 0; i < count; ++i) {
    if (blew[i]) {
      ++blown;
      continue;
    }
    values.push_back(u_val[i]);
    v_min = std::min(v_min, v_val[i]);
  }
  rep.record("blown_up_seeds", blown, "blow-up seeds are excluded");
  if (values.empty()) {
    rep.inconclusive = true;
    rep.note = "every seed blew up";
    return rep;
  }
  const double n = static_cast<double>(values.size());
  rep.check("min_v", v_min, Relation::AtLeast, kTiny, "tangent in the direction h = 1 is positive at (t, x)");
  std::sort(values.begin(), values.end());
  std::size_t run = 1, longest = 1;
  for (std::size_t i = 1; i < values.size(); ++i) {
    run = values[i] == values[i - 1] ? run + 1 : 1;
    longest = std::max(longest, run);
  }
  rep.check("ecdf_max_jump", static_cast<double>(longest) / n, Relation::AtMost, 3.0 / std::sqrt(n),
            "law of u(t, x) has no atom");
  if (g.name == "one" && cfg.u0.sup_norm() == 0.0) {
    const boost::math::normal law(0.0, std::sqrt(additive_variance(cfg)));
    double ks = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double f = boost::math::cdf(law, values[i]);
      ks = std::max({ks, std::abs(f - i / n), std::abs(f - (i + 1) / n)});
    }
    rep.check("ks_distance", ks, Relation::AtMost, 1.36 / std::sqrt(n), "u(t, x) is Gaussian for g = 1, u0 = 0");
  }
  return rep;
}

}  // namespace gpam
