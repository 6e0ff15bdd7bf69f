#include "gpam/spde_solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "gpam/kernels.hpp"

namespace gpam {

Nonlinearity nonlinearity(const std::string& name) {
  auto zero = [](double) { return 0.0; };
  if (name == "zero") return {name, zero, zero, zero};
  if (name == "one") return {name, [](double) { return 1.0; }, zero, zero};
  if (name == "linear") return {name, [](double u) { return u; }, [](double) { return 1.0; }, zero};
  if (name == "sin")
    return {name, [](double u) { return std::sin(u); }, [](double u) { return std::cos(u); },
            [](double u) { return -std::sin(u); }};
  if (name == "cos")
    return {name, [](double u) { return std::cos(u); }, [](double u) { return -std::sin(u); },
            [](double u) { return -std::cos(u); }};
  if (name == "sin_plus_2")
    return {name, [](double u) { return std::sin(u) + 2.0; }, [](double u) { return std::cos(u); },
            [](double u) { return -std::sin(u); }};
  if (name == "rational")
    return {name, [](double u) { return 1.0 / (1.0 + u * u); },
            [](double u) { return -2.0 * u / ((1.0 + u * u) * (1.0 + u * u)); },
            [](double u) { return (6.0 * u * u - 2.0) / std::pow(1.0 + u * u, 3); }};
  throw std::invalid_argument("unknown nonlinearity '" + name + "'");
}

int PDEConfig::steps() const { return static_cast<int>(std::lround(t_end / dt)); }

void PDEConfig::validate(const Field& xi_eps) const {
  grid.validate();
  if (!(dt > 0.0) || !(t_end > 0.0)) throw std::invalid_argument("dt and t_end must be positive");
  if (std::abs(steps() * dt - t_end) > 1e-9 * t_end) throw std::invalid_argument("t_end is not a multiple of dt");
  if (!(u0.grid() == grid) || !(xi_eps.grid() == grid)) throw std::invalid_argument("initial data or noise on the wrong grid");
  if (save_every < 0) throw std::invalid_argument("save_every must be >= 0");
  const double sup = xi_eps.sup_norm();
  if (sup > 0.0 && dt > stability / sup)
    throw std::invalid_argument("dt violates the stability rule dt <= " + std::to_string(stability / sup));
}

Field Trajectory::at(double t) const {
  if (frames.empty()) throw std::logic_error("empty trajectory");
  if (t <= times.front()) return frames.front();
  if (t >= times.back()) return frames.back();
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - times.begin()), lo = hi - 1;
  const double w = (t - times[lo]) / (times[hi] - times[lo]);
  Field out = frames[lo];
  out *= 1.0 - w;
  kernels::axpy(w, frames[hi].data(), out.data(), out.size());
  return out;
}

Trajectory Trajectory::reversed() const {
  Trajectory r;
  const double end = times.back();
  for (std::size_t i = times.size(); i-- > 0;) {
    r.times.push_back(end - times[i]);
    r.frames.push_back(frames[i]);
  }
  return r;
}

Field tangent_potential(const Nonlinearity& g, const Field& u, const Field& xi_eps, double C) {
  Field v(u.grid());
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double a = u[k], d = g.dg(a);
    v[k] = d * xi_eps[k] - C * (d * d + g.d2g(a) * g.g(a));
  }
  return v;
}

namespace {

struct Propagator {
  Multiplier decay, phi;
  double dt;

  Propagator(Grid2D grid, double step) : dt(step) {
    decay = heat_multiplier(grid, step);
    phi = make_multiplier(grid, [step](int k1, int k2) {
      const double z = static_cast<double>(k1 * k1 + k2 * k2) * step;
      return z == 0.0 ? 1.0 : -std::expm1(-z) / z;
    });
  }

  /// f <- e^{dt Lap} f + dt phi1(dt Lap) forcing
  void step(Field& f, const Field* forcing) const {
    Spectrum s = forward(f);
    if (forcing) {
      const Spectrum fs = forward(*forcing);
      kernels::etd_update(decay.data(), phi.data(), dt, fs.data(), s.data(), s.size());
    } else {
      kernels::spectral_multiply(decay.data(), s.data(), s.size());
    }
    f = inverse(s);
  }
};

bool save_step(int s, int total, int every) {
  if (s == total) return true;
  return every > 0 ? s % every == 0 : std::has_single_bit(static_cast<unsigned>(s));
}

bool blown_up(const Field& f, double threshold) { return !f.finite() || f.sup_norm() > threshold; }

void record(Trajectory& t, double time, const Field& f) {
  t.times.push_back(time);
  t.frames.push_back(f);
}

}  // namespace

CoupledSolution solve_coupled(const PDEConfig& cfg, const Nonlinearity& g, const Field& noise,
                              const std::vector<TangentSpec>& tangents) {
  cfg.validate(noise);
  const int total = cfg.steps();
  const Propagator prop(cfg.grid, cfg.dt);
  CoupledSolution sol;
  sol.v.resize(tangents.size());

  Field u = cfg.u0;
  std::vector<Field> v;
  std::vector<bool> active(tangents.size(), true);
  for (const TangentSpec& t : tangents) {
    if (!(t.v0.grid() == cfg.grid) || (t.source && !(t.source->grid() == cfg.grid)))
      throw std::invalid_argument("tangent data on the wrong grid");
    if (t.start_step < 0 || t.start_step > total) throw std::invalid_argument("tangent start step out of range");
    v.push_back(t.v0);
  }
  record(sol.u, 0.0, u);
  sol.u.sup_max = u.sup_norm();
  for (std::size_t i = 0; i < tangents.size(); ++i) {
    record(sol.v[i], tangents[i].start_step * cfg.dt, v[i]);
    sol.v[i].sup_max = v[i].sup_norm();
  }

  Field force(cfg.grid), gu(cfg.grid);
  for (int s = 1; s <= total; ++s) {
    const double t = s * cfg.dt;
    for (std::size_t k = 0; k < u.size(); ++k) gu[k] = g.g(u[k]);

    if (!tangents.empty()) {
      const Field pot = tangent_potential(g, u, noise, cfg.C);
      for (std::size_t i = 0; i < tangents.size(); ++i) {
        if (!active[i] || s <= tangents[i].start_step) continue;
        const TangentSpec& spec = tangents[i];
        Field src(cfg.grid, 0.0);
        if (spec.source) {
          src = *spec.source;
          for (int e = 0; e < spec.g_power; ++e) src *= gu;
        }
        if (spec.linearized) {
          Field pv = pot;
          pv *= v[i];
          kernels::axpy(spec.potential_scale, pv.data(), src.data(), src.size());
          prop.step(v[i], &src);
        } else {
          kernels::exp_scale(cfg.dt * spec.potential_scale, pot.data(), v[i].data(), v[i].size());
          prop.step(v[i], spec.source ? &src : nullptr);
        }
        if (v[i].finite()) sol.v[i].sup_max = std::max(sol.v[i].sup_max, v[i].sup_norm());
        if (blown_up(v[i], cfg.blowup_threshold)) {
          active[i] = false;
          sol.v[i].blowup = true;
          sol.v[i].blowup_time = t;
          continue;
        }
        if (save_step(s, total, cfg.save_every)) record(sol.v[i], t, v[i]);
      }
    }

    for (std::size_t k = 0; k < u.size(); ++k) force[k] = gu[k] * (noise[k] - cfg.C * g.dg(u[k]));
    prop.step(u, &force);
    if (u.finite()) sol.u.sup_max = std::max(sol.u.sup_max, u.sup_norm());
    if (blown_up(u, cfg.blowup_threshold)) {
      sol.u.blowup = true;
      sol.u.blowup_time = t;
      if (u.finite()) record(sol.u, t, u);
      for (std::size_t i = 0; i < tangents.size(); ++i)
        if (active[i]) {
          sol.v[i].blowup = true;
          sol.v[i].blowup_time = t;
        }
      break;
    }
    if (save_step(s, total, cfg.save_every)) record(sol.u, t, u);
  }
  return sol;
}

Trajectory solve_gpam(const PDEConfig& cfg, const Nonlinearity& g, const Field& xi_eps) {
  return solve_coupled(cfg, g, xi_eps).u;
}

Trajectory solve_gpam_shifted(const PDEConfig& cfg, const Nonlinearity& g, const Field& xi_eps, const Field& h_eps) {
  if (!(h_eps.grid() == xi_eps.grid())) throw std::invalid_argument("shift on the wrong grid");
  Field shifted = xi_eps;
  shifted += h_eps;
  return solve_coupled(cfg, g, shifted).u;
}

namespace {

Trajectory along(const PDEConfig& cfg, const Nonlinearity& g, const Field& xi_eps, const Trajectory& u_traj,
                 TangentSpec spec) {
  CoupledSolution sol = solve_coupled(cfg, g, xi_eps, {std::move(spec)});
  if (u_traj.frames.empty() || !(sol.u.final() == u_traj.final()) || sol.u.blowup != u_traj.blowup)
    throw std::invalid_argument("u trajectory does not belong to this configuration and noise");
  return std::move(sol.v.front());
}

}  // namespace

Trajectory solve_tangent(const PDEConfig& cfg, const Nonlinearity& g, const Field& xi_eps, const Field& h_eps,
                         const Trajectory& u_traj) {
  return along(cfg, g, xi_eps, u_traj, TangentSpec{Field(cfg.grid, 0.0), h_eps, 0});
}

Trajectory solve_tangent_hom(const PDEConfig& cfg, const Nonlinearity& g, const Field& xi_eps,
                             const Trajectory& u_traj, const Field& v0) {
  return along(cfg, g, xi_eps, u_traj, TangentSpec{v0, std::nullopt, 0});
}

Trajectory solve_auxiliary_w(const PDEConfig& cfg, const Nonlinearity& g, const Field& xi_eps,
                             const Trajectory& u_reversed) {
  cfg.validate(xi_eps);
  const int total = cfg.steps();
  const Propagator prop(cfg.grid, cfg.dt);
  Trajectory out;
  Field w(cfg.grid, 0.0), src(cfg.grid);
  record(out, 0.0, w);
  for (int s = 1; s <= total; ++s) {
    const double t = s * cfg.dt;
    const Field u = u_reversed.at(t - cfg.dt);
    Field pot = tangent_potential(g, u, xi_eps, cfg.C);
    for (std::size_t k = 0; k < u.size(); ++k) {
      const double a = g.g(u[k]);
      src[k] = a * a;
    }
    kernels::exp_scale(2.0 * cfg.dt, pot.data(), w.data(), w.size());
    prop.step(w, &src);
    if (blown_up(w, cfg.blowup_threshold)) {
      out.blowup = true;
      out.blowup_time = t;
      break;
    }
    if (save_step(s, total, cfg.save_every)) record(out, t, w);
  }
  return out;
}

}  // namespace gpam
