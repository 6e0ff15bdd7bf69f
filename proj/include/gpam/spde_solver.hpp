#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gpam/fields.hpp"

namespace gpam {

struct Nonlinearity {
  std::string name;
  std::function<double(double)> g, dg, d2g;
};

/// zero, one, sin, cos, rational (1/(1+u^2)), sin_plus_2, linear (g(u) = u).
Nonlinearity nonlinearity(const std::string& name);

struct PDEConfig {
  Grid2D grid;
  double epsilon = 0.125;
  double C = 0.0;
  double dt = 1e-3;
  double t_end = 1.0;
  Field u0;
  double blowup_threshold = 1e6;
  /// Save every k-th step; 0 saves the dyadic steps 1, 2, 4, ... and the last one.
  int save_every = 0;
  /// Stability rule dt <= stability / sup|xi_eps|.
  double stability = 0.1;

  int steps() const;
  /// Throws std::invalid_argument on an inconsistent config or a violated stability rule.
  void validate(const Field& xi_eps) const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Field> frames;
  bool blowup = false;
  double blowup_time = 0.0;
  /// sup over every computed step (saved or not) of the sup norm.
  double sup_max = 0.0;

  const Field& final() const { return frames.back(); }
  double final_time() const { return times.back(); }
  /// Linear interpolation between saved frames; t is clamped to the saved range.
  Field at(double t) const;
  /// Frames in reverse order with times T - t.
  Trajectory reversed() const;
};

/// Linear field integrated alongside u: dv = Lap v + a V(u) v + g(u)^p source, started at start_step.
struct TangentSpec {
  Field v0;
  std::optional<Field> source;
  int start_step = 0;
  double potential_scale = 1.0;  // a
  int g_power = 1;               // p
  /// ETD forcing a V v + g^p source instead of the split step: the exact derivative of the discrete u map,
  /// but not positivity preserving.
  bool linearized = false;
};

struct CoupledSolution {
  Trajectory u;
  std::vector<Trajectory> v;
};

/// ETD1 step for u, Lie splitting (pointwise potential, then heat) plus ETD source for each v.
CoupledSolution solve_coupled(const PDEConfig& cfg, const Nonlinearity& g, const Field& noise,
                              const std::vector<TangentSpec>& tangents = {});

/// du = Lap u + g(u)(xi_eps - C g'(u))
Trajectory solve_gpam(const PDEConfig& cfg, const Nonlinearity& g, const Field& xi_eps);
/// Same equation driven by xi_eps + h_eps.
Trajectory solve_gpam_shifted(const PDEConfig& cfg, const Nonlinearity& g, const Field& xi_eps, const Field& h_eps);
/// dv = Lap v + g(u) h + v (g'(u) xi - C (g'^2 + g g'')(u)), v(0) = 0.
Trajectory solve_tangent(const PDEConfig& cfg, const Nonlinearity& g, const Field& xi_eps, const Field& h_eps,
                         const Trajectory& u_traj);
Trajectory solve_tangent_hom(const PDEConfig& cfg, const Nonlinearity& g, const Field& xi_eps,
                             const Trajectory& u_traj, const Field& v0);
/// dw = Lap w + g(u)^2 + 2 w (g'(u) xi - C (g g')'(u)), w(0) = 0, with u read from the given trajectory.
Trajectory solve_auxiliary_w(const PDEConfig& cfg, const Nonlinearity& g, const Field& xi_eps,
                             const Trajectory& u_reversed);

/// Potential g'(u) xi - C (g'^2 + g g'')(u) of the tangent equations.
Field tangent_potential(const Nonlinearity& g, const Field& u, const Field& xi_eps, double C);

}  // namespace gpam
