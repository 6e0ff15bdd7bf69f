#pragma once

#include <cstdint>
#include <json.hpp>
#include <string>
#include <vector>

#include "gpam/models.hpp"
#include "gpam/spde_solver.hpp"

namespace gpam {

enum class Relation { AtMost, AtLeast, Record };

struct Metric {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  Relation relation = Relation::Record;
  std::string claim;
  bool pass = true;
};

struct StudyReport {
  std::string study;
  nlohmann::json params = nlohmann::json::object();
  std::vector<Metric> metrics;
  nlohmann::json tables = nlohmann::json::object();
  /// A branch blew up before the probe time.
  bool inconclusive = false;
  std::string note;

  const Metric& check(const std::string& name, double value, Relation rel, double bound, const std::string& claim);
  const Metric& record(const std::string& name, double value, const std::string& claim);
  const Metric& metric(const std::string& name) const;
  bool passed() const;
  nlohmann::json to_json() const;
};

/// e(delta) = sup|u^{delta h}(t) - u(t) - delta v^h(t)| over the deltas; the fitted order of e must be >= 1.8.
StudyReport gateaux_check(const PDEConfig& cfg, const Nonlinearity& g, const Field& xi_eps, const Field& h,
                          const std::vector<double>& deltas);

/// Model identity T_h Z = canonical(xi + h), bitwise solver identity and additivity of two shifts.
StudyReport translation_consistency(const PDEConfig& cfg, const Nonlinearity& g, const Field& xi_eps,
                                    const Field& h1, const Field& h2);

/// P(|y + sqrt(2t) Z| <= delta) for a planar standard Gaussian Z and |y| = distance.
double heat_ball_probability(double distance, double delta, double t);
/// Largest t such that the heat flow of 1_{B(0,delta)} stays >= 1/4 on B(0, delta + s rho) for all s <= t.
double heat_ball_time(double delta, double rho);

/// Smooth data equal to 1 on B(centre, delta) and 0 outside B(centre, delta + width).
Field indicator_bump(Grid2D grid, double c1, double c2, double delta, double width);

/// Heat-kernel claim with constant 1/4 for rho in {1, 2, 4}, then positivity of the homogeneous tangent at t_end.
StudyReport strong_maximum_principle_check(const PDEConfig& cfg, const Nonlinearity& g, const Field& xi_eps,
                                           double delta, double width);

/// Weak maximum principle over seeds: min of the homogeneous tangent from v0 >= 0 stays >= -tol.
StudyReport weak_maximum_principle_check(const PDEConfig& cfg, const Nonlinearity& g, const Field& v0,
                                         const std::vector<std::uint64_t>& seeds, double tol = 1e-8);

/// sup over steps and seeds of |u| <= bound + tol, for |u0| <= bound and g vanishing at +-bound.
StudyReport comparison_bound_check(const PDEConfig& cfg, const Nonlinearity& g, double bound,
                                   const std::vector<std::uint64_t>& seeds, double tol = 1e-3);

/// Ratios |v| / sqrt(w A) (Cauchy-Schwarz form, <= 1) and |v| / (log(T/(T-t)) sqrt(w) |h|_2).
StudyReport feynman_kac_bound_check(const PDEConfig& cfg, const Nonlinearity& g, const Field& xi_eps,
                                    const std::vector<Field>& hs);

struct ConvergenceSetup {
  std::vector<double> eps_list;
  bool renormalize = true;
  /// Required contraction d_{k+1} <= theta d_k between successive differences.
  double theta = 0.65;
  int model_levels = 3;
};
/// Coupled realizations xi_eps = rho_eps * xi(seed) on one grid.
StudyReport epsilon_convergence_study(const PDEConfig& cfg, const Nonlinearity& g, std::uint64_t seed,
                                      const Field& h, const ConvergenceSetup& setup);

/// v^{h=1}(t, x) > 0 on every surviving seed and no atom in the law of u(t, x); a KS test against the
/// closed-form Gaussian law when g = 1 and u0 = 0.
StudyReport density_nondegeneracy(const PDEConfig& cfg, const Nonlinearity& g, GridPoint x,
                                  const std::vector<std::uint64_t>& seeds);

/// Noise used by the studies: white noise of the seed mollified at cfg.epsilon with the bump profile.
Field study_noise(std::uint64_t seed, const PDEConfig& cfg);
/// Variance of u(t, x) for g = 1, u0 = 0 under the ETD1 scheme (exact Gaussian law).
double additive_variance(const PDEConfig& cfg);

}  // namespace gpam
