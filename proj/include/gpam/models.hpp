#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "gpam/fields.hpp"
#include "gpam/group.hpp"
#include "gpam/kernel_k.hpp"
#include "gpam/symbols.hpp"
#include "gpam/wavelets.hpp"

namespace gpam {

/// Base fields a realization is built from.
enum class Source : int { Xi = 0, H = 1, KXi = 2, NH = 3 };
constexpr int kSources = 4;

/// coeff * prod_s F_s(x)^x_pow[s] * prod_s F_s(y)^y_pow[s] * (y1-x1)^p1 (y2-x2)^p2
struct ModelTerm {
  double coeff = 0.0;
  std::array<int, kSources> y_pow{};
  std::array<int, kSources> x_pow{};
  int p1 = 0;
  int p2 = 0;
};
using TermSum = std::vector<ModelTerm>;

/// How y - x is measured for the polynomial symbols.
enum class Chart {
  Global,  // coordinates in [0, 2 pi): exact admissibility on the grid
  Local    // periodic displacement in [-pi, pi): used for localized test functions
};

struct GridPoint {
  int i1 = 0;
  int i2 = 0;
};

/// Admissible model on a grid, evaluated lazily from its base fields.
class AdmissibleModel {
 public:
  enum class Kind { Canonical, Extended, Translated };

  Structure structure() const { return structure_; }
  Kind kind() const { return kind_; }
  const Basis& basis() const { return basis_; }
  const StructureParams& params() const { return basis_.params; }
  const Grid2D& grid() const { return xi_.grid(); }
  double renorm_constant() const { return c_; }
  const Field& xi() const { return xi_; }
  /// Pi H for extended models, the shift for translated models, zero otherwise.
  const Field& h() const { return h_; }
  const Field& kxi() const { return kxi_; }
  const Field& nh() const { return nh_; }

  /// Term decomposition of Pi_x tau; throws when tau is not in the basis.
  const TermSum& terms(const Symbol& tau) const;
  Field pi(const Symbol& tau, GridPoint x, Chart chart = Chart::Global) const;
  double pi_at(const Symbol& tau, GridPoint x, GridPoint y, Chart chart = Chart::Global) const;

  Character f_char(GridPoint x) const;
  MatrixT<double> gamma(GridPoint x, GridPoint y) const;

  /// Product of base fields with the given exponents, cached.
  const Field& product_field(const std::array<int, kSources>& pow) const;

 private:
  friend AdmissibleModel make_model(Kind, Structure, const Field&, const Field&, double, const StructureParams&);
  Structure structure_ = Structure::Tg;
  Kind kind_ = Kind::Canonical;
  Basis basis_;
  double c_ = 0.0;
  Field xi_, h_, kxi_, nh_;
  std::vector<TermSum> terms_;
  struct Cache;
  std::shared_ptr<Cache> cache_;
  double source_at(Source s, GridPoint p) const;
};

AdmissibleModel make_model(AdmissibleModel::Kind kind, Structure s, const Field& xi_eps, const Field& h, double C,
                           const StructureParams& params);

/// Canonical model of a smooth noise on Tg (C = 0).
AdmissibleModel canonical_model(const Field& xi_eps, Structure s = Structure::Tg, const StructureParams& params = {});
/// Canonical TgH model with Pi H := h.
AdmissibleModel canonical_model(const Field& xi_eps, const Field& h, const StructureParams& params = {});
AdmissibleModel renormalize(const AdmissibleModel& z, double C);
/// E_h: TgH model agreeing with z on Tg symbols.
AdmissibleModel extend(const AdmissibleModel& z, const Field& h);
/// T_h: Tg model Pi^{e_h} o tau_H.
AdmissibleModel translate(const AdmissibleModel& z, const Field& h);

/// sup over grid points y and basis symbols of |Pi_x Gamma_xy tau - Pi_y tau| for sampled x, y.
struct AdmissibilityReport {
  double worst = 0.0;
  std::string worst_symbol;
  int pairs = 0;
};
AdmissibilityReport check_admissibility(const AdmissibleModel& z, int pairs, std::uint64_t seed = 1);

/// C_eps = int N(z) (rho_eps * rho_eps)(z) dz by quadrature.
double renorm_constant(double epsilon, const Mollifier& rho);
/// Exact expectation of the grid estimator: (1/4pi^2) sum_k N^(k) |rho^(eps k)|^2.
double renorm_constant_grid(double epsilon, const Mollifier& rho, Grid2D grid);
struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  int samples = 0;
};
/// Spatial average of (N * xi_eps) xi_eps over independent seeds.
MonteCarloEstimate renorm_constant_mc(double epsilon, const Mollifier& rho, Grid2D grid, int seeds,
                                      std::uint64_t first_seed = 1);

/// s_n = max_y 2^{n(|tau|+1)} |<Pi_y tau, psi^n_y>| over every grid base point y with the atom centred at y.
/// Level 0 includes the scaling function.
std::vector<double> measure_model_norm(const AdmissibleModel& z, const Symbol& tau, const WaveletBasis& b,
                                       int levels);
/// Same statistic for the difference of two models on one grid.
std::vector<double> measure_model_distance(const AdmissibleModel& a, const AdmissibleModel& z, const Symbol& tau,
                                           const WaveletBasis& b, int levels);

}  // namespace gpam
