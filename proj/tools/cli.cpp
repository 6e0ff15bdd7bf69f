#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "gpam/analysis.hpp"
#include "gpam/group.hpp"
#include "gpam/kernels.hpp"
#include "gpam/models.hpp"
#include "gpam/wavelets.hpp"

namespace gpam::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
constexpr double kPi = std::numbers::pi;

struct BadConfig : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  int grid_n = 128;
  double kappa = 0.05;
  double gamma = 1.1;
  double epsilon = 0.125;
  std::vector<double> eps_list{0.25, 0.125, 0.0625};
  std::uint64_t seed = 1;
  std::vector<std::uint64_t> seeds;
  std::string g = "sin";
  std::string u0 = "sincos";
  std::string h = "cos";
  double dt = 1e-3;
  double t_end = 1.0;
  std::optional<double> C;  // empty: resolve from epsilon
  std::string output_dir = "gpam_out";
  int save_every = 0;
};

std::vector<std::uint64_t> seed_list(std::uint64_t first, std::uint64_t count) {
  std::vector<std::uint64_t> s(count);
  for (std::uint64_t i = 0; i < count; ++i) s[i] = first + i;
  return s;
}

void load_config(const std::string& path, RunConfig& rc) {
  std::ifstream is(path);
  if (!is) throw BadConfig("cannot open config " + path);
  json j;
  try {
    j = json::parse(is);
  } catch (const json::exception& e) {
    throw BadConfig("config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw BadConfig("config must be a JSON object");
  static const std::vector<std::string> keys{"grid_n", "kappa", "gamma", "epsilon", "eps_list", "seed", "seeds", "g",
                                             "u0",     "h",     "dt",    "t_end",   "C",        "output_dir",
                                             "save_every"};
  for (const auto& [k, v] : j.items())
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) throw BadConfig("unknown config key '" + k + "'");
  try {
    if (j.contains("grid_n")) rc.grid_n = j["grid_n"].get<int>();
    if (j.contains("kappa")) rc.kappa = j["kappa"].get<double>();
    if (j.contains("gamma")) rc.gamma = j["gamma"].get<double>();
    if (j.contains("epsilon")) rc.epsilon = j["epsilon"].get<double>();
    if (j.contains("eps_list")) rc.eps_list = j["eps_list"].get<std::vector<double>>();
    if (j.contains("seed")) rc.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("seeds")) {
      if (j["seeds"].is_array())
        rc.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
      else
        rc.seeds = seed_list(rc.seed, j["seeds"].get<std::uint64_t>());
    }
    if (j.contains("g")) rc.g = j["g"].is_object() ? j["g"].at("name").get<std::string>() : j["g"].get<std::string>();
    auto spec = [](const json& v) { return v.is_number() ? "constant:" + std::to_string(v.get<double>()) : v.get<std::string>(); };
    if (j.contains("u0")) rc.u0 = spec(j["u0"]);
    if (j.contains("h")) rc.h = spec(j["h"]);
    if (j.contains("dt")) rc.dt = j["dt"].get<double>();
    if (j.contains("t_end")) rc.t_end = j["t_end"].get<double>();
    if (j.contains("C")) {
      if (j["C"].is_string()) {
        if (j["C"].get<std::string>() != "auto") throw BadConfig("C must be \"auto\" or a number");
        rc.C.reset();
      } else {
        rc.C = j["C"].get<double>();
      }
    }
    if (j.contains("output_dir")) rc.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("save_every")) rc.save_every = j["save_every"].get<int>();
  } catch (const json::exception& e) {
    throw BadConfig(std::string("config: ") + e.what());
  }
}

/// constant:<v> | sincos | cos | bump[:<radius>] | file:<path>
Field field_spec(const std::string& spec, Grid2D grid) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon), arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto number = [&](double fallback) {
    if (arg.empty()) return fallback;
    try {
      return std::stod(arg);
    } catch (const std::exception&) {
      throw BadConfig("bad number in field spec '" + spec + "'");
    }
  };
  if (head == "constant") return Field(grid, number(0.0));
  if (head == "zero") return Field(grid, 0.0);
  if (head == "sincos") return Field::from_function(grid, [](double a, double b) { return std::sin(a) * std::cos(b); });
  if (head == "cos") return Field::from_function(grid, [](double a, double) { return std::cos(a); });
  if (head == "bump") return indicator_bump(grid, kPi, kPi, number(0.5), 0.3);
  if (head == "file") {
    Field f = read_field(arg);
    if (!(f.grid() == grid)) throw BadConfig("field file " + arg + " is not on the configured grid");
    return f;
  }
  throw BadConfig("unknown field spec '" + spec + "'");
}

struct Context {
  RunConfig rc;
  fs::path out;

  PDEConfig pde(double epsilon) const {
    PDEConfig c;
    c.grid = Grid2D{rc.grid_n};
    c.epsilon = epsilon;
    c.C = rc.C ? *rc.C : renorm_constant(epsilon, Mollifier{Profile::Bump, epsilon});
    c.dt = rc.dt;
    c.t_end = rc.t_end;
    c.u0 = field_spec(rc.u0, c.grid);
    c.save_every = rc.save_every;
    return c;
  }
  PDEConfig pde() const { return pde(rc.epsilon); }
  Field h() const { return field_spec(rc.h, Grid2D{rc.grid_n}); }
  std::vector<std::uint64_t> seeds(std::uint64_t fallback) const {
    return rc.seeds.empty() ? seed_list(rc.seed, fallback) : rc.seeds;
  }
  StructureParams params() const {
    StructureParams p;
    p.kappa = rc.kappa;
    p.gamma = rc.gamma;
    p.validate();
    return p;
  }
};

void write_table_csv(const fs::path& path, const json& column) {
  std::ofstream os(path);
  os << "index,value\n";
  os.precision(17);
  for (std::size_t i = 0; i < column.size(); ++i) os << i << ',' << column[i] << '\n';
}

/// Writes <out>/<name>.json plus one CSV per numeric table; returns the exit code of the reports.
int emit(const Context& ctx, const std::string& name, const std::vector<StudyReport>& reports,
         json extra = json::object()) {
  fs::create_directories(ctx.out);
  json j = extra;
  j["command"] = name;
  j["seeds"] = ctx.rc.seeds.empty() ? json(ctx.rc.seed) : json(ctx.rc.seeds);
  bool inconclusive = false, passed = true;
  for (std::size_t r = 0; r < reports.size(); ++r) {
    const StudyReport& rep = reports[r];
    j["reports"].push_back(rep.to_json());
    inconclusive = inconclusive || rep.inconclusive;
    passed = passed && rep.passed();
    for (const auto& [key, column] : rep.tables.items()) {
      if (!column.is_array()) continue;
      const std::string stem = name + (reports.size() > 1 ? "_" + std::to_string(r) : "") + "_" + key;
      write_table_csv(ctx.out / (stem + ".csv"), column);
    }
  }
  j["passed"] = passed && !inconclusive;
  std::ofstream(ctx.out / (name + ".json")) << j.dump(2) << '\n';
  for (const StudyReport& rep : reports)
    for (const Metric& m : rep.metrics)
      std::cout << (m.relation == Relation::Record ? "note" : (m.pass ? "pass" : "FAIL")) << "  " << rep.study << '.'
                << m.name << " = " << m.value << '\n';
  if (inconclusive) {
    for (const StudyReport& rep : reports)
      if (rep.inconclusive) std::cout << "inconclusive  " << rep.study << ": " << rep.note << '\n';
    return Inconclusive;
  }
  return passed ? Ok : AssertionFailed;
}

std::string file_stem(const std::string& s) {
  std::string r;
  for (char c : s) r += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return r;
}

int cmd_algebra(const Context& ctx, int characters) {
  const StructureParams params = ctx.params();
  const IdentityReport ids = check_identities(params, characters);
  StudyReport rep;
  rep.study = "algebra";
  rep.params = {{"characters", characters}, {"kappa", params.kappa}, {"gamma", params.gamma}};
  json symbols, failures = json::array();
  for (Structure s : {Structure::Tg, Structure::TgH}) {
    for (const Symbol& tau : enumerate_basis(s, params).symbols) {
      int bad = 0;
      for (const IdentityResult& r : ids.results)
        if (r.structure == to_string(s) && r.symbol == tau.str() && !r.pass) ++bad;
      symbols[to_string(s)][tau.str()] = bad == 0 ? "pass" : "fail";
      rep.check(std::string(to_string(s)) + ":" + tau.str(), bad, Relation::AtMost, 0, "identities hold on this symbol");
    }
  }
  int global_bad = 0;
  for (const IdentityResult& r : ids.results) {
    if (!r.pass) failures.push_back({{"identity", r.identity}, {"structure", r.structure}, {"symbol", r.symbol},
                                     {"detail", r.detail}});
    if (r.symbol.empty() && !r.pass) ++global_bad;
  }
  rep.check("group_laws", global_bad, Relation::AtMost, 0, "group and renormalization laws on random characters");
  return emit(ctx, "algebra-check", {rep}, {{"symbols", symbols}, {"failures", failures}});
}

int cmd_noise(const Context& ctx) {
  const Grid2D grid{ctx.rc.grid_n};
  const Mollifier rho{Profile::Bump, ctx.rc.epsilon};
  const Field xi = mollify(sample_white_noise(ctx.rc.seed, grid), rho);
  fs::create_directories(ctx.out);
  write_field((ctx.out / ("noise_seed" + std::to_string(ctx.rc.seed) + ".gpf")).string(), xi);
  StudyReport rep;
  rep.study = "noise";
  rep.params = {{"n", grid.n}, {"epsilon", rho.epsilon}, {"seed", ctx.rc.seed}};
  rep.record("mean", xi.mean(), "spatial mean");
  rep.record("sup", xi.sup_norm(), "sup norm");
  rep.record("mean_square", inner(xi, xi) / (4 * kPi * kPi), "spatial mean of xi_eps^2");
  const double cq = renorm_constant(rho.epsilon, rho);
  rep.record("C_eps", cq, "renormalization constant by quadrature");
  rep.check("C_eps_grid_agreement", std::abs(cq - renorm_constant_grid(rho.epsilon, rho, grid)), Relation::AtMost,
            1e-6, "quadrature and grid expectation of the renormalization constant agree");
  return emit(ctx, "noise", {rep});
}

int cmd_model(const Context& ctx, const std::string& mode, int pairs, int levels, const std::string& symbol,
              const std::vector<int>& base) {
  const PDEConfig cfg = ctx.pde();
  const Field xi = study_noise(ctx.rc.seed, cfg);
  const Field h = ctx.h();
  const StructureParams params = ctx.params();
  const AdmissibleModel canon = canonical_model(xi, Structure::Tg, params);
  const std::vector<std::pair<std::string, AdmissibleModel>> models{
      {"canonical", canon},
      {"renormalized", renormalize(canon, cfg.C)},
      {"extended", extend(renormalize(canon, cfg.C), h)},
      {"translated", translate(renormalize(canon, cfg.C), h)}};
  if (mode == "dump") {
    if (base.size() != 2 || base[0] < 0 || base[1] < 0 || base[0] >= cfg.grid.n || base[1] >= cfg.grid.n)
      throw BadConfig("--base-point must be i,j inside the grid");
    const GridPoint x{base[0], base[1]};
    std::optional<Symbol> only;
    if (!symbol.empty()) only = Symbol::parse(symbol);
    fs::create_directories(ctx.out);
    json files = json::object();
    for (const auto& [kind, z] : models)
      for (const Symbol& tau : z.basis().symbols) {
        if (only && !(tau == *only)) continue;
        const std::string f = "model_" + kind + "_" + file_stem(tau.str()) + ".gpf";
        write_field((ctx.out / f).string(), z.pi(tau, x));
        files[kind][tau.str()] = f;
      }
    if (files.empty()) throw BadConfig("symbol '" + symbol + "' is in no model basis");
    StudyReport rep;
    rep.study = "model_dump";
    rep.params = {{"n", cfg.grid.n}, {"epsilon", cfg.epsilon}, {"C", cfg.C}, {"base_point", base}};
    return emit(ctx, "model", {rep}, {{"files", files}});
  }
  if (mode != "check") throw BadConfig("model --mode must be check or dump");
  StudyReport adm;
  adm.study = "model_admissibility";
  adm.params = {{"n", cfg.grid.n}, {"epsilon", cfg.epsilon}, {"C", cfg.C}, {"pairs", pairs}};
  for (const auto& [kind, z] : models) {
    const AdmissibilityReport r = check_admissibility(z, pairs, ctx.rc.seed);
    adm.check(kind, r.worst, Relation::AtMost, 1e-9, "Pi_x Gamma_xy = Pi_y");
  }
  StudyReport norms;
  norms.study = "model_norms";
  norms.params = {{"levels", levels}, {"wavelet_moments", 4}};
  const WaveletBasis basis(cfg.grid, 4);
  const AdmissibleModel ext = canonical_model(xi, h, params);
  const AdmissibleModel ren = renormalize(ext, cfg.C);
  for (const char* name : {"Xi", "I(Xi)*Xi", "I(Xi)*H", "I(H)*Xi", "I(H)*H"}) {
    const Symbol tau = Symbol::parse(name);
    const std::vector<double> s = measure_model_norm(ren, tau, basis, levels);
    double worst = 0.0;
    for (double v : s) worst = std::max(worst, v / s[0]);
    norms.tables[name] = s;
    norms.check(std::string(name) + ":max_ratio", worst, Relation::AtMost, 20.0,
                "wavelet coefficients of Pi tau scale with its homogeneity");
  }
  return emit(ctx, "model", {adm, norms});
}

int cmd_solve(const Context& ctx) {
  const PDEConfig cfg = ctx.pde();
  const Trajectory u = solve_gpam(cfg, nonlinearity(ctx.rc.g), study_noise(ctx.rc.seed, cfg));
  fs::create_directories(ctx.out);
  write_field((ctx.out / "u_final.gpf").string(), u.final());
  write_field_csv((ctx.out / "u_final.csv").string(), u.final());
  json frames = json::array();
  for (std::size_t i = 0; i < u.frames.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "u_%04zu.gpf", i);
    write_field((ctx.out / name).string(), u.frames[i]);
    frames.push_back({{"time", u.times[i]}, {"file", name}});
  }
  StudyReport rep;
  rep.study = "solve";
  rep.params = {{"g", ctx.rc.g}, {"n", cfg.grid.n}, {"epsilon", cfg.epsilon}, {"C", cfg.C}, {"dt", cfg.dt},
                {"t_end", cfg.t_end}, {"u0", ctx.rc.u0}};
  rep.tables["time"] = u.times;
  rep.record("final_time", u.final_time(), "last finite frame");
  rep.record("sup_max", u.sup_max, "sup over all steps of |u|");
  if (u.blowup) {
    rep.inconclusive = true;
    rep.note = "blow-up at t = " + std::to_string(u.blowup_time);
  }
  return emit(ctx, "solve", {rep}, {{"frames", frames}, {"blowup", u.blowup}});
}

int cmd_tangent(const Context& ctx, const std::string& v0_spec) {
  const PDEConfig cfg = ctx.pde();
  const Nonlinearity g = nonlinearity(ctx.rc.g);
  TangentSpec spec{Field(cfg.grid, 0.0), ctx.h()};
  if (!v0_spec.empty()) spec = TangentSpec{field_spec(v0_spec, cfg.grid), std::nullopt};
  const CoupledSolution sol = solve_coupled(cfg, g, study_noise(ctx.rc.seed, cfg), {spec});
  const Trajectory& v = sol.v.front();
  fs::create_directories(ctx.out);
  write_field((ctx.out / "v_final.gpf").string(), v.final());
  write_field_csv((ctx.out / "v_final.csv").string(), v.final());
  StudyReport rep;
  rep.study = "tangent";
  rep.params = {{"g", ctx.rc.g}, {"n", cfg.grid.n}, {"epsilon", cfg.epsilon}, {"C", cfg.C},
                {"homogeneous", !v0_spec.empty()}, {"direction", v0_spec.empty() ? ctx.rc.h : v0_spec}};
  rep.record("sup_max", v.sup_max, "sup over all steps of |v|");
  rep.record("min_final", v.final().min(), "minimum of v at the final time");
  if (sol.u.blowup) {
    rep.inconclusive = true;
    rep.note = "u blew up";
  }
  return emit(ctx, "tangent", {rep});
}

int cmd_maxprinciple(const Context& ctx, const std::string& kind, double delta, double width, double bound) {
  const PDEConfig cfg = ctx.pde();
  const Nonlinearity g = nonlinearity(ctx.rc.g);
  std::vector<StudyReport> reports;
  if (kind == "weak") {
    reports.push_back(
        weak_maximum_principle_check(cfg, g, indicator_bump(cfg.grid, kPi, kPi, delta, width), ctx.seeds(100)));
  } else if (kind == "strong") {
    for (std::uint64_t s : ctx.seeds(20))
      reports.push_back(strong_maximum_principle_check(cfg, g, study_noise(s, cfg), delta, width));
  } else if (kind == "comparison") {
    reports.push_back(comparison_bound_check(cfg, g, bound, ctx.seeds(50)));
  } else if (kind == "feynman-kac") {
    const Field h2 = Field::from_function(cfg.grid, [](double a, double b) { return std::exp(std::cos(a - b)); });
    for (std::uint64_t s : ctx.seeds(10))
      reports.push_back(feynman_kac_bound_check(cfg, g, study_noise(s, cfg), {ctx.h(), h2}));
  } else {
    throw BadConfig("maxprinciple --kind must be weak, strong, comparison or feynman-kac");
  }
  return emit(ctx, "maxprinciple_" + kind, reports);
}

int cmd_gateaux(const Context& ctx, const std::vector<double>& deltas) {
  const PDEConfig cfg = ctx.pde();
  const Nonlinearity g = nonlinearity(ctx.rc.g);
  const Field xi = study_noise(ctx.rc.seed, cfg), h = ctx.h();
  const Field h2 = Field::from_function(cfg.grid, [](double, double b) { return 0.5 * std::sin(2 * b); });
  return emit(ctx, "gateaux", {gateaux_check(cfg, g, xi, h, deltas), translation_consistency(cfg, g, xi, h, h2)});
}

int cmd_converge(const Context& ctx, bool no_renorm, double theta, int levels) {
  const PDEConfig cfg = ctx.pde(ctx.rc.eps_list.back());
  ConvergenceSetup setup;
  setup.eps_list = ctx.rc.eps_list;
  setup.renormalize = !no_renorm;
  setup.theta = theta;
  setup.model_levels = levels;
  return emit(ctx, no_renorm ? "converge_no_renorm" : "converge",
              {epsilon_convergence_study(cfg, nonlinearity(ctx.rc.g), ctx.rc.seed, ctx.h(), setup)});
}

int cmd_density(const Context& ctx, int x1, int x2) {
  const PDEConfig cfg = ctx.pde();
  const int n = cfg.grid.n;
  const GridPoint x{x1 < 0 ? n / 2 : x1, x2 < 0 ? n / 2 : x2};
  if (x.i1 >= n || x.i2 >= n) throw BadConfig("density point outside the grid");
  return emit(ctx, "density", {density_nondegeneracy(cfg, nonlinearity(ctx.rc.g), x, ctx.seeds(1000))});
}

int cmd_wavelet(const Context& ctx, const std::string& action, int vanishing, int samples, const std::string& input,
                std::optional<double> beta) {
  if (action != "check" && action != "norm") throw BadConfig("wavelet action must be check or norm");
  if (action == "norm" && (input.empty() || !beta)) throw BadConfig("wavelet norm needs --input and --beta");
  const Field xi = input.empty() ? sample_white_noise(ctx.rc.seed, Grid2D{ctx.rc.grid_n}) : read_field(input);
  const Grid2D grid = xi.grid();
  const WaveletBasis b(grid, vanishing);
  const WaveletCoeffs c = analyze(xi, b);
  StudyReport rep;
  rep.study = "wavelet";
  rep.params = {{"n", grid.n}, {"vanishing", vanishing}};
  if (input.empty()) rep.params["seed"] = ctx.rc.seed;
  else rep.params["input"] = input;
  if (beta) {
    const double norm = sobolev_norm(c, *beta, b.regularity());
    rep.params["beta"] = *beta;
    rep.record("sobolev_norm", norm, "wavelet Sobolev norm of order beta");
    if (action == "norm") {
      std::cout.precision(17);
      std::cout << norm << '\n';
      return emit(ctx, "wavelet_norm", {rep});
    }
  }
  const double l2 = xi.l2_norm() * xi.l2_norm();
  rep.check("parseval", std::abs(c.sum_squares() - l2) / l2, Relation::AtMost, 1e-8, "orthonormal basis");
  rep.check("reconstruction", sup_diff(synthesize(c, b), xi), Relation::AtMost, 1e-9, "perfect reconstruction");
  const int depth = b.depth();
  rep.tables["holder_profile"] = holder_profile(c, -1.0 - ctx.rc.kappa, depth);
  for (int gap = 0; gap <= std::min(4, depth - 1); ++gap) {
    const TripleScan t = triple_product_scan(b, 1, 1, 1 + gap, samples, ctx.rc.seed);
    rep.tables["triple_ratio"].push_back(t.worst_ratio);
  }
  return emit(ctx, "wavelet", {rep});
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Numerical studies of the generalized parabolic Anderson model on the torus"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_help_all_flag("--help-all", "Print help for every subcommand");

  std::string config_path;
  int jobs = 0;
  RunConfig flags;
  std::string c_flag;
  int seeds_count = 0;
  std::vector<std::uint64_t> seed_values;
  app.add_option("--config", config_path, "JSON run configuration; flags override its keys");
  auto* o_n = app.add_option("--n", flags.grid_n, "grid points per side (power of two)");
  auto* o_eps = app.add_option("--epsilon,--eps", flags.epsilon, "mollification scale");
  auto* o_eps_list = app.add_option("--eps-list", flags.eps_list, "decreasing scales for converge");
  auto* o_seed = app.add_option("--seed", flags.seed, "noise seed, or first seed of a range");
  auto* o_seeds = app.add_option("--seeds", seeds_count, "number of consecutive seeds starting at --seed");
  auto* o_seed_values = app.add_option("--seed-list", seed_values, "explicit seed list");
  auto* o_g = app.add_option("--g", flags.g, "nonlinearity: zero one linear sin cos sin_plus_2 rational");
  auto* o_u0 = app.add_option("--u0", flags.u0, "initial data: constant:<v> zero sincos cos bump[:<r>] file:<path>");
  auto* o_h = app.add_option("--shift", flags.h, "shift direction, same syntax as --u0");
  auto* o_dt = app.add_option("--dt", flags.dt, "time step");
  auto* o_t = app.add_option("--t-end", flags.t_end, "final time");
  auto* o_c = app.add_option("--C", c_flag, "renormalization constant: auto or a number");
  auto* o_out = app.add_option("--out", flags.output_dir, "output directory (GPAM_OUT overrides)");
  auto* o_save = app.add_option("--save-every", flags.save_every, "save every k steps; 0 saves dyadic steps");
  auto* o_kappa = app.add_option("--kappa", flags.kappa, "regularity loss of the noise");
  auto* o_gamma = app.add_option("--gamma", flags.gamma, "truncation homogeneity");
  auto* o_jobs = app.add_option("--jobs", jobs, "worker threads; 0 uses every logical core");
  // A repeated scalar flag overrides the earlier one.
  for (CLI::Option* o : {o_n, o_eps, o_seed, o_seeds, o_g, o_u0, o_h, o_dt, o_t, o_c, o_out, o_save, o_kappa, o_gamma,
                         o_jobs})
    o->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  int characters = 100;
  auto* algebra = app.add_subcommand(
      "algebra-check",
      "Exact rational checks on every basis symbol of Tg and TgH: group law of the structure group, triangularity of "
      "Gamma, the renormalization group law and commutation of renormalization with the H-extension.");
  algebra->add_option("--characters", characters, "random rational characters");

  auto* noise = app.add_subcommand(
      "noise", "Sample and mollify white noise, write it as a GPF1 field and report the renormalization constant.");

  std::string model_mode = "check";
  int pairs = 50, model_levels = 6;
  auto* model = app.add_subcommand(
      "model",
      "Canonical, renormalized, extended and translated models: admissibility Pi_x Gamma_xy = Pi_y and wavelet "
      "bounds of Pi tau (check), or Pi_0 tau for every basis symbol (dump).");
  model->add_option("--mode", model_mode, "check or dump");
  std::string dump_symbol;
  std::vector<int> base_point{0, 0};
  model->add_option("--symbol", dump_symbol, "dump only this symbol, e.g. I(Xi)*Xi");
  model->add_option("--base-point", base_point, "base point i,j of the dump")->delimiter(',')->expected(2);
  model->add_option("--pairs", pairs, "random base point pairs for admissibility");
  model->add_option("--levels", model_levels, "wavelet levels for the norm bounds");

  auto* solve = app.add_subcommand(
      "solve", "Renormalized equation du = Lap u + g(u)(xi_eps - C g'(u)); writes numbered frames and a manifest.");

  std::string v0_spec;
  auto* tangent = app.add_subcommand(
      "tangent", "Tangent equation along u in the direction h, or the homogeneous equation from --v0.");
  tangent->add_option("--v0", v0_spec, "initial data of the homogeneous tangent");

  std::string mp_kind = "strong";
  double mp_delta = 0.5, mp_width = 0.3, mp_bound = kPi;
  auto* maxp = app.add_subcommand(
      "maxprinciple",
      "weak: nonnegative data stay nonnegative; strong: the heat flow of a ball indicator stays above 1/4 on the "
      "growing ball and the tangent from a bump is strictly positive; comparison: solutions stay between zeros of g; "
      "feynman-kac: |v^h| is bounded by w^(1/2) |h|_2 with a logarithmic factor.");
  maxp->add_option("--kind", mp_kind, "weak, strong, comparison or feynman-kac");
  maxp->add_option("--delta", mp_delta, "ball radius of the bump data");
  maxp->add_option("--width", mp_width, "cut-off width of the bump data");
  maxp->add_option("--bound", mp_bound, "band for the comparison bound");

  std::vector<double> deltas{0.125, 0.0625, 0.03125, 0.015625, 0.0078125};
  auto* gateaux = app.add_subcommand(
      "gateaux",
      "Gateaux derivative of the solution map in the noise direction h: second-order remainder, linearity in h and "
      "translation identities of model and solver.");
  gateaux->add_option("--deltas", deltas, "shift sizes");

  bool no_renorm = false;
  double theta = 0.65;
  int conv_levels = 3;
  auto* converge = app.add_subcommand(
      "converge",
      "Coupled scales from one white noise: consecutive distances of u, v^h and of the model on I(Xi)Xi must contract. "
      "With --no-renorm the contraction is expected to fail (exit 1).");
  converge->add_flag("--no-renorm", no_renorm, "run with C = 0");
  converge->add_option("--theta", theta, "required contraction factor");
  converge->add_option("--levels", conv_levels, "wavelet levels for the model distance");

  int x1 = -1, x2 = -1;
  auto* density = app.add_subcommand(
      "density",
      "Law of u(t, x) across seeds: no atom, v^{h=1}(t, x) > 0, and the exact Gaussian law when g = 1 and u0 = 0.");
  density->add_option("--x1", x1, "grid index of the probe point (default n/2)");
  density->add_option("--x2", x2, "grid index of the probe point (default n/2)");

  int vanishing = 12, samples = 200;
  auto* wavelet = app.add_subcommand(
      "wavelet", "Daubechies basis: Parseval, reconstruction, Hoelder profile of white noise and triple-product decay.");
  std::string wavelet_action = "check", wavelet_input;
  std::optional<double> beta;
  wavelet->add_option("action", wavelet_action, "check (default) or norm");
  wavelet->add_option("--vanishing", vanishing, "vanishing moments");
  wavelet->add_option("--input", wavelet_input, "GPF1 field to analyze instead of white noise");
  wavelet->add_option("--beta", beta, "Sobolev order for the norm");
  wavelet->add_option("--samples", samples, "sampled triples per level gap");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ConfigError;
  }

  try {
    Context ctx;
    if (!config_path.empty()) load_config(config_path, ctx.rc);
    RunConfig& rc = ctx.rc;
    if (o_n->count()) rc.grid_n = flags.grid_n;
    if (o_eps->count()) rc.epsilon = flags.epsilon;
    if (o_eps_list->count()) rc.eps_list = flags.eps_list;
    if (o_seed->count()) rc.seed = flags.seed;
    if (o_seeds->count()) rc.seeds = seed_list(rc.seed, static_cast<std::uint64_t>(seeds_count));
    if (o_seed_values->count()) rc.seeds = seed_values;
    if (o_g->count()) rc.g = flags.g;
    if (o_u0->count()) rc.u0 = flags.u0;
    if (o_h->count()) rc.h = flags.h;
    if (o_dt->count()) rc.dt = flags.dt;
    if (o_t->count()) rc.t_end = flags.t_end;
    if (o_out->count()) rc.output_dir = flags.output_dir;
    if (o_save->count()) rc.save_every = flags.save_every;
    if (o_kappa->count()) rc.kappa = flags.kappa;
    if (o_gamma->count()) rc.gamma = flags.gamma;
    if (o_c->count()) {
      if (c_flag == "auto") {
        rc.C.reset();
      } else {
        try {
          rc.C = std::stod(c_flag);
        } catch (const std::exception&) {
          throw BadConfig("--C must be auto or a number");
        }
      }
    }
    if (const char* env = std::getenv("GPAM_OUT"); env && *env) rc.output_dir = env;
    ctx.out = rc.output_dir;
    kernels::set_threads(jobs);

    if (algebra->parsed()) return cmd_algebra(ctx, characters);
    if (noise->parsed()) return cmd_noise(ctx);
    if (model->parsed()) return cmd_model(ctx, model_mode, pairs, model_levels, dump_symbol, base_point);
    if (solve->parsed()) return cmd_solve(ctx);
    if (tangent->parsed()) return cmd_tangent(ctx, v0_spec);
    if (maxp->parsed()) return cmd_maxprinciple(ctx, mp_kind, mp_delta, mp_width, mp_bound);
    if (gateaux->parsed()) return cmd_gateaux(ctx, deltas);
    if (converge->parsed()) return cmd_converge(ctx, no_renorm, theta, conv_levels);
    if (density->parsed()) return cmd_density(ctx, x1, x2);
    if (wavelet->parsed()) return cmd_wavelet(ctx, wavelet_action, vanishing, samples, wavelet_input, beta);
  } catch (const BadConfig& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return ConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return ConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ConfigError;
  }
  return ConfigError;
}

}  // namespace gpam::cli
