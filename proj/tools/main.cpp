// Command-line driver: TF profiles, critical velocities, GP ground states,
// trial-state evaluation, regime sweeps and potential checks. Emits CSV and
// JSON artifacts suitable for plotting and rate fits.
//
// Exit codes: 0 success, 2 usage/parameter error, 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rotbec/asymptotics.hpp"
#include "rotbec/gp.hpp"
#include "rotbec/io.hpp"
#include "rotbec/potential.hpp"
#include "rotbec/tf.hpp"
#include "rotbec/trial.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rotbec;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

void ensure_dir(const std::string& dir) {
  if (!dir.empty()) fs::create_directories(dir);
}

std::string joined(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

json load_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open " + path);
  json j;
  f >> j;
  return j;
}

int cmd_tf(double s, double omega0, const std::string& out) {
  const tf::Solution sol = tf::solve(s, omega0);
  ensure_dir(out);
  io::save_text(joined(out, "tf_solution.json"), io::to_json(sol).dump(2) + "\n");
  std::ostringstream csv;
  io::write_tf_profile_csv(sol, 1000, csv);
  io::save_text(joined(out, "tf_profile.csv"), csv.str());
  std::printf("s=%g omega0=%g mu=%.12g r_in=%.12g r_out=%.12g energy=%.12g\n",
              sol.s, sol.omega0, sol.mu, sol.r_in, sol.r_out, sol.energy);
  return 0;
}

int cmd_critical(double s) {
  const tf::Critical c = tf::critical_velocity(s);
  std::printf("omega_c=%.15g r_out_c=%.15g\n", c.omega_c, c.r_out_c);
  return 0;
}

int cmd_quartic(double omega0, const std::string& out) {
  const tf::Solution sol = tf::quartic_closed_form(omega0);
  if (!out.empty()) {
    ensure_dir(out);
    io::save_text(joined(out, "tf_quartic.json"), io::to_json(sol).dump(2) + "\n");
  }
  std::printf("mu=%.15g r_in=%.15g r_out=%.15g energy=%.15g\n", sol.mu,
              sol.r_in, sol.r_out, sol.energy);
  return 0;
}

struct GpArgs {
  double s = 4.0;
  double epsilon = 0.1;
  double omega0 = -1.0;  // omega = omega0/epsilon when set
  double omega1 = -1.0, alpha = -1.0;
  double omega = -1.0;  // explicit angular velocity
  int grid_n = 0;
  double box_factor = 2.0;
  std::string init = "auto";  // auto|trial|tf|gauss
  int max_iterations = 20000;
  double rtol = 1e-10;
  std::string out = "gp_out";
  std::string potential_file;
};

int cmd_gp(const GpArgs& a) {
  double omega = 0.0;
  if (a.omega >= 0.0)
    omega = a.omega;
  else if (a.omega1 > 0.0 && a.alpha > 0.0)
    omega = a.omega1 / std::pow(a.epsilon, 1.0 + a.alpha);
  else if (a.omega0 >= 0.0)
    omega = a.omega0 / a.epsilon;
  const double omega0 = a.epsilon * omega;

  const tf::Solution tf_sol = tf::solve(a.s, omega0);
  GridPolicy policy;
  policy.box_factor = a.box_factor;
  Grid grid = a.grid_n > 0 ? make_grid(a.grid_n, a.box_factor * tf_sol.r_out)
                           : grid_for(policy, a.epsilon, tf_sol.r_out);

  std::function<double(double)> pot;
  if (!a.potential_file.empty()) {
    const TrapPotential P = io::potential_from_json(load_json_file(a.potential_file));
    pot = rescaled_general_potential(P, a.epsilon);
  } else {
    const double s = a.s;
    pot = [s](double r) { return std::pow(r, s); };
  }

  const bool lattice_fits =
      omega0 > 0.0 &&
      std::sqrt(2.0 * M_PI * a.epsilon / omega0) < 0.9 * tf_sol.r_out;
  GpState init = make_state(grid, a.epsilon, omega);
  bool have_trial = false;
  EnergyBreakdown trial_energy;
  if ((a.init == "auto" && lattice_fits) || a.init == "trial") {
    const TrialState trial = assemble_trial(tf_sol, a.epsilon, omega0, grid);
    init.field = trial.state.field;
    trial_energy = gp_energy(trial.state, pot);
    have_trial = true;
  } else if (a.init == "gauss") {
    for (int iy = 0; iy < grid.n; ++iy)
      for (int ix = 0; ix < grid.n; ++ix) {
        const double r = std::hypot(grid.coord(ix), grid.coord(iy));
        init.field[grid.index(ix, iy)] = std::exp(-r * r);
      }
  } else {
    for (int iy = 0; iy < grid.n; ++iy)
      for (int ix = 0; ix < grid.n; ++ix) {
        const double r = std::hypot(grid.coord(ix), grid.coord(iy));
        init.field[grid.index(ix, iy)] = std::sqrt(tf_sol.density(r));
      }
  }
  init.normalize();

  MinimizeOptions mo;
  mo.max_iterations = a.max_iterations;
  mo.energy_rtol = a.rtol;
  MinimizeResult res = minimize_gp(std::move(init), pot, mo);

  ensure_dir(a.out);
  io::save_text(joined(a.out, "state.json"), io::to_json(res.state).dump() + "\n");
  json ej = io::to_json(res.energy);
  ej["iterations"] = res.iterations;
  ej["converged"] = res.status == MinimizeStatus::Converged;
  ej["residual"] = res.residual;
  ej["chemical_potential"] = chemical_potential(res.energy);
  io::save_text(joined(a.out, "energy.json"), ej.dump(2) + "\n");
  std::ostringstream slice;
  io::write_density_slice_csv(res.state, slice);
  io::save_text(joined(a.out, "density_slice.csv"), slice.str());

  const TailDiagnostics tails = tail_diagnostics(res.state, tf_sol);
  json tj = {{"outside_mass4", tails.outside_mass4},
             {"max_density_out", tails.max_density_out}};
  if (tails.max_density_in) tj["max_density_in"] = *tails.max_density_in;
  io::save_text(joined(a.out, "tails.json"), tj.dump(2) + "\n");

  const double e2 = a.epsilon * a.epsilon;
  if (have_trial)
    std::printf("E_TF <= eps^2 E_GP <= eps^2 E_trial : %.9g <= %.9g <= %.9g\n",
                tf_sol.energy, e2 * res.energy.total, e2 * trial_energy.total);
  else
    std::printf("E_TF <= eps^2 E_GP : %.9g <= %.9g\n", tf_sol.energy,
                e2 * res.energy.total);
  std::printf("iterations=%d converged=%d residual=%.3g\n", res.iterations,
              res.status == MinimizeStatus::Converged, res.residual);
  if (res.status == MinimizeStatus::MaxIterations) {
    std::fprintf(stderr, "solver hit the iteration cap; artifacts written\n");
    return kExitNumerical;
  }
  return 0;
}

int cmd_trial(double s, double epsilon, double omega0, int grid_n,
              double box_factor, const std::string& out) {
  const tf::Solution tf_sol = tf::solve(s, omega0);
  GridPolicy policy;
  policy.box_factor = box_factor;
  Grid grid = grid_n > 0 ? make_grid(grid_n, box_factor * tf_sol.r_out)
                         : grid_for(policy, epsilon, tf_sol.r_out);
  const TrialState trial = assemble_trial(tf_sol, epsilon, omega0, grid);
  const double sc = s;
  const EnergyBreakdown e = gp_energy(
      trial.state, [sc](double r) { return std::pow(r, sc); });
  ensure_dir(out);
  io::save_text(joined(out, "trial_state.json"),
                io::to_json(trial.state).dump() + "\n");
  json j = io::provenance_json(trial);
  j["energy"] = io::to_json(e);
  j["e_tf"] = tf_sol.energy;
  io::save_text(joined(out, "trial.json"), j.dump(2) + "\n");
  std::printf("N_eps=%zu c_eps^2=%.12g eps^2 E_trial=%.9g E_TF=%.9g\n",
              trial.lattice.count(), trial.c_eps_sq,
              epsilon * epsilon * e.total, tf_sol.energy);
  return 0;
}

RegimeSpec spec_from_json(const json& j) {
  RegimeSpec spec;
  const std::string kind = j.value("regime", "linear");
  if (kind == "sub")
    spec.kind = Regime::Sub;
  else if (kind == "linear")
    spec.kind = Regime::Linear;
  else if (kind == "super")
    spec.kind = Regime::Super;
  else
    throw std::invalid_argument("regime must be sub|linear|super");
  spec.s = j.value("s", 4.0);
  spec.omega0 = j.value("omega0", spec.kind == Regime::Sub ? 0.0 : 4.0);
  spec.omega1 = j.value("omega1", 1.0);
  spec.alpha = j.value("alpha", 0.3);
  spec.epsilon_list = j.at("epsilon_list").get<std::vector<double>>();
  if (j.contains("potential"))
    spec.potential = io::potential_from_json(j.at("potential"));
  return spec;
}

int cmd_sweep(const std::string& config_path, const std::string& out_flag) {
  const json cfg = load_json_file(config_path);

  if (cfg.value("regime", "") == "tf-rate") {
    const double s = cfg.at("s").get<double>();
    const auto omegas = cfg.at("omega0_list").get<std::vector<double>>();
    const TfRateCheck chk = tf_rate_check(s, omegas);
    std::printf("tf-rate s=%g fitted=%.4f +- %.4f target=%.4f\n", s,
                chk.fitted_exponent, chk.stderr_exponent, chk.target_exponent);
    return 0;
  }

  RegimeSpec spec = spec_from_json(cfg);
  if (spec.epsilon_list.empty()) {
    std::fprintf(stderr, "epsilon list is empty\n");
    return kExitUsage;
  }
  if (spec.epsilon_list.size() < 3) {
    std::fprintf(stderr, "sweep needs at least 3 epsilon values\n");
    return kExitUsage;
  }
  SweepOptions opt;
  opt.verbose = true;
  if (cfg.contains("grid")) {
    const json& g = cfg["grid"];
    opt.grid.min_n = g.value("min_n", opt.grid.min_n);
    opt.grid.max_n = g.value("max_n", opt.grid.max_n);
    opt.grid.spacing_factor = g.value("spacing_factor", opt.grid.spacing_factor);
    opt.grid.box_factor = g.value("box_factor", opt.grid.box_factor);
  }
  opt.minimize.max_iterations =
      cfg.value("max_iterations", opt.minimize.max_iterations);
  opt.minimize.energy_rtol = cfg.value("rtol", opt.minimize.energy_rtol);

  const SweepReport rep = run_sweep(spec, opt);

  const std::string out = out_flag.empty() ? cfg.value("out", "sweep_out")
                                           : out_flag;
  ensure_dir(out);
  std::ostringstream csv;
  io::write_sweep_csv(rep, csv);
  io::save_text(joined(out, "sweep.csv"), csv.str());
  io::save_text(joined(out, "sweep.json"), io::to_json(rep).dump(2) + "\n");

  std::printf("gap rate fit: exponent=%.4f +- %.4f (model %s, target %.4f)\n",
              rep.gap_fit.exponent, rep.gap_fit.stderr_exponent,
              rep.model.c_str(), rep.target_exponent);
  if (rep.alt_target_exponent)
    std::printf("alternate candidate target: %.4f\n", *rep.alt_target_exponent);
  int valid = 0;
  for (const auto& r : rep.rows) valid += r.valid ? 1 : 0;
  if (valid < 3) {
    std::fprintf(stderr, "fewer than 3 valid rows\n");
    return kExitNumerical;
  }
  return 0;
}

int cmd_check_potential(const std::string& spec_path) {
  const TrapPotential P = io::potential_from_json(load_json_file(spec_path));
  const HomogeneityReport rep = asym_homogeneity_check(P);
  std::printf("%s worst_ratio=%.6g at lambda=%g r=%g\n",
              rep.holds ? "holds" : "fails", rep.worst_ratio, rep.worst_lambda,
              rep.worst_r);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rotating-condensate ground states: exact TF layer, GP "
               "minimization, trial-state bounds, asymptotic rate checks"};
  app.require_subcommand(1);

  double s = 4.0, omega0 = 0.0, epsilon = 0.1;
  std::string out = "out";

  auto* tf_cmd = app.add_subcommand("tf", "TF solution and radial profile");
  tf_cmd->add_option("--s", s, "trap exponent (> 2)");
  tf_cmd->add_option("--omega0", omega0, "scaled angular velocity");
  tf_cmd->add_option("--out", out, "output directory");

  auto* crit_cmd = app.add_subcommand("critical", "critical velocity");
  double crit_s = 4.0;
  crit_cmd->add_option("--s", crit_s, "trap exponent (> 2)");

  auto* quartic_cmd =
      app.add_subcommand("quartic", "closed-form quartic-trap solution");
  double q_omega0 = 0.0;
  std::string q_out;
  quartic_cmd->add_option("--omega0", q_omega0, "scaled angular velocity");
  quartic_cmd->add_option("--out", q_out, "output directory");

  auto* gp_cmd = app.add_subcommand("gp", "GP ground-state minimization");
  GpArgs ga;
  gp_cmd->add_option("--s", ga.s, "trap exponent");
  gp_cmd->add_option("--epsilon", ga.epsilon, "coupling parameter");
  gp_cmd->add_option("--omega0", ga.omega0, "rotation omega0 (omega=omega0/eps)");
  gp_cmd->add_option("--omega1", ga.omega1, "fast-rotation coefficient");
  gp_cmd->add_option("--alpha", ga.alpha, "fast-rotation exponent");
  gp_cmd->add_option("--omega", ga.omega, "explicit angular velocity");
  gp_cmd->add_option("--grid-n", ga.grid_n, "grid points per side");
  gp_cmd->add_option("--box-factor", ga.box_factor, "box radius / r_out");
  gp_cmd->add_option("--init", ga.init, "initial state: auto|trial|tf|gauss");
  gp_cmd->add_option("--max-iterations", ga.max_iterations, "iteration cap");
  gp_cmd->add_option("--rtol", ga.rtol, "relative energy tolerance");
  gp_cmd->add_option("--out", ga.out, "output directory");
  gp_cmd->add_option("--potential", ga.potential_file,
                     "general potential spec (JSON)");

  auto* trial_cmd = app.add_subcommand("trial", "vortex-lattice trial state");
  double t_s = 4.0, t_eps = 0.1, t_omega0 = 4.0, t_box = 2.0;
  int t_grid = 0;
  std::string t_out = "trial_out";
  trial_cmd->add_option("--s", t_s, "trap exponent");
  trial_cmd->add_option("--epsilon", t_eps, "coupling parameter");
  trial_cmd->add_option("--omega0", t_omega0, "scaled angular velocity");
  trial_cmd->add_option("--grid-n", t_grid, "grid points per side");
  trial_cmd->add_option("--box-factor", t_box, "box radius / r_out");
  trial_cmd->add_option("--out", t_out, "output directory");

  auto* sweep_cmd = app.add_subcommand("sweep", "regime sweep from a config");
  std::string sweep_cfg, sweep_out;
  sweep_cmd->add_option("--config", sweep_cfg, "sweep config JSON")->required();
  sweep_cmd->add_option("--out", sweep_out, "output directory override");

  auto* chk_cmd =
      app.add_subcommand("check-potential", "asymptotic homogeneity check");
  std::string chk_spec;
  chk_cmd->add_option("--spec", chk_spec, "potential spec JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (tf_cmd->parsed()) return cmd_tf(s, omega0, out);
    if (crit_cmd->parsed()) return cmd_critical(crit_s);
    if (quartic_cmd->parsed()) return cmd_quartic(q_omega0, q_out);
    if (gp_cmd->parsed()) return cmd_gp(ga);
    if (trial_cmd->parsed())
      return cmd_trial(t_s, t_eps, t_omega0, t_grid, t_box, t_out);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_cfg, sweep_out);
    if (chk_cmd->parsed()) return cmd_check_potential(chk_spec);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
  return kExitUsage;
}
