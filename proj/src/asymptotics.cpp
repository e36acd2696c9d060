#include "rotbec/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "rotbec/quadrature.hpp"
#include "rotbec/trial.hpp"

namespace rotbec {

namespace {
constexpr double kPi = std::numbers::pi;
}

Regime classify_regime(double epsilon, double omega,
                       RegimeThresholds thresholds) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (omega < 0.0) throw std::invalid_argument("omega must be >= 0");
  const double omega0 = epsilon * omega;
  if (omega0 < thresholds.sub) return Regime::Sub;
  if (omega0 > thresholds.super) return Regime::Super;
  return Regime::Linear;
}

double estimate_alpha(double eps1, double omega1, double eps2, double omega2) {
  const double o01 = eps1 * omega1, o02 = eps2 * omega2;
  if (!(o01 > 0.0 && o02 > 0.0))
    throw std::invalid_argument("alpha estimate needs rotating samples");
  return -std::log(o02 / o01) / std::log(eps2 / eps1);
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& samples,
                 RateModel model) {
  if (samples.size() < 3)
    throw std::invalid_argument("rate fit needs at least 3 samples");
  RateFit fit;
  std::vector<double> x, y;
  for (const auto& [eps, gap] : samples) {
    if (!(gap > 0.0))
      throw std::invalid_argument("rate fit needs positive gaps");
    x.push_back(std::log(eps));
    double ly = std::log(gap);
    if (model == RateModel::PowerLog) ly -= std::log(std::abs(std::log(eps)));
    y.push_back(ly);
  }
  // Degenerate when the gaps are not monotone in the abscissa beyond a 1%
  // tolerance (reversals or an entirely flat trend).
  {
    std::vector<std::size_t> order(x.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    int pos = 0, neg = 0;
    for (std::size_t i = 1; i < order.size(); ++i) {
      const double d = y[order[i]] - y[order[i - 1]];
      if (d > 0.01) ++pos;
      if (d < -0.01) ++neg;
    }
    fit.degenerate = (pos > 0 && neg > 0) || (pos + neg == 0);
  }

  const std::size_t n = x.size();
  double xm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    xm += x[i];
    ym += y[i];
  }
  xm /= n;
  ym /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
  }
  fit.exponent = sxy / sxx;
  fit.log_prefactor = ym - fit.exponent * xm;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - fit.log_prefactor - fit.exponent * x[i];
    rss += r * r;
  }
  fit.stderr_exponent =
      n > 2 ? std::sqrt(rss / double(n - 2) / sxx) : 0.0;
  return fit;
}

TfRateCheck tf_rate_check(double s, const std::vector<double>& omega0_list) {
  if (omega0_list.size() < 3)
    throw std::invalid_argument("need at least 3 omega0 samples");
  const double omega_c = tf::critical_velocity(s).omega_c;
  TfRateCheck chk;
  chk.target_exponent = -4.0 * (s + 2.0) / (3.0 * (s - 2.0));
  for (double w : omega0_list) {
    if (!(w > omega_c))
      throw std::invalid_argument("omega0 samples must exceed omega_c");
    const tf::ScaledSolution sc = tf::scaled_solve(s, w);
    chk.samples.push_back({w, sc.energy_tilde - (1.0 - 0.5 * s)});
  }
  const RateFit fit = fit_rate(chk.samples, RateModel::PurePower);
  chk.fitted_exponent = fit.exponent;
  chk.stderr_exponent = fit.stderr_exponent;
  return chk;
}

Grid grid_for(const GridPolicy& policy, double epsilon, double r_out) {
  const double box = policy.box_factor * r_out;
  const double target_h = policy.spacing_factor * std::pow(epsilon, 2.0 / 3.0);
  int n = int(std::ceil(2.0 * box / target_h));
  n = ((n + policy.round_to - 1) / policy.round_to) * policy.round_to;
  n = std::clamp(n, policy.min_n, policy.max_n);
  return make_grid(n, box);
}

namespace {

// A seeded state for one sweep row: vortex-lattice trial when rotating,
// sqrt of the (regularized) TF density otherwise.
GpState seed_state(const RegimeSpec& spec, const tf::Solution& tf_sol,
                   double epsilon, double omega, const Grid& grid) {
  const double omega0 = epsilon * omega;
  const bool lattice_fits =
      omega0 > 0.0 &&
      std::sqrt(2.0 * kPi * epsilon / omega0) < 0.9 * tf_sol.r_out;
  if (lattice_fits) {
    return assemble_trial(tf_sol, epsilon, omega0, grid).state;
  }
  GpState st = make_state(grid, epsilon, omega);
  for (int iy = 0; iy < grid.n; ++iy)
    for (int ix = 0; ix < grid.n; ++ix) {
      const double r = std::hypot(grid.coord(ix), grid.coord(iy));
      st.field[grid.index(ix, iy)] = std::sqrt(tf_sol.density(r));
    }
  st.normalize();
  return st;
}

}  // namespace

SweepReport run_sweep(const RegimeSpec& spec, const SweepOptions& opt) {
  if (spec.epsilon_list.size() < 3)
    throw std::invalid_argument("sweep needs at least 3 epsilon values");
  SweepReport rep;
  rep.spec = spec;
  std::sort(rep.spec.epsilon_list.begin(), rep.spec.epsilon_list.end(),
            std::greater<>());

  for (double eps : rep.spec.epsilon_list) {
    SweepRow row;
    row.epsilon = eps;
    double omega = 0.0, omega0 = 0.0;
    switch (spec.kind) {
      case Regime::Sub:
        omega = spec.omega0;  // fixed angular velocity
        omega0 = 0.0;         // reference is the non-rotating profile
        break;
      case Regime::Linear:
        omega0 = spec.omega0;
        omega = omega0 / eps;
        break;
      case Regime::Super:
        omega = spec.omega1 / std::pow(eps, 1.0 + spec.alpha);
        omega0 = eps * omega;
        break;
    }
    const tf::Solution tf_ref = tf::solve(spec.s, omega0);
    const Grid grid = grid_for(opt.grid, eps, tf_ref.r_out);

    GpState init = seed_state(spec, tf_ref, eps, omega, grid);
    std::function<double(double)> pot;
    if (spec.potential) {
      pot = rescaled_general_potential(*spec.potential, eps);
    } else {
      const double s = spec.s;
      pot = [s](double r) { return std::pow(r, s); };
    }
    MinimizeResult res = minimize_gp(std::move(init), pot, opt.minimize);
    row.iterations = res.iterations;
    row.valid = res.status != MinimizeStatus::MaxIterations;

    const double e2 = eps * eps;
    switch (spec.kind) {
      case Regime::Sub:
        row.e_tf = tf_ref.energy;  // omega0 = 0 reference
        row.e_gp_scaled = e2 * res.energy.total;
        break;
      case Regime::Linear:
        row.e_tf = tf_ref.energy;
        row.e_gp_scaled = e2 * res.energy.total;
        break;
      case Regime::Super: {
        const double sc =
            std::pow(eps, 2.0 * spec.alpha * spec.s / (spec.s - 2.0));
        row.e_tf = std::pow(spec.omega1 * spec.omega1 / (2.0 * spec.s),
                            spec.s / (spec.s - 2.0)) *
                   (1.0 - 0.5 * spec.s);
        row.e_gp_scaled = e2 * sc * res.energy.total;
        break;
      }
    }
    row.gap = row.e_gp_scaled - row.e_tf;
    row.l2_dist = density_l2_distance(res.state, tf_ref);
    const TailDiagnostics tails = tail_diagnostics(res.state, tf_ref);
    row.tail_max = tails.max_density_out;
    rep.rows.push_back(row);
    if (opt.verbose)
      std::fprintf(stderr,
                   "sweep eps=%g grid=%d iters=%d gap=%.6g l2=%.4g\n", eps,
                   grid.n, row.iterations, row.gap, row.l2_dist);
  }

  // Rate fit on the valid rows.
  std::vector<std::pair<double, double>> samples;
  for (const auto& r : rep.rows)
    if (r.valid && r.gap > 0.0) samples.push_back({r.epsilon, r.gap});
  switch (spec.kind) {
    case Regime::Sub:
      rep.model = "power";
      rep.target_exponent = 2.0 / 3.0;
      break;
    case Regime::Linear:
      rep.model = "power_log";
      rep.target_exponent = 1.0;
      break;
    case Regime::Super:
      rep.model = "power";
      rep.target_exponent =
          4.0 * spec.alpha * (spec.s + 2.0) / (3.0 * (spec.s - 2.0));
      rep.alt_target_exponent = 1.0 + spec.alpha * (spec.s + 2.0) / (spec.s - 2.0);
      break;
  }
  if (samples.size() >= 3)
    rep.gap_fit = fit_rate(samples, rep.model == "power_log"
                                        ? RateModel::PowerLog
                                        : RateModel::PurePower);
  else
    rep.gap_fit.degenerate = true;
  return rep;
}

Concentration delta_concentration_check(const GpState& state, double r_m,
                                        double shell_halfwidth) {
  const Grid& g = state.grid;
  Concentration c;
  double m2 = 0.0, shell = 0.0;
  for (int iy = 0; iy < g.n; ++iy) {
    const double y = g.coord(iy);
    for (int ix = 0; ix < g.n; ++ix) {
      const double x = g.coord(ix);
      const double u = std::hypot(x, y) / r_m - 1.0;
      const double dens = state.density(g.index(ix, iy));
      m2 += u * u * dens;
      if (std::abs(u) <= shell_halfwidth) shell += dens;
    }
  }
  const double h2 = g.spacing() * g.spacing();
  c.second_moment = m2 * h2;
  c.mass_in_shell = shell * h2;
  return c;
}

Concentration tf_concentration(const tf::ScaledSolution& sc,
                               double shell_halfwidth) {
  Concentration c;
  auto m2 = [&](double x) {
    const double u = x - 1.0;
    return 2.0 * kPi * x * u * u * sc.density(x);
  };
  c.second_moment = integrate(m2, sc.x_in, sc.x_out, {1e-300, 1e-11, 48});
  auto in_shell = [&](double x) { return 2.0 * kPi * x * sc.density(x); };
  const double lo = std::max(sc.x_in, 1.0 - shell_halfwidth);
  const double hi = std::min(sc.x_out, 1.0 + shell_halfwidth);
  c.mass_in_shell =
      hi > lo ? integrate(in_shell, lo, hi, {1e-300, 1e-11, 48}) : 0.0;
  return c;
}

}  // namespace rotbec
