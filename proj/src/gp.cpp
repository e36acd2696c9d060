#include "rotbec/gp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace rotbec {

namespace {

std::function<double(double)> as_function(const TrapPotential& V) {
  return [&V](double r) { return V(r); };
}

GpCoeffs coeffs_for(const GpState& state,
                    const std::function<double(double)>& potential) {
  return make_coeffs(state.grid, state.epsilon, state.omega, potential);
}

}  // namespace

EnergyBreakdown gp_energy(const GpState& state,
                          const std::function<double(double)>& potential,
                          Exec exec) {
  const GpCoeffs c = coeffs_for(state, potential);
  return kernels::energy(c, state.field, exec);
}

EnergyBreakdown gp_energy(const GpState& state, const TrapPotential& V,
                          Exec exec) {
  return gp_energy(state, as_function(V), exec);
}

double gp_energy_angular(const GpState& state, const TrapPotential& V,
                         Exec exec) {
  const GpCoeffs c = coeffs_for(state, as_function(V));
  return kernels::energy_angular_form(c, state.field, exec);
}

double chemical_potential(const EnergyBreakdown& e) {
  return e.total + e.interaction;
}

namespace {

struct Workspace {
  cvec phix, phiy, grad, dir, trial, prev_psi, prev_dir;
};

// Tangent gradient dir = grad - <psi, grad> psi and its norm.
double tangent_direction(const Grid& grid, const cvec& psi, const cvec& grad,
                         cvec& dir, Exec exec) {
  const double lambda = kernels::dot_real(grid, psi, grad, exec);
  const int n = grid.n;
  dir.resize(psi.size());
  const bool par = exec == Exec::Parallel;
#pragma omp parallel for schedule(static) if (par)
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const std::size_t k = grid.index(ix, iy);
      dir[k] = grad[k] - lambda * psi[k];
    }
  return std::sqrt(kernels::norm_squared(grid, dir, exec));
}

}  // namespace

MinimizeResult minimize_gp(GpState init,
                           const std::function<double(double)>& potential,
                           const MinimizeOptions& opt) {
  GpState& st = init;
  if (st.field.empty()) throw std::invalid_argument("empty initial state");
  st.normalize();
  const GpCoeffs c = coeffs_for(st, potential);
  const Exec exec = opt.exec;
  Workspace w;

  EnergyBreakdown e = kernels::energy(c, st.field, exec);
  kernels::gauge_derivatives(c, st.field, w.phix, w.phiy, exec);
  kernels::gradient(c, st.field, w.phix, w.phiy, w.grad, exec);
  double res = tangent_direction(st.grid, st.field, w.grad, w.dir, exec);

  // First step below the explicit stability threshold; the BB update takes
  // over after one accepted move.
  double step = opt.initial_step;
  if (step <= 0.0) {
    const double h = st.grid.spacing();
    double max_pot = 0.0;
    for (double p : c.pot) max_pot = std::max(max_pot, p);
    double max_dens = 0.0;
    for (const auto& v : st.field) max_dens = std::max(max_dens, std::norm(v));
    step = 1.0 / (4.0 / (h * h) + max_pot + 2.0 * c.inv_eps2 * max_dens);
  }

  MinimizeResult out;
  out.status = MinimizeStatus::MaxIterations;
  out.norm_drift = std::abs(st.norm() - 1.0);
  int settled = 0;

  for (int it = 0; it < opt.max_iterations; ++it) {
    // Backtracking on the normalized update psi' = N(psi - step * dir).
    const double e_prev = e.total;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      kernels::axpy_normalized(st.grid, st.field, step, w.dir, w.trial, exec);
      const EnergyBreakdown et = kernels::energy(c, w.trial, exec);
      if (et.total <= e_prev + 1e-12) {
        e = et;
        accepted = true;
        break;
      }
      step *= 0.5;
      ++out.backtracks;
    }
    if (!accepted) {
      out.status = MinimizeStatus::StalledStep;
      out.iterations = it;
      break;
    }

    w.prev_psi.swap(st.field);
    w.prev_dir.swap(w.dir);
    st.field.swap(w.trial);
    out.norm_drift = std::max(out.norm_drift, std::abs(st.norm() - 1.0));

    kernels::gauge_derivatives(c, st.field, w.phix, w.phiy, exec);
    kernels::gradient(c, st.field, w.phix, w.phiy, w.grad, exec);
    res = tangent_direction(st.grid, st.field, w.grad, w.dir, exec);
    out.iterations = it + 1;

    const double rel_drop = (e_prev - e.total) / std::max(1.0, std::abs(e.total));
    if (rel_drop < opt.energy_rtol) {
      if (++settled >= opt.settle_steps) {
        out.status = MinimizeStatus::Converged;
        break;
      }
    } else {
      settled = 0;
    }

    // Barzilai-Borwein step from the last accepted move.
    {
      double sy = 0.0, ss = 0.0;
      const int n = st.grid.n;
      std::vector<double> row_sy(n, 0.0), row_ss(n, 0.0);
      const bool par = exec == Exec::Parallel;
#pragma omp parallel for schedule(static) if (par)
      for (int iy = 0; iy < n; ++iy) {
        double asy = 0.0, ass = 0.0;
        for (int ix = 0; ix < n; ++ix) {
          const std::size_t k = st.grid.index(ix, iy);
          const std::complex<double> ds = st.field[k] - w.prev_psi[k];
          const std::complex<double> dg = w.dir[k] - w.prev_dir[k];
          ass += std::norm(ds);
          asy += ds.real() * dg.real() + ds.imag() * dg.imag();
        }
        row_sy[iy] = asy;
        row_ss[iy] = ass;
      }
      for (int iy = 0; iy < n; ++iy) {
        sy += row_sy[iy];
        ss += row_ss[iy];
      }
      if (sy > 0.0 && ss > 0.0) step = std::clamp(ss / sy, 1e-14, 1e6);
    }

    if (opt.log_every > 0 && (it % opt.log_every) == 0)
      std::fprintf(stderr, "iter %d energy %.12g residual %.3g step %.3g\n",
                   it, e.total, res, step);
  }

  out.state = std::move(st);
  out.energy = e;
  out.residual = res;
  return out;
}

MinimizeResult minimize_gp(GpState init, const TrapPotential& V,
                           const MinimizeOptions& opt) {
  const TrapPotential Vcopy = V;
  return minimize_gp(std::move(init),
                     [Vcopy](double r) { return Vcopy(r); }, opt);
}

double variational_residual(const GpState& state, const TrapPotential& V,
                            Exec exec) {
  const GpCoeffs c = coeffs_for(state, as_function(V));
  cvec phix, phiy, grad, dir;
  kernels::gauge_derivatives(c, state.field, phix, phiy, exec);
  kernels::gradient(c, state.field, phix, phiy, grad, exec);
  return tangent_direction(state.grid, state.field, grad, dir, exec);
}

double density_l2_distance(const GpState& state, const tf::Solution& tf_sol) {
  const Grid& g = state.grid;
  double acc = 0.0;
  for (int iy = 0; iy < g.n; ++iy) {
    const double y = g.coord(iy);
    for (int ix = 0; ix < g.n; ++ix) {
      const double r = std::hypot(g.coord(ix), y);
      const double d = state.density(g.index(ix, iy)) - tf_sol.density(r);
      acc += d * d;
    }
  }
  return std::sqrt(acc) * g.spacing();
}

TailDiagnostics tail_diagnostics(const GpState& state,
                                 const tf::Solution& tf_sol) {
  const Grid& g = state.grid;
  const double margin = std::pow(state.epsilon, 1.0 / 3.0);
  TailDiagnostics t;
  const bool hole = tf_sol.has_hole() && tf_sol.r_in - margin > 0.0;
  double max_in = 0.0;
  for (int iy = 0; iy < g.n; ++iy) {
    const double y = g.coord(iy);
    for (int ix = 0; ix < g.n; ++ix) {
      const double r = std::hypot(g.coord(ix), y);
      const double dens = state.density(g.index(ix, iy));
      if (r < tf_sol.r_in || r > tf_sol.r_out)
        t.outside_mass4 += dens * dens;
      if (r >= tf_sol.r_out + margin)
        t.max_density_out = std::max(t.max_density_out, dens);
      if (hole && r <= tf_sol.r_in - margin) max_in = std::max(max_in, dens);
    }
  }
  t.outside_mass4 *= g.spacing() * g.spacing();
  if (hole) t.max_density_in = max_in;
  return t;
}

double angular_inequality_violation(const GpState& state, Exec exec) {
  const Grid& g = state.grid;
  const int n = g.n;
  const double inv2h = 0.5 / g.spacing();
  const double omega = state.omega;
  const bool par = exec == Exec::Parallel;
  std::vector<double> row(n, 0.0);
  const cvec& psi = state.field;
#pragma omp parallel for schedule(static) if (par)
  for (int iy = 0; iy < n; ++iy) {
    const double y = g.coord(iy);
    double worst = -1e300;
    for (int ix = 0; ix < n; ++ix) {
      const double x = g.coord(ix);
      const std::size_t k = g.index(ix, iy);
      auto atp = [&](int jx, int jy) -> std::complex<double> {
        if (jx < 0 || jx >= n || jy < 0 || jy >= n) return {0.0, 0.0};
        return psi[g.index(jx, jy)];
      };
      const std::complex<double> dx = (atp(ix + 1, iy) - atp(ix - 1, iy)) * inv2h;
      const std::complex<double> dy = (atp(ix, iy + 1) - atp(ix, iy - 1)) * inv2h;
      const std::complex<double> ang = std::conj(psi[k]) * (x * dy - y * dx);
      const double lhs = omega * std::abs(ang.imag());
      const double rhs = std::norm(dx) + std::norm(dy) +
                         0.25 * omega * omega * (x * x + y * y) *
                             std::norm(psi[k]);
      worst = std::max(worst, lhs - rhs);
    }
    row[iy] = worst;
  }
  double worst = -1e300;
  for (int iy = 0; iy < n; ++iy) worst = std::max(worst, row[iy]);
  return worst;
}

RescaledEnergy gp_energy_rescaled(const GpState& state_x, double s,
                                  double r_m, Exec exec) {
  const Grid& g = state_x.grid;
  const double eps = state_x.epsilon;
  const double a_coef = 0.5 * state_x.omega * r_m * r_m;
  const double scale = std::pow(r_m, -(s + 2.0));
  const int n = g.n;
  const double h = g.spacing();
  const double invh = 1.0 / h;
  const bool par = exec == Exec::Parallel;
  std::vector<double> row_kin(n, 0.0), row_conf(n, 0.0), row_int(n, 0.0);
  const cvec& psi = state_x.field;
#pragma omp parallel for schedule(static) if (par)
  for (int iy = 0; iy < n; ++iy) {
    const double y = g.coord(iy);
    // Link phases of the rescaled vector potential a_coef e_z cross x.
    const std::complex<double> ux =
        std::polar(1.0, a_coef * y * h);  // conj of exp(-i a y h)
    double kin = 0.0, conf = 0.0, intr = 0.0;
    for (int ix = 0; ix < n; ++ix) {
      const double x = g.coord(ix);
      const std::size_t k = g.index(ix, iy);
      const std::complex<double> right =
          ix + 1 < n ? psi[k + 1] : std::complex<double>{0.0, 0.0};
      const std::complex<double> up =
          iy + 1 < n ? psi[k + n] : std::complex<double>{0.0, 0.0};
      const std::complex<double> uy = std::polar(1.0, -a_coef * x * h);
      const std::complex<double> zx = (ux * right - psi[k]) * invh;
      const std::complex<double> zy = (uy * up - psi[k]) * invh;
      kin += std::norm(zx) + std::norm(zy);
      if (ix == 0) kin += std::norm(psi[k] * invh);
      if (iy == 0) kin += std::norm(psi[k] * invh);
      const double dens = std::norm(psi[k]);
      const double xr = std::hypot(x, y);
      conf += (std::pow(xr, s) - 0.5 * s * xr * xr) * dens;
      intr += dens * dens;
    }
    row_kin[iy] = kin;
    row_conf[iy] = conf;
    row_int[iy] = intr;
  }
  const double h2 = h * h;
  RescaledEnergy e;
  for (int iy = 0; iy < n; ++iy) {
    e.kinetic += row_kin[iy];
    e.confinement += row_conf[iy];
    e.interaction += row_int[iy];
  }
  e.kinetic *= h2 * eps * eps * scale;
  e.confinement *= h2;
  e.interaction *= h2 * scale;
  e.total = e.kinetic + e.confinement + e.interaction;
  return e;
}

}  // namespace rotbec
