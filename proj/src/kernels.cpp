#include "rotbec/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace rotbec {

GpCoeffs make_coeffs(const Grid& grid, double epsilon, double omega,
                     const std::function<double(double)>& potential) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  GpCoeffs c;
  c.grid = grid;
  c.epsilon = epsilon;
  c.omega = omega;
  c.inv_eps2 = 1.0 / (epsilon * epsilon);
  const int n = grid.n;
  const double h = grid.spacing();
  c.pot.resize(grid.size());
  c.cent.assign(grid.size(), 0.0);
  c.ux.assign(n, {1.0, 0.0});
  c.uy.assign(n, {1.0, 0.0});
  for (int iy = 0; iy < n; ++iy) {
    const double y = grid.coord(iy);
    for (int ix = 0; ix < n; ++ix) {
      const double x = grid.coord(ix);
      const double r = std::hypot(x, y);
      const std::size_t k = grid.index(ix, iy);
      c.pot[k] = potential(r) * c.inv_eps2;
      if (omega != 0.0) c.cent[k] = 0.25 * omega * omega * r * r;
    }
  }
  if (omega != 0.0) {
    // Exact link phases: A is affine, so Int A dl over a bond is the
    // midpoint value times h. A_x = -(omega/2) y (constant along x-bonds),
    // A_y = (omega/2) x (constant along y-bonds).
    for (int i = 0; i < n; ++i) {
      c.ux[i] = std::polar(1.0, -0.5 * omega * grid.coord(i) * h);
      c.uy[i] = std::polar(1.0, 0.5 * omega * grid.coord(i) * h);
    }
  }
  return c;
}

namespace kernels {

namespace {

using cplx = std::complex<double>;

inline cplx at(const cvec& v, int n, int ix, int iy) {
  if (ix < 0 || ix >= n || iy < 0 || iy >= n) return {0.0, 0.0};
  return v[std::size_t(iy) * n + ix];
}

}  // namespace

void gauge_derivatives(const GpCoeffs& c, const cvec& psi, cvec& phix,
                       cvec& phiy, Exec exec) {
  const int n = c.grid.n;
  const double invh = 1.0 / c.grid.spacing();
  phix.resize(psi.size());
  phiy.resize(psi.size());
  const bool par = exec == Exec::Parallel;
#pragma omp parallel for schedule(static) if (par)
  for (int iy = 0; iy < n; ++iy) {
    const cplx ux = std::conj(c.ux[iy]);  // x-bonds in row iy
    for (int ix = 0; ix < n; ++ix) {
      const std::size_t k = c.grid.index(ix, iy);
      const cplx right = ix + 1 < n ? psi[k + 1] : cplx{0.0, 0.0};
      const cplx up = iy + 1 < n ? psi[k + n] : cplx{0.0, 0.0};
      phix[k] = (ux * right - psi[k]) * invh;
      phiy[k] = (std::conj(c.uy[ix]) * up - psi[k]) * invh;
    }
  }
}

void gradient(const GpCoeffs& c, const cvec& psi, const cvec& phix,
              const cvec& phiy, cvec& grad, Exec exec) {
  const int n = c.grid.n;
  const double invh = 1.0 / c.grid.spacing();
  grad.resize(psi.size());
  const bool par = exec == Exec::Parallel;
#pragma omp parallel for schedule(static) if (par)
  for (int iy = 0; iy < n; ++iy) {
    const cplx ux = c.ux[iy];
    for (int ix = 0; ix < n; ++ix) {
      const std::size_t k = c.grid.index(ix, iy);
      // Wall bonds: z_{-1} = conj(U) psi_0 / h, so U z_{-1} = psi_0 / h.
      const cplx zxl = ix > 0 ? ux * phix[k - 1] : psi[k] * invh;
      const cplx zyl =
          iy > 0 ? c.uy[ix] * phiy[k - n] : psi[k] * invh;
      cplx g = (zxl - phix[k] + zyl - phiy[k]) * invh;
      if (c.omega != 0.0) g -= c.cent[k] * psi[k];
      g += (c.pot[k] + 2.0 * c.inv_eps2 * std::norm(psi[k])) * psi[k];
      grad[k] = g;
    }
  }
}

EnergyBreakdown energy(const GpCoeffs& c, const cvec& psi, Exec exec) {
  const int n = c.grid.n;
  const double invh = 1.0 / c.grid.spacing();
  const bool par = exec == Exec::Parallel;
  const bool gauge = c.omega != 0.0;
  std::vector<double> row_mk(n, 0.0), row_pot(n, 0.0), row_int(n, 0.0),
      row_cent(n, 0.0);
#pragma omp parallel for schedule(static) if (par)
  for (int iy = 0; iy < n; ++iy) {
    const cplx ux = std::conj(c.ux[iy]);
    double mk = 0.0, po = 0.0, in = 0.0, ce = 0.0;
    for (int ix = 0; ix < n; ++ix) {
      const std::size_t k = c.grid.index(ix, iy);
      const cplx right = ix + 1 < n ? psi[k + 1] : cplx{0.0, 0.0};
      const cplx up = iy + 1 < n ? psi[k + n] : cplx{0.0, 0.0};
      const cplx zx = (ux * right - psi[k]) * invh;
      const cplx zy = (std::conj(c.uy[ix]) * up - psi[k]) * invh;
      mk += std::norm(zx) + std::norm(zy);
      // Left/bottom wall bonds.
      if (ix == 0) mk += std::norm(psi[k] * invh);
      if (iy == 0) mk += std::norm(psi[k] * invh);
      const double dens = std::norm(psi[k]);
      po += c.pot[k] * dens;
      in += c.inv_eps2 * dens * dens;
      if (gauge) ce -= c.cent[k] * dens;
    }
    row_mk[iy] = mk;
    row_pot[iy] = po;
    row_int[iy] = in;
    row_cent[iy] = ce;
  }
  const double h2 = c.grid.spacing() * c.grid.spacing();
  EnergyBreakdown e;
  for (int iy = 0; iy < n; ++iy) {
    e.magnetic_kinetic += row_mk[iy];
    e.potential += row_pot[iy];
    e.interaction += row_int[iy];
    e.centrifugal += row_cent[iy];
  }
  e.magnetic_kinetic *= h2;
  e.potential *= h2;
  e.interaction *= h2;
  e.centrifugal *= h2;
  e.total = e.magnetic_kinetic + e.potential + e.interaction + e.centrifugal;
  return e;
}

double energy_angular_form(const GpCoeffs& c, const cvec& psi, Exec exec) {
  const int n = c.grid.n;
  const double inv2h = 0.5 / c.grid.spacing();
  const bool par = exec == Exec::Parallel;
  std::vector<double> row(n, 0.0);
#pragma omp parallel for schedule(static) if (par)
  for (int iy = 0; iy < n; ++iy) {
    const double y = c.grid.coord(iy);
    double acc = 0.0;
    for (int ix = 0; ix < n; ++ix) {
      const double x = c.grid.coord(ix);
      const std::size_t k = c.grid.index(ix, iy);
      const cplx dx =
          (at(psi, n, ix + 1, iy) - at(psi, n, ix - 1, iy)) * inv2h;
      const cplx dy =
          (at(psi, n, ix, iy + 1) - at(psi, n, ix, iy - 1)) * inv2h;
      const double dens = std::norm(psi[k]);
      acc += std::norm(dx) + std::norm(dy);
      if (c.omega != 0.0) {
        const cplx ang = std::conj(psi[k]) * (x * dy - y * dx);
        acc -= c.omega * ang.imag();
      }
      acc += c.pot[k] * dens + c.inv_eps2 * dens * dens;
    }
    row[iy] = acc;
  }
  double total = 0.0;
  for (int iy = 0; iy < n; ++iy) total += row[iy];
  return total * c.grid.spacing() * c.grid.spacing();
}

double norm_squared(const Grid& grid, const cvec& v, Exec exec) {
  const int n = grid.n;
  const bool par = exec == Exec::Parallel;
  std::vector<double> row(n, 0.0);
#pragma omp parallel for schedule(static) if (par)
  for (int iy = 0; iy < n; ++iy) {
    double acc = 0.0;
    for (int ix = 0; ix < n; ++ix) acc += std::norm(v[grid.index(ix, iy)]);
    row[iy] = acc;
  }
  double total = 0.0;
  for (int iy = 0; iy < n; ++iy) total += row[iy];
  return total * grid.spacing() * grid.spacing();
}

double dot_real(const Grid& grid, const cvec& a, const cvec& b, Exec exec) {
  const int n = grid.n;
  const bool par = exec == Exec::Parallel;
  std::vector<double> row(n, 0.0);
#pragma omp parallel for schedule(static) if (par)
  for (int iy = 0; iy < n; ++iy) {
    double acc = 0.0;
    for (int ix = 0; ix < n; ++ix) {
      const std::size_t k = grid.index(ix, iy);
      acc += a[k].real() * b[k].real() + a[k].imag() * b[k].imag();
    }
    row[iy] = acc;
  }
  double total = 0.0;
  for (int iy = 0; iy < n; ++iy) total += row[iy];
  return total * grid.spacing() * grid.spacing();
}

double axpy_normalized(const Grid& grid, const cvec& a, double s,
                       const cvec& b, cvec& y, Exec exec) {
  const int n = grid.n;
  const bool par = exec == Exec::Parallel;
  y.resize(a.size());
  std::vector<double> row(n, 0.0);
#pragma omp parallel for schedule(static) if (par)
  for (int iy = 0; iy < n; ++iy) {
    double acc = 0.0;
    for (int ix = 0; ix < n; ++ix) {
      const std::size_t k = grid.index(ix, iy);
      const cplx v = a[k] - s * b[k];
      y[k] = v;
      acc += std::norm(v);
    }
    row[iy] = acc;
  }
  double nrm2 = 0.0;
  for (int iy = 0; iy < n; ++iy) nrm2 += row[iy];
  const double nrm = std::sqrt(nrm2 * grid.spacing() * grid.spacing());
  const double inv = 1.0 / nrm;
#pragma omp parallel for schedule(static) if (par)
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) y[grid.index(ix, iy)] *= inv;
  return nrm;
}

}  // namespace kernels

}  // namespace rotbec
