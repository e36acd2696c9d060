#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "rotbec/gp_state.hpp"

namespace rotbec {

// Execution policy for the grid kernels. Serial is the reference
// implementation; Parallel runs the same loops under OpenMP with
// deterministic (row-ordered) reductions, so both produce identical bits.
enum class Exec { Serial, Parallel };

using cvec = std::vector<std::complex<double>>;

// Per-run coefficient tables: trap and centrifugal terms per cell, and the
// Peierls link phases U = exp(i Int A dl) of the vector potential
// A = (omega/2) e_z x r. Links keep the discrete operator gauge covariant,
// so only the phase winding relative to the rotating frame needs resolving.
struct GpCoeffs {
  Grid grid;
  double epsilon = 0.1;
  double omega = 0.0;
  double inv_eps2 = 0.0;
  std::vector<double> pot;   // V(r)/eps^2
  std::vector<double> cent;  // omega^2 r^2 / 4
  std::vector<std::complex<double>> ux;  // x-bond phase, per row iy
  std::vector<std::complex<double>> uy;  // y-bond phase, per column ix
};

GpCoeffs make_coeffs(const Grid& grid, double epsilon, double omega,
                     const std::function<double(double)>& potential);

struct EnergyBreakdown {
  double magnetic_kinetic = 0.0;
  double potential = 0.0;
  double interaction = 0.0;
  double centrifugal = 0.0;
  double total = 0.0;
};

namespace kernels {

// Covariant bond differences phix = (conj(Ux) psi_right - psi)/h and the
// y analogue, with hard-wall (zero) padding. The left/bottom wall bonds are
// accounted for inside energy() and gradient().
void gauge_derivatives(const GpCoeffs& c, const cvec& psi, cvec& phix,
                       cvec& phiy, Exec exec);

// Exact discrete energy gradient (density convention), the adjoint of the
// bond-difference scheme:
//   g = (U_left phix_left - phix + U_below phiy_below - phiy)/h
//       + (pot - cent + 2|psi|^2/eps^2) psi,
// so that E[psi + d] - E[psi] = 2 h^2 Re<g, d> + O(d^2).
void gradient(const GpCoeffs& c, const cvec& psi, const cvec& phix,
              const cvec& phiy, cvec& grad, Exec exec);

// Energy components of the gauge ("magnetic") form.
EnergyBreakdown energy(const GpCoeffs& c, const cvec& psi, Exec exec);

// Same total energy through the angular-momentum form
//   |grad psi|^2 - omega Im(psi^* (x Dy - y Dx) psi) + pot |psi|^2 + |psi|^4/eps^2
// with centered differences; agrees with the gauge form to discretization
// error on states both schemes resolve.
double energy_angular_form(const GpCoeffs& c, const cvec& psi, Exec exec);

double norm_squared(const Grid& grid, const cvec& v, Exec exec);
double dot_real(const Grid& grid, const cvec& a, const cvec& b, Exec exec);

// y := a - s*b, then normalized to unit discrete L2 norm; returns the norm
// before normalization.
double axpy_normalized(const Grid& grid, const cvec& a, double s,
                       const cvec& b, cvec& y, Exec exec);

}  // namespace kernels

}  // namespace rotbec
