#pragma once

#include <functional>
#include <optional>
#include <string>

#include "rotbec/kernels.hpp"
#include "rotbec/potential.hpp"
#include "rotbec/tf.hpp"

namespace rotbec {

// Energy of a state in the gauge form. Throws on grid/normalization mismatch.
EnergyBreakdown gp_energy(const GpState& state, const TrapPotential& V,
                          Exec exec = Exec::Parallel);
EnergyBreakdown gp_energy(const GpState& state,
                          const std::function<double(double)>& potential,
                          Exec exec = Exec::Parallel);

// Total energy through the angular-momentum form (identity cross-check).
double gp_energy_angular(const GpState& state, const TrapPotential& V,
                         Exec exec = Exec::Parallel);

enum class MinimizeStatus { Converged, MaxIterations, StalledStep };

struct MinimizeOptions {
  int max_iterations = 20000;
  double energy_rtol = 1e-10;   // relative energy decrease per step
  int settle_steps = 3;         // consecutive small decreases to declare done
  double initial_step = 0.0;    // 0: automatic
  Exec exec = Exec::Parallel;
  int log_every = 0;            // 0: silent
};

struct MinimizeResult {
  GpState state;
  EnergyBreakdown energy;
  int iterations = 0;
  MinimizeStatus status = MinimizeStatus::Converged;
  double residual = 0.0;        // ||H psi - mu psi||_2 at exit
  double norm_drift = 0.0;      // max per-step |norm - 1| observed after
                                // renormalization
  long long backtracks = 0;
};

// Normalized gradient flow with Barzilai-Borwein steps and monotone
// backtracking; accepted steps never raise the energy by more than 1e-12.
MinimizeResult minimize_gp(GpState init, const TrapPotential& V,
                           const MinimizeOptions& opt = {});
MinimizeResult minimize_gp(GpState init,
                           const std::function<double(double)>& potential,
                           const MinimizeOptions& opt = {});

// mu = E[psi] + eps^-2 Int |psi|^4.
double chemical_potential(const EnergyBreakdown& e);

// ||H psi - mu psi||_2 for the current state.
double variational_residual(const GpState& state, const TrapPotential& V,
                            Exec exec = Exec::Parallel);

// || |psi|^2 - rho_tf ||_L2 over the grid.
double density_l2_distance(const GpState& state, const tf::Solution& tf_sol);

struct TailDiagnostics {
  double outside_mass4 = 0.0;     // Int |psi|^4 off the TF support
  double max_density_out = 0.0;   // max |psi|^2 on r >= r_out + eps^(1/3)
  std::optional<double> max_density_in;  // r <= r_in - eps^(1/3), hole case
};
TailDiagnostics tail_diagnostics(const GpState& state,
                                 const tf::Solution& tf_sol);

// Pointwise check of omega |psi^* L psi| <= |grad psi|^2 + omega^2 r^2
// |psi|^2 / 4 on the grid; returns the worst violation (<= 0 when it holds).
double angular_inequality_violation(const GpState& state, Exec exec = Exec::Parallel);

// Energy breakdown of a state living on the peak-radius-rescaled grid
// (coordinates x = r / r_m):
//   eps^2 r_m^-(s+2) Int |(D - i A~)psi|^2 + Int (x^s - s x^2/2)|psi|^2
//   + r_m^-(s+2) Int |psi|^4,   A~ = (omega r_m^2 / 2) e_z cross x.
struct RescaledEnergy {
  double kinetic = 0.0;
  double confinement = 0.0;
  double interaction = 0.0;
  double total = 0.0;
};
RescaledEnergy gp_energy_rescaled(const GpState& state_x, double s,
                                  double r_m, Exec exec = Exec::Parallel);

}  // namespace rotbec
