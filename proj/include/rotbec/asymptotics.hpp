#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rotbec/gp.hpp"
#include "rotbec/potential.hpp"
#include "rotbec/tf.hpp"

namespace rotbec {

// Rotation regimes by the product omega0 = eps * omega: slow rotation when
// it is small, the critical scaling omega ~ 1/eps when order one, and the
// fast regime when it diverges.
enum class Regime { Sub, Linear, Super };

struct RegimeThresholds {
  double sub = 0.1;
  double super = 10.0;
};

Regime classify_regime(double epsilon, double omega,
                       RegimeThresholds thresholds = {});

// Exponent alpha in omega = omega1/eps^(1+alpha) estimated from two samples
// (log-ratio of omega0 values).
double estimate_alpha(double eps1, double omega1, double eps2, double omega2);

enum class RateModel { PurePower, PowerLog };

struct RateFit {
  double exponent = 0.0;
  double stderr_exponent = 0.0;
  double log_prefactor = 0.0;
  bool degenerate = false;  // gaps non-monotone beyond tolerance
};

// Least squares on the log-transformed model gap = C eps^a (PurePower) or
// gap = C eps^a |log eps| (PowerLog). Needs >= 3 samples with gaps > 0.
RateFit fit_rate(const std::vector<std::pair<double, double>>& samples,
                 RateModel model);

struct TfRateCheck {
  double fitted_exponent = 0.0;
  double stderr_exponent = 0.0;
  double target_exponent = 0.0;  // -4(s+2)/(3(s-2))
  std::vector<std::pair<double, double>> samples;  // (omega0, energy gap)
};

// Decay of the scaled TF energy toward 1 - s/2 along an increasing omega0
// list (all above the critical velocity).
TfRateCheck tf_rate_check(double s, const std::vector<double>& omega0_list);

struct RegimeSpec {
  Regime kind = Regime::Linear;
  double s = 4.0;
  double omega0 = 4.0;  // linear: omega = omega0/eps; sub: fixed omega
  double omega1 = 1.0;  // super only
  double alpha = 0.3;   // super only
  std::vector<double> epsilon_list;
  // Perturbing potential for asymptotically-homogeneous runs (optional).
  std::optional<TrapPotential> potential;
};

struct GridPolicy {
  int min_n = 96;
  int max_n = 384;
  double spacing_factor = 0.5;  // h <= factor * eps^(2/3)
  double box_factor = 2.0;      // box_radius = factor * r_out
  int round_to = 32;
};

Grid grid_for(const GridPolicy& policy, double epsilon, double r_out);

struct SweepRow {
  double epsilon = 0.0;
  double e_tf = 0.0;        // regime reference energy
  double e_gp_scaled = 0.0; // eps^2 E (and eps^(2 alpha s/(s-2)) more in super)
  double gap = 0.0;
  double l2_dist = 0.0;
  double tail_max = 0.0;
  bool valid = false;
  int iterations = 0;
};

struct SweepReport {
  RegimeSpec spec;
  std::vector<SweepRow> rows;
  std::string model;
  RateFit gap_fit;
  double target_exponent = 0.0;
  // Super regime carries two candidate rates; both are reported.
  std::optional<double> alt_target_exponent;
};

struct SweepOptions {
  GridPolicy grid;
  MinimizeOptions minimize;
  bool verbose = false;
};

SweepReport run_sweep(const RegimeSpec& spec, const SweepOptions& opt = {});

struct Concentration {
  double second_moment = 0.0;  // Int (|r|/r_m - 1)^2 |psi|^2
  double mass_in_shell = 0.0;  // mass within | |r|/r_m - 1 | <= halfwidth
};

// Concentration diagnostics of a state against the annulus |x| = 1 in units
// of the density-peak radius.
Concentration delta_concentration_check(const GpState& state, double r_m,
                                        double shell_halfwidth);

// Same diagnostics for the scaled TF density (quadrature).
Concentration tf_concentration(const tf::ScaledSolution& sc,
                               double shell_halfwidth);

}  // namespace rotbec
