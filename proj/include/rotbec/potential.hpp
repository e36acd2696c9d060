#pragma once

#include <functional>
#include <string>
#include <vector>

namespace rotbec {

// Radial trap potential. Either exactly homogeneous (V = r^s) or a general
// radial potential declared asymptotically homogeneous of degree s:
//   | lambda^-s V(lambda r) - r^s | <= c lambda^-kappa (1 + r^s)
// for all lambda >= 1, r >= 0.
struct TrapPotential {
  enum class Kind { Homogeneous, General };

  Kind kind = Kind::Homogeneous;
  double s = 4.0;
  double kappa = 0.0;  // general only
  double c = 0.0;      // general only
  // Polynomial terms (coefficient, exponent); used when no evaluator is set.
  std::vector<std::pair<double, double>> terms;
  std::function<double(double)> evaluator;  // overrides terms when set

  double operator()(double r) const;

  static TrapPotential homogeneous(double s);
  static TrapPotential general(double s, double kappa, double c,
                               std::vector<std::pair<double, double>> terms);
};

struct HomogeneityReport {
  bool holds = false;
  double worst_ratio = 0.0;  // max |lambda^-s V(lambda r) - r^s| / bound
  double worst_lambda = 0.0;
  double worst_r = 0.0;
};

// Pointwise check of the asymptotic-homogeneity bound on the sampled grids.
// Throws std::invalid_argument for kind == Homogeneous (vacuous) or for
// lambda < 1 / r < 0 samples.
HomogeneityReport asym_homogeneity_check(const TrapPotential& V,
                                         const std::vector<double>& lambdas,
                                         const std::vector<double>& radii);

// Default check grids: lambda in {1, 2, ..., 2^10}, 200 log-spaced radii in
// [1e-3, 1e3].
HomogeneityReport asym_homogeneity_check(const TrapPotential& V);

// Length/energy rescaling linking the original and coupling-rescaled ground
// state problems: lengths shrink by k = eps^(-2/(s+2)), energies relate by
// E_original = eps^(4/(s+2)) E_rescaled.
struct LengthRescaling {
  double k = 1.0;
  double energy_factor = 1.0;
};
LengthRescaling rescale_lengths(double epsilon, double s);

// The rescaled external potential r -> lambda^-s V(lambda r) with
// lambda = eps^(-2/(s-2)), as it enters the general-potential functional.
// (Note: this lambda is a different power of eps than rescale_lengths' k;
// both conventions are exposed as-is.)
std::function<double(double)> rescaled_general_potential(
    const TrapPotential& V, double epsilon);

}  // namespace rotbec
