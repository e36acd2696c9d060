#include "rotbec/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace rotbec {

double TrapPotential::operator()(double r) const {
  if (evaluator) return evaluator(r);
  if (kind == Kind::Homogeneous) return std::pow(r, s);
  double v = 0.0;
  for (const auto& [coeff, expo] : terms) v += coeff * std::pow(r, expo);
  return v;
}

TrapPotential TrapPotential::homogeneous(double s) {
  TrapPotential p;
  p.kind = Kind::Homogeneous;
  p.s = s;
  return p;
}

TrapPotential TrapPotential::general(
    double s, double kappa, double c,
    std::vector<std::pair<double, double>> terms) {
  TrapPotential p;
  p.kind = Kind::General;
  p.s = s;
  p.kappa = kappa;
  p.c = c;
  p.terms = std::move(terms);
  return p;
}

HomogeneityReport asym_homogeneity_check(const TrapPotential& V,
                                         const std::vector<double>& lambdas,
                                         const std::vector<double>& radii) {
  if (V.kind == TrapPotential::Kind::Homogeneous)
    throw std::invalid_argument(
        "homogeneity check is vacuous for an exactly homogeneous potential");
  if (!(V.c > 0.0) || !(V.kappa > 0.0))
    throw std::invalid_argument("general potential needs kappa, c > 0");
  HomogeneityReport rep;
  rep.holds = true;
  for (double lam : lambdas) {
    if (lam < 1.0) throw std::invalid_argument("lambda samples must be >= 1");
    const double lam_s = std::pow(lam, -V.s);
    const double decay = V.c * std::pow(lam, -V.kappa);
    for (double r : radii) {
      if (r < 0.0) throw std::invalid_argument("radius samples must be >= 0");
      const double rs = std::pow(r, V.s);
      const double dev = std::abs(lam_s * V(lam * r) - rs);
      const double ratio = dev / (decay * (1.0 + rs));
      if (ratio > rep.worst_ratio) {
        rep.worst_ratio = ratio;
        rep.worst_lambda = lam;
        rep.worst_r = r;
      }
    }
  }
  rep.holds = rep.worst_ratio <= 1.0;
  return rep;
}

HomogeneityReport asym_homogeneity_check(const TrapPotential& V) {
  std::vector<double> lambdas;
  for (int k = 0; k <= 10; ++k) lambdas.push_back(std::pow(2.0, k));
  std::vector<double> radii;
  const int n = 200;
  for (int i = 0; i < n; ++i)
    radii.push_back(std::pow(10.0, -3.0 + 6.0 * i / (n - 1.0)));
  return asym_homogeneity_check(V, lambdas, radii);
}

LengthRescaling rescale_lengths(double epsilon, double s) {
  if (!(epsilon > 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("epsilon must lie in (0, 1]");
  if (!(s > 2.0)) throw std::invalid_argument("s must be > 2");
  LengthRescaling r;
  r.k = std::pow(epsilon, -2.0 / (s + 2.0));
  r.energy_factor = std::pow(epsilon, 4.0 / (s + 2.0));
  return r;
}

std::function<double(double)> rescaled_general_potential(
    const TrapPotential& V, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (V.kind == TrapPotential::Kind::Homogeneous) {
    const double s = V.s;
    return [s](double r) { return std::pow(r, s); };
  }
  const double lambda = std::pow(epsilon, -2.0 / (V.s - 2.0));
  const double lam_s = std::pow(lambda, -V.s);
  return [V, lambda, lam_s](double r) { return lam_s * V(lambda * r); };
}

}  // namespace rotbec
