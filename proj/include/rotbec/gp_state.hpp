#pragma once

#include <complex>
#include <vector>

namespace rotbec {

// Uniform Cartesian grid on the square [-box_radius, box_radius]^2 with
// cell-centered nodes; the field is treated as zero outside (hard wall).
struct Grid {
  int n = 0;              // points per side, even, >= 16
  double box_radius = 0;  // physical half-width

  double spacing() const { return 2.0 * box_radius / n; }
  double coord(int i) const { return -box_radius + (i + 0.5) * spacing(); }
  std::size_t size() const { return std::size_t(n) * n; }
  std::size_t index(int ix, int iy) const {
    return std::size_t(iy) * n + ix;
  }
  bool operator==(const Grid&) const = default;
};

Grid make_grid(int n, double box_radius);  // validates n even, >= 16

// Condensate wave function on a Grid, with the coupling eps and angular
// velocity omega it is being solved at. Row-major, x fastest.
struct GpState {
  Grid grid;
  double epsilon = 0.1;
  double omega = 0.0;
  std::vector<std::complex<double>> field;

  double norm() const;          // discrete L2 with cell-area weights
  void normalize();             // scales to unit norm
  double density(std::size_t k) const { return std::norm(field[k]); }
};

GpState make_state(const Grid& grid, double epsilon, double omega);

// Real L2 inner product h^2 Re <a, b>.
double inner(const GpState& a, const std::vector<std::complex<double>>& b);

}  // namespace rotbec
