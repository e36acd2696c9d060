#include "rotbec/gp_state.hpp"

#include <cmath>
#include <stdexcept>

namespace rotbec {

Grid make_grid(int n, double box_radius) {
  if (n < 16 || n % 2 != 0)
    throw std::invalid_argument("grid size must be even and >= 16");
  if (!(box_radius > 0.0))
    throw std::invalid_argument("box radius must be positive");
  return Grid{n, box_radius};
}

GpState make_state(const Grid& grid, double epsilon, double omega) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  GpState st;
  st.grid = grid;
  st.epsilon = epsilon;
  st.omega = omega;
  st.field.assign(grid.size(), {0.0, 0.0});
  return st;
}

double GpState::norm() const {
  const double h2 = grid.spacing() * grid.spacing();
  double acc = 0.0;
  for (const auto& v : field) acc += std::norm(v);
  return std::sqrt(h2 * acc);
}

void GpState::normalize() {
  const double nrm = norm();
  if (!(nrm > 0.0)) throw std::runtime_error("cannot normalize zero state");
  const double inv = 1.0 / nrm;
  for (auto& v : field) v *= inv;
}

double inner(const GpState& a, const std::vector<std::complex<double>>& b) {
  const double h2 = a.grid.spacing() * a.grid.spacing();
  double acc = 0.0;
  for (std::size_t k = 0; k < a.field.size(); ++k)
    acc += a.field[k].real() * b[k].real() + a.field[k].imag() * b[k].imag();
  return h2 * acc;
}

}  // namespace rotbec
