#include "rotbec/trial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "rotbec/quadrature.hpp"

namespace rotbec {

namespace {

constexpr double kPi = std::numbers::pi;

// Contributions with kernel weight below exp(-kKernelReach) are dropped.
constexpr double kKernelReach = 45.0;

}  // namespace

RegularizedDensity::RegularizedDensity(const tf::Solution& tf_sol,
                                       double epsilon)
    : tf_(tf_sol), eps_(epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  r_max_ = tf_.r_out + kKernelReach * eps_;
  const int min_pts = 1024, max_pts = 20000;
  int n = std::clamp(int(std::ceil(r_max_ * 16.0 / eps_)), min_pts, max_pts);
  dr_ = r_max_ / (n - 1);
  table_.resize(n);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) table_[i] = evaluate_exact(i * dr_);
}

double RegularizedDensity::evaluate_exact(double r) const {
  const double lo = std::max(tf_.r_in, r - kKernelReach * eps_);
  const double hi = std::min(tf_.r_out, r + kKernelReach * eps_);
  if (hi <= lo) return 0.0;
  const double pref = 1.0 / (2.0 * kPi * eps_ * eps_);
  auto outer = [&](double rp) {
    // Angular integral of exp(-dist/eps) around the circle of radius rp,
    // clipped to the arc where the kernel is non-negligible.
    const double rrp = r * rp;
    double theta_hi = kPi;
    if (rrp > 0.0) {
      const double reach = kKernelReach * eps_;
      const double arg =
          (r * r + rp * rp - reach * reach) / (2.0 * rrp);
      if (arg >= 1.0) return 0.0;
      if (arg > -1.0) theta_hi = std::acos(arg);
    }
    auto inner = [&](double th) {
      const double d2 = r * r + rp * rp - 2.0 * rrp * std::cos(th);
      return std::exp(-std::sqrt(std::max(d2, 0.0)) / eps_);
    };
    const double ang =
        2.0 * integrate(inner, 0.0, theta_hi, {1e-13, 1e-10, 40});
    return rp * tf_.density(rp) * ang;
  };
  return pref * integrate(outer, lo, hi, {1e-13, 1e-10, 40});
}

double RegularizedDensity::operator()(double r) const {
  if (r < 0.0 || r >= r_max_) return 0.0;
  const double u = r / dr_;
  const int i = std::min(int(u), int(table_.size()) - 2);
  const double f = u - i;
  // Catmull-Rom through the four surrounding table points.
  const int n = int(table_.size());
  const double p0 = table_[std::max(i - 1, 0)];
  const double p1 = table_[i];
  const double p2 = table_[i + 1];
  const double p3 = table_[std::min(i + 2, n - 1)];
  const double v =
      p1 + 0.5 * f * (p2 - p0 +
                      f * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                           f * (3.0 * (p1 - p2) + p3 - p0)));
  return v > 0.0 ? v : 0.0;
}

double RegularizedDensity::mass() const {
  auto f = [&](double r) { return 2.0 * kPi * r * evaluate_exact(r); };
  return integrate(f, 0.0, r_max_, {1e-11, 1e-10, 40});
}

double RegularizedDensity::max_value() const {
  return *std::max_element(table_.begin(), table_.end());
}

double VortexLattice::cutoff_radius() const { return std::pow(epsilon, eta); }

VortexLattice build_vortex_lattice(double omega0, double epsilon,
                                   double r_out, double delta, double eta) {
  if (!(omega0 > 0.0)) throw std::invalid_argument("lattice needs omega0 > 0");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (delta <= 0.0) delta = std::sqrt(2.0 * kPi / omega0);
  VortexLattice lat;
  lat.delta = delta;
  lat.eta = eta;
  lat.epsilon = epsilon;
  lat.spacing = delta * std::sqrt(epsilon);
  if (lat.spacing >= r_out)
    throw std::invalid_argument("lattice spacing exceeds the TF radius");
  lat.clip_radius = 2.0 * r_out - 2.0 * std::sqrt(2.0) * lat.spacing;
  if (lat.clip_radius < 0.0) return lat;  // no sites fit
  const int mmax = int(std::floor(lat.clip_radius / lat.spacing));
  for (int m = -mmax; m <= mmax; ++m)
    for (int nn = -mmax; nn <= mmax; ++nn) {
      const double x = m * lat.spacing, y = nn * lat.spacing;
      if (std::hypot(x, y) <= lat.clip_radius) lat.sites.push_back({x, y});
    }
  return lat;
}

std::pair<std::complex<double>, double> phase_and_cutoff(
    const VortexLattice& lattice, double x, double y) {
  double phase = 0.0;
  double dmin = std::numeric_limits<double>::infinity();
  for (const auto& s : lattice.sites) {
    const double dx = x - s[0], dy = y - s[1];
    const double d = std::hypot(dx, dy);
    if (d == 0.0) return {{1.0, 0.0}, 0.0};
    phase += std::atan2(dy, dx);
    dmin = std::min(dmin, d);
  }
  double chi = 1.0;
  const double rc = lattice.cutoff_radius();
  if (!lattice.sites.empty() && dmin < rc) chi = dmin / rc;
  return {std::polar(1.0, phase), chi};
}

namespace {

// Unwraps arg(f) over `samples` points on the circle. Sound only when the
// sampling out-resolves the phase gradient; `strict` additionally demands
// every increment stay below pi/4.
template <typename F>
int unwrap_once(F& f, double cx, double cy, double radius, long samples,
                bool* strict_ok = nullptr) {
  double total = 0.0;
  double prev = std::arg(f(cx + radius, cy));
  bool strict = true;
  for (long k = 1; k <= samples; ++k) {
    const double th = 2.0 * kPi * double(k) / double(samples);
    const double a =
        std::arg(f(cx + radius * std::cos(th), cy + radius * std::sin(th)));
    double d = a - prev;
    while (d > kPi) d -= 2.0 * kPi;
    while (d < -kPi) d += 2.0 * kPi;
    if (std::abs(d) > 0.25 * kPi) strict = false;
    total += d;
    prev = a;
  }
  if (strict_ok) *strict_ok = strict;
  return int(std::lround(total / (2.0 * kPi)));
}

}  // namespace

int phase_winding(const VortexLattice& lattice, double cx, double cy,
                  double radius) {
  // |d arg(g)/ds| <= sum_j 1/dist(p, site_j), bounded on the circle by the
  // per-site clearance; choosing the sample count from that bound makes the
  // unwrapping alias-free (any geometric sampling growth can alias: a
  // winding W reads as W - m S for every divisor pattern).
  double grad_bound = 0.0;
  for (const auto& s : lattice.sites) {
    const double d =
        std::abs(std::hypot(cx - s[0], cy - s[1]) - radius);
    if (d < 1e-9)
      throw std::invalid_argument("winding contour passes through a site");
    grad_bound += 1.0 / d;
  }
  const long samples =
      std::clamp<long>(long(std::ceil(8.0 * radius * grad_bound)), 64,
                       8L * 1000 * 1000);
  auto f = [&](double x, double y) {
    return phase_and_cutoff(lattice, x, y).first;
  };
  return unwrap_once(f, cx, cy, radius, samples);
}

int field_winding(const GpState& state, double radius) {
  const Grid& g = state.grid;
  auto f = [&](double x, double y) {
    // Bilinear interpolation of the complex field.
    const double h = g.spacing();
    const double u = (x + g.box_radius) / h - 0.5;
    const double v = (y + g.box_radius) / h - 0.5;
    const int i = std::clamp(int(std::floor(u)), 0, g.n - 2);
    const int j = std::clamp(int(std::floor(v)), 0, g.n - 2);
    const double fu = u - i, fv = v - j;
    return (1 - fu) * (1 - fv) * state.field[g.index(i, j)] +
           fu * (1 - fv) * state.field[g.index(i + 1, j)] +
           (1 - fu) * fv * state.field[g.index(i, j + 1)] +
           fu * fv * state.field[g.index(i + 1, j + 1)];
  };
  // No a-priori gradient bound for a sampled field; demand small increments
  // and agreement across three sampling densities (ratios 2 and 3, so a
  // common alias would need to survive coprime sample counts).
  long samples = std::max(256, 8 * g.n);
  int w1, w2, w3;
  bool ok1, ok2, ok3;
  for (int pass = 0; pass < 10; ++pass) {
    w1 = unwrap_once(f, 0.0, 0.0, radius, samples, &ok1);
    w2 = unwrap_once(f, 0.0, 0.0, radius, 2 * samples, &ok2);
    w3 = unwrap_once(f, 0.0, 0.0, radius, 3 * samples, &ok3);
    if (ok1 && ok2 && ok3 && w1 == w2 && w2 == w3) return w1;
    samples *= 4;
  }
  return w3;
}

TrialState assemble_trial(const tf::Solution& tf_sol, double epsilon,
                          double omega0, const Grid& grid, double delta,
                          double eta) {
  RegularizedDensity rho(tf_sol, epsilon);
  TrialState trial;
  trial.smoothing_eps = epsilon;
  if (omega0 > 0.0)
    trial.lattice =
        build_vortex_lattice(omega0, epsilon, tf_sol.r_out, delta, eta);

  // Continuum normalization: the cutoff removes (pi rc^2 / 2) rho(site) per
  // site to leading order in the (tiny) cutoff radius.
  const double rc = trial.lattice.cutoff_radius();
  double removed = 0.0;
  for (const auto& s : trial.lattice.sites)
    removed += 0.5 * kPi * rc * rc * rho(std::hypot(s[0], s[1]));
  trial.c_eps_sq = 1.0 / (rho.mass() - removed);

  GpState st = make_state(grid, epsilon, omega0 / epsilon);
  const int n = grid.n;
  const double h = grid.spacing();
  const bool subgrid_cutoff = rc < 0.5 * h;
#pragma omp parallel for schedule(static)
  for (int iy = 0; iy < n; ++iy) {
    const double y = grid.coord(iy);
    for (int ix = 0; ix < n; ++ix) {
      const double x = grid.coord(ix);
      const double amp = std::sqrt(rho(std::hypot(x, y)));
      auto [g, chi] = phase_and_cutoff(trial.lattice, x, y);
      if (subgrid_cutoff) chi = 1.0;  // handled by cell zeroing below
      st.field[grid.index(ix, iy)] = amp * chi * g;
    }
  }
  if (subgrid_cutoff) {
    // The cutoff disk is unresolvable; zero the cell containing each site.
    for (const auto& s : trial.lattice.sites) {
      const int ix = int(std::floor((s[0] + grid.box_radius) / h));
      const int iy = int(std::floor((s[1] + grid.box_radius) / h));
      if (ix >= 0 && ix < n && iy >= 0 && iy < n)
        st.field[grid.index(ix, iy)] = 0.0;
    }
  }
  st.normalize();
  trial.state = std::move(st);
  return trial;
}

EnergyBreakdown trial_energy_upper_bound(const tf::Solution& tf_sol,
                                         double epsilon, double omega0,
                                         const Grid& grid, double delta,
                                         double eta) {
  const TrialState trial =
      assemble_trial(tf_sol, epsilon, omega0, grid, delta, eta);
  const double s = tf_sol.s;
  const GpCoeffs c = make_coeffs(grid, epsilon, omega0 / epsilon,
                                 [s](double r) { return std::pow(r, s); });
  return kernels::energy(c, trial.state.field, Exec::Parallel);
}

namespace {

double bump_norm_constant() {
  // pi Int j = 1 for j(u) = C exp(-1/(1 - 4u^2)) on (-1/2, 1/2).
  static const double c = [] {
    auto raw = [](double u) {
      const double w = 1.0 - 4.0 * u * u;
      return w > 0.0 ? std::exp(-1.0 / w) : 0.0;
    };
    return 1.0 / (kPi * integrate(raw, -0.5, 0.5, {1e-14, 1e-13, 40}));
  }();
  return c;
}

}  // namespace

double annulus_bump(double u) {
  const double w = 1.0 - 4.0 * u * u;
  if (w <= 0.0) return 0.0;
  return bump_norm_constant() * std::exp(-1.0 / w);
}

double annulus_bump_sqrt_derivative(double u) {
  // d/du sqrt(j(u)) = sqrt(j) * (-4u) / (1 - 4u^2)^2
  const double w = 1.0 - 4.0 * u * u;
  if (w <= 0.0) return 0.0;
  return std::sqrt(annulus_bump(u)) * (-4.0 * u) / (w * w);
}

GiantVortexTrial giant_vortex_trial(double xi, double epsilon, double omega1,
                                    double alpha, double s, const Grid& grid) {
  if (!(xi > 0.0 && xi < 1.0))
    throw std::invalid_argument("xi must lie in (0, 1)");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  const double omega = omega1 / std::pow(epsilon, 1.0 + alpha);
  const double omega0 = epsilon * omega;
  const double r_m = tf::density_peak_radius(s, omega0);

  GiantVortexTrial out;
  out.xi = xi;
  out.r_m = r_m;
  out.omega0 = omega0;
  out.winding = int(std::floor(0.5 * omega * r_m * r_m));

  GpState st = make_state(grid, epsilon, omega);
  const int n = grid.n;
#pragma omp parallel for schedule(static)
  for (int iy = 0; iy < n; ++iy) {
    const double y = grid.coord(iy);
    for (int ix = 0; ix < n; ++ix) {
      const double x = grid.coord(ix);
      const double xr = std::hypot(x, y);
      const double dens = annulus_bump((1.0 - xr * xr) / xi) / xi;
      if (dens > 0.0) {
        const double theta = std::atan2(y, x);
        st.field[grid.index(ix, iy)] =
            std::polar(std::sqrt(dens), out.winding * theta);
      }
    }
  }
  st.normalize();
  out.state_x = std::move(st);
  return out;
}

double giant_vortex_optimal_xi(double epsilon, double alpha, double s) {
  return std::sqrt(epsilon) *
         std::pow(epsilon, alpha * (s + 2.0) / (2.0 * (s - 2.0)));
}

}  // namespace rotbec
