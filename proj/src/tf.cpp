#include "rotbec/tf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "rotbec/quadrature.hpp"

namespace rotbec::tf {

namespace {

constexpr double kPi = std::numbers::pi;

void require_exponent(double s) {
  if (!(s > 2.0))
    throw std::invalid_argument("trap exponent must satisfy s > 2");
}

// f(z) = mu - z^(s/2) + t z with z = r^2; rho = (1/2) f(r^2)_+.
// f is strictly concave for z > 0, so it has at most two positive roots.
struct SupportSolver {
  double s, t;  // t = omega0^2 / 4

  double f(double mu, double z) const {
    return mu - std::pow(z, 0.5 * s) + t * z;
  }
  double df(double z) const {
    return -0.5 * s * std::pow(z, 0.5 * s - 1.0) + t;
  }
  // Argmax of -z^(s/2) + t z (zero when not rotating).
  double z_peak() const {
    if (t <= 0.0) return 0.0;
    return std::pow(2.0 * t / s, 2.0 / (s - 2.0));
  }
  // Max of -z^(s/2) + t z; support is nonempty iff mu + peak_value > 0.
  double peak_value() const {
    const double zm = z_peak();
    return t * zm - std::pow(zm, 0.5 * s);
  }

  // Safeguarded Newton for f(mu, z) = 0 on a bracket [lo, hi] with
  // f(lo) and f(hi) of opposite sign.
  double root(double mu, double lo, double hi) const {
    double flo = f(mu, lo);
    double z = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
      const double fz = f(mu, z);
      if (fz == 0.0) return z;
      if ((fz > 0.0) == (flo > 0.0)) {
        lo = z;
        flo = fz;
      } else {
        hi = z;
      }
      const double d = df(z);
      double znew = (d != 0.0) ? z - fz / d : 0.5 * (lo + hi);
      if (!(znew > lo && znew < hi)) znew = 0.5 * (lo + hi);
      if (std::abs(znew - z) <= 1e-16 * std::max(1.0, std::abs(z))) return znew;
      z = znew;
    }
    return z;
  }

  // Support [z_in, z_out] for a given mu; empty support collapses to the peak.
  void radii(double mu, double& z_in, double& z_out) const {
    const double zm = z_peak();
    if (mu + peak_value() <= 0.0) {
      z_in = z_out = zm;
      return;
    }
    if (mu >= 0.0) {
      z_in = 0.0;
    } else {
      z_in = root(mu, 0.0, zm);
    }
    double hi = std::max(2.0 * std::max(zm, 1e-12), 1.0);
    while (f(mu, hi) > 0.0) hi *= 2.0;
    z_out = root(mu, std::max(zm, z_in), hi);
  }

  // Mass 2 pi Int r rho dr as a function of mu, by quadrature of the
  // positive integrand (the closed-form antiderivative difference loses
  // digits to cancellation at large t).
  double mass(double mu) const {
    double z_in, z_out;
    radii(mu, z_in, z_out);
    if (z_out <= z_in) return 0.0;
    const double r_in = std::sqrt(z_in), r_out = std::sqrt(z_out);
    auto integrand = [&](double r) {
      const double v = f(mu, r * r);
      return v > 0.0 ? kPi * r * v : 0.0;
    };
    return integrate(integrand, r_in, r_out, {1e-14, 1e-13, 48});
  }
};

}  // namespace

double Solution::density(double r) const {
  if (r < r_in || r > r_out) return 0.0;
  const double v = mu - std::pow(r, s) + 0.25 * omega0 * omega0 * r * r;
  return v > 0.0 ? 0.5 * v : 0.0;
}

double ScaledSolution::density(double x) const {
  if (x < x_in || x > x_out) return 0.0;
  const double scale = std::pow(r_m, s + 2.0);
  const double v = mu_tilde - std::pow(x, s) + 0.5 * s * x * x;
  return v > 0.0 ? 0.5 * scale * v : 0.0;
}

double density_peak_radius(double s, double omega0) {
  require_exponent(s);
  if (!(omega0 > 0.0))
    throw std::invalid_argument("density peak radius needs omega0 > 0");
  return std::pow(omega0 * omega0 / (2.0 * s), 1.0 / (s - 2.0));
}

Critical critical_velocity(double s) {
  require_exponent(s);
  Critical c;
  c.omega_c =
      2.0 * std::pow(4.0 * (s + 2.0) / (kPi * (s - 2.0)),
                     (s - 2.0) / (2.0 * (s + 2.0)));
  c.r_out_c = std::pow(0.5 * c.omega_c, 2.0 / (s - 2.0));
  return c;
}

Solution solve(double s, double omega0) {
  require_exponent(s);
  if (omega0 < 0.0) throw std::invalid_argument("omega0 must be >= 0");
  const SupportSolver sup{s, 0.25 * omega0 * omega0};

  // Bracket mu: mass -> 0 as mu -> -peak_value, grows without bound above.
  double mu_lo = -sup.peak_value();
  double mu_hi = std::max(mu_lo + 1.0, 1.0);
  while (sup.mass(mu_hi) < 1.0) mu_hi = mu_lo + 2.0 * (mu_hi - mu_lo);

  // Bisection to tighten, then Newton with dM/dmu = pi (z_out - z_in)/2.
  double mu = 0.5 * (mu_lo + mu_hi);
  for (int it = 0; it < 20; ++it) {
    mu = 0.5 * (mu_lo + mu_hi);
    (sup.mass(mu) < 1.0 ? mu_lo : mu_hi) = mu;
  }
  mu = 0.5 * (mu_lo + mu_hi);
  for (int it = 0; it < 60; ++it) {
    const double m = sup.mass(mu);
    if (m < 1.0)
      mu_lo = std::max(mu_lo, mu);
    else
      mu_hi = std::min(mu_hi, mu);
    double z_in, z_out;
    sup.radii(mu, z_in, z_out);
    const double dm = 0.5 * kPi * (z_out - z_in);
    if (std::abs(m - 1.0) <= 1e-13) break;
    double mu_new = (dm > 0.0) ? mu - (m - 1.0) / dm : 0.5 * (mu_lo + mu_hi);
    if (!(mu_new > mu_lo && mu_new < mu_hi)) mu_new = 0.5 * (mu_lo + mu_hi);
    if (mu_new == mu) break;
    mu = mu_new;
  }

  double z_in, z_out;
  sup.radii(mu, z_in, z_out);
  Solution sol;
  sol.s = s;
  sol.omega0 = omega0;
  sol.mu = mu;
  // At the critical velocity mu = 0 up to solver tolerance; the degenerate
  // double root at the origin is reported as no hole.
  sol.r_in = mu >= -1e-12 ? 0.0 : std::sqrt(z_in);
  sol.r_out = std::sqrt(z_out);
  sol.energy = mu - norm2_squared(sol);
  return sol;
}

Solution quartic_closed_form(double omega0) {
  if (omega0 < 0.0) throw std::invalid_argument("omega0 must be >= 0");
  const double w2 = omega0 * omega0;
  const double w4 = w2 * w2;
  const double w6 = w4 * w2;
  const Critical crit = critical_velocity(4.0);
  Solution sol;
  sol.s = 4.0;
  sol.omega0 = omega0;
  if (omega0 <= crit.omega_c) {
    const double q = 6144.0 + kPi * w6 +
                     64.0 * std::sqrt(3.0) * std::sqrt(3072.0 + kPi * w6);
    const double a = std::cbrt(q / kPi);
    const double b = 0.5 * a + 0.5 * w4 / a - 0.5 * w2;
    sol.mu = b * b / 64.0 - w4 / 64.0;
    sol.r_in = 0.0;
    sol.r_out = 0.25 * std::sqrt(a + w4 / a + w2);
  } else {
    const double c13 = std::cbrt(12.0 / kPi);
    sol.mu = 0.25 * c13 * c13 - w4 / 64.0;
    sol.r_in = std::sqrt(w2 / 8.0 - 0.5 * c13);
    sol.r_out = std::sqrt(w2 / 8.0 + 0.5 * c13);
  }
  sol.energy = sol.mu - norm2_squared(sol);
  return sol;
}

double h_shape(double s, double x) {
  // x^s - (s/2) x^2 + s/2 - 1 = (x^s - 1) - (s/2)(x^2 - 1), with both
  // differences formed cancellation-free via expm1/log1p.
  const double u = x - 1.0;
  const double xs_m1 = std::expm1(s * std::log1p(u));
  return xs_m1 - 0.5 * s * u * (x + 1.0);
}

double h_shape_derivative(double s, double x) {
  // s (x^(s-1) - x) = s x (x^(s-2) - 1)
  const double u = x - 1.0;
  return s * x * std::expm1((s - 2.0) * std::log1p(u));
}

double hole_width_delta(double s, double omega0) {
  require_exponent(s);
  // From the scaled normalization with h(x) ~ (s(s-2)/2)(1-x)^2 near x = 1:
  // (2/3) s(s-2) delta^3 = pi^-1 (omega0^2/2s)^-((s+2)/(s-2)).
  return std::pow(3.0 / (2.0 * kPi * s * (s - 2.0)), 1.0 / 3.0) *
         std::pow(omega0 * omega0 / (2.0 * s),
                  -(s + 2.0) / (3.0 * (s - 2.0)));
}

namespace {

// Scaled-frame support radii for h(x) = theta around x = 1.
// Inner root exists only while theta < h(0) = s/2 - 1.
void scaled_radii(double s, double theta, double& x_in, double& x_out) {
  auto newton = [&](double lo, double hi, double x0) {
    double x = x0;
    double glo = h_shape(s, lo) - theta;
    for (int it = 0; it < 200; ++it) {
      const double g = h_shape(s, x) - theta;
      if ((g > 0.0) == (glo > 0.0)) {
        lo = x;
        glo = g;
      } else {
        hi = x;
      }
      const double d = h_shape_derivative(s, x);
      double xn = (d != 0.0) ? x - g / d : 0.5 * (lo + hi);
      if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
      if (std::abs(xn - x) <= 1e-17 * std::max(1.0, std::abs(x))) return xn;
      x = xn;
    }
    return x;
  };
  if (theta >= 0.5 * s - 1.0) {
    x_in = 0.0;
  } else {
    x_in = newton(0.0, 1.0, std::max(0.5, 1.0 - std::sqrt(
        2.0 * theta / (s * (s - 2.0)))));
  }
  double hi = 1.5;
  while (h_shape(s, hi) < theta) hi *= 1.5;
  x_out = newton(1.0, hi, std::min(hi, 1.0 + std::sqrt(
      2.0 * theta / (s * (s - 2.0)))));
}

// Scaled mass as a function of theta = mu_tilde + s/2 - 1:
//   M(theta) = pi r_m^(s+2) Int x (theta - h(x)) dx over [x_in, x_out].
double scaled_mass(double s, double scale, double theta, double& x_in,
                   double& x_out) {
  scaled_radii(s, theta, x_in, x_out);
  auto integrand = [&](double x) {
    const double v = theta - h_shape(s, x);
    return v > 0.0 ? x * v : 0.0;
  };
  return kPi * scale *
         integrate(integrand, x_in, x_out, {1e-300, 1e-13, 48});
}

}  // namespace

ScaledSolution scaled_solve(double s, double omega0) {
  require_exponent(s);
  const double r_m = density_peak_radius(s, omega0);
  const double scale = std::pow(r_m, s + 2.0);  // = (omega0^2/2s)^((s+2)/(s-2))

  double x_in, x_out;
  double th_lo = 0.0;
  double th_hi = std::max(1.0, 2.0 / scale);
  while (scaled_mass(s, scale, th_hi, x_in, x_out) < 1.0) th_hi *= 2.0;
  double theta = 0.5 * th_hi;
  for (int it = 0; it < 200; ++it) {
    theta = 0.5 * (th_lo + th_hi);
    const double m = scaled_mass(s, scale, theta, x_in, x_out);
    (m < 1.0 ? th_lo : th_hi) = theta;
    if (th_hi - th_lo <= 1e-15 * th_hi) break;
  }
  theta = 0.5 * (th_lo + th_hi);
  scaled_radii(s, theta, x_in, x_out);

  ScaledSolution sc;
  sc.s = s;
  sc.omega0 = omega0;
  sc.x_in = x_in;
  sc.x_out = x_out;
  sc.mu_tilde = theta - 0.5 * s + 1.0;
  sc.r_m = r_m;

  // energy_tilde = (1 - s/2) + Int h rho_tilde + r_m^-(s+2) Int rho_tilde^2,
  // both gap terms positive and free of large-number cancellation.
  auto gap1 = [&](double x) {
    const double v = theta - h_shape(s, x);
    return v > 0.0 ? kPi * scale * x * h_shape(s, x) * v : 0.0;
  };
  auto gap2 = [&](double x) {
    const double v = theta - h_shape(s, x);
    return v > 0.0 ? 0.5 * kPi * scale * x * v * v : 0.0;
  };
  const double g1 = integrate(gap1, x_in, x_out, {1e-300, 1e-12, 48});
  const double g2 = integrate(gap2, x_in, x_out, {1e-300, 1e-12, 48});
  sc.energy_tilde = 1.0 - 0.5 * s + g1 + g2;
  return sc;
}

ScaledSolution scaled_from(const Solution& sol) {
  const double r_m = density_peak_radius(sol.s, sol.omega0);
  const double inv = std::pow(r_m, -sol.s);
  ScaledSolution sc;
  sc.s = sol.s;
  sc.omega0 = sol.omega0;
  sc.x_in = sol.r_in / r_m;
  sc.x_out = sol.r_out / r_m;
  sc.mu_tilde = inv * sol.mu;
  sc.energy_tilde = inv * sol.energy;
  sc.r_m = r_m;
  return sc;
}

double functional_value(const std::function<double(double)>& rho,
                        double r_max, double s, double omega0,
                        std::initializer_list<double> breakpoints) {
  const double t = 0.25 * omega0 * omega0;
  auto mass_i = [&](double r) { return 2.0 * kPi * r * rho(r); };
  const double m =
      integrate_pieces(mass_i, 0.0, r_max, breakpoints, {1e-11, 1e-11, 48});
  if (std::abs(m - 1.0) > 1e-6)
    throw std::invalid_argument("density mass deviates from 1 beyond 1e-6");
  auto energy_i = [&](double r) {
    const double p = rho(r);
    return 2.0 * kPi * r * (p * (std::pow(r, s) + p) - t * r * r * p);
  };
  return integrate_pieces(energy_i, 0.0, r_max, breakpoints,
                          {1e-12, 1e-12, 48});
}

double mass(const Solution& sol) {
  auto f = [&](double r) { return 2.0 * kPi * r * sol.density(r); };
  return integrate(f, sol.r_in, sol.r_out, {1e-14, 1e-13, 48});
}

double norm2_squared(const Solution& sol) {
  auto f = [&](double r) {
    const double p = sol.density(r);
    return 2.0 * kPi * r * p * p;
  };
  return integrate(f, sol.r_in, sol.r_out, {1e-14, 1e-13, 48});
}

double energy_by_quadrature(const Solution& sol) {
  const double t = 0.25 * sol.omega0 * sol.omega0;
  auto f = [&](double r) {
    const double p = sol.density(r);
    return 2.0 * kPi * r *
           (p * (std::pow(r, sol.s) + p) - t * r * r * p);
  };
  return integrate(f, sol.r_in, sol.r_out, {1e-13, 1e-13, 48});
}

double dmu_dt_identity(const Solution& sol) {
  if (sol.has_hole())
    return -0.5 * (sol.r_out * sol.r_out + sol.r_in * sol.r_in);
  return -0.5 * sol.r_out * sol.r_out;
}

}  // namespace rotbec::tf
