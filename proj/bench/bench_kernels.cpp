// Timing comparison of the serial reference kernels against the OpenMP
// parallel path on the grid sizes the solver actually uses.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "rotbec/gp.hpp"
#include "rotbec/kernels.hpp"

using namespace rotbec;
using clock_type = std::chrono::steady_clock;

namespace {

GpState random_state(int n, double box, unsigned seed) {
  GpState st = make_state(make_grid(n, box), 0.05, 80.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  for (auto& v : st.field) v = {d(rng), d(rng)};
  st.normalize();
  return st;
}

double time_ms(int reps, auto&& fn) {
  fn();  // warm up
  const auto t0 = clock_type::now();
  for (int r = 0; r < reps; ++r) fn();
  const auto t1 = clock_type::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main() {
  std::printf("%-22s %6s %12s %12s %8s\n", "kernel", "n", "serial[ms]",
              "openmp[ms]", "speedup");
  for (int n : {128, 256, 384}) {
    const GpState st = random_state(n, 3.3, 42);
    const GpCoeffs c = make_coeffs(st.grid, st.epsilon, st.omega,
                                   [](double r) { return std::pow(r, 4.0); });
    cvec phix, phiy, grad;
    const int reps = n <= 256 ? 20 : 10;

    const double d_s = time_ms(reps, [&] {
      kernels::gauge_derivatives(c, st.field, phix, phiy, Exec::Serial);
    });
    const double d_p = time_ms(reps, [&] {
      kernels::gauge_derivatives(c, st.field, phix, phiy, Exec::Parallel);
    });
    std::printf("%-22s %6d %12.3f %12.3f %8.2f\n", "gauge_derivatives", n,
                d_s, d_p, d_s / d_p);

    kernels::gauge_derivatives(c, st.field, phix, phiy, Exec::Serial);
    const double g_s = time_ms(reps, [&] {
      kernels::gradient(c, st.field, phix, phiy, grad, Exec::Serial);
    });
    const double g_p = time_ms(reps, [&] {
      kernels::gradient(c, st.field, phix, phiy, grad, Exec::Parallel);
    });
    std::printf("%-22s %6d %12.3f %12.3f %8.2f\n", "gradient", n, g_s, g_p,
                g_s / g_p);

    const double e_s = time_ms(
        reps, [&] { kernels::energy(c, st.field, Exec::Serial); });
    const double e_p = time_ms(
        reps, [&] { kernels::energy(c, st.field, Exec::Parallel); });
    std::printf("%-22s %6d %12.3f %12.3f %8.2f\n", "energy", n, e_s, e_p,
                e_s / e_p);
  }

  // End-to-end: a short minimization run with both policies.
  for (int n : {128, 256}) {
    GpState st = random_state(n, 3.3, 7);
    MinimizeOptions opt;
    opt.max_iterations = 60;
    opt.settle_steps = 1000;  // force the full iteration budget
    auto pot = [](double r) { return std::pow(r, 4.0); };
    MinimizeOptions so = opt;
    so.exec = Exec::Serial;
    const auto t0 = clock_type::now();
    minimize_gp(st, pot, so);
    const auto t1 = clock_type::now();
    MinimizeOptions po = opt;
    po.exec = Exec::Parallel;
    minimize_gp(st, pot, po);
    const auto t2 = clock_type::now();
    const double ms_s = std::chrono::duration<double, std::milli>(t1 - t0).count();
    const double ms_p = std::chrono::duration<double, std::milli>(t2 - t1).count();
    std::printf("%-22s %6d %12.3f %12.3f %8.2f\n", "minimize(60 iters)", n,
                ms_s, ms_p, ms_s / ms_p);
  }
  return 0;
}
