#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rotbec/quadrature.hpp"

using rotbec::integrate;

TEST_CASE("polynomials are integrated exactly") {
  auto cubic = [](double x) { return 3.0 * x * x - 2.0 * x + 1.0; };
  CHECK(integrate(cubic, -1.0, 2.0) == doctest::Approx(9.0).epsilon(1e-14));
}

TEST_CASE("smooth integrand to tight tolerance") {
  auto f = [](double x) { return std::exp(-x) * std::sin(5.0 * x); };
  // Antiderivative: -e^-x (sin 5x + 5 cos 5x)/26
  auto F = [](double x) {
    return -std::exp(-x) * (std::sin(5.0 * x) + 5.0 * std::cos(5.0 * x)) / 26.0;
  };
  const double exact = F(3.0) - F(0.0);
  CHECK(std::abs(integrate(f, 0.0, 3.0) - exact) < 1e-12);
}

TEST_CASE("kinked integrand is split adaptively") {
  auto f = [](double x) { return std::abs(x - 0.3); };
  const double exact = 0.5 * (0.3 * 0.3 + 0.7 * 0.7);
  CHECK(std::abs(integrate(f, 0.0, 1.0) - exact) < 1e-12);
}

TEST_CASE("narrow peak resolved by relative tolerance") {
  const double eps = 1e-3;
  auto f = [eps](double x) { return std::exp(-std::abs(x - 0.5) / eps); };
  const double exact = 2.0 * eps * (1.0 - std::exp(-0.5 / eps));
  const double got = integrate(f, 0.0, 1.0, {1e-300, 1e-12, 48});
  CHECK(std::abs(got - exact) / exact < 1e-10);
}

TEST_CASE("gaussian mass") {
  auto f = [](double r) {
    return 2.0 * std::numbers::pi * r * std::exp(-r * r) / std::numbers::pi;
  };
  CHECK(std::abs(integrate(f, 0.0, 10.0) - 1.0) < 1e-12);
}
