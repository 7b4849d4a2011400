#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hedgenet/quadrature.hpp"

using namespace hedgenet;

TEST_CASE("gaussian integral") {
  auto f = [](double x) { return std::exp(-x * x); };
  CHECK(integrate(f, -20.0, 20.0, 1e-12) ==
        doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("localized bump inside a wide range") {
  auto f = [](double x) { return std::exp(-100.0 * (x - 3.0) * (x - 3.0)); };
  CHECK(integrate(f, -40.0, 40.0, 1e-11) ==
        doctest::Approx(std::sqrt(std::numbers::pi) / 10.0).epsilon(1e-9));
}

TEST_CASE("kink handled via breakpoints") {
  auto f = [](double x) { return std::max(x - 0.3, 0.0); };
  const double exact = 0.5 * 0.7 * 0.7;
  CHECK(integrate_segments(f, {-1.0, 0.3, 1.0}, 1e-12) == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("oscillatory integrand") {
  auto f = [](double x) { return std::cos(x) * std::exp(-0.1 * x * x); };
  // closed form: sqrt(pi/a) exp(-1/(4a)) for integral cos(x) e^{-a x^2}
  const double exact = std::sqrt(std::numbers::pi / 0.1) * std::exp(-1.0 / 0.4);
  CHECK(integrate(f, -40.0, 40.0, 1e-11) == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("tolerance failure carries the achieved estimate") {
  auto f = [](double x) { return std::sqrt(std::abs(x)); };
  bool threw = false;
  try {
    integrate(f, -1.0, 1.0, 1e-16, 32);  // budget far too small
  } catch (const ToleranceError& e) {
    threw = true;
    CHECK(e.achieved_value == doctest::Approx(4.0 / 3.0).epsilon(1e-2));
    CHECK(e.achieved_error > 0.0);
  }
  CHECK(threw);
}

TEST_CASE("2d quadrature with inner splits") {
  // integral over [0,1]^2 of |y - x| dx dy = 1/3
  auto f = [](double x, double y) { return std::abs(y - x); };
  auto splits = [](double x) { return std::vector<double>{x}; };
  CHECK(integrate_2d(f, 0.0, 1.0, 0.0, 1.0, 1e-10, splits) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("2d separable gaussian") {
  auto f = [](double x, double y) { return std::exp(-x * x - 2.0 * y * y); };
  const double exact = std::sqrt(std::numbers::pi) * std::sqrt(std::numbers::pi / 2.0);
  CHECK(integrate_2d(f, -10.0, 10.0, -10.0, 10.0, 1e-9) == doctest::Approx(exact).epsilon(1e-9));
}
