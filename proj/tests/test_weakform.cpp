#include <doctest.h>

#include <stdexcept>
#include <cmath>
#include <numbers>

#include "hedgenet/weakform.hpp"

using namespace hedgenet;

TEST_CASE("envelope certificates hold and are enforced") {
  check_envelope(gaussian_fn(1.0));
  check_envelope(gaussian_fn(0.5, 2.5, 0.7));
  check_envelope(poly_gaussian_fn(1.0));
  TestFunction1D lying = gaussian_fn(1.0);
  lying.envelope_rate = 50.0;  // claims far faster decay than the function has
  lying.envelope_scale = 1e-6;
  CHECK_THROWS_AS(check_envelope(lying), std::invalid_argument);
}

TEST_CASE("cpv of an even function at the origin vanishes") {
  CHECK(cpv(gaussian_fn(1.0), 0.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("cpv matches the closed form for the unit gaussian") {
  // Hilbert pairing of e^{-w^2} at c: -pi e^{-c^2} erfi(c); at c=1 the value
  // is about -1.9074421882.
  CHECK(cpv(gaussian_fn(1.0), 1.0) == doctest::Approx(-1.9074421881871451).epsilon(1e-10));
}

TEST_CASE("cpv engine vs the epsilon-limit oracle") {
  QuadratureSpec q;
  for (const auto& phi : {gaussian_fn(1.0), gaussian_fn(0.5, 2.5), poly_gaussian_fn(1.0)}) {
    for (double c : {-2.0, 0.5, 3.0}) {
      CAPTURE(phi.id);
      CAPTURE(c);
      CHECK(cpv(phi, c, q) == doctest::Approx(cpv_eps_limit(phi, c, q)).epsilon(1e-8));
    }
  }
}

TEST_CASE("cpv linearity") {
  const TestFunction1D f1 = gaussian_fn(1.0);
  const TestFunction1D f2 = gaussian_fn(2.0, 0.7);
  const TestFunction1D combo = combine(1.3, f1, -0.4, f2);
  for (double c : {-1.0, 0.25, 2.0}) {
    CHECK(cpv(combo, c) ==
          doctest::Approx(1.3 * cpv(f1, c) - 0.4 * cpv(f2, c)).epsilon(1e-10));
  }
}

TEST_CASE("t1 action") {
  CHECK(t1_action(gaussian_fn(1.0)) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(t1_action(poly_gaussian_fn(1.0)) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  TestFunction1D constant;
  constant.id = "const";
  constant.f = [](double) { return 4.2; };
  constant.df = [](double) { return 0.0; };
  CHECK(t1_action(constant) == doctest::Approx(4.2));
}

TEST_CASE("tnbis at d=1: fourier route equals the T^1 action") {
  const auto pair = gaussian_pair(1.0, 1.0);
  CHECK(tnbis_d1_lhs(pair.inv_ft1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
}

TEST_CASE("t2 action: symmetry and bilinearity") {
  QuadratureSpec q;
  q.abs_tol = 1e-7;
  const TestFunction1D a = gaussian_fn(1.0);
  const TestFunction1D b = gaussian_fn(2.0);
  CHECK(t2_action(a, b, q) == doctest::Approx(t2_action(b, a, q)).epsilon(1e-8));
  CHECK(t2_action(gaussian_fn(1.0, 2.0), b, q) ==
        doctest::Approx(2.0 * t2_action(a, b, q)).epsilon(1e-8));
}

TEST_CASE("tnbis at d=2 for gaussian pairs") {
  QuadratureSpec q;
  q.abs_tol = 1e-7;
  for (auto rates : {std::pair{1.0, 1.0}, {1.0, 2.0}}) {
    const auto pair = gaussian_pair(rates.first, rates.second);
    const TnbisResult res = verify_tnbis_d2(pair, q);
    CAPTURE(rates.first);
    CAPTURE(rates.second);
    CHECK(res.diff <= 1e-4);
    CHECK(res.weak_diff <= 1e-4);
  }
}

TEST_CASE("weak_rhs_c2 against the closed-form inverse transform") {
  // phi = e^{-|w|^2} has Finv phi(x) = (1/4pi) e^{-|x|^2/4}; the weak action
  // is the lhs cosine integral minus phi(0) by construction.
  const auto pair = gaussian_pair(1.0, 1.0);
  QuadratureSpec q;
  q.abs_tol = 1e-7;
  const double lhs = verify_tnbis_d2(pair, q).lhs;
  CHECK(weak_rhs_c2(pair, q) == doctest::Approx(lhs - 1.0).epsilon(1e-6));
  const auto scaled = gaussian_pair(1.0, 1.0, 0.0, 1.0);  // zero scale
  CHECK(weak_rhs_c2(scaled, q) == doctest::Approx(0.0));
}

namespace {

// Independent oracle for the kernel mass I0 = int_{-1}^{1} exp(-1/(1-u^2)) du:
// composite Simpson on a fine uniform grid.
double kernel_mass_simpson() {
  const int n = 200001;
  const double h = 2.0 / (n - 1);
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = -1.0 + i * h;
    const double d = 1.0 - u * u;
    const double f = d > 0.0 ? std::exp(-1.0 / d) : 0.0;
    const double w = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    s += w * f;
  }
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("mollifier: normalizer, support, dirac property") {
  const MollifierSpec m1 = make_mollifier(1, 1);
  // c_n = n / I0 with I0 ~ 0.443994, checked against a Simpson oracle.
  const double i0 = kernel_mass_simpson();
  CHECK(i0 == doctest::Approx(0.443994).epsilon(1e-5));
  CHECK(m1.normalizer == doctest::Approx(1.0 / i0).epsilon(1e-9));

  const MollifierSpec m10 = make_mollifier(10, 2);
  double inside[2] = {0.05, -0.02};
  CHECK(mollifier(m10, inside) > 0.0);
  double outside[2] = {0.05, 0.11};
  CHECK(mollifier(m10, outside) == 0.0);

  const MollifierSpec m100 = make_mollifier(100, 1);
  auto f = [&](double x) {
    double xs[1] = {x};
    return mollifier(m100, xs) * std::cos(x);
  };
  CHECK(integrate(f, -0.01, 0.01, 1e-12) == doctest::Approx(1.0).epsilon(1e-3));

  for (int n : {1, 10, 100}) {
    const MollifierSpec spec = make_mollifier(n, 1);
    auto h = [&](double x) {
      double xs[1] = {x};
      return mollifier(spec, xs);
    };
    const double r = 1.0 / n;
    CHECK(integrate(h, -r, r, 1e-12) == doctest::Approx(1.0).epsilon(1e-10));
  }
}
