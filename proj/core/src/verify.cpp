#include "hedgenet/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>

#include <json.hpp>

#include "hedgenet/analytic.hpp"
#include "hedgenet/io.hpp"
#include "hedgenet/network.hpp"
#include "hedgenet/payoff.hpp"
#include "hedgenet/prng.hpp"
#include "hedgenet/quadrature.hpp"
#include "hedgenet/weakform.hpp"

namespace hedgenet {

bool VerifySuiteResult::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckLine& c) { return c.passed; });
}

namespace {

void add_check(VerifySuiteResult& suite, const std::string& id, double lhs, double rhs,
               double tol) {
  CheckLine line;
  line.id = id;
  line.lhs = lhs;
  line.rhs = rhs;
  line.delta = std::abs(lhs - rhs);
  line.tolerance = tol;
  line.passed = line.delta <= tol;
  suite.checks.push_back(std::move(line));
}

double gaussian_payoff(std::span<const double> x, double k) {
  PayoffSpec spec;
  spec.kind = PayoffKind::kGaussianExample;
  spec.dim = static_cast<int>(x.size());
  spec.strike = k;
  return eval_payoff(spec, x);
}

}  // namespace

VerifySuiteResult analytic_suite() {
  VerifySuiteResult suite;
  suite.suite = "analytic";
  QuadratureSpec q;

  add_check(suite, "basket_call_ft(pi, 1) = 4", basket_call_ft(std::numbers::pi, 1.0), 4.0, 1e-12);
  add_check(suite, "basket_call_ft(0, 1) = 0", basket_call_ft(0.0, 1.0), 0.0, 1e-15);
  add_check(suite, "int basket_call_ft(1.3, r) dr = 2 pi 1.3",
            basket_call_ft_integral(1.3, q), 2.0 * std::numbers::pi * 1.3, 1e-6);

  {
    double w[1] = {0.0};
    add_check(suite, "g_1(0) = -1", g_solution(1, w), -1.0, 1e-15);
  }
  {
    double w[2] = {0.0, 0.0};
    add_check(suite, "g_2(0) = -2/sqrt(pi)", g_solution(2, w), -2.0 / std::sqrt(std::numbers::pi),
              1e-15);
  }
  {
    auto g1 = [](double w) {
      double ww[1] = {w};
      return g_solution(1, ww);
    };
    add_check(suite, "int g_1 = 0", integrate(g1, -q.truncation_radius, q.truncation_radius, 1e-12),
              0.0, 1e-10);
  }

  // Strong spanning quadrature against the closed-form Gaussian payoff.
  {
    SplitMix64 rng(11);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      double x = rng.uniform(0.2, 3.0) * (rng.next_double() < 0.5 ? -1.0 : 1.0);
      double k = rng.uniform(0.1, 2.0);
      double xs[1] = {x};
      worst = std::max(worst, std::abs(span_quadrature_gaussian(1, xs, k, q) -
                                       gaussian_payoff(xs, k)));
    }
    add_check(suite, "span quadrature d=1 matches G_1 (20 points)", worst, 0.0, 1e-6);
  }
  {
    SplitMix64 rng(12);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      double xs[2] = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
      double k = rng.uniform(0.2, 1.5);
      worst = std::max(worst, std::abs(span_quadrature_gaussian(2, xs, k, q) -
                                       gaussian_payoff(xs, k)));
    }
    add_check(suite, "span quadrature d=2 matches G_2 (10 points)", worst, 0.0, 1e-4);
  }

  for (auto [x, k] : {std::pair{2.0, 1.0}, {-2.0, 1.0}, {0.3, 1.0}}) {
    const double expected = std::max(std::abs(x) - std::abs(k), 0.0);
    add_check(suite, "dispersion d=1 identity at x=" + format_double(x),
              dispersion_d1_span(x, k), expected, 1e-15);
  }

  add_check(suite, "carr_madan_density(0) = -2", carr_madan_density(0.0), -2.0, 1e-15);
  {
    double xs[1] = {1.2};
    add_check(suite, "carr-madan integral = G_1(1.2, 1)", carr_madan_integral(1.2, 1.0, q),
              gaussian_payoff(xs, 1.0), 1e-6);
  }
  {
    // Pointwise doubling: the Carr-Madan density is 2 g_1.
    double worst = 0.0;
    for (double w : {-2.0, -0.7, 0.0, 0.4, 1.0, 2.5}) {
      double ws[1] = {w};
      worst = std::max(worst, std::abs(carr_madan_density(w) - 2.0 * g_solution(1, ws)));
    }
    add_check(suite, "carr-madan density = 2 g_1", worst, 0.0, 1e-14);
  }

  // Evenness of g_d and second-moment stability under T = 20 -> 40.
  {
    SplitMix64 rng(13);
    double worst = 0.0;
    for (int d = 1; d <= 3; ++d) {
      for (int i = 0; i < 8; ++i) {
        std::vector<double> w(static_cast<std::size_t>(d)), neg(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) {
          w[j] = rng.uniform(-3.0, 3.0);
          neg[j] = -w[j];
        }
        worst = std::max(worst, std::abs(g_solution(d, w) - g_solution(d, neg)));
      }
    }
    add_check(suite, "g_d even (d=1..3)", worst, 0.0, 1e-15);
  }
  {
    auto second_moment = [](double T) {
      auto f = [](double w) {
        double ws[1] = {w};
        return w * w * std::abs(g_solution(1, ws));
      };
      return integrate(f, -T, T, 1e-12);
    };
    add_check(suite, "int w^2 |g_1| stable under T=20 -> 40", second_moment(20.0),
              second_moment(40.0), 1e-10);
  }
  return suite;
}

VerifySuiteResult weakform_suite() {
  VerifySuiteResult suite;
  suite.suite = "weakform";
  QuadratureSpec q;
  QuadratureSpec q_cpv = q;
  q_cpv.abs_tol = 1e-10;

  // CPV engine vs the epsilon-limit oracle on shifted/scaled Gaussians and
  // polynomial-times-Gaussian test functions.
  const std::vector<TestFunction1D> battery = {
      gaussian_fn(1.0), gaussian_fn(0.5, 2.5), gaussian_fn(1.0, 1.0, 0.7), poly_gaussian_fn(1.0)};
  for (const auto& phi : battery) {
    double worst = 0.0;
    for (double c : {-2.0, -1.0, 0.0, 0.5, 3.0})
      worst = std::max(worst, std::abs(cpv(phi, c, q_cpv) - cpv_eps_limit(phi, c, q_cpv)));
    add_check(suite, "cpv vs eps-limit oracle: " + phi.id, worst, 0.0, 1e-8);
  }
  {
    const TestFunction1D phi1 = gaussian_fn(1.0);
    const TestFunction1D phi2 = gaussian_fn(2.0, 0.8);
    const TestFunction1D comb = combine(1.7, phi1, -0.6, phi2);
    double worst = 0.0;
    for (double c : {-1.0, 0.5}) {
      const double lin = 1.7 * cpv(phi1, c, q_cpv) - 0.6 * cpv(phi2, c, q_cpv);
      worst = std::max(worst, std::abs(cpv(comb, c, q_cpv) - lin));
    }
    add_check(suite, "cpv linearity", worst, 0.0, 1e-10);
  }
  add_check(suite, "cpv odd integrand: gaussian at c=0", cpv(gaussian_fn(1.0), 0.0, q_cpv), 0.0,
            1e-12);

  // Fubini-type exchange: int dw1 cpv dw2 = int dw2 cpv dw1 for Gaussians.
  {
    const TestFunction1D phi1 = gaussian_fn(1.0);
    const TestFunction1D phi2 = gaussian_fn(2.0);
    const double R = 12.0;
    auto lhs_f = [&](double w1) { return -phi1.f(w1) * cpv(phi2, w1, q_cpv); };
    auto rhs_f = [&](double w2) { return phi2.f(w2) * cpv(phi1, w2, q_cpv); };
    const double lhs = integrate(lhs_f, -R, R, 1e-9);
    const double rhs = integrate(rhs_f, -R, R, 1e-9);
    add_check(suite, "fubini exchange (gaussian pair)", lhs, rhs, 1e-8);
  }

  // TNbis at d=1: both sides equal e^{-1} for theta = e^{-w^2}.
  {
    const auto pair = gaussian_pair(1.0, 1.0);
    const double lhs = tnbis_d1_lhs(pair.inv_ft1, q);
    add_check(suite, "tnbis d=1 lhs = exp(-1)", lhs, std::exp(-1.0), 1e-8);
    add_check(suite, "tnbis d=1 t1 action = exp(-1)", t1_action(pair.f1), std::exp(-1.0), 1e-15);
  }
  {
    const TestFunction1D w2g = poly_gaussian_fn(1.0);
    add_check(suite, "t1 action on w^2 e^{-w^2}", t1_action(w2g), std::exp(-1.0), 1e-15);
  }

  // TNbis at d=2 for three Gaussian pairs, plus the weak-action route.
  {
    QuadratureSpec q2 = q;
    q2.abs_tol = 1e-7;
    int idx = 0;
    for (auto rates : {std::pair{1.0, 1.0}, {1.0, 2.0}, {1.5, 0.75}}) {
      const auto pair = gaussian_pair(rates.first, rates.second);
      const TnbisResult res = verify_tnbis_d2(pair, q2);
      ++idx;
      add_check(suite, "tnbis d=2 pair " + std::to_string(idx) + " (lhs vs T^2)", res.lhs, res.rhs,
                1e-4);
      add_check(suite, "weak action pair " + std::to_string(idx) + " (= T^2 - theta(0))",
                res.weak, res.rhs - pair.at(0.0, 0.0), 1e-4);
    }
  }
  {
    // N2 is symmetric under swapping the two factors, and bilinear.
    QuadratureSpec q2 = q;
    q2.abs_tol = 1e-7;
    const TestFunction1D a = gaussian_fn(1.0), b = gaussian_fn(2.0);
    add_check(suite, "t2 symmetry under factor swap", t2_action(a, b, q2), t2_action(b, a, q2),
              1e-8);
    const TestFunction1D a2 = gaussian_fn(1.0, 2.0);
    add_check(suite, "t2 scaling in first factor", t2_action(a2, b, q2),
              2.0 * t2_action(a, b, q2), 1e-8);
  }

  // Mollifier mass and Dirac property.
  for (int d : {1, 2}) {
    for (int n : {1, 10, 100}) {
      const MollifierSpec spec = make_mollifier(n, d);
      double mass = 0.0;
      const double r = 1.0 / static_cast<double>(n);
      if (d == 1) {
        auto f = [&](double x) {
          double xs[1] = {x};
          return mollifier(spec, xs);
        };
        mass = integrate(f, -r, r, 1e-12);
      } else {
        auto f = [&](double x1, double x2) {
          double xs[2] = {x1, x2};
          return mollifier(spec, xs);
        };
        mass = integrate_2d(f, -r, r, -r, r, 1e-11);
      }
      add_check(suite,
                "mollifier mass n=" + std::to_string(n) + " d=" + std::to_string(d), mass, 1.0,
                1e-10);
    }
  }
  {
    const MollifierSpec spec = make_mollifier(100, 1);
    auto f = [&](double x) {
      double xs[1] = {x};
      return mollifier(spec, xs) * std::cos(x);
    };
    const double val = integrate(f, -0.01, 0.01, 1e-12);
    add_check(suite, "mollifier dirac property at n=100", val, 1.0, 1e-3);
  }
  {
    double xs[1] = {0.02};  // outside the support of h_100
    add_check(suite, "mollifier support", mollifier(make_mollifier(100, 1), xs), 0.0, 0.0);
  }
  return suite;
}

namespace {

struct GradientDraw {
  SpanParams params;
  Restriction restriction;
  Dataset dataset;
  std::vector<std::uint32_t> batch;
  Regularization reg;
};

// Smooth parameter points only: all pre-activations at least 1e-3 in
// magnitude, and for single-asset a clear softmax argmax margin so the
// selection cannot flip under finite-difference probes.
bool draw_ok(const GradientDraw& draw) {
  const auto& p = draw.params;
  for (std::size_t s = 0; s < draw.dataset.size(); ++s) {
    auto x = draw.dataset.point(s);
    for (int i = 0; i < p.n_options(); ++i) {
      auto psi = apply_psi(draw.restriction, p.w_row(i));
      double si = 0.0;
      for (int j = 0; j < p.dim(); ++j) si += psi[j] * x[j];
      const double z = p.eta()[i] * (si - p.strikes()[i]);
      if (std::abs(z) < 1e-3) return false;
    }
  }
  if (draw.restriction.kind == RestrictionKind::kSingleAsset) {
    for (int i = 0; i < p.n_options(); ++i) {
      auto w = p.w_row(i);
      std::vector<double> sorted(w.begin(), w.end());
      std::sort(sorted.begin(), sorted.end());
      if (sorted.size() >= 2 && sorted.back() - sorted[sorted.size() - 2] < 1e-2) return false;
    }
  }
  return true;
}

GradientDraw make_draw(RestrictionKind kind, SplitMix64& rng) {
  while (true) {
    GradientDraw draw;
    const int d = 2 + static_cast<int>(rng.next_below(3));  // 2..4
    const int l = 1 + static_cast<int>(rng.next_below(4));  // 1..4
    const int m = 3;
    draw.dataset.dim = d;
    draw.dataset.box = make_box(d, -2.0, 2.0);
    for (int i = 0; i < m * d; ++i) draw.dataset.points.push_back(rng.uniform(-2.0, 2.0));
    draw.params = SpanParams(d, l);
    for (int i = 0; i < l; ++i)
      for (double& w : draw.params.w_row(i)) w = rng.uniform(-1.5, 1.5);
    for (double& mu : draw.params.mu()) mu = rng.uniform(-0.5, 0.5);
    for (double& k : draw.params.strikes()) k = rng.uniform(0.2, 1.5);
    draw.params.alpha() = rng.uniform(-0.5, 0.5);
    for (double& nu : draw.params.nu()) nu = rng.uniform(-1.0, 1.0);
    auto eta = draw.params.eta();
    for (int i = 0; i < l; ++i) eta[i] = rng.uniform(0.3, 1.5) * (rng.next_double() < 0.5 ? -1.0 : 1.0);

    if (kind == RestrictionKind::kPredetermined) {
      auto raw = draw.params.raw();
      std::vector<double> w(raw.begin(), raw.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(l) * static_cast<std::size_t>(d)));
      std::vector<double> strikes(draw.params.strikes().begin(), draw.params.strikes().end());
      std::vector<double> etas(eta.begin(), eta.end());
      draw.restriction = Restriction::predetermined(std::move(w), d, std::move(strikes), std::move(etas));
    } else {
      draw.restriction.kind = kind;
    }
    for (int i = 0; i < m; ++i) draw.batch.push_back(static_cast<std::uint32_t>(i));
    draw.reg.zeta = rng.next_double() < 0.5 ? 0.0 : 1e-3;
    draw.reg.squared = rng.next_double() < 0.5;
    for (std::size_t i = 0; i < static_cast<std::size_t>(m); ++i) draw.dataset.targets.push_back(rng.uniform(-1.0, 1.0));
    if (draw_ok(draw)) return draw;
  }
}

// Frozen blocks are instrument definitions, not parameters; skip them in the
// finite-difference scan.
bool coordinate_frozen(const GradientDraw& draw, std::size_t idx) {
  if (draw.restriction.kind != RestrictionKind::kPredetermined) return false;
  const std::string block = draw.params.block_name(idx);
  return block == "W" || block == "strikes" || block == "eta";
}

double max_grad_mismatch(GradientDraw draw) {
  SpanParams grad(draw.params.dim(), draw.params.n_options());
  loss_and_grad(draw.params, draw.restriction, draw.dataset, draw.batch, draw.reg, grad);
  const double h = 1e-6;
  double worst = 0.0;
  auto raw = draw.params.raw();
  for (std::size_t idx = 0; idx < raw.size(); ++idx) {
    if (coordinate_frozen(draw, idx)) continue;
    const double saved = raw[idx];
    raw[idx] = saved + h;
    SpanParams scratch(draw.params.dim(), draw.params.n_options());
    const double up = loss_and_grad(draw.params, draw.restriction, draw.dataset, draw.batch,
                                    draw.reg, scratch);
    raw[idx] = saved - h;
    const double down = loss_and_grad(draw.params, draw.restriction, draw.dataset, draw.batch,
                                      draw.reg, scratch);
    raw[idx] = saved;
    const double fd = (up - down) / (2.0 * h);
    const double analytic = grad.raw()[idx];
    const double scale = std::max({1.0, std::abs(fd), std::abs(analytic)});
    worst = std::max(worst, std::abs(fd - analytic) / scale);
  }
  return worst;
}

}  // namespace

VerifySuiteResult gradient_suite(std::uint64_t seed) {
  VerifySuiteResult suite;
  suite.suite = "gradients";
  for (RestrictionKind kind :
       {RestrictionKind::kUnrestricted, RestrictionKind::kSingleAsset,
        RestrictionKind::kPredetermined, RestrictionKind::kLongOnly}) {
    SplitMix64 rng(seed + static_cast<std::uint64_t>(kind));
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) worst = std::max(worst, max_grad_mismatch(make_draw(kind, rng)));
    add_check(suite, "analytic vs finite-difference gradient: " + to_string(kind), worst, 0.0,
              1e-5);
  }
  return suite;
}

void print_suite(const VerifySuiteResult& result) {
  for (const auto& check : result.checks) {
    std::cout << (check.passed ? "[PASS] " : "[FAIL] ") << result.suite << ": " << check.id
              << "  |delta| = " << check.delta << " (tol " << check.tolerance << ")\n";
  }
}

void write_suite_json(const VerifySuiteResult& result, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["suite"] = result.suite;
  auto& checks = j["checks"] = nlohmann::ordered_json::array();
  for (const auto& check : result.checks) {
    nlohmann::ordered_json c;
    c["id"] = check.id;
    c["passed"] = check.passed;
    c["lhs"] = check.lhs;
    c["rhs"] = check.rhs;
    c["abs_delta"] = check.delta;
    c["tolerance"] = check.tolerance;
    checks.push_back(std::move(c));
  }
  j["all_passed"] = result.all_passed();
  atomic_write(path, j.dump(2) + "\n");
}

}  // namespace hedgenet
