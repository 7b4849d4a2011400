#include "hedgenet/weakform.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "hedgenet/linalg.hpp"

namespace hedgenet {

namespace {

constexpr double kTGuard = 1e-8;  // below this the symmetric difference is frozen

double sq(double v) { return v * v; }

// Tail bound for |integral_{|w-c|>T} phi(w)/(w-c) dw| from the Gaussian
// envelope: (A/T) integral_{|w| >= T-|c|} e^{-a w^2} dw.
double cpv_tail_bound(double scale, double rate, double c, double T) {
  const double reach = T - std::abs(c);
  if (reach <= 1.0) throw std::invalid_argument("cpv: truncation radius too small for |c|");
  return scale / T * std::sqrt(std::numbers::pi / rate) * std::erfc(std::sqrt(rate) * reach);
}

}  // namespace

TestFunction1D gaussian_fn(double rate, double scale, double shift) {
  if (!(rate > 0.0)) throw std::invalid_argument("gaussian_fn: rate must be positive");
  TestFunction1D fn;
  fn.id = "gauss(rate=" + std::to_string(rate) + ",scale=" + std::to_string(scale) +
          ",shift=" + std::to_string(shift) + ")";
  fn.f = [=](double w) { return scale * std::exp(-rate * sq(w - shift)); };
  fn.df = [=](double w) { return -2.0 * rate * (w - shift) * scale * std::exp(-rate * sq(w - shift)); };
  // (w-b)^2 >= w^2/2 - b^2, so |f| <= |s| e^{a b^2} e^{-a w^2 / 2}.
  fn.envelope_rate = shift == 0.0 ? rate : 0.5 * rate;
  fn.envelope_scale = std::abs(scale) * (shift == 0.0 ? 1.0 : std::exp(rate * sq(shift)));
  return fn;
}

TestFunction1D poly_gaussian_fn(double rate, double scale) {
  if (!(rate > 0.0)) throw std::invalid_argument("poly_gaussian_fn: rate must be positive");
  TestFunction1D fn;
  fn.id = "w2gauss(rate=" + std::to_string(rate) + ",scale=" + std::to_string(scale) + ")";
  fn.f = [=](double w) { return scale * w * w * std::exp(-rate * w * w); };
  fn.df = [=](double w) {
    return scale * (2.0 * w - 2.0 * rate * w * w * w) * std::exp(-rate * w * w);
  };
  // max of w^2 e^{-a w^2 / 2} is 2/(a e), attained at w^2 = 2/a.
  fn.envelope_rate = 0.5 * rate;
  fn.envelope_scale = std::abs(scale) * 2.0 / (rate * std::numbers::e);
  return fn;
}

TestFunction1D combine(double a, const TestFunction1D& f1, double b, const TestFunction1D& f2) {
  TestFunction1D fn;
  fn.id = "combo(" + f1.id + "," + f2.id + ")";
  auto g1 = f1.f, g2 = f2.f, d1 = f1.df, d2 = f2.df;
  fn.f = [=](double w) { return a * g1(w) + b * g2(w); };
  fn.df = [=](double w) { return a * d1(w) + b * d2(w); };
  fn.envelope_rate = std::min(f1.envelope_rate, f2.envelope_rate);
  fn.envelope_scale = std::abs(a) * f1.envelope_scale + std::abs(b) * f2.envelope_scale;
  return fn;
}

void check_envelope(const TestFunction1D& phi) {
  for (double w : {5.0, 10.0, 20.0}) {
    for (double s : {-1.0, 1.0}) {
      const double bound = phi.envelope_scale * std::exp(-phi.envelope_rate * w * w);
      if (std::abs(phi.f(s * w)) > bound * (1.0 + 1e-12) + 1e-300)
        throw std::invalid_argument("test function '" + phi.id + "' violates its decay envelope");
    }
  }
}

namespace {

// Core of the symmetric-difference CPV for a plain callable. When no
// derivative is available the t -> 0 limit is frozen at the guard value.
template <class F>
double cpv_symmetric(const F& f, const std::function<double(double)>* df, double c, double T,
                     double abs_tol, int max_subdivisions) {
  auto integrand = [&](double t) {
    if (t < kTGuard) {
      if (df) return 2.0 * (*df)(c);
      const double tg = kTGuard;
      return (f(c + tg) - f(c - tg)) / tg;
    }
    return (f(c + t) - f(c - t)) / t;
  };
  return integrate(integrand, 0.0, T, abs_tol, max_subdivisions);
}

}  // namespace

double cpv(const TestFunction1D& phi, double c, const QuadratureSpec& q) {
  check_envelope(phi);
  const double tail = cpv_tail_bound(phi.envelope_scale, phi.envelope_rate, c, q.truncation_radius);
  const double value =
      cpv_symmetric(phi.f, &phi.df, c, q.truncation_radius, q.abs_tol, q.max_subdivisions);
  if (tail > q.abs_tol)
    throw ToleranceError("cpv: envelope tail exceeds tolerance", value, tail);
  return value;
}

double cpv_eps_limit(const TestFunction1D& phi, double c, const QuadratureSpec& q) {
  const double T = q.truncation_radius;
  const std::vector<double> eps = {1e-2, 1e-3, 1e-4};

  // Graded composite midpoint over [c+e, c+T] and [c-T, c-e]: geometric
  // panels doubling away from the pole, a flat subdivision count per panel.
  // Both half-axes reduce to integrals in t = |w - c| over [e, T]:
  //   int_{c+e}^{c+T} phi(w)/(w-c) dw = int phi(c+t)/t dt
  //   int_{c-T}^{c-e} phi(w)/(w-c) dw = -int phi(c-t)/t dt.
  auto truncated = [&](double e) {
    const int n_sub = 20000;
    double total = 0.0;
    for (double sign : {1.0, -1.0}) {
      double a = e;
      while (a < T) {
        const double b = std::min(2.0 * a, T);
        const double h = (b - a) / n_sub;
        double acc = 0.0;
        for (int i = 0; i < n_sub; ++i) {
          const double t = a + (i + 0.5) * h;
          acc += phi.f(c + sign * t) / t;
        }
        total += sign * acc * h;
        a = b;
      }
    }
    return total;
  };

  // I(e) = V - A e - B e^3 + O(e^5); solve for V from the three samples.
  std::vector<double> mat(9), rhs(3);
  for (int i = 0; i < 3; ++i) {
    mat[static_cast<std::size_t>(3 * i + 0)] = 1.0;
    mat[static_cast<std::size_t>(3 * i + 1)] = -eps[static_cast<std::size_t>(i)];
    mat[static_cast<std::size_t>(3 * i + 2)] = -eps[static_cast<std::size_t>(i)] * eps[static_cast<std::size_t>(i)] * eps[static_cast<std::size_t>(i)];
    rhs[static_cast<std::size_t>(i)] = truncated(eps[static_cast<std::size_t>(i)]);
  }
  std::vector<double> sol;
  if (!solve_linear_system(std::move(mat), std::move(rhs), 3, sol))
    throw std::runtime_error("cpv_eps_limit: extrapolation system singular");
  return sol[0];
}

double t1_action(const TestFunction1D& theta) { return 0.5 * (theta.f(1.0) + theta.f(-1.0)); }

namespace {

struct HilbertMemo {
  std::unordered_map<std::uint64_t, double> values;

  static std::uint64_t key(double w) {
    std::uint64_t k;
    std::memcpy(&k, &w, sizeof(k));
    return k;
  }
};

// One symmetric term of N2 with outer variable `a` and inner variable `b`:
//   sum_{c in {-1,1}} cpv_{w_a = c}[ phi_a(w_a) (H_b(-w_a) - H_b(w_a)) ],
// H_b being the Hilbert-type integral of phi_b. Inner values are memoized on
// the outer node value; the memo is confined to this call.
double t2_term(const TestFunction1D& phi_a, const TestFunction1D& phi_b, double T,
               double outer_tol, int max_subdivisions) {
  const double inner_tol = outer_tol / 10.0;
  HilbertMemo memo;
  auto hilbert_b = [&](double point) {
    const auto k = HilbertMemo::key(point);
    auto it = memo.values.find(k);
    if (it != memo.values.end()) return it->second;
    const double v = cpv_symmetric(phi_b.f, &phi_b.df, point, T, inner_tol, max_subdivisions);
    memo.values.emplace(k, v);
    return v;
  };
  auto u = [&](double w) { return phi_a.f(w) * (hilbert_b(-w) - hilbert_b(w)); };
  double total = 0.0;
  for (double c : {-1.0, 1.0})
    total += cpv_symmetric(u, nullptr, c, T, outer_tol, max_subdivisions);
  return total;
}

}  // namespace

double t2_action(const TestFunction1D& phi1, const TestFunction1D& phi2, const QuadratureSpec& q) {
  check_envelope(phi1);
  check_envelope(phi2);
  const double outer_tol = std::max(q.abs_tol, 1e-8);
  const double T = q.truncation_radius;
  const double scale = 1.0 / (4.0 * std::numbers::pi * std::numbers::pi);
  const double term1 = t2_term(phi1, phi2, T, outer_tol, q.max_subdivisions);
  const double term2 = t2_term(phi2, phi1, T, outer_tol, q.max_subdivisions);
  return scale * (term1 + term2);
}

SeparableTestFn2D gaussian_pair(double rate1, double rate2, double scale1, double scale2) {
  SeparableTestFn2D pair;
  pair.f1 = gaussian_fn(rate1, scale1);
  pair.f2 = gaussian_fn(rate2, scale2);
  // Finv[s e^{-a w^2}](x) = s/(2 sqrt(pi a)) e^{-x^2/(4a)}
  pair.inv_ft1 = [=](double x) {
    return scale1 / (2.0 * std::sqrt(std::numbers::pi * rate1)) * std::exp(-x * x / (4.0 * rate1));
  };
  pair.inv_ft2 = [=](double x) {
    return scale2 / (2.0 * std::sqrt(std::numbers::pi * rate2)) * std::exp(-x * x / (4.0 * rate2));
  };
  return pair;
}

namespace {

double cos_l1_integral(const SeparableTestFn2D& phi, bool subtract_one, const QuadratureSpec& q) {
  // Finv factors die off like e^{-x^2/(4a)}; radius 30 suffices far below
  // any tolerance in play here.
  const double R = std::min(q.truncation_radius, 30.0);
  const double tol = std::max(q.abs_tol, 1e-9);
  auto f = [&](double x1, double x2) {
    const double c = std::cos(std::abs(x1) + std::abs(x2)) - (subtract_one ? 1.0 : 0.0);
    return phi.inv_ft1(x1) * phi.inv_ft2(x2) * c;
  };
  auto splits = [](double) { return std::vector<double>{0.0}; };  // |x2| kink
  return integrate_2d(f, -R, R, -R, R, tol, splits, q.max_subdivisions);
}

}  // namespace

double weak_rhs_c2(const SeparableTestFn2D& phi, const QuadratureSpec& q) {
  return cos_l1_integral(phi, /*subtract_one=*/true, q);
}

TnbisResult verify_tnbis_d2(const SeparableTestFn2D& phi, const QuadratureSpec& q) {
  TnbisResult res;
  res.lhs = cos_l1_integral(phi, /*subtract_one=*/false, q);
  res.rhs = t2_action(phi.f1, phi.f2, q);
  res.weak = weak_rhs_c2(phi, q);
  res.diff = std::abs(res.lhs - res.rhs);
  res.weak_diff = std::abs(res.weak - (res.rhs - phi.at(0.0, 0.0)));
  return res;
}

double tnbis_d1_lhs(const std::function<double(double)>& inv_ft, const QuadratureSpec& q) {
  const double R = std::min(q.truncation_radius, 30.0);
  auto f = [&](double x) { return inv_ft(x) * std::cos(x); };
  return integrate(f, -R, R, std::max(q.abs_tol, 1e-12), q.max_subdivisions);
}

namespace {

double mollifier_kernel(double u) {
  const double denom = 1.0 - u * u;
  return denom > 0.0 ? std::exp(-1.0 / denom) : 0.0;
}

// integral_{-1}^{1} exp(-1/(1-u^2)) du, evaluated once.
double mollifier_kernel_mass() {
  static const double mass = integrate(mollifier_kernel, -1.0, 1.0, 1e-13);
  return mass;
}

}  // namespace

MollifierSpec make_mollifier(int n, int d) {
  if (n < 1 || d < 1) throw std::invalid_argument("make_mollifier: n and d must be >= 1");
  MollifierSpec spec;
  spec.n = n;
  spec.d = d;
  // Separable kernel: the d-dimensional mass is (I0/n)^d.
  spec.normalizer = std::pow(static_cast<double>(n) / mollifier_kernel_mass(), d);
  return spec;
}

double mollifier(const MollifierSpec& spec, std::span<const double> x) {
  if (static_cast<int>(x.size()) != spec.d)
    throw std::invalid_argument("mollifier: dimension mismatch");
  double prod = spec.normalizer;
  for (double xi : x) {
    prod *= mollifier_kernel(static_cast<double>(spec.n) * xi);
    if (prod == 0.0) return 0.0;
  }
  return prod;
}

}  // namespace hedgenet
