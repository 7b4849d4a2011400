#include "hedgenet/analytic.hpp"

#include "hedgenet/io.hpp"
#include "hedgenet/sampling.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace hedgenet {

namespace {

// Numerically stable form of (2 - 2cos(u))/r^2 with u = r*c.
double basket_call_ft_stable(double c, double r) {
  const double s = std::sin(0.5 * r * c);
  return 4.0 * s * s / (r * r);
}

}  // namespace

double basket_call_ft(double c, double r) {
  if (r == 0.0) throw std::invalid_argument("basket_call_ft: r must be nonzero");
  return basket_call_ft_stable(c, r);
}

double basket_call_ft_integral(double c, const QuadratureSpec& q) {
  if (c == 0.0) return 0.0;
  const double ac = std::abs(c);
  // Tail accuracy is governed by powers of 1/(cT); stretch the body until
  // cT >= 40 so the three-term expansion below is good to ~1e-7.
  const double T = std::max(q.truncation_radius, 40.0 / ac);
  auto f = [&](double r) { return r == 0.0 ? c * c : basket_call_ft_stable(c, r); };
  const double body =
      integrate_segments(f, {-T, 0.0, T}, std::min(q.abs_tol, 1e-9), q.max_subdivisions);
  // Tail of 2 * integral_T^inf (2 - 2cos(rc))/r^2 dr: the 4/T piece is exact,
  // the cosine remainder expands by parts in powers of 1/T.
  const double sc = std::sin(T * ac), cc = std::cos(T * ac);
  const double cos_tail = -sc / (ac * T * T) + 2.0 * cc / (ac * ac * T * T * T) +
                          6.0 * sc / (ac * ac * ac * T * T * T * T);
  return body + 4.0 / T - 4.0 * cos_tail;
}

double g_solution(int d, std::span<const double> w) {
  if (d < 1 || d > 3) throw std::invalid_argument("g_solution: d must be 1, 2 or 3");
  if (static_cast<int>(w.size()) != d) throw std::invalid_argument("g_solution: dimension mismatch");
  double r2 = 0.0;
  for (double v : w) r2 += v * v;
  const double e = std::exp(-r2);
  switch (d) {
    case 1: return e * (2.0 * r2 - 1.0);
    case 2: return (2.0 / std::sqrt(std::numbers::pi)) * e * (r2 - 1.0);
    default: return (1.0 / std::numbers::pi) * e * (2.0 * r2 - 3.0);
  }
}

double span_quadrature_gaussian(int d, std::span<const double> x, double k,
                                const QuadratureSpec& q) {
  if (d != 1 && d != 2) throw std::invalid_argument("span_quadrature_gaussian: d must be 1 or 2");
  if (static_cast<int>(x.size()) != d)
    throw std::invalid_argument("span_quadrature_gaussian: dimension mismatch");
  double norm2 = 0.0;
  for (double v : x) norm2 += v * v;
  if (std::sqrt(norm2) > 10.0)
    throw std::invalid_argument("span_quadrature_gaussian: |x| exceeds validity envelope");
  // g_d carries an exp(-|w|^2) factor; beyond |w| ~ 8 the integrand is dead.
  const double R = std::min(q.truncation_radius, 10.0);
  const double ak = std::abs(k);

  if (d == 1) {
    const double x0 = x[0];
    if (x0 == 0.0) return 0.0;
    auto f = [&](double w) {
      const double gain = std::abs(x0 * w) - ak;
      if (gain <= 0.0) return 0.0;
      double ww[1] = {w};
      return gain * g_solution(1, ww);
    };
    std::vector<double> pts = {-R, R};
    const double kink = ak / std::abs(x0);
    if (kink < R) {
      pts.push_back(kink);
      pts.push_back(-kink);
    }
    return integrate_segments(f, std::move(pts), q.abs_tol, q.max_subdivisions);
  }

  const double x1 = x[0], x2 = x[1];
  auto f = [&](double w1, double w2) {
    const double gain = std::abs(x1 * w1 + x2 * w2) - ak;
    if (gain <= 0.0) return 0.0;
    double ww[2] = {w1, w2};
    return gain * g_solution(2, ww);
  };
  auto splits = [&](double w1) {
    std::vector<double> pts;
    if (x2 != 0.0) {
      pts.push_back((ak - x1 * w1) / x2);
      pts.push_back((-ak - x1 * w1) / x2);
    }
    return pts;
  };
  const double tol = std::max(q.abs_tol, 1e-7);
  return integrate_2d(f, -R, R, -R, R, tol, splits, q.max_subdivisions);
}

double dispersion_d1_span(double x, double k) {
  const double lhs = std::max(std::abs(x) - std::abs(k), 0.0);
  const double rhs = 0.5 * (std::max(std::abs(x) - std::abs(k), 0.0) +
                            std::max(std::abs(-x) - std::abs(k), 0.0));
  if (std::abs(lhs - rhs) > 1e-15)
    throw std::runtime_error("dispersion_d1_span: identity violated");
  return rhs;
}

double carr_madan_density(double w) { return 2.0 * std::exp(-w * w) * (2.0 * w * w - 1.0); }

double carr_madan_integral(double x, double k, const QuadratureSpec& q) {
  const double R = std::min(q.truncation_radius, 10.0);
  auto f = [&](double w) {
    const double gain = w * x - k;
    return gain > 0.0 ? gain * carr_madan_density(w) : 0.0;
  };
  std::vector<double> pts = {-R, R};
  if (x != 0.0) {
    const double kink = k / x;
    if (kink > -R && kink < R) pts.push_back(kink);
  }
  return integrate_segments(f, std::move(pts), q.abs_tol, q.max_subdivisions);
}

void export_g_solution_csv(int d, double radius, int points_per_dim,
                           const std::filesystem::path& path) {
  if (!(radius > 0.0)) throw std::invalid_argument("export_g_solution_csv: radius must be positive");
  Dataset grid = sample_grid(make_box(d, -radius, radius), points_per_dim);
  CsvTable table;
  for (int j = 0; j < d; ++j) table.header.push_back("w_" + std::to_string(j + 1));
  table.header.push_back("g");
  table.rows.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto w = grid.point(i);
    std::vector<double> row(w.begin(), w.end());
    row.push_back(g_solution(d, w));
    table.rows.push_back(std::move(row));
  }
  atomic_write(path, csv_to_string(table));
}

}  // namespace hedgenet
