#include "hedgenet/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace hedgenet {

SvdResult svd_jacobi(std::vector<double> a, std::size_t m, std::size_t n) {
  if (m == 0 || n == 0 || a.size() != m * n) throw std::invalid_argument("svd: bad shape");
  std::vector<double> v(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) v[j * n + j] = 1.0;

  const double eps = std::numeric_limits<double>::epsilon();
  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double* ap = a.data() + p * m;
        double* aq = a.data() + q * m;
        double app = 0.0, aqq = 0.0, apq = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          app += ap[i] * ap[i];
          aqq += aq[i] * aq[i];
          apq += ap[i] * aq[i];
        }
        if (std::abs(apq) <= eps * std::sqrt(app * aqq) || apq == 0.0) continue;
        rotated = true;
        const double zeta = (aqq - app) / (2.0 * apq);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double tp = ap[i];
          ap[i] = c * tp - s * aq[i];
          aq[i] = s * tp + c * aq[i];
        }
        double* vp = v.data() + p * n;
        double* vq = v.data() + q * n;
        for (std::size_t i = 0; i < n; ++i) {
          const double tp = vp[i];
          vp[i] = c * tp - s * vq[i];
          vq[i] = s * tp + c * vq[i];
        }
      }
    }
    if (!rotated) break;
  }

  SvdResult res;
  res.m = m;
  res.n = n;
  res.sigma.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < m; ++i) norm_sq += a[j * m + i] * a[j * m + i];
    res.sigma[j] = std::sqrt(norm_sq);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return res.sigma[i] > res.sigma[j]; });
  res.u.resize(m * n);
  std::vector<double> v_sorted(n * n);
  std::vector<double> sigma_sorted(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    sigma_sorted[j] = res.sigma[src];
    const double inv = res.sigma[src] > 0.0 ? 1.0 / res.sigma[src] : 0.0;
    for (std::size_t i = 0; i < m; ++i) res.u[j * m + i] = a[src * m + i] * inv;
    std::copy(v.begin() + static_cast<std::ptrdiff_t>(src * n),
              v.begin() + static_cast<std::ptrdiff_t>((src + 1) * n),
              v_sorted.begin() + static_cast<std::ptrdiff_t>(j * n));
  }
  res.sigma = std::move(sigma_sorted);
  res.v = std::move(v_sorted);
  return res;
}

std::vector<double> svd_solve(const SvdResult& svd, std::span<const double> rhs, double rcond,
                              int* rank_out, double* cond_out) {
  if (rhs.size() != svd.m) throw std::invalid_argument("svd_solve: rhs size mismatch");
  const double sigma_max = svd.sigma.empty() ? 0.0 : svd.sigma.front();
  const double sigma_min = svd.sigma.empty() ? 0.0 : svd.sigma.back();
  if (cond_out)
    *cond_out = sigma_min > 0.0 ? sigma_max / sigma_min : std::numeric_limits<double>::infinity();
  const double thresh = rcond * sigma_max;
  std::vector<double> x(svd.n, 0.0);
  int rank = 0;
  for (std::size_t j = 0; j < svd.n; ++j) {
    if (!(svd.sigma[j] > thresh) || svd.sigma[j] == 0.0) continue;
    ++rank;
    double uj_dot = 0.0;
    for (std::size_t i = 0; i < svd.m; ++i) uj_dot += svd.u[j * svd.m + i] * rhs[i];
    const double coef = uj_dot / svd.sigma[j];
    for (std::size_t i = 0; i < svd.n; ++i) x[i] += coef * svd.v[j * svd.n + i];
  }
  if (rank_out) *rank_out = rank;
  return x;
}

bool solve_linear_system(std::vector<double> a, std::vector<double> b, std::size_t n,
                         std::vector<double>& x) {
  if (a.size() != n * n || b.size() != n) throw std::invalid_argument("solve: bad shape");
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::abs(a[col * n + col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double cand = std::abs(a[r * n + col]);
      if (cand > best) {
        best = cand;
        pivot = r;
      }
    }
    if (!(best > 0.0) || !std::isfinite(best)) return false;
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[pivot * n + c], a[col * n + c]);
      std::swap(b[pivot], b[col]);
    }
    const double diag = a[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = a[r * n + col] / diag;
      if (factor == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= factor * a[col * n + c];
      b[r] -= factor * b[col];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t r = n; r-- > 0;) {
    double acc = b[r];
    for (std::size_t c = r + 1; c < n; ++c) acc -= a[r * n + c] * x[c];
    x[r] = acc / a[r * n + r];
    if (!std::isfinite(x[r])) return false;
  }
  return true;
}

}  // namespace hedgenet
