#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hedgenet {

/// Thin SVD A = U diag(sigma) V^T of an m x n matrix (m >= 1, n >= 1),
/// singular values sorted descending. U is m x n, V is n x n, both
/// column-major.
struct SvdResult {
  std::size_t m = 0, n = 0;
  std::vector<double> u;      // m*n column-major
  std::vector<double> sigma;  // n
  std::vector<double> v;      // n*n column-major
};

/// One-sided Jacobi SVD; `a` is column-major m x n and is consumed.
SvdResult svd_jacobi(std::vector<double> a, std::size_t m, std::size_t n);

/// Minimum-norm least-squares solution via the SVD pseudo-inverse, truncating
/// singular values at rcond * sigma_max. Reports the retained rank and the
/// (untruncated) condition number sigma_max / sigma_min.
std::vector<double> svd_solve(const SvdResult& svd, std::span<const double> rhs, double rcond,
                              int* rank_out = nullptr, double* cond_out = nullptr);

/// Gaussian elimination with partial pivoting on a dense n x n system
/// (row-major). Returns false when a pivot vanishes.
bool solve_linear_system(std::vector<double> a, std::vector<double> b, std::size_t n,
                         std::vector<double>& x);

}  // namespace hedgenet
