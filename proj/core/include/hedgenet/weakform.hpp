#pragma once

#include <functional>
#include <span>
#include <string>

#include "hedgenet/quadrature.hpp"

namespace hedgenet {

/// Rapidly decaying 1D test function with derivative access and a Gaussian
/// decay certificate |f(w)| <= envelope_scale * exp(-envelope_rate * w^2),
/// used to bound truncation tails of singular integrals.
struct TestFunction1D {
  std::string id;
  std::function<double(double)> f;
  std::function<double(double)> df;
  double envelope_scale = 1.0;
  double envelope_rate = 1.0;

  double operator()(double w) const { return f(w); }
};

/// scale * exp(-rate (w - shift)^2), with the matching envelope certificate.
TestFunction1D gaussian_fn(double rate, double scale = 1.0, double shift = 0.0);
/// scale * w^2 exp(-rate w^2).
TestFunction1D poly_gaussian_fn(double rate, double scale = 1.0);
TestFunction1D combine(double a, const TestFunction1D& f1, double b, const TestFunction1D& f2);

/// Verifies the decay certificate by sampling |w| in {5, 10, 20}.
void check_envelope(const TestFunction1D& phi);

/// Cauchy principal value integral of phi(w)/(w - c) dw over the line,
/// computed through the symmetric-difference transform
///   integral_0^T (phi(c+t) - phi(c-t))/t dt
/// whose integrand extends continuously to 2 phi'(c) at t = 0. The truncation
/// tail is bounded with the envelope certificate.
double cpv(const TestFunction1D& phi, double c, const QuadratureSpec& q = {});

/// Independent brute-force oracle for cpv(): the diagonal epsilon-limit
/// evaluated literally with graded composite midpoint rules at
/// eps = 1e-2, 1e-3, 1e-4, then Richardson-extrapolated to 0.
double cpv_eps_limit(const TestFunction1D& phi, double c, const QuadratureSpec& q = {});

/// T^1 action on even test functions: (theta(1) + theta(-1))/2.
double t1_action(const TestFunction1D& theta);

/// T^2 action on the even-separable function theta(w1, w2) = phi1(w1) phi2(w2):
/// both symmetric terms of the nested principal-value composition
///   (1/4pi^2) (dw1/(w1+1) + dw1/(w1-1)) (dw2/(w2+w1) - dw2/(w2-w1)) + (1 <-> 2),
/// with the inner CPV evaluated lazily (memoized on the outer node value,
/// inner tolerance = outer/10).
double t2_action(const TestFunction1D& phi1, const TestFunction1D& phi2,
                 const QuadratureSpec& q = {});

/// Even-separable 2D Gaussian-class test function with the closed-form 1D
/// inverse Fourier transforms of its factors.
struct SeparableTestFn2D {
  TestFunction1D f1, f2;
  std::function<double(double)> inv_ft1, inv_ft2;

  double at(double w1, double w2) const { return f1(w1) * f2(w2); }
};

SeparableTestFn2D gaussian_pair(double rate1, double rate2, double scale1 = 1.0,
                                double scale2 = 1.0);

/// Weak dispersion-call action in dimension 2:
///   integral over R^2 of Finv[phi](x) (cos(|x1| + |x2|) - 1) dx
/// by iterated 2D adaptive quadrature on [-T, T]^2.
double weak_rhs_c2(const SeparableTestFn2D& phi, const QuadratureSpec& q = {});

struct TnbisResult {
  double lhs = 0.0;       // integral Finv[theta](x) cos(|x|_1) dx
  double rhs = 0.0;       // <T^2, theta>
  double weak = 0.0;      // <N^{C_2}, theta - theta(0)>
  double diff = 0.0;      // |lhs - rhs|
  double weak_diff = 0.0; // |weak - (rhs - theta(0))|
};

/// Checks both routes to the d=2 dispersion identity: the Fourier-side
/// integral against the nested-CPV action, and the weak action against
/// <T^2, theta> - theta(0).
TnbisResult verify_tnbis_d2(const SeparableTestFn2D& phi, const QuadratureSpec& q = {});

/// d=1 analogue of the lhs: integral Finv[phi](x) cos(x) dx, which must match
/// t1_action(phi) for even phi.
double tnbis_d1_lhs(const std::function<double(double)>& inv_ft, const QuadratureSpec& q = {});

/// Dirac mollifier h_n(x) = c_n prod_i 1_{|x_i| < 1/n} exp(-1/(1 - n^2 x_i^2));
/// c_n normalizes the mass to 1 and is computed by quadrature once per (n, d).
struct MollifierSpec {
  int n = 1;
  int d = 1;
  double normalizer = 0.0;
};

MollifierSpec make_mollifier(int n, int d);
double mollifier(const MollifierSpec& spec, std::span<const double> x);

}  // namespace hedgenet
