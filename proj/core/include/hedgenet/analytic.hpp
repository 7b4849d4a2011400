#pragma once

#include <filesystem>
#include <span>

#include "hedgenet/quadrature.hpp"

namespace hedgenet {

/// Fourier transform of the absolute basket call in the strike variable:
/// F_k[(|c| - |k|)^+](r) = (2 - 2cos(rc))/r^2. Singular at r = 0.
double basket_call_ft(double c, double r);

/// integral over r of basket_call_ft(c, r), equal to 2 pi |c|. Body on
/// [-T, T] by adaptive quadrature; the O(1/T) tail is added analytically
/// with an integration-by-parts expansion of the oscillatory remainder.
double basket_call_ft_integral(double c, const QuadratureSpec& q = {});

/// Continuum-spanning densities for the Gaussian payoff:
///   g_1(w) = e^{-w^2} (2w^2 - 1)
///   g_2(w) = (2/sqrt(pi)) e^{-|w|^2} (|w|^2 - 1)
///   g_3(w) = (1/pi) e^{-|w|^2} (2|w|^2 - 3)
double g_solution(int d, std::span<const double> w);

/// Evaluates the strong spanning integral
///   integral (|x.w| - |k|)^+ g_d(w) dw  over [-T, T]^d,  d in {1, 2},
/// which reproduces the Gaussian payoff G_d(x, k). Requires |x| <= 10.
double span_quadrature_gaussian(int d, std::span<const double> x, double k,
                                const QuadratureSpec& q = {});

/// d=1 dispersion identity (|x| - |k|)^+ = ((|x|-|k|)^+ + (|-x|-|k|)^+)/2;
/// evaluates the right-hand side and checks it against the left to 1e-15.
double dispersion_d1_span(double x, double k);

/// Carr-Madan basket-weight density for the Gaussian payoff G_1:
/// nu(w) = 2 e^{-w^2}(2w^2 - 1), i.e. twice g_1.
double carr_madan_density(double w);

/// integral (w x - k)^+ carr_madan_density(w) dw, equal to G_1(x, k) for
/// x >= 0, k > 0.
double carr_madan_integral(double x, double k, const QuadratureSpec& q = {});

/// Plot-ready CSV of g_d on a tensor grid over [-radius, radius]^d:
/// columns w_1..w_d,g.
void export_g_solution_csv(int d, double radius, int points_per_dim,
                           const std::filesystem::path& path);

}  // namespace hedgenet
