#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace hedgenet {

struct CheckLine {
  std::string id;
  bool passed = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double delta = 0.0;
  double tolerance = 0.0;
};

struct VerifySuiteResult {
  std::string suite;
  std::vector<CheckLine> checks;

  bool all_passed() const;
};

/// Closed-form identities of the continuum solutions: the basket-call Fourier
/// transform and its 2 pi |c| integral, the Gaussian-payoff densities g_d and
/// their strong-spanning quadrature against G_d, the d=1 dispersion identity,
/// and the Carr-Madan correspondence for G_1.
VerifySuiteResult analytic_suite();

/// Principal-value machinery: the CPV engine against the epsilon-limit
/// oracle battery, Fubini-type exchange, the TNbis identity at d=1 and d=2,
/// and the mollifier mass/Dirac checks.
VerifySuiteResult weakform_suite();

/// Analytic gradients against central finite differences, 100 draws per
/// restriction kind at parameter points with pre-activations bounded away
/// from the ReLU kink.
VerifySuiteResult gradient_suite(std::uint64_t seed = 20240801);

void print_suite(const VerifySuiteResult& result);
void write_suite_json(const VerifySuiteResult& result, const std::filesystem::path& path);

}  // namespace hedgenet
