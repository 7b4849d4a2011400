#pragma once

#include <span>
#include <string>

namespace hedgenet {

enum class PayoffKind {
  kDispersionCall,
  kDispersionPut,
  kBestOfCall,
  kBestOfPut,
  kWorstOfCall,
  kWorstOfPut,
  kBestOfBinaryCall,
  kBestOfBinaryPut,
  kWorstOfBinaryCall,
  kWorstOfBinaryPut,
  kGaussianExample,
};

bool is_binary_kind(PayoffKind kind);
std::string to_string(PayoffKind kind);
PayoffKind payoff_kind_from_string(const std::string& name);

/// Declarative description of a target payoff F(x, k).
///
/// `ah_variant` selects the absolutely homogeneous variation of the payoff
/// formula (strike enters as |k|, rainbow payoffs read |x_j|). Binary kinds
/// have no AH variation. The Gaussian example payoff
/// G_d(x, k) = |x|_2 exp(-k^2/|x|_2^2) is absolutely homogeneous as is.
struct PayoffSpec {
  PayoffKind kind = PayoffKind::kDispersionCall;
  int dim = 1;
  double strike = 1.0;
  bool ah_variant = false;

  void validate() const;  // throws std::invalid_argument
};

/// Evaluates F(x, spec.strike). Pure and branch-exact: kinks and indicators
/// are not smoothed, and binary payoffs use strict inequality "> 0".
double eval_payoff(const PayoffSpec& spec, std::span<const double> x);

/// Probes absolute homogeneity F(lambda x, lambda k) = |lambda| F(x, k) and
/// the evenness identities F(x, k) = F(x, -k) = F(-x, k) at one point, to
/// relative tolerance 1e-12.
bool check_ah(const PayoffSpec& spec, std::span<const double> x, double k, double lambda);

}  // namespace hedgenet
