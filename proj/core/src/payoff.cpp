#include "hedgenet/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace hedgenet {

namespace {

double positive_part(double z) { return z > 0.0 ? z : 0.0; }
double negative_part(double z) { return z < 0.0 ? -z : 0.0; }

double l1_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += std::abs(v);
  return s;
}

double l2_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double max_coord(std::span<const double> x, bool absolute) {
  double m = absolute ? std::abs(x[0]) : x[0];
  for (std::size_t j = 1; j < x.size(); ++j) m = std::max(m, absolute ? std::abs(x[j]) : x[j]);
  return m;
}

double min_coord(std::span<const double> x, bool absolute) {
  double m = absolute ? std::abs(x[0]) : x[0];
  for (std::size_t j = 1; j < x.size(); ++j) m = std::min(m, absolute ? std::abs(x[j]) : x[j]);
  return m;
}

}  // namespace

bool is_binary_kind(PayoffKind kind) {
  switch (kind) {
    case PayoffKind::kBestOfBinaryCall:
    case PayoffKind::kBestOfBinaryPut:
    case PayoffKind::kWorstOfBinaryCall:
    case PayoffKind::kWorstOfBinaryPut:
      return true;
    default:
      return false;
  }
}

std::string to_string(PayoffKind kind) {
  switch (kind) {
    case PayoffKind::kDispersionCall: return "dispersion-call";
    case PayoffKind::kDispersionPut: return "dispersion-put";
    case PayoffKind::kBestOfCall: return "best-of-call";
    case PayoffKind::kBestOfPut: return "best-of-put";
    case PayoffKind::kWorstOfCall: return "worst-of-call";
    case PayoffKind::kWorstOfPut: return "worst-of-put";
    case PayoffKind::kBestOfBinaryCall: return "best-of-binary-call";
    case PayoffKind::kBestOfBinaryPut: return "best-of-binary-put";
    case PayoffKind::kWorstOfBinaryCall: return "worst-of-binary-call";
    case PayoffKind::kWorstOfBinaryPut: return "worst-of-binary-put";
    case PayoffKind::kGaussianExample: return "gaussian-example";
  }
  throw std::invalid_argument("unknown payoff kind");
}

PayoffKind payoff_kind_from_string(const std::string& name) {
  static const std::vector<PayoffKind> kAll = {
      PayoffKind::kDispersionCall,    PayoffKind::kDispersionPut,    PayoffKind::kBestOfCall,
      PayoffKind::kBestOfPut,         PayoffKind::kWorstOfCall,      PayoffKind::kWorstOfPut,
      PayoffKind::kBestOfBinaryCall,  PayoffKind::kBestOfBinaryPut,  PayoffKind::kWorstOfBinaryCall,
      PayoffKind::kWorstOfBinaryPut,  PayoffKind::kGaussianExample};
  for (PayoffKind k : kAll)
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown payoff kind: '" + name + "'");
}

void PayoffSpec::validate() const {
  if (dim < 1) throw std::invalid_argument("payoff: dim must be >= 1");
  if (ah_variant && is_binary_kind(kind))
    throw std::invalid_argument("payoff: binary kinds have no AH variation");
  if (!std::isfinite(strike)) throw std::invalid_argument("payoff: strike must be finite");
}

double eval_payoff(const PayoffSpec& spec, std::span<const double> x) {
  if (static_cast<int>(x.size()) != spec.dim)
    throw std::invalid_argument("eval_payoff: dimension mismatch");
  const double k = spec.ah_variant ? std::abs(spec.strike) : spec.strike;
  switch (spec.kind) {
    case PayoffKind::kDispersionCall: return positive_part(l1_norm(x) - k);
    case PayoffKind::kDispersionPut: return negative_part(l1_norm(x) - k);
    case PayoffKind::kBestOfCall: return positive_part(max_coord(x, spec.ah_variant) - k);
    case PayoffKind::kBestOfPut: return negative_part(max_coord(x, spec.ah_variant) - k);
    case PayoffKind::kWorstOfCall: return positive_part(min_coord(x, spec.ah_variant) - k);
    case PayoffKind::kWorstOfPut: return negative_part(min_coord(x, spec.ah_variant) - k);
    case PayoffKind::kBestOfBinaryCall: return max_coord(x, false) - k > 0.0 ? 1.0 : 0.0;
    case PayoffKind::kBestOfBinaryPut: return -(max_coord(x, false) - k) > 0.0 ? 1.0 : 0.0;
    case PayoffKind::kWorstOfBinaryCall: return min_coord(x, false) - k > 0.0 ? 1.0 : 0.0;
    case PayoffKind::kWorstOfBinaryPut: return -(min_coord(x, false) - k) > 0.0 ? 1.0 : 0.0;
    case PayoffKind::kGaussianExample: {
      const double r = l2_norm(x);
      if (r == 0.0) return 0.0;
      const double kk = spec.strike;
      return r * std::exp(-(kk * kk) / (r * r));
    }
  }
  throw std::invalid_argument("unknown payoff kind");
}

bool check_ah(const PayoffSpec& spec, std::span<const double> x, double k, double lambda) {
  if (lambda == 0.0) throw std::invalid_argument("check_ah: lambda must be nonzero");
  PayoffSpec at_k = spec;
  at_k.strike = k;
  const double base = eval_payoff(at_k, x);
  const double tol = 1e-12 * (1.0 + std::abs(base));

  std::vector<double> scaled(x.begin(), x.end());
  for (double& v : scaled) v *= lambda;
  PayoffSpec at_lk = spec;
  at_lk.strike = lambda * k;
  const bool homogeneous = std::abs(eval_payoff(at_lk, scaled) - std::abs(lambda) * base) <= tol;

  PayoffSpec at_mk = spec;
  at_mk.strike = -k;
  const bool even_k = std::abs(eval_payoff(at_mk, x) - base) <= tol;

  std::vector<double> negated(x.begin(), x.end());
  for (double& v : negated) v = -v;
  const bool even_x = std::abs(eval_payoff(at_k, negated) - base) <= tol;

  return homogeneous && even_k && even_x;
}

}  // namespace hedgenet
