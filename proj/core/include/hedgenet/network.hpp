#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hedgenet/sampling.hpp"

namespace hedgenet {

/// Strikes are projected onto [kStrikeFloor, inf) after each optimizer step.
inline constexpr double kStrikeFloor = 1e-6;

/// Trainable parameter set theta = (W, mu, k, alpha, nu, eta) of the spanning
/// network
///
///   G(x) = alpha + mu . x + sum_i nu_i (eta_i (psi(w^(i)) . x - k_i))^+ ,
///
/// stored as one flat vector with block layout
/// [W (l*d) | mu (d) | strikes (l) | alpha | nu (l) | eta (l)] so optimizer
/// state and finite differences can address coordinates uniformly.
class SpanParams {
 public:
  SpanParams() = default;
  SpanParams(int dim, int n_options);

  int dim() const { return d_; }
  int n_options() const { return l_; }
  std::size_t size() const { return data_.size(); }

  std::span<double> raw() { return data_; }
  std::span<const double> raw() const { return data_; }

  std::span<double> w_row(int i) { return {data_.data() + static_cast<std::size_t>(i) * d_, static_cast<std::size_t>(d_)}; }
  std::span<const double> w_row(int i) const { return {data_.data() + static_cast<std::size_t>(i) * d_, static_cast<std::size_t>(d_)}; }
  std::span<double> mu() { return {data_.data() + off_mu_, static_cast<std::size_t>(d_)}; }
  std::span<const double> mu() const { return {data_.data() + off_mu_, static_cast<std::size_t>(d_)}; }
  std::span<double> strikes() { return {data_.data() + off_strikes_, static_cast<std::size_t>(l_)}; }
  std::span<const double> strikes() const { return {data_.data() + off_strikes_, static_cast<std::size_t>(l_)}; }
  double& alpha() { return data_[off_alpha_]; }
  double alpha() const { return data_[off_alpha_]; }
  std::span<double> nu() { return {data_.data() + off_nu_, static_cast<std::size_t>(l_)}; }
  std::span<const double> nu() const { return {data_.data() + off_nu_, static_cast<std::size_t>(l_)}; }
  std::span<double> eta() { return {data_.data() + off_eta_, static_cast<std::size_t>(l_)}; }
  std::span<const double> eta() const { return {data_.data() + off_eta_, static_cast<std::size_t>(l_)}; }

  void set_zero();
  /// Name of the parameter block owning a flat coordinate ("W", "mu", ...).
  std::string block_name(std::size_t flat_index) const;
  /// Throws std::runtime_error naming the first non-finite block, if any.
  void require_finite(const std::string& context) const;

 private:
  int d_ = 0, l_ = 0;
  std::size_t off_mu_ = 0, off_strikes_ = 0, off_alpha_ = 0, off_nu_ = 0, off_eta_ = 0;
  std::vector<double> data_;
};

enum class RestrictionKind { kUnrestricted, kSingleAsset, kPredetermined, kLongOnly };

std::string to_string(RestrictionKind kind);
RestrictionKind restriction_kind_from_string(const std::string& name);

/// Which psi map is applied to raw basket weights. Predetermined carries an
/// immutable copy of the instrument definition (weights, strikes, selectors)
/// that the trainer installs and never updates.
struct Restriction {
  RestrictionKind kind = RestrictionKind::kUnrestricted;
  std::vector<double> frozen_w;        // l*d row-major, predetermined only
  std::vector<double> frozen_strikes;  // l
  std::vector<double> frozen_eta;      // l

  static Restriction unrestricted() { return {}; }
  static Restriction single_asset() { return {RestrictionKind::kSingleAsset, {}, {}, {}}; }
  static Restriction long_only() { return {RestrictionKind::kLongOnly, {}, {}, {}}; }
  /// Defaults: unit strikes, selectors +1 (calls).
  static Restriction predetermined(std::vector<double> w, int dim,
                                   std::vector<double> strikes = {}, std::vector<double> eta = {});

  int frozen_options(int dim) const {
    return dim > 0 ? static_cast<int>(frozen_w.size()) / dim : 0;
  }
};

/// psi of Algorithm 1: identity (unrestricted/predetermined), softmax one-hot
/// (single-asset, ties to the lowest index), or componentwise absolute value
/// (long-only).
void apply_psi(const Restriction& restriction, std::span<const double> w, std::span<double> out);
std::vector<double> apply_psi(const Restriction& restriction, std::span<const double> w);

double forward(const SpanParams& params, const Restriction& restriction,
               std::span<const double> x);

/// Weight-decay penalty added to the batch MSE: zeta * ||theta||_2^2 or the
/// plain zeta * ||theta||_2.
struct Regularization {
  double zeta = 0.0;
  bool squared = true;

  double penalty(std::span<const double> theta) const;
};

/// Batch-mean squared error plus the regularization penalty, with the exact
/// gradient of that expression written into `grad` (same shape as `params`).
/// ReLU subgradient at the kink is 0; single-asset backward differentiates the
/// softmax magnitude at the argmax selected in the forward pass; predetermined
/// zeroes the W/strike/eta gradient blocks; long-only uses sign(w), sign(0)=0.
double loss_and_grad(const SpanParams& params, const Restriction& restriction,
                     const Dataset& dataset, std::span<const std::uint32_t> batch,
                     const Regularization& reg, SpanParams& grad);

/// Full loss without gradient (used for epoch diagnostics).
double full_loss(const SpanParams& params, const Restriction& restriction, const Dataset& dataset,
                 const Regularization& reg);

void project_strikes(SpanParams& params);

struct PortfolioOption {
  double nu_prime = 0.0;
  std::vector<double> w_prime;
  double strike = 1.0;
};

/// Cash + underlyings + basket calls at one common strike.
struct Portfolio {
  double alpha = 0.0;
  std::vector<double> mu;
  std::vector<PortfolioOption> options;

  double value(std::span<const double> x) const;
};

/// Strike renormalization: nu'_i = nu_i eta_i k_i / common_strike and
/// w'^(i) = (common_strike / k_i) psi(w^(i)), so every instrument is quoted
/// at the common strike. For eta_i < 0 the sign is carried into nu' and w' is
/// negated, putting puts on the same call-strike axis for reporting; the
/// portfolio value matches forward() exactly whenever all eta_i > 0.
Portfolio renormalize_strikes(const SpanParams& params, const Restriction& restriction,
                              double common_strike);

}  // namespace hedgenet
