#include "hedgenet/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hedgenet {

SpanParams::SpanParams(int dim, int n_options) : d_(dim), l_(n_options) {
  if (dim < 1 || n_options < 0) throw std::invalid_argument("SpanParams: bad shape");
  const auto d = static_cast<std::size_t>(dim);
  const auto l = static_cast<std::size_t>(n_options);
  off_mu_ = l * d;
  off_strikes_ = off_mu_ + d;
  off_alpha_ = off_strikes_ + l;
  off_nu_ = off_alpha_ + 1;
  off_eta_ = off_nu_ + l;
  data_.assign(off_eta_ + l, 0.0);
}

void SpanParams::set_zero() { std::fill(data_.begin(), data_.end(), 0.0); }

std::string SpanParams::block_name(std::size_t flat_index) const {
  if (flat_index < off_mu_) return "W";
  if (flat_index < off_strikes_) return "mu";
  if (flat_index < off_alpha_) return "strikes";
  if (flat_index == off_alpha_) return "alpha";
  if (flat_index < off_eta_) return "nu";
  return "eta";
}

void SpanParams::require_finite(const std::string& context) const {
  for (std::size_t i = 0; i < data_.size(); ++i)
    if (!std::isfinite(data_[i]))
      throw std::runtime_error(context + ": non-finite value in parameter block '" +
                               block_name(i) + "'");
}

std::string to_string(RestrictionKind kind) {
  switch (kind) {
    case RestrictionKind::kUnrestricted: return "unrestricted";
    case RestrictionKind::kSingleAsset: return "single-asset";
    case RestrictionKind::kPredetermined: return "predetermined";
    case RestrictionKind::kLongOnly: return "long-only";
  }
  throw std::invalid_argument("unknown restriction kind");
}

RestrictionKind restriction_kind_from_string(const std::string& name) {
  if (name == "unrestricted") return RestrictionKind::kUnrestricted;
  if (name == "single-asset") return RestrictionKind::kSingleAsset;
  if (name == "predetermined") return RestrictionKind::kPredetermined;
  if (name == "long-only") return RestrictionKind::kLongOnly;
  throw std::invalid_argument("unknown restriction kind: '" + name + "'");
}

Restriction Restriction::predetermined(std::vector<double> w, int dim,
                                       std::vector<double> strikes, std::vector<double> eta) {
  if (dim < 1 || w.empty() || w.size() % static_cast<std::size_t>(dim) != 0)
    throw std::invalid_argument("predetermined: weight matrix shape mismatch");
  const std::size_t l = w.size() / static_cast<std::size_t>(dim);
  if (strikes.empty()) strikes.assign(l, 1.0);
  if (eta.empty()) eta.assign(l, 1.0);
  if (strikes.size() != l || eta.size() != l)
    throw std::invalid_argument("predetermined: strikes/eta length mismatch");
  for (double k : strikes)
    if (!(k > 0.0)) throw std::invalid_argument("predetermined: strikes must be positive");
  Restriction r;
  r.kind = RestrictionKind::kPredetermined;
  r.frozen_w = std::move(w);
  r.frozen_strikes = std::move(strikes);
  r.frozen_eta = std::move(eta);
  return r;
}

namespace {

// Softmax of w with the usual max-shift; returns the argmax (first maximum,
// i.e. lowest index on ties).
int softmax(std::span<const double> w, std::span<double> omega) {
  const std::size_t d = w.size();
  double wmax = w[0];
  for (std::size_t j = 1; j < d; ++j) wmax = std::max(wmax, w[j]);
  double sum = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    omega[j] = std::exp(w[j] - wmax);
    sum += omega[j];
  }
  int argmax = 0;
  for (std::size_t j = 0; j < d; ++j) {
    omega[j] /= sum;
    if (omega[j] > omega[argmax]) argmax = static_cast<int>(j);
  }
  return argmax;
}

}  // namespace

void apply_psi(const Restriction& restriction, std::span<const double> w, std::span<double> out) {
  const std::size_t d = w.size();
  switch (restriction.kind) {
    case RestrictionKind::kUnrestricted:
    case RestrictionKind::kPredetermined:
      std::copy(w.begin(), w.end(), out.begin());
      return;
    case RestrictionKind::kLongOnly:
      for (std::size_t j = 0; j < d; ++j) out[j] = std::abs(w[j]);
      return;
    case RestrictionKind::kSingleAsset: {
      std::vector<double> omega(d);
      const int jstar = softmax(w, omega);
      std::fill(out.begin(), out.end(), 0.0);
      out[jstar] = omega[jstar];
      return;
    }
  }
}

std::vector<double> apply_psi(const Restriction& restriction, std::span<const double> w) {
  std::vector<double> out(w.size());
  apply_psi(restriction, w, out);
  return out;
}

namespace {

// Effective hidden-layer weights psi(w^(i)) for all units, precomputed once
// per parameter point (psi does not depend on x). For single-asset the
// softmax vector and argmax are kept for the backward pass.
struct EffectiveWeights {
  std::vector<double> psi_w;   // l*d
  std::vector<double> omega;   // l*d, single-asset only
  std::vector<int> argmax;     // l, single-asset only
};

void compute_effective(const SpanParams& params, const Restriction& restriction,
                       EffectiveWeights& eff) {
  const int l = params.n_options();
  const int d = params.dim();
  eff.psi_w.resize(static_cast<std::size_t>(l) * static_cast<std::size_t>(d));
  if (restriction.kind == RestrictionKind::kSingleAsset) {
    eff.omega.resize(eff.psi_w.size());
    eff.argmax.resize(static_cast<std::size_t>(l));
  }
  for (int i = 0; i < l; ++i) {
    auto w = params.w_row(i);
    std::span<double> out{eff.psi_w.data() + static_cast<std::size_t>(i) * d, static_cast<std::size_t>(d)};
    if (restriction.kind == RestrictionKind::kSingleAsset) {
      std::span<double> om{eff.omega.data() + static_cast<std::size_t>(i) * d, static_cast<std::size_t>(d)};
      const int jstar = softmax(w, om);
      eff.argmax[i] = jstar;
      std::fill(out.begin(), out.end(), 0.0);
      out[jstar] = om[jstar];
    } else {
      apply_psi(restriction, w, out);
    }
  }
}

double forward_with(const SpanParams& params, const EffectiveWeights& eff,
                    std::span<const double> x) {
  const int l = params.n_options();
  const int d = params.dim();
  auto mu = params.mu();
  double y = params.alpha();
  for (int j = 0; j < d; ++j) y += mu[j] * x[j];
  auto strikes = params.strikes();
  auto nu = params.nu();
  auto eta = params.eta();
  for (int i = 0; i < l; ++i) {
    const double* wrow = eff.psi_w.data() + static_cast<std::size_t>(i) * d;
    double s = 0.0;
    for (int j = 0; j < d; ++j) s += wrow[j] * x[j];
    const double z = eta[i] * (s - strikes[i]);
    if (z > 0.0) y += nu[i] * z;
  }
  return y;
}

}  // namespace

double forward(const SpanParams& params, const Restriction& restriction,
               std::span<const double> x) {
  if (static_cast<int>(x.size()) != params.dim())
    throw std::invalid_argument("forward: dimension mismatch");
  EffectiveWeights eff;
  compute_effective(params, restriction, eff);
  return forward_with(params, eff, x);
}

double Regularization::penalty(std::span<const double> theta) const {
  if (zeta == 0.0) return 0.0;
  double norm_sq = 0.0;
  for (double v : theta) norm_sq += v * v;
  return squared ? zeta * norm_sq : zeta * std::sqrt(norm_sq);
}

double loss_and_grad(const SpanParams& params, const Restriction& restriction,
                     const Dataset& dataset, std::span<const std::uint32_t> batch,
                     const Regularization& reg, SpanParams& grad) {
  if (batch.empty()) throw std::invalid_argument("loss_and_grad: empty batch");
  if (!dataset.targets_filled()) throw std::invalid_argument("loss_and_grad: targets unfilled");
  if (dataset.dim != params.dim()) throw std::invalid_argument("loss_and_grad: dimension mismatch");
  if (grad.dim() != params.dim() || grad.n_options() != params.n_options())
    grad = SpanParams(params.dim(), params.n_options());
  grad.set_zero();

  const int l = params.n_options();
  const int d = params.dim();
  EffectiveWeights eff;
  compute_effective(params, restriction, eff);

  auto strikes = params.strikes();
  auto nu = params.nu();
  auto eta = params.eta();
  auto mu = params.mu();
  auto g_mu = grad.mu();
  auto g_strikes = grad.strikes();
  auto g_nu = grad.nu();
  auto g_eta = grad.eta();
  double g_alpha = 0.0;

  const bool single_asset = restriction.kind == RestrictionKind::kSingleAsset;
  const bool long_only = restriction.kind == RestrictionKind::kLongOnly;
  const bool predetermined = restriction.kind == RestrictionKind::kPredetermined;

  std::vector<double> s(static_cast<std::size_t>(l));
  double sum_sq = 0.0;
  for (std::uint32_t idx : batch) {
    auto x = dataset.point(idx);
    double y = params.alpha();
    for (int j = 0; j < d; ++j) y += mu[j] * x[j];
    for (int i = 0; i < l; ++i) {
      const double* wrow = eff.psi_w.data() + static_cast<std::size_t>(i) * d;
      double si = 0.0;
      for (int j = 0; j < d; ++j) si += wrow[j] * x[j];
      s[i] = si;
      const double z = eta[i] * (si - strikes[i]);
      if (z > 0.0) y += nu[i] * z;
    }
    const double e = y - dataset.targets[idx];
    sum_sq += e * e;
    const double c = 2.0 * e;
    g_alpha += c;
    for (int j = 0; j < d; ++j) g_mu[j] += c * x[j];
    for (int i = 0; i < l; ++i) {
      const double zi = eta[i] * (s[i] - strikes[i]);
      if (!(zi > 0.0)) continue;  // ReLU subgradient 0 at the kink
      g_nu[i] += c * zi;
      const double coef = c * nu[i];
      g_eta[i] += coef * (s[i] - strikes[i]);
      g_strikes[i] -= coef * eta[i];
      if (predetermined) continue;
      const double gs = coef * eta[i];
      auto g_w = grad.w_row(i);
      if (single_asset) {
        // Differentiate only the softmax magnitude at the selected asset;
        // the argmax indicator is locally constant.
        const int jstar = eff.argmax[i];
        const double* om = eff.omega.data() + static_cast<std::size_t>(i) * d;
        const double base = gs * x[jstar] * om[jstar];
        for (int m = 0; m < d; ++m)
          g_w[m] += base * ((m == jstar ? 1.0 : 0.0) - om[m]);
      } else if (long_only) {
        auto w = params.w_row(i);
        for (int j = 0; j < d; ++j) {
          const double sgn = w[j] > 0.0 ? 1.0 : (w[j] < 0.0 ? -1.0 : 0.0);
          g_w[j] += gs * sgn * x[j];
        }
      } else {
        for (int j = 0; j < d; ++j) g_w[j] += gs * x[j];
      }
    }
  }

  const double inv_m = 1.0 / static_cast<double>(batch.size());
  auto graw = grad.raw();
  for (double& g : graw) g *= inv_m;
  grad.alpha() = g_alpha * inv_m;

  double loss = sum_sq * inv_m;
  if (reg.zeta != 0.0) {
    auto praw = params.raw();
    double norm_sq = 0.0;
    for (double v : praw) norm_sq += v * v;
    if (reg.squared) {
      for (std::size_t i = 0; i < praw.size(); ++i) graw[i] += 2.0 * reg.zeta * praw[i];
      loss += reg.zeta * norm_sq;
    } else {
      const double norm = std::sqrt(norm_sq);
      if (norm > 0.0) {
        const double coef = reg.zeta / norm;
        for (std::size_t i = 0; i < praw.size(); ++i) graw[i] += coef * praw[i];
      }
      loss += reg.zeta * norm;
    }
  }
  if (predetermined) {
    for (int i = 0; i < l; ++i) {
      auto g_w = grad.w_row(i);
      std::fill(g_w.begin(), g_w.end(), 0.0);
    }
    std::fill(g_strikes.begin(), g_strikes.end(), 0.0);
    std::fill(g_eta.begin(), g_eta.end(), 0.0);
  }
  return loss;
}

double full_loss(const SpanParams& params, const Restriction& restriction, const Dataset& dataset,
                 const Regularization& reg) {
  if (!dataset.targets_filled()) throw std::invalid_argument("full_loss: targets unfilled");
  EffectiveWeights eff;
  compute_effective(params, restriction, eff);
  const std::size_t m = dataset.size();
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double e = forward_with(params, eff, dataset.point(i)) - dataset.targets[i];
    sum_sq += e * e;
  }
  return sum_sq / static_cast<double>(m) + reg.penalty(params.raw());
}

void project_strikes(SpanParams& params) {
  for (double& k : params.strikes()) k = std::max(k, kStrikeFloor);
}

double Portfolio::value(std::span<const double> x) const {
  double y = alpha;
  for (std::size_t j = 0; j < mu.size(); ++j) y += mu[j] * x[j];
  for (const auto& opt : options) {
    double s = 0.0;
    for (std::size_t j = 0; j < opt.w_prime.size(); ++j) s += opt.w_prime[j] * x[j];
    const double z = s - opt.strike;
    if (z > 0.0) y += opt.nu_prime * z;
  }
  return y;
}

Portfolio renormalize_strikes(const SpanParams& params, const Restriction& restriction,
                              double common_strike) {
  if (!(common_strike > 0.0))
    throw std::invalid_argument("renormalize_strikes: common strike must be positive");
  auto strikes = params.strikes();
  auto nu = params.nu();
  auto eta = params.eta();
  Portfolio pf;
  pf.alpha = params.alpha();
  pf.mu.assign(params.mu().begin(), params.mu().end());
  pf.options.resize(static_cast<std::size_t>(params.n_options()));
  for (int i = 0; i < params.n_options(); ++i) {
    const double ki = strikes[i];
    if (!(ki > 0.0)) throw std::invalid_argument("renormalize_strikes: nonpositive strike");
    auto& opt = pf.options[i];
    opt.nu_prime = nu[i] * eta[i] * ki / common_strike;
    opt.strike = common_strike;
    opt.w_prime = apply_psi(restriction, params.w_row(i));
    const double scale = (eta[i] < 0.0 ? -1.0 : 1.0) * common_strike / ki;
    for (double& wj : opt.w_prime) wj *= scale;
  }
  return pf;
}

}  // namespace hedgenet
