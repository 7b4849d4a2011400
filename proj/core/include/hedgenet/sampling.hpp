#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "hedgenet/payoff.hpp"

namespace hedgenet {

/// Axis-aligned sampling box [lo_1, hi_1] x ... x [lo_d, hi_d].
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  int dim() const { return static_cast<int>(lo.size()); }
  void validate() const;  // requires lo < hi componentwise
};

Box make_box(int dim, double lo, double hi);

/// Sampled asset-performance vectors with (optional) payoff targets.
/// Points are stored row-major, size() * dim doubles. Immutable once filled;
/// regeneration with the same seed and box is bit-identical.
struct Dataset {
  int dim = 0;
  Box box;
  std::uint64_t seed = 0;
  std::vector<double> points;   // row-major
  std::vector<double> targets;  // empty until filled

  std::size_t size() const { return dim > 0 ? points.size() / static_cast<std::size_t>(dim) : 0; }
  bool targets_filled() const { return !targets.empty() && targets.size() == size(); }
  std::span<const double> point(std::size_t i) const {
    return {points.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
};

/// m i.i.d. uniform draws from the box (SplitMix64 stream keyed on seed).
Dataset sample_uniform(const Box& box, std::size_t m, std::uint64_t seed);

/// Full tensor grid with endpoints included; m = points_per_dim^d.
/// Throws if the grid would exceed 1e8 points.
Dataset sample_grid(const Box& box, int points_per_dim);

/// targets[i] = eval_payoff(spec, points[i]).
void fill_targets(Dataset& dataset, const PayoffSpec& spec);

/// Seeded random permutation of 0..m-1 split into n_batches near-equal
/// contiguous slices (sizes differ by at most 1). The partition is fixed:
/// callers iterate it every epoch without reshuffling.
std::vector<std::vector<std::uint32_t>> partition_batches(std::size_t m, std::size_t n_batches,
                                                          std::uint64_t seed);

/// CSV with columns x_1..x_d,target.
void write_dataset_csv(const Dataset& dataset, const std::filesystem::path& path);
Dataset read_dataset_csv(const std::filesystem::path& path);

}  // namespace hedgenet
