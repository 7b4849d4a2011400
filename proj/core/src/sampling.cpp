#include "hedgenet/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "hedgenet/io.hpp"
#include "hedgenet/prng.hpp"

namespace hedgenet {

void Box::validate() const {
  if (lo.empty() || lo.size() != hi.size()) throw std::invalid_argument("box: lo/hi size mismatch");
  for (std::size_t j = 0; j < lo.size(); ++j)
    if (!(lo[j] < hi[j]))
      throw std::invalid_argument("box: degenerate in coordinate " + std::to_string(j + 1));
}

Box make_box(int dim, double lo, double hi) {
  Box box;
  box.lo.assign(static_cast<std::size_t>(dim), lo);
  box.hi.assign(static_cast<std::size_t>(dim), hi);
  return box;
}

Dataset sample_uniform(const Box& box, std::size_t m, std::uint64_t seed) {
  box.validate();
  if (m < 1) throw std::invalid_argument("sample_uniform: m must be >= 1");
  Dataset ds;
  ds.dim = box.dim();
  ds.box = box;
  ds.seed = seed;
  ds.points.resize(m * static_cast<std::size_t>(ds.dim));
  SplitMix64 rng(seed);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (int j = 0; j < ds.dim; ++j) ds.points[idx++] = rng.uniform(box.lo[j], box.hi[j]);
  return ds;
}

Dataset sample_grid(const Box& box, int points_per_dim) {
  box.validate();
  if (points_per_dim < 2) throw std::invalid_argument("sample_grid: points_per_dim must be >= 2");
  const int d = box.dim();
  std::size_t m = 1;
  for (int j = 0; j < d; ++j) {
    m *= static_cast<std::size_t>(points_per_dim);
    if (m > 100'000'000ULL) throw std::invalid_argument("sample_grid: grid larger than 1e8 points");
  }
  Dataset ds;
  ds.dim = d;
  ds.box = box;
  ds.points.resize(m * static_cast<std::size_t>(d));

  // Node j along an axis: center + half_width * (2j - (q-1))/(q-1). The
  // symmetric form keeps grids over boxes centered at 0 exactly closed
  // under x -> -x.
  const int q = points_per_dim;
  std::vector<double> axis(static_cast<std::size_t>(q));
  std::vector<std::vector<double>> axes(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    const double center = 0.5 * (box.lo[j] + box.hi[j]);
    const double half = 0.5 * (box.hi[j] - box.lo[j]);
    for (int i = 0; i < q; ++i) {
      double t = static_cast<double>(2 * i - (q - 1)) / static_cast<double>(q - 1);
      axis[i] = std::clamp(center + half * t, box.lo[j], box.hi[j]);
    }
    axes[j] = axis;
  }
  std::vector<int> counter(static_cast<std::size_t>(d), 0);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < m; ++i) {
    for (int j = 0; j < d; ++j)
      ds.points[idx++] = axes[j][static_cast<std::size_t>(counter[j])];
    for (int j = d - 1; j >= 0; --j) {
      if (++counter[j] < q) break;
      counter[j] = 0;
    }
  }
  return ds;
}

void fill_targets(Dataset& dataset, const PayoffSpec& spec) {
  spec.validate();
  if (spec.dim != dataset.dim) throw std::invalid_argument("fill_targets: dimension mismatch");
  const std::size_t m = dataset.size();
  dataset.targets.resize(m);
  for (std::size_t i = 0; i < m; ++i) dataset.targets[i] = eval_payoff(spec, dataset.point(i));
}

std::vector<std::vector<std::uint32_t>> partition_batches(std::size_t m, std::size_t n_batches,
                                                          std::uint64_t seed) {
  if (n_batches < 1 || n_batches > m)
    throw std::invalid_argument("partition_batches: need 1 <= n_batches <= m");
  std::vector<std::uint32_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0u);
  SplitMix64 rng(seed);
  for (std::size_t i = m - 1; i > 0; --i)
    std::swap(perm[i], perm[rng.next_below(i + 1)]);

  std::vector<std::vector<std::uint32_t>> batches(n_batches);
  const std::size_t base = m / n_batches;
  const std::size_t extra = m % n_batches;
  std::size_t pos = 0;
  for (std::size_t b = 0; b < n_batches; ++b) {
    const std::size_t len = base + (b < extra ? 1 : 0);
    batches[b].assign(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                      perm.begin() + static_cast<std::ptrdiff_t>(pos + len));
    pos += len;
  }
  return batches;
}

void write_dataset_csv(const Dataset& dataset, const std::filesystem::path& path) {
  CsvTable table;
  for (int j = 0; j < dataset.dim; ++j) table.header.push_back("x_" + std::to_string(j + 1));
  table.header.push_back("target");
  const std::size_t m = dataset.size();
  table.rows.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    auto x = dataset.point(i);
    std::vector<double> row(x.begin(), x.end());
    row.push_back(dataset.targets_filled() ? dataset.targets[i] : 0.0);
    table.rows.push_back(std::move(row));
  }
  atomic_write(path, csv_to_string(table));
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
  CsvTable table = read_csv(path);
  if (table.header.size() < 2 || table.header.back() != "target")
    throw std::runtime_error("dataset csv: expected columns x_1..x_d,target");
  Dataset ds;
  ds.dim = static_cast<int>(table.header.size()) - 1;
  ds.points.reserve(table.rows.size() * static_cast<std::size_t>(ds.dim));
  ds.targets.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) throw std::runtime_error("dataset csv: ragged row");
    ds.points.insert(ds.points.end(), row.begin(), row.end() - 1);
    ds.targets.push_back(row.back());
  }
  // Bounding box of the file contents; the original sampling box is not stored.
  ds.box.lo.assign(static_cast<std::size_t>(ds.dim), 0.0);
  ds.box.hi.assign(static_cast<std::size_t>(ds.dim), 0.0);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    auto x = ds.point(i);
    for (int j = 0; j < ds.dim; ++j) {
      ds.box.lo[j] = std::min(ds.box.lo[j], x[j]);
      ds.box.hi[j] = std::max(ds.box.hi[j], x[j]);
    }
  }
  return ds;
}

}  // namespace hedgenet
