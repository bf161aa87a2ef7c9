#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "deepnet/dataset.hpp"
#include "deepnet/metrics.hpp"
#include "deepnet/model.hpp"
#include "deepnet/training.hpp"

namespace deepnet {

struct FoldPlan {
  std::size_t k = 0;
  std::vector<std::vector<std::size_t>> folds;  // each sorted ascending

  // Every index outside fold `held_out`, ascending.
  std::vector<std::size_t> train_indices(std::size_t held_out) const;
};

// Stratified, seeded partition into k folds. Each class is shuffled and dealt
// round-robin, continuing the rotation where the previous class stopped, so
// fold sizes and per-class counts each differ by at most one.
// Throws ArgumentError for k < 2 and DataError when a class has fewer than k members.
FoldPlan kfold_split(std::span<const int> labels, std::size_t num_classes, std::size_t k, std::uint64_t seed);

// Builds a fresh network from a seed.
using NetworkFactory = std::function<Sequential(std::uint64_t seed)>;

struct CrossValResult {
  std::vector<MetricsReport> folds;
  double mean_accuracy = 0.0;
  double stdev_accuracy = 0.0;  // population standard deviation across folds
  double min_accuracy = 0.0;
  double max_accuracy = 0.0;
  double mean_macro_f1 = 0.0;
};

// Fold f trains a network from factory(Rng(seed).fork(2f).next_u64()) with
// shuffling seed Rng(seed).fork(2f + 1).next_u64(), where seed is config.seed.
CrossValResult cross_validate(const NetworkFactory& factory, const Dataset& data, std::size_t k,
                              const TrainConfig& config);

enum class SweepAxis { units, learning_rate, depth };

std::string_view to_string(SweepAxis axis) noexcept;
SweepAxis sweep_axis_from_string(std::string_view name);  // "units", "lr", "depth"

// Default grids: units {128, 256, ..., 1024}, learning rate {0.01, 0.05, 0.1,
// ..., 0.5}, depth {1, ..., 5}.
std::vector<double> default_grid(SweepAxis axis);

struct SweepSpec {
  SweepAxis axis = SweepAxis::depth;
  std::vector<double> grid;
  std::size_t trials = 2;
  std::size_t epochs = 500;
  std::size_t folds = 10;
  // Hidden width used on the learning-rate axis (a single hidden layer).
  std::size_t base_units = 1024;
  bool batch_norm = true;
  double dropout_rate = kDeepNetDropout;

  // Default grid and trial/fold counts; epochs 200 for units, 500 otherwise.
  static SweepSpec defaults(SweepAxis axis);
  void validate() const;
};

struct SweepRow {
  double value = 0.0;
  std::vector<CrossValResult> trials;
  double mean_accuracy = 0.0;  // mean of the trials' mean CV accuracy
  bool best = false;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::depth;
  std::vector<SweepRow> rows;  // grid order
  std::size_t best_index = 0;

  // Row indices by descending mean accuracy; ties keep grid order.
  std::vector<std::size_t> ranking() const;
};

// Network config for one grid point of `spec` on a dataset's shape.
NetworkConfig sweep_point_config(const SweepSpec& spec, double value, std::size_t input_dim,
                                 std::size_t num_classes);

// For every grid point and trial t, cross-validates with config.seed replaced
// by Rng(config.seed).fork(t).next_u64() and epochs by spec.epochs.
SweepResult sweep(const SweepSpec& spec, const Dataset& data, const TrainConfig& config);

// Seed used for trial t of a sweep.
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial);

}  // namespace deepnet
