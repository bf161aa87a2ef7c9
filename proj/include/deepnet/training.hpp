#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "deepnet/dataset.hpp"
#include "deepnet/metrics.hpp"
#include "deepnet/model.hpp"

namespace deepnet {

struct TrainConfig {
  std::size_t epochs = 500;
  double learning_rate = 0.1;
  std::size_t batch_size = 64;
  std::uint64_t seed = 0;
  bool shuffle = true;

  // learning_rate > 0 and batch_size >= 2; throws ArgumentError.
  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  std::optional<double> val_loss;
  std::optional<double> val_accuracy;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
};

// theta <- theta - lr * grad for every trainable parameter. Batch-norm running
// statistics are not parameters and stay untouched.
void sgd_step(Sequential& net, const GradientSet& gradients, double learning_rate);

// Mini-batch SGD. Each epoch reshuffles with Rng(config.seed) (one stream for
// the whole run), drops a trailing batch smaller than 2, and records the
// sample-weighted mean train loss and accuracy of the train-mode forwards.
// Throws DataError on dimension mismatch, DivergenceError on a non-finite loss.
TrainHistory fit(Sequential& net, const Dataset& train, const TrainConfig& config,
                 const Dataset* validation = nullptr);

// Eval-mode predictions turned into class decisions and scored.
MetricsReport evaluate(const Sequential& net, const Dataset& data);
double evaluate_loss(const Sequential& net, const Dataset& data);

}  // namespace deepnet
