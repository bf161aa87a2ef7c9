#include "deepnet/crossval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "deepnet/errors.hpp"

namespace deepnet {

std::vector<std::size_t> FoldPlan::train_indices(std::size_t held_out) const {
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    if (f != held_out) out.insert(out.end(), folds[f].begin(), folds[f].end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

FoldPlan kfold_split(std::span<const int> labels, std::size_t num_classes, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ArgumentError("k-fold needs k >= 2, got " + std::to_string(k));
  std::vector<std::vector<std::size_t>> by_class(num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= num_classes) {
      throw DataError("label " + std::to_string(labels[i]) + " outside [0, " + std::to_string(num_classes) + ")");
    }
    by_class[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (!by_class[c].empty() && by_class[c].size() < k) {
      throw DataError("class " + std::to_string(c) + " has " + std::to_string(by_class[c].size()) +
                      " samples, fewer than the " + std::to_string(k) + " folds requested");
    }
  }

  FoldPlan plan{k, std::vector<std::vector<std::size_t>>(k)};
  Rng rng(seed);
  std::size_t next = 0;
  for (const auto& members : by_class) {
    const auto perm = shuffled_indices(rng, members.size());
    for (std::size_t p : perm) {
      plan.folds[next].push_back(members[p]);
      next = (next + 1) % k;
    }
  }
  for (auto& f : plan.folds) std::sort(f.begin(), f.end());
  return plan;
}

CrossValResult cross_validate(const NetworkFactory& factory, const Dataset& data, std::size_t k,
                              const TrainConfig& config) {
  data.validate();
  config.validate();
  const FoldPlan plan = kfold_split(data.labels, data.num_classes(), k, config.seed);
  const Rng master(config.seed);

  CrossValResult result;
  for (std::size_t f = 0; f < k; ++f) {
    const Dataset train = data.subset(plan.train_indices(f));
    const Dataset test = data.subset(plan.folds[f]);
    Sequential net = factory(master.fork(2 * f).next_u64());
    TrainConfig fold_config = config;
    fold_config.seed = master.fork(2 * f + 1).next_u64();
    fit(net, train, fold_config);
    result.folds.push_back(evaluate(net, test));
  }

  std::vector<double> acc;
  for (const auto& r : result.folds) {
    acc.push_back(r.accuracy);
    result.mean_macro_f1 += r.macro.f1;
  }
  const auto kd = static_cast<double>(k);
  result.mean_macro_f1 /= kd;
  result.mean_accuracy = std::accumulate(acc.begin(), acc.end(), 0.0) / kd;
  double ss = 0.0;
  for (double a : acc) ss += (a - result.mean_accuracy) * (a - result.mean_accuracy);
  result.stdev_accuracy = std::sqrt(ss / kd);
  result.min_accuracy = *std::min_element(acc.begin(), acc.end());
  result.max_accuracy = *std::max_element(acc.begin(), acc.end());
  return result;
}

std::string_view to_string(SweepAxis axis) noexcept {
  switch (axis) {
    case SweepAxis::units: return "units";
    case SweepAxis::learning_rate: return "lr";
    case SweepAxis::depth: return "depth";
  }
  return "depth";
}

SweepAxis sweep_axis_from_string(std::string_view name) {
  if (name == "units") return SweepAxis::units;
  if (name == "lr" || name == "learning_rate") return SweepAxis::learning_rate;
  if (name == "depth") return SweepAxis::depth;
  throw ArgumentError("unknown sweep axis '" + std::string(name) + "', expected units, lr or depth");
}

std::vector<double> default_grid(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::units: return {128, 256, 384, 512, 640, 768, 896, 1024};
    case SweepAxis::learning_rate:
      return {0.01, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
    case SweepAxis::depth: return {1, 2, 3, 4, 5};
  }
  return {};
}

SweepSpec SweepSpec::defaults(SweepAxis axis) {
  SweepSpec s;
  s.axis = axis;
  s.grid = default_grid(axis);
  s.epochs = axis == SweepAxis::units ? 200 : 500;
  return s;
}

void SweepSpec::validate() const {
  if (grid.empty()) throw ArgumentError("sweep grid must not be empty");
  if (trials < 1) throw ArgumentError("sweep needs at least one trial");
  if (folds < 2) throw ArgumentError("sweep needs at least 2 folds");
  for (double v : grid) {
    switch (axis) {
      case SweepAxis::units:
        if (!(v >= 1.0) || v != std::floor(v)) throw ArgumentError("unit counts must be positive integers");
        break;
      case SweepAxis::learning_rate:
        if (!(v > 0.0) || !std::isfinite(v)) throw ArgumentError("learning rates must be positive");
        break;
      case SweepAxis::depth:
        if (!(v >= 1.0 && v <= 5.0) || v != std::floor(v)) throw ArgumentError("depths must be integers in 1..5");
        break;
    }
  }
}

NetworkConfig sweep_point_config(const SweepSpec& spec, double value, std::size_t input_dim,
                                 std::size_t num_classes) {
  NetworkConfig cfg;
  switch (spec.axis) {
    case SweepAxis::units:
      cfg.input_dim = input_dim;
      cfg.num_classes = num_classes;
      cfg.hidden = {static_cast<std::size_t>(value)};
      break;
    case SweepAxis::learning_rate:
      cfg.input_dim = input_dim;
      cfg.num_classes = num_classes;
      cfg.hidden = {spec.base_units};
      break;
    case SweepAxis::depth:
      cfg = topology_config(static_cast<std::size_t>(value), input_dim, num_classes);
      break;
  }
  cfg.batch_norm = spec.batch_norm;
  cfg.dropout_rate = spec.dropout_rate;
  cfg.validate();
  return cfg;
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial) {
  return Rng(base_seed).fork(trial).next_u64();
}

SweepResult sweep(const SweepSpec& spec, const Dataset& data, const TrainConfig& config) {
  spec.validate();
  data.validate();
  SweepResult result;
  result.axis = spec.axis;
  for (double value : spec.grid) {
    const NetworkConfig net_cfg = sweep_point_config(spec, value, data.num_features(), data.num_classes());
    const NetworkFactory factory = [net_cfg](std::uint64_t seed) { return build_network(net_cfg, seed); };
    SweepRow row;
    row.value = value;
    for (std::size_t t = 0; t < spec.trials; ++t) {
      TrainConfig cfg = config;
      cfg.seed = trial_seed(config.seed, t);
      cfg.epochs = spec.epochs;
      if (spec.axis == SweepAxis::learning_rate) cfg.learning_rate = value;
      row.trials.push_back(cross_validate(factory, data, spec.folds, cfg));
      row.mean_accuracy += row.trials.back().mean_accuracy;
    }
    row.mean_accuracy /= static_cast<double>(spec.trials);
    result.rows.push_back(std::move(row));
  }
  for (std::size_t i = 1; i < result.rows.size(); ++i) {
    if (result.rows[i].mean_accuracy > result.rows[result.best_index].mean_accuracy) result.best_index = i;
  }
  result.rows[result.best_index].best = true;
  return result;
}

std::vector<std::size_t> SweepResult::ranking() const {
  std::vector<std::size_t> idx(rows.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return rows[a].mean_accuracy > rows[b].mean_accuracy; });
  return idx;
}

}  // namespace deepnet
