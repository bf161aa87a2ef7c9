#include <cmath>
#include <numeric>

#include "deepnet/errors.hpp"
#include "deepnet/training.hpp"

namespace deepnet {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ArgumentError("learning rate must be positive, got " + std::to_string(learning_rate));
  }
  if (batch_size < 2) {
    throw ArgumentError("batch size must be at least 2 for batch normalization, got " + std::to_string(batch_size));
  }
}

void sgd_step(Sequential& net, const GradientSet& gradients, double learning_rate) {
  auto params = net.parameters();
  if (params.size() != gradients.grads.size()) {
    throw ShapeError("sgd_step: " + std::to_string(gradients.grads.size()) + " gradients for " +
                     std::to_string(params.size()) + " parameters");
  }
  for (std::size_t p = 0; p < params.size(); ++p) {
    Matrix& theta = *params[p];
    const Matrix& g = gradients.grads[p];
    if (theta.rows() != g.rows() || theta.cols() != g.cols()) {
      throw ShapeError("sgd_step: gradient " + shape_str(g) + " for parameter " + shape_str(theta));
    }
    auto tv = theta.values();
    const auto gv = g.values();
    for (std::size_t i = 0; i < tv.size(); ++i) tv[i] -= learning_rate * gv[i];
  }
}

namespace {

void check_compatible(const Sequential& net, const Dataset& data, const char* role) {
  if (data.num_features() != net.config().input_dim) {
    throw DataError(std::string(role) + " data has " + std::to_string(data.num_features()) +
                    " features, network expects " + std::to_string(net.config().input_dim));
  }
  if (data.num_classes() > net.config().num_classes) {
    throw DataError(std::string(role) + " data has " + std::to_string(data.num_classes()) +
                    " classes, network predicts " + std::to_string(net.config().num_classes));
  }
}

}  // namespace

TrainHistory fit(Sequential& net, const Dataset& train, const TrainConfig& config, const Dataset* validation) {
  config.validate();
  train.validate();
  check_compatible(net, train, "training");
  if (validation != nullptr) {
    validation->validate();
    check_compatible(net, *validation, "validation");
  }
  const std::size_t n = train.size();
  if (n < 2) throw DataError("training needs at least 2 samples");

  const LossKind loss_kind = net.config().loss();
  const std::size_t num_classes = net.config().num_classes;
  Rng shuffle_rng(config.seed);
  TrainHistory history;
  std::vector<std::size_t> order(n);

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    if (config.shuffle) {
      order = shuffled_indices(shuffle_rng, n);
    } else {
      std::iota(order.begin(), order.end(), std::size_t{0});
    }
    double loss_sum = 0.0;
    std::size_t correct = 0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t end = std::min(n, start + config.batch_size);
      if (end - start < 2) break;
      const std::span<const std::size_t> idx(order.data() + start, end - start);
      const Matrix x = gather_rows(train.features, idx);
      std::vector<int> labels(idx.size());
      for (std::size_t i = 0; i < idx.size(); ++i) labels[i] = train.labels[idx[i]];
      const Matrix y = encode_targets(loss_kind, labels, num_classes);

      const Matrix predictions = net.forward(x, Mode::train);
      const double loss = loss_value(loss_kind, predictions, y);
      if (!std::isfinite(loss) || !all_finite(predictions)) {
        net.set_mode(Mode::eval);
        throw DivergenceError(epoch, "non-finite loss");
      }
      const GradientSet grads = net.backward(output_gradient(loss_kind, predictions, y));
      sgd_step(net, grads, config.learning_rate);

      const auto decisions = decide(predictions);
      for (std::size_t i = 0; i < labels.size(); ++i) correct += decisions[i] == labels[i] ? 1 : 0;
      loss_sum += loss * static_cast<double>(idx.size());
      seen += idx.size();
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(seen);
    rec.train_accuracy = static_cast<double>(correct) / static_cast<double>(seen);
    if (validation != nullptr) {
      net.set_mode(Mode::eval);
      rec.val_loss = evaluate_loss(net, *validation);
      rec.val_accuracy = evaluate(net, *validation).accuracy;
    }
    history.epochs.push_back(rec);
  }
  net.set_mode(Mode::eval);
  return history;
}

namespace {

// Eval-mode predictions in bounded chunks.
Matrix predict_all(const Sequential& net, const Matrix& features) {
  constexpr std::size_t kChunk = 2048;
  if (features.rows() <= kChunk) return net.predict(features);
  Matrix out(features.rows(), net.config().output_dim());
  std::vector<std::size_t> idx;
  for (std::size_t start = 0; start < features.rows(); start += kChunk) {
    const std::size_t end = std::min(features.rows(), start + kChunk);
    idx.resize(end - start);
    std::iota(idx.begin(), idx.end(), start);
    const Matrix part = net.predict(gather_rows(features, idx));
    for (std::size_t i = 0; i < part.rows(); ++i) {
      std::copy(part.row(i).begin(), part.row(i).end(), out.row(start + i).begin());
    }
  }
  return out;
}

}  // namespace

MetricsReport evaluate(const Sequential& net, const Dataset& data) {
  data.validate();
  check_compatible(net, data, "evaluation");
  const auto decisions = decide(predict_all(net, data.features));
  return report(confusion(data.labels, decisions, net.config().num_classes));
}

double evaluate_loss(const Sequential& net, const Dataset& data) {
  data.validate();
  check_compatible(net, data, "evaluation");
  const LossKind kind = net.config().loss();
  return loss_value(kind, predict_all(net, data.features), encode_targets(kind, data.labels, net.config().num_classes));
}

}  // namespace deepnet
