#include <cstdio>
#include <type_traits>

#include "deepnet/errors.hpp"
#include "deepnet/model.hpp"

namespace deepnet {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

void NetworkConfig::validate() const {
  if (input_dim == 0) throw ArgumentError("network input_dim must be >= 1");
  if (num_classes < 2) throw ArgumentError("network needs at least 2 classes, got " + std::to_string(num_classes));
  if (hidden.empty()) throw ArgumentError("network hidden plan must not be empty");
  for (std::size_t w : hidden) {
    if (w == 0) throw ArgumentError("hidden widths must be positive");
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw ArgumentError("dropout rate must be in [0, 1), got " + std::to_string(dropout_rate));
  }
}

Sequential::Sequential(NetworkConfig config, std::vector<Layer> layers, std::uint64_t seed)
    : config_(std::move(config)), layers_(std::move(layers)), seed_(seed), dropout_rng_(Rng(seed).fork(1)) {
  config_.validate();
  if (layers_.empty()) throw ArgumentError("network has no layers");
}

void Sequential::check_input(const Matrix& x) const {
  if (x.cols() != config_.input_dim) {
    throw ShapeError("network expects " + std::to_string(config_.input_dim) + " input columns, got " +
                     shape_str(x));
  }
}

Matrix Sequential::forward(const Matrix& x) {
  if (mode_ == Mode::eval) return predict(x);
  check_input(x);
  Matrix h = x;
  for (Layer& layer : layers_) {
    h = std::visit(overloaded{
                       [&](DenseLayer& l) { return l.forward(h); },
                       [&](BatchNormLayer& l) { return l.forward_train(h); },
                       [&](DropoutLayer& l) { return l.forward(h, Mode::train, dropout_rng_); },
                       [&](ActivationLayer& l) { return l.forward(h); },
                   },
                   layer);
  }
  has_train_cache_ = true;
  return h;
}

Matrix Sequential::forward(const Matrix& x, Mode mode) {
  mode_ = mode;
  return forward(x);
}

Matrix Sequential::predict(const Matrix& x) const {
  check_input(x);
  Matrix h = x;
  for (const Layer& layer : layers_) {
    h = std::visit(overloaded{
                       [&](const DenseLayer& l) { return l.infer(h); },
                       [&](const BatchNormLayer& l) { return l.forward_eval(h); },
                       [&](const DropoutLayer&) { return h; },
                       [&](const ActivationLayer& l) { return l.infer(h); },
                   },
                   layer);
  }
  return h;
}

GradientSet Sequential::backward(const Matrix& logit_grad) {
  if (!has_train_cache_) throw StateError("backward needs a preceding train-mode forward");
  const auto* head = std::get_if<ActivationLayer>(&layers_.back());
  if (head == nullptr ||
      (head->kind() != ActivationKind::sigmoid && head->kind() != ActivationKind::softmax)) {
    throw UnsupportedError(
        "backward needs the sigmoid/softmax head to be the last layer; a network with a trailing batch "
        "norm after the head can be evaluated but not trained");
  }

  // Parameter gradients are produced back to front; collect then reverse.
  std::vector<std::vector<Matrix>> per_layer;
  Matrix g = logit_grad;
  for (std::size_t idx = layers_.size() - 1; idx-- > 0;) {
    std::vector<Matrix> params;
    g = std::visit(overloaded{
                       [&](DenseLayer& l) {
                         auto r = l.backward(g);
                         params.push_back(std::move(r.weights));
                         params.push_back(std::move(r.bias));
                         return std::move(r.input);
                       },
                       [&](BatchNormLayer& l) {
                         auto r = l.backward(g);
                         params.push_back(std::move(r.gamma));
                         params.push_back(std::move(r.beta));
                         return std::move(r.input);
                       },
                       [&](DropoutLayer& l) { return l.backward(g); },
                       [&](ActivationLayer& l) { return l.backward(g); },
                   },
                   layers_[idx]);
    per_layer.push_back(std::move(params));
  }
  GradientSet out;
  for (auto it = per_layer.rbegin(); it != per_layer.rend(); ++it) {
    for (auto& m : *it) out.grads.push_back(std::move(m));
  }
  return out;
}

std::vector<Matrix*> Sequential::parameters() {
  std::vector<Matrix*> out;
  for (Layer& layer : layers_) {
    if (auto* d = std::get_if<DenseLayer>(&layer)) {
      out.push_back(&d->weights());
      out.push_back(&d->bias());
    } else if (auto* b = std::get_if<BatchNormLayer>(&layer)) {
      out.push_back(&b->gamma());
      out.push_back(&b->beta());
    }
  }
  return out;
}

std::vector<const Matrix*> Sequential::parameters() const {
  std::vector<const Matrix*> out;
  for (auto* p : const_cast<Sequential*>(this)->parameters()) out.push_back(p);
  return out;
}

std::size_t Sequential::param_count() const {
  std::size_t total = 0;
  for (const auto& row : summary()) total += row.params;
  return total;
}

std::vector<LayerSummary> Sequential::summary() const {
  std::vector<LayerSummary> rows;
  for (const Layer& layer : layers_) {
    std::visit(overloaded{
                   [&](const DenseLayer& l) {
                     rows.push_back({"Fully-connected", l.out_dim(), "", l.param_count()});
                   },
                   [&](const BatchNormLayer& l) {
                     rows.push_back({"Batch Normalization", l.dim(), "", l.param_count()});
                   },
                   [&](const DropoutLayer& l) {
                     char buf[32];
                     std::snprintf(buf, sizeof buf, "Dropout (%g)", l.rate());
                     rows.push_back({buf, rows.empty() ? 0 : rows.back().units, "", 0});
                   },
                   [&](const ActivationLayer& l) {
                     if (!rows.empty() && rows.back().type == "Fully-connected" && rows.back().activation.empty()) {
                       rows.back().activation = std::string(to_string(l.kind()));
                     } else {
                       rows.push_back({"Activation", rows.empty() ? config_.input_dim : rows.back().units,
                                       std::string(to_string(l.kind())), 0});
                     }
                   },
               },
               layer);
  }
  return rows;
}

}  // namespace deepnet
