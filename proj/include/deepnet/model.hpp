#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "deepnet/layers.hpp"
#include "deepnet/losses.hpp"
#include "deepnet/matrix.hpp"
#include "deepnet/rng.hpp"

namespace deepnet {

// Hidden widths of the five-block pyramid; DNN-k uses the first k.
inline constexpr std::array<std::size_t, 5> kDeepNetWidths = {1024, 768, 512, 256, 128};
inline constexpr double kDeepNetDropout = 0.01;

struct NetworkConfig {
  std::size_t input_dim = 0;
  std::size_t num_classes = 2;
  std::vector<std::size_t> hidden;
  double dropout_rate = kDeepNetDropout;
  // false replaces every hidden batch norm with the identity (tiny-batch datasets).
  bool batch_norm = true;
  // Appends a batch norm after the output activation, as in the reference layer
  // table. Such a network can be evaluated but not trained.
  bool faithful_trailing_bn = false;

  // 1 sigmoid unit for two classes, otherwise one softmax unit per class.
  std::size_t output_dim() const noexcept { return num_classes == 2 ? 1 : num_classes; }
  ActivationKind output_activation() const noexcept {
    return num_classes == 2 ? ActivationKind::sigmoid : ActivationKind::softmax;
  }
  LossKind loss() const noexcept {
    return num_classes == 2 ? LossKind::binary_cross_entropy : LossKind::categorical_cross_entropy;
  }

  // Throws ArgumentError on empty hidden plans, zero widths, <2 classes or a bad rate.
  void validate() const;

  bool operator==(const NetworkConfig&) const = default;
};

using Layer = std::variant<DenseLayer, BatchNormLayer, DropoutLayer, ActivationLayer>;

// Gradients aligned one-to-one with Sequential::parameters().
struct GradientSet {
  std::vector<Matrix> grads;
};

// One row of the parameter table. Activations are folded into the dense row
// they follow, the way the reference parameter table lists them.
struct LayerSummary {
  std::string type;
  std::size_t units = 0;
  std::string activation;
  std::size_t params = 0;
};

class Sequential {
 public:
  Sequential(NetworkConfig config, std::vector<Layer> layers, std::uint64_t seed);

  const NetworkConfig& config() const noexcept { return config_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::span<const Layer> layers() const noexcept { return layers_; }
  std::span<Layer> layers() noexcept { return layers_; }

  Mode mode() const noexcept { return mode_; }
  void set_mode(Mode mode) noexcept { mode_ = mode; }

  // Forward in the current mode.
  Matrix forward(const Matrix& x);
  // Sets the mode, then forwards. Eval mode never mutates the network.
  Matrix forward(const Matrix& x, Mode mode);
  // Eval-mode forward.
  Matrix predict(const Matrix& x) const;

  // Backpropagates the loss gradient taken with respect to the output logits
  // (the input of the head activation). Needs a preceding train-mode forward.
  GradientSet backward(const Matrix& logit_grad);

  std::vector<Matrix*> parameters();
  std::vector<const Matrix*> parameters() const;

  // Trainable parameters plus batch-norm running statistics.
  std::size_t param_count() const;
  std::vector<LayerSummary> summary() const;

  // Names of the classes the output head predicts, by id. Optional metadata.
  const std::vector<std::string>& class_names() const noexcept { return class_names_; }
  void set_class_names(std::vector<std::string> names) { class_names_ = std::move(names); }

  // Restarts the dropout stream; used to replay identical masks.
  void reseed_dropout(std::uint64_t seed) { dropout_rng_ = Rng(seed); }

 private:
  void check_input(const Matrix& x) const;

  NetworkConfig config_;
  std::vector<Layer> layers_;
  std::uint64_t seed_;
  Rng dropout_rng_;
  std::vector<std::string> class_names_;
  Mode mode_ = Mode::eval;
  bool has_train_cache_ = false;
};

// Layer stack for `config`: blocks of Dense -> ReLU -> BatchNorm -> Dropout,
// then Dense -> sigmoid/softmax (and the trailing batch norm when requested).
// Weights come from Rng(seed).fork(0); dropout masks from Rng(seed).fork(1).
Sequential build_network(const NetworkConfig& config, std::uint64_t seed);

NetworkConfig deepnet_config(std::size_t input_dim, std::size_t num_classes, bool faithful_trailing_bn);
NetworkConfig topology_config(std::size_t depth, std::size_t input_dim, std::size_t num_classes);

// The five-hidden-block network of widths 1024, 768, 512, 256, 128.
Sequential build_deepnet(std::size_t input_dim, std::size_t num_classes, bool faithful_trailing_bn,
                         std::uint64_t seed);
// DNN-k: the first `depth` (1..5) widths of the pyramid, no trailing batch norm.
Sequential build_topology(std::size_t depth, std::size_t input_dim, std::size_t num_classes,
                          std::uint64_t seed);

}  // namespace deepnet
