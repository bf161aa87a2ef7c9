#include "deepnet/errors.hpp"
#include "deepnet/model.hpp"

namespace deepnet {

Sequential build_network(const NetworkConfig& config, std::uint64_t seed) {
  config.validate();
  Rng init = Rng(seed).fork(0);
  std::vector<Layer> layers;
  std::size_t prev = config.input_dim;
  for (std::size_t width : config.hidden) {
    layers.emplace_back(DenseLayer(prev, width, init));
    layers.emplace_back(ActivationLayer(ActivationKind::relu));
    if (config.batch_norm) layers.emplace_back(BatchNormLayer(width));
    layers.emplace_back(DropoutLayer(config.dropout_rate));
    prev = width;
  }
  layers.emplace_back(DenseLayer(prev, config.output_dim(), init));
  layers.emplace_back(ActivationLayer(config.output_activation()));
  if (config.faithful_trailing_bn) layers.emplace_back(BatchNormLayer(config.output_dim()));
  return Sequential(config, std::move(layers), seed);
}

NetworkConfig deepnet_config(std::size_t input_dim, std::size_t num_classes, bool faithful_trailing_bn) {
  NetworkConfig cfg = topology_config(kDeepNetWidths.size(), input_dim, num_classes);
  cfg.faithful_trailing_bn = faithful_trailing_bn;
  return cfg;
}

NetworkConfig topology_config(std::size_t depth, std::size_t input_dim, std::size_t num_classes) {
  if (depth < 1 || depth > kDeepNetWidths.size()) {
    throw ArgumentError("topology depth must be in 1..5, got " + std::to_string(depth));
  }
  NetworkConfig cfg;
  cfg.input_dim = input_dim;
  cfg.num_classes = num_classes;
  cfg.hidden.assign(kDeepNetWidths.begin(), kDeepNetWidths.begin() + static_cast<std::ptrdiff_t>(depth));
  cfg.validate();
  return cfg;
}

Sequential build_deepnet(std::size_t input_dim, std::size_t num_classes, bool faithful_trailing_bn,
                         std::uint64_t seed) {
  return build_network(deepnet_config(input_dim, num_classes, faithful_trailing_bn), seed);
}

Sequential build_topology(std::size_t depth, std::size_t input_dim, std::size_t num_classes,
                          std::uint64_t seed) {
  return build_network(topology_config(depth, input_dim, num_classes), seed);
}

}  // namespace deepnet
