#include "deepnet/errors.hpp"
#include "deepnet/layers.hpp"

namespace deepnet {

DropoutLayer::DropoutLayer(double rate) : rate_(rate) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw ArgumentError("dropout rate must be in [0, 1), got " + std::to_string(rate));
  }
}

Matrix DropoutLayer::forward(const Matrix& x, Mode mode, Rng& rng) {
  if (mode == Mode::eval) return x;
  Matrix mask(x.rows(), x.cols(), 1.0);
  if (rate_ > 0.0) {
    const double keep_scale = 1.0 / (1.0 - rate_);
    for (double& m : mask.values()) m = rng.uniform() < rate_ ? 0.0 : keep_scale;
  }
  // Survivors are divided rather than multiplied by the mask so y == x / (1 - rate) exactly.
  Matrix y = x;
  if (rate_ > 0.0) {
    const double keep = 1.0 - rate_;
    for (std::size_t i = 0; i < y.size(); ++i) {
      y.values()[i] = mask.values()[i] == 0.0 ? 0.0 : y.values()[i] / keep;
    }
  }
  mask_ = std::move(mask);
  return y;
}

Matrix DropoutLayer::backward(const Matrix& grad_out) const {
  if (!mask_) throw StateError("dropout backward called without a training forward pass");
  return hadamard(grad_out, *mask_);
}

}  // namespace deepnet
