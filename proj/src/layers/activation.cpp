#include <algorithm>
#include <cmath>
#include <string>

#include "deepnet/errors.hpp"
#include "deepnet/layers.hpp"

namespace deepnet {

std::string_view to_string(ActivationKind kind) noexcept {
  switch (kind) {
    case ActivationKind::relu: return "relu";
    case ActivationKind::sigmoid: return "sigmoid";
    case ActivationKind::tanh: return "tanh";
    case ActivationKind::softmax: return "softmax";
    case ActivationKind::identity: return "identity";
  }
  return "identity";
}

ActivationKind activation_from_string(std::string_view name) {
  for (auto k : {ActivationKind::relu, ActivationKind::sigmoid, ActivationKind::tanh,
                 ActivationKind::softmax, ActivationKind::identity}) {
    if (to_string(k) == name) return k;
  }
  throw ParseError("unknown activation '" + std::string(name) + "'");
}

namespace {

double sigmoid(double z) noexcept {
  // Branches keep exp() from overflowing for large |z|.
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void softmax_rows(Matrix& m) {
  if (m.cols() == 0) throw ShapeError("softmax needs at least one column, got " + shape_str(m));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    const double mx = *std::max_element(r.begin(), r.end());
    double sum = 0.0;
    for (double& v : r) {
      v = std::exp(v - mx);
      sum += v;
    }
    for (double& v : r) v /= sum;
  }
}

}  // namespace

Matrix activate(ActivationKind kind, const Matrix& z) {
  Matrix out = z;
  switch (kind) {
    case ActivationKind::relu:
      for (double& v : out.values()) v = v > 0.0 ? v : 0.0;
      break;
    case ActivationKind::sigmoid:
      for (double& v : out.values()) v = sigmoid(v);
      break;
    case ActivationKind::tanh:
      for (double& v : out.values()) v = std::tanh(v);
      break;
    case ActivationKind::softmax:
      softmax_rows(out);
      break;
    case ActivationKind::identity:
      break;
  }
  return out;
}

Matrix activate_backward(ActivationKind kind, const Matrix& input, const Matrix& output,
                         const Matrix& grad_out) {
  if (kind == ActivationKind::softmax) {
    throw UnsupportedError(
        "softmax has no standalone backward; use the fused softmax + categorical cross-entropy "
        "output gradient");
  }
  if (grad_out.rows() != output.rows() || grad_out.cols() != output.cols()) {
    throw ShapeError("activation backward: gradient " + shape_str(grad_out) + " vs output " +
                     shape_str(output));
  }
  Matrix g = grad_out;
  auto gv = g.values();
  const auto in = input.values();
  const auto out = output.values();
  switch (kind) {
    case ActivationKind::relu:
      for (std::size_t i = 0; i < gv.size(); ++i) gv[i] = in[i] > 0.0 ? gv[i] : 0.0;
      break;
    case ActivationKind::sigmoid:
      for (std::size_t i = 0; i < gv.size(); ++i) gv[i] *= out[i] * (1.0 - out[i]);
      break;
    case ActivationKind::tanh:
      for (std::size_t i = 0; i < gv.size(); ++i) gv[i] *= 1.0 - out[i] * out[i];
      break;
    case ActivationKind::softmax:
    case ActivationKind::identity:
      break;
  }
  return g;
}

Matrix ActivationLayer::forward(const Matrix& x) {
  Matrix y = activate(kind_, x);
  input_ = x;
  output_ = y;
  return y;
}

Matrix ActivationLayer::backward(const Matrix& grad_out) const {
  if (!input_ || !output_) {
    throw StateError("activation backward called without a training forward pass");
  }
  return activate_backward(kind_, *input_, *output_, grad_out);
}

}  // namespace deepnet
