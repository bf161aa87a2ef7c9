#include <cmath>

#include "deepnet/errors.hpp"
#include "deepnet/layers.hpp"

namespace deepnet {

DenseLayer::DenseLayer(std::size_t in_dim, std::size_t out_dim)
    : weights_(in_dim, out_dim), bias_(1, out_dim) {
  if (in_dim == 0 || out_dim == 0) throw ArgumentError("dense layer dimensions must be positive");
}

DenseLayer::DenseLayer(std::size_t in_dim, std::size_t out_dim, Rng& rng)
    : DenseLayer(in_dim, out_dim) {
  const double limit = std::sqrt(6.0 / static_cast<double>(in_dim + out_dim));
  weights_ = rng_uniform(rng, -limit, limit, in_dim, out_dim);
}

DenseLayer::DenseLayer(Matrix weights, Matrix bias) : weights_(std::move(weights)), bias_(std::move(bias)) {
  if (bias_.rows() != 1 || bias_.cols() != weights_.cols()) {
    throw ShapeError("dense bias " + shape_str(bias_) + " does not match weights " + shape_str(weights_));
  }
}

void DenseLayer::check_input(const Matrix& x) const {
  if (x.cols() != in_dim()) {
    throw ShapeError("dense layer expects " + std::to_string(in_dim()) + " input columns, got " +
                     shape_str(x));
  }
}

Matrix DenseLayer::forward(const Matrix& x) {
  Matrix out = infer(x);
  input_ = x;
  return out;
}

Matrix DenseLayer::infer(const Matrix& x) const {
  check_input(x);
  Matrix out = matmul(x, weights_);
  add_row_inplace(out, bias_.row(0));
  return out;
}

DenseLayer::Gradients DenseLayer::backward(const Matrix& grad_out) const {
  if (!input_) throw StateError("dense backward called without a training forward pass");
  if (grad_out.rows() != input_->rows() || grad_out.cols() != out_dim()) {
    throw ShapeError("dense backward: gradient " + shape_str(grad_out) + " does not match output (" +
                     std::to_string(input_->rows()) + " x " + std::to_string(out_dim()) + ")");
  }
  Gradients g;
  g.input = matmul_nt(grad_out, weights_);
  g.weights = matmul(transpose(*input_), grad_out);
  g.bias = Matrix::row_vector(col_sums(grad_out));
  return g;
}

}  // namespace deepnet
