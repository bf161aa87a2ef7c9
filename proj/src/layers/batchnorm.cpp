#include <cmath>

#include "deepnet/errors.hpp"
#include "deepnet/layers.hpp"

namespace deepnet {

BatchNormLayer::BatchNormLayer(std::size_t dim, double epsilon, double momentum)
    : gamma_(1, dim, 1.0),
      beta_(1, dim, 0.0),
      running_mean_(1, dim, 0.0),
      running_var_(1, dim, 1.0),
      epsilon_(epsilon),
      momentum_(momentum) {
  if (dim == 0) throw ArgumentError("batch norm dimension must be positive");
  if (!(epsilon > 0.0)) throw ArgumentError("batch norm epsilon must be positive");
  if (!(momentum > 0.0 && momentum < 1.0)) throw ArgumentError("batch norm momentum must be in (0, 1)");
}

void BatchNormLayer::check_input(const Matrix& x) const {
  if (x.cols() != dim()) {
    throw ShapeError("batch norm expects " + std::to_string(dim()) + " columns, got " + shape_str(x));
  }
}

Matrix BatchNormLayer::forward_train(const Matrix& x) {
  check_input(x);
  if (x.rows() < 2) {
    throw DataError("batch norm training needs a batch of at least 2 rows, got " +
                    std::to_string(x.rows()));
  }
  const ColumnStats stats = col_stats(x);
  const std::size_t d = dim();
  Cache cache{Matrix(x.rows(), d), stats.var, std::vector<double>(d)};
  for (std::size_t j = 0; j < d; ++j) cache.inv_std[j] = 1.0 / std::sqrt(stats.var[j] + epsilon_);

  Matrix y(x.rows(), d);
  const auto g = gamma_.row(0);
  const auto b = beta_.row(0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto xr = x.row(i);
    auto nr = cache.normalized.row(i);
    auto yr = y.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      nr[j] = (xr[j] - stats.mean[j]) * cache.inv_std[j];
      yr[j] = g[j] * nr[j] + b[j];
    }
  }

  auto rm = running_mean_.row(0);
  auto rv = running_var_.row(0);
  for (std::size_t j = 0; j < d; ++j) {
    rm[j] = momentum_ * rm[j] + (1.0 - momentum_) * stats.mean[j];
    rv[j] = momentum_ * rv[j] + (1.0 - momentum_) * stats.var[j];
  }
  cache_ = std::move(cache);
  return y;
}

Matrix BatchNormLayer::forward_eval(const Matrix& x) const {
  check_input(x);
  const std::size_t d = dim();
  std::vector<double> scale(d);
  std::vector<double> shift(d);
  for (std::size_t j = 0; j < d; ++j) {
    scale[j] = gamma_(0, j) / std::sqrt(running_var_(0, j) + epsilon_);
    shift[j] = beta_(0, j) - scale[j] * running_mean_(0, j);
  }
  Matrix y(x.rows(), d);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto xr = x.row(i);
    auto yr = y.row(i);
    for (std::size_t j = 0; j < d; ++j) yr[j] = scale[j] * xr[j] + shift[j];
  }
  return y;
}

BatchNormLayer::Gradients BatchNormLayer::backward(const Matrix& grad_out) const {
  if (!cache_) throw StateError("batch norm backward needs a cache from forward_train");
  const Matrix& xhat = cache_->normalized;
  if (grad_out.rows() != xhat.rows() || grad_out.cols() != xhat.cols()) {
    throw ShapeError("batch norm backward: gradient " + shape_str(grad_out) + " vs " + shape_str(xhat));
  }
  const std::size_t n = xhat.rows();
  const std::size_t d = dim();
  std::vector<double> sum_g(d, 0.0);
  std::vector<double> sum_gx(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto gr = grad_out.row(i);
    const auto xr = xhat.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      sum_g[j] += gr[j];
      sum_gx[j] += gr[j] * xr[j];
    }
  }

  Gradients out{Matrix(n, d), Matrix::row_vector(sum_gx), Matrix::row_vector(sum_g)};
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto gr = grad_out.row(i);
    const auto xr = xhat.row(i);
    auto dr = out.input.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      const double k = gamma_(0, j) * cache_->inv_std[j];
      dr[j] = k * (gr[j] - sum_g[j] * inv_n - xr[j] * sum_gx[j] * inv_n);
    }
  }
  return out;
}

}  // namespace deepnet
