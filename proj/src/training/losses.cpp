#include "deepnet/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "deepnet/errors.hpp"

namespace deepnet {

std::string_view to_string(LossKind kind) noexcept {
  return kind == LossKind::binary_cross_entropy ? "binary_cross_entropy" : "categorical_cross_entropy";
}

namespace {

double clip(double p) noexcept { return std::clamp(p, kProbabilityClip, 1.0 - kProbabilityClip); }

void require_same_shape(const Matrix& p, const Matrix& y, const char* what) {
  if (p.rows() != y.rows() || p.cols() != y.cols()) {
    throw ShapeError(std::string(what) + ": predictions " + shape_str(p) + " vs targets " + shape_str(y));
  }
  if (p.rows() == 0) throw DataError(std::string(what) + ": no samples");
}

}  // namespace

double bce_loss(const Matrix& predictions, const Matrix& targets) {
  require_same_shape(predictions, targets, "binary cross-entropy");
  if (predictions.cols() != 1) {
    throw ShapeError("binary cross-entropy needs a single prediction column, got " + shape_str(predictions));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < predictions.rows(); ++i) {
    const double y = targets(i, 0);
    if (y != 0.0 && y != 1.0) {
      throw DataError("binary cross-entropy label at row " + std::to_string(i) + " is " + std::to_string(y) +
                      ", expected 0 or 1");
    }
    const double p = clip(predictions(i, 0));
    total += y == 1.0 ? std::log(p) : std::log(1.0 - p);
  }
  return -total / static_cast<double>(predictions.rows());
}

double cce_loss(const Matrix& predictions, const Matrix& targets) {
  require_same_shape(predictions, targets, "categorical cross-entropy");
  if (predictions.cols() < 2) {
    throw ShapeError("categorical cross-entropy needs at least two columns, got " + shape_str(predictions));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < predictions.rows(); ++i) {
    const auto p = predictions.row(i);
    const auto y = targets.row(i);
    std::size_t hot = y.size();
    for (std::size_t c = 0; c < y.size(); ++c) {
      if (y[c] == 1.0 && hot == y.size()) {
        hot = c;
      } else if (y[c] != 0.0) {
        throw DataError("categorical cross-entropy target row " + std::to_string(i) + " is not one-hot");
      }
    }
    if (hot == y.size()) {
      throw DataError("categorical cross-entropy target row " + std::to_string(i) + " is not one-hot");
    }
    double sum = 0.0;
    for (double v : p) sum += v;
    total += std::log(clip(p[hot] / sum));
  }
  return -total / static_cast<double>(predictions.rows());
}

double loss_value(LossKind kind, const Matrix& predictions, const Matrix& targets) {
  return kind == LossKind::binary_cross_entropy ? bce_loss(predictions, targets)
                                                : cce_loss(predictions, targets);
}

Matrix output_gradient(LossKind kind, const Matrix& predictions, const Matrix& targets) {
  if (predictions.rows() != targets.rows() || predictions.cols() != targets.cols()) {
    throw ShapeError("output gradient: predictions " + shape_str(predictions) + " vs targets " +
                     shape_str(targets));
  }
  const bool binary_head = predictions.cols() == 1;
  if (binary_head != (kind == LossKind::binary_cross_entropy)) {
    throw ShapeError(std::string("output gradient: ") + std::string(to_string(kind)) +
                     " does not match a head of " + std::to_string(predictions.cols()) + " columns");
  }
  Matrix g = subtract(predictions, targets);
  if (g.rows() > 0) scale_inplace(g, 1.0 / static_cast<double>(g.rows()));
  return g;
}

Matrix encode_targets(LossKind kind, std::span<const int> labels, std::size_t num_classes) {
  const std::size_t cols = kind == LossKind::binary_cross_entropy ? 1 : num_classes;
  Matrix y(labels.size(), cols);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int l = labels[i];
    if (l < 0 || static_cast<std::size_t>(l) >= num_classes) {
      throw DataError("label " + std::to_string(l) + " at row " + std::to_string(i) + " outside [0, " +
                      std::to_string(num_classes) + ")");
    }
    if (kind == LossKind::binary_cross_entropy) {
      if (l > 1) throw DataError("binary head cannot encode label " + std::to_string(l));
      y(i, 0) = static_cast<double>(l);
    } else {
      y(i, static_cast<std::size_t>(l)) = 1.0;
    }
  }
  return y;
}

std::vector<int> decide(const Matrix& predictions) {
  std::vector<int> out(predictions.rows());
  for (std::size_t i = 0; i < predictions.rows(); ++i) {
    const auto r = predictions.row(i);
    if (r.size() == 1) {
      out[i] = r[0] >= 0.5 ? 1 : 0;
    } else {
      out[i] = static_cast<int>(std::max_element(r.begin(), r.end()) - r.begin());
    }
  }
  return out;
}

}  // namespace deepnet
