#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "deepnet/matrix.hpp"

namespace deepnet {

enum class LossKind { binary_cross_entropy, categorical_cross_entropy };

std::string_view to_string(LossKind kind) noexcept;

// Probabilities are kept inside [eps, 1 - eps] before taking logs.
inline constexpr double kProbabilityClip = 1e-7;

// -(1/N) sum[ y log p + (1 - y) log(1 - p) ] over an N x 1 prediction column.
// Targets must be exactly 0 or 1 (DataError otherwise).
double bce_loss(const Matrix& predictions, const Matrix& targets);

// Mean over rows of -sum_c y_c log p_c. Each prediction row is renormalized to
// sum to 1 and then clipped. Targets must be one-hot rows (DataError otherwise).
double cce_loss(const Matrix& predictions, const Matrix& targets);

double loss_value(LossKind kind, const Matrix& predictions, const Matrix& targets);

// Gradient of the mean loss with respect to the head's pre-activation logits,
// for sigmoid + BCE and softmax + CCE alike: (p - y) / N.
Matrix output_gradient(LossKind kind, const Matrix& predictions, const Matrix& targets);

// Target matrix for a head: N x 1 of {0,1} for BCE, N x k one-hot for CCE.
Matrix encode_targets(LossKind kind, std::span<const int> labels, std::size_t num_classes);

// Class decisions: p >= 0.5 for a single sigmoid column, otherwise argmax with
// the lowest index winning ties.
std::vector<int> decide(const Matrix& predictions);

}  // namespace deepnet
