#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "deepnet/matrix.hpp"
#include "deepnet/rng.hpp"

namespace deepnet {

enum class Mode { train, eval };

enum class ActivationKind { relu, sigmoid, tanh, softmax, identity };

std::string_view to_string(ActivationKind kind) noexcept;
// Throws ParseError for unknown names.
ActivationKind activation_from_string(std::string_view name);

// Applies the activation element-wise; softmax is row-wise with row-max subtraction.
Matrix activate(ActivationKind kind, const Matrix& z);

// Gradient through an element-wise activation given its input and output.
// Softmax has no standalone backward: it is only differentiated fused with
// categorical cross-entropy, so asking for it throws UnsupportedError.
Matrix activate_backward(ActivationKind kind, const Matrix& input, const Matrix& output,
                         const Matrix& grad_out);

// Fully-connected affine map: out = x * W + b, W is (in x out).
class DenseLayer {
 public:
  struct Gradients {
    Matrix input;
    Matrix weights;
    Matrix bias;  // 1 x out
  };

  // Zero weights and bias.
  DenseLayer(std::size_t in_dim, std::size_t out_dim);
  // Glorot-uniform weights with limit sqrt(6 / (in + out)), zero bias.
  DenseLayer(std::size_t in_dim, std::size_t out_dim, Rng& rng);
  DenseLayer(Matrix weights, Matrix bias);

  std::size_t in_dim() const noexcept { return weights_.rows(); }
  std::size_t out_dim() const noexcept { return weights_.cols(); }
  std::size_t param_count() const noexcept { return weights_.size() + bias_.size(); }

  Matrix& weights() noexcept { return weights_; }
  const Matrix& weights() const noexcept { return weights_; }
  Matrix& bias() noexcept { return bias_; }
  const Matrix& bias() const noexcept { return bias_; }

  // Training forward; keeps x for backward.
  Matrix forward(const Matrix& x);
  // Stateless forward.
  Matrix infer(const Matrix& x) const;
  // grad_in = g W^T, grad_W = x^T g, grad_b = column sums of g.
  Gradients backward(const Matrix& grad_out) const;

  void clear_cache() noexcept { input_.reset(); }

 private:
  void check_input(const Matrix& x) const;

  Matrix weights_;
  Matrix bias_;
  std::optional<Matrix> input_;
};

// Batch normalization over features (columns).
//
// Training: y = gamma * (x - mu_B) / sqrt(var_B + eps) + beta with the biased
// batch variance; running <- momentum * running + (1 - momentum) * batch.
// Evaluation uses the running statistics instead.
class BatchNormLayer {
 public:
  struct Gradients {
    Matrix input;
    Matrix gamma;
    Matrix beta;
  };

  static constexpr double kDefaultEpsilon = 1e-5;
  static constexpr double kDefaultMomentum = 0.99;

  explicit BatchNormLayer(std::size_t dim, double epsilon = kDefaultEpsilon,
                          double momentum = kDefaultMomentum);

  std::size_t dim() const noexcept { return gamma_.cols(); }
  // gamma, beta, running mean and running variance: 4 per feature.
  std::size_t param_count() const noexcept { return 4 * dim(); }
  double epsilon() const noexcept { return epsilon_; }
  double momentum() const noexcept { return momentum_; }

  Matrix& gamma() noexcept { return gamma_; }
  const Matrix& gamma() const noexcept { return gamma_; }
  Matrix& beta() noexcept { return beta_; }
  const Matrix& beta() const noexcept { return beta_; }
  Matrix& running_mean() noexcept { return running_mean_; }
  const Matrix& running_mean() const noexcept { return running_mean_; }
  Matrix& running_var() noexcept { return running_var_; }
  const Matrix& running_var() const noexcept { return running_var_; }

  // Requires at least two rows; updates running statistics.
  Matrix forward_train(const Matrix& x);
  Matrix forward_eval(const Matrix& x) const;
  Gradients backward(const Matrix& grad_out) const;

  void clear_cache() noexcept { cache_.reset(); }

 private:
  struct Cache {
    Matrix normalized;             // x_hat
    std::vector<double> batch_var;
    std::vector<double> inv_std;   // 1 / sqrt(var_B + eps)
  };

  void check_input(const Matrix& x) const;

  Matrix gamma_;
  Matrix beta_;
  Matrix running_mean_;
  Matrix running_var_;
  double epsilon_;
  double momentum_;
  std::optional<Cache> cache_;
};

// Inverted dropout: in training each entry is zeroed with probability `rate`
// and survivors are scaled by 1 / (1 - rate). Evaluation is the identity.
class DropoutLayer {
 public:
  explicit DropoutLayer(double rate);

  double rate() const noexcept { return rate_; }

  Matrix forward(const Matrix& x, Mode mode, Rng& rng);
  Matrix backward(const Matrix& grad_out) const;
  // Entries are 0 or 1 / (1 - rate); empty before the first training forward.
  const std::optional<Matrix>& last_mask() const noexcept { return mask_; }

  void clear_cache() noexcept { mask_.reset(); }

 private:
  double rate_;
  std::optional<Matrix> mask_;
};

class ActivationLayer {
 public:
  explicit ActivationLayer(ActivationKind kind) : kind_(kind) {}

  ActivationKind kind() const noexcept { return kind_; }

  Matrix forward(const Matrix& x);
  Matrix infer(const Matrix& x) const { return activate(kind_, x); }
  Matrix backward(const Matrix& grad_out) const;

  void clear_cache() noexcept {
    input_.reset();
    output_.reset();
  }

 private:
  ActivationKind kind_;
  std::optional<Matrix> input_;
  std::optional<Matrix> output_;
};

}  // namespace deepnet
