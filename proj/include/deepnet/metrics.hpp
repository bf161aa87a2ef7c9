#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace deepnet {

// k x k counts; rows are true classes, columns predicted classes.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t k) : k_(k), counts_(k * k, 0) {}

  std::size_t num_classes() const noexcept { return k_; }
  std::size_t at(std::size_t truth, std::size_t predicted) const noexcept {
    return counts_[truth * k_ + predicted];
  }
  void add(std::size_t truth, std::size_t predicted) noexcept { ++counts_[truth * k_ + predicted]; }

  std::size_t total() const noexcept;
  std::size_t row_sum(std::size_t truth) const noexcept;
  std::size_t col_sum(std::size_t predicted) const noexcept;
  std::size_t trace() const noexcept;

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::size_t k_;
  std::vector<std::size_t> counts_;
};

// Throws DataError on empty or unequal inputs and on labels outside [0, k).
ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> predicted, std::size_t k);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
  // Set when the ratio had a zero denominator and was reported as 0.
  bool precision_undefined = false;
  bool recall_undefined = false;
};

struct AveragedMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct MetricsReport {
  ConfusionMatrix confusion{0};
  double accuracy = 0.0;
  std::vector<ClassMetrics> per_class;
  AveragedMetrics macro;
  AveragedMetrics weighted;
  bool zero_division = false;  // any per-class ratio fell back to 0
};

// accuracy = trace / total; precision = diag / column sum; recall = diag / row
// sum; F1 the harmonic mean. Macro averages classes equally, weighted averages
// by support. Throws DataError when the matrix is empty.
MetricsReport report(const ConfusionMatrix& cm);

}  // namespace deepnet
