#include "deepnet/metrics.hpp"

#include <numeric>
#include <string>

#include "deepnet/errors.hpp"

namespace deepnet {

std::size_t ConfusionMatrix::total() const noexcept {
  return std::accumulate(counts_.begin(), counts_.end(), std::size_t{0});
}

std::size_t ConfusionMatrix::row_sum(std::size_t truth) const noexcept {
  std::size_t s = 0;
  for (std::size_t p = 0; p < k_; ++p) s += at(truth, p);
  return s;
}

std::size_t ConfusionMatrix::col_sum(std::size_t predicted) const noexcept {
  std::size_t s = 0;
  for (std::size_t t = 0; t < k_; ++t) s += at(t, predicted);
  return s;
}

std::size_t ConfusionMatrix::trace() const noexcept {
  std::size_t s = 0;
  for (std::size_t c = 0; c < k_; ++c) s += at(c, c);
  return s;
}

ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> predicted, std::size_t k) {
  if (truth.empty()) throw DataError("confusion matrix needs at least one sample");
  if (truth.size() != predicted.size()) {
    throw DataError("confusion matrix: " + std::to_string(truth.size()) + " true labels vs " +
                    std::to_string(predicted.size()) + " predictions");
  }
  ConfusionMatrix cm(k);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    for (int l : {truth[i], predicted[i]}) {
      if (l < 0 || static_cast<std::size_t>(l) >= k) {
        throw DataError("label " + std::to_string(l) + " at position " + std::to_string(i) +
                        " outside [0, " + std::to_string(k) + ")");
      }
    }
    cm.add(static_cast<std::size_t>(truth[i]), static_cast<std::size_t>(predicted[i]));
  }
  return cm;
}

MetricsReport report(const ConfusionMatrix& cm) {
  const std::size_t total = cm.total();
  if (total == 0) throw DataError("cannot report metrics for an empty confusion matrix");
  const std::size_t k = cm.num_classes();

  MetricsReport r;
  r.confusion = cm;
  r.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(total);
  r.per_class.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    ClassMetrics& m = r.per_class[c];
    const auto tp = static_cast<double>(cm.at(c, c));
    const std::size_t predicted = cm.col_sum(c);
    m.support = cm.row_sum(c);
    if (predicted == 0) {
      m.precision_undefined = true;
    } else {
      m.precision = tp / static_cast<double>(predicted);
    }
    if (m.support == 0) {
      m.recall_undefined = true;
    } else {
      m.recall = tp / static_cast<double>(m.support);
    }
    const double denom = m.precision + m.recall;
    m.f1 = denom > 0.0 ? 2.0 * m.precision * m.recall / denom : 0.0;
    r.zero_division = r.zero_division || m.precision_undefined || m.recall_undefined;

    const auto s = static_cast<double>(m.support);
    r.macro.precision += m.precision;
    r.macro.recall += m.recall;
    r.macro.f1 += m.f1;
    r.weighted.precision += s * m.precision;
    r.weighted.f1 += s * m.f1;
  }
  const auto kd = static_cast<double>(k);
  const auto nd = static_cast<double>(total);
  r.macro.precision /= kd;
  r.macro.recall /= kd;
  r.macro.f1 /= kd;
  r.weighted.precision /= nd;
  r.weighted.f1 /= nd;
  // support * (tp / support) summed over classes is the trace; use it directly.
  r.weighted.recall = r.accuracy;
  return r;
}

}  // namespace deepnet
