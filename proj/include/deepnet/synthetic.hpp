#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "deepnet/dataset.hpp"

namespace deepnet {

enum class TaskKind { malware_like, incident_like, fraud_like };

std::string_view to_string(TaskKind task) noexcept;
// Throws ArgumentError for unknown names.
TaskKind task_from_string(std::string_view name);

// Desk-scale stand-ins for the three private datasets.
//
// incident_like: 9 features, 2 Gaussian classes (unit variance) whose means sit
//   4 + 4 / (1 + noise) standard deviations apart, so always at least 4.
// fraud_like: 12 features, 3 classes, each a union of `clusters_per_class`
//   clusters on distinct vertices of the {-2, +2}^12 cube. A point is its
//   vertex plus uniform jitter in [-0.5, 0.5] plus noise * N(0, 1), so at
//   noise 0 the clusters are disjoint boxes.
// malware_like: token documents over `vocab_size` API ids. Each token is drawn
//   from a shared Zipf background with probability 1 - signal, otherwise from
//   the class's signature set. signal = 0.25 * (1 - noise).
struct SyntheticSpec {
  TaskKind task = TaskKind::incident_like;
  std::size_t n_samples = 1000;
  std::uint64_t seed = 0;
  double noise = 1.0;
  std::vector<double> priors;  // one per class; empty means the task default
  std::size_t clusters_per_class = 48;
  std::size_t vocab_size = 500;
  std::size_t min_doc_length = 20;
  std::size_t max_doc_length = 60;

  static SyntheticSpec defaults(TaskKind task);

  std::size_t num_classes() const noexcept;
  std::vector<double> effective_priors() const;
  // Throws ArgumentError describing the first violated constraint.
  void validate() const;
};

struct TokenCorpus {
  std::vector<std::string> docs;
  std::vector<int> labels;
  std::vector<std::string> class_names;
};

// Labels are drawn i.i.d. from the priors. Deterministic in spec.seed.
Dataset generate(const SyntheticSpec& spec);
// malware_like only.
TokenCorpus generate_corpus(const SyntheticSpec& spec);

}  // namespace deepnet
