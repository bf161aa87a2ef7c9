#include "deepnet/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "deepnet/errors.hpp"
#include "deepnet/rng.hpp"
#include "deepnet/vectorizer.hpp"

namespace deepnet {

namespace {

constexpr std::size_t kIncidentFeatures = 9;
constexpr std::size_t kFraudFeatures = 12;
constexpr double kFraudVertex = 2.0;
constexpr double kFraudJitter = 0.5;
constexpr double kMaxTokenSignal = 0.25;

std::vector<std::string> class_names_for(TaskKind task) {
  switch (task) {
    case TaskKind::malware_like: return {"benign", "malicious"};
    case TaskKind::incident_like: return {"normal", "incident"};
    case TaskKind::fraud_like: return {"legitimate", "suspicious", "fraud"};
  }
  return {};
}

std::size_t draw_class(Rng& rng, const std::vector<double>& cdf) {
  const double u = rng.uniform();
  for (std::size_t c = 0; c + 1 < cdf.size(); ++c) {
    if (u < cdf[c]) return c;
  }
  return cdf.size() - 1;
}

std::vector<double> cumulative(const std::vector<double>& p) {
  std::vector<double> cdf(p.size());
  std::partial_sum(p.begin(), p.end(), cdf.begin());
  for (double& v : cdf) v /= cdf.back();
  return cdf;
}

std::vector<std::string> feature_names(const char* prefix, std::size_t d) {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < d; ++j) names.push_back(prefix + std::to_string(j));
  return names;
}

Dataset generate_incident(const SyntheticSpec& spec, Rng& rng) {
  const std::size_t d = kIncidentFeatures;
  const double separation = 4.0 + 4.0 / (1.0 + spec.noise);
  Rng layout = rng.fork(0);
  std::vector<double> mu0(d);
  std::vector<double> dir(d);
  double norm = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    mu0[j] = layout.uniform(-1.0, 1.0);
    dir[j] = layout.normal();
    norm += dir[j] * dir[j];
  }
  norm = std::sqrt(norm);

  Rng draws = rng.fork(1);
  const auto cdf = cumulative(spec.effective_priors());
  Dataset out;
  out.features = Matrix(spec.n_samples, d);
  for (std::size_t i = 0; i < spec.n_samples; ++i) {
    const std::size_t c = draw_class(draws, cdf);
    out.labels.push_back(static_cast<int>(c));
    for (std::size_t j = 0; j < d; ++j) {
      const double mean = mu0[j] + (c == 1 ? separation * dir[j] / norm : 0.0);
      out.features(i, j) = mean + draws.normal();
    }
  }
  out.feature_names = feature_names("sensor_", d);
  return out;
}

Dataset generate_fraud(const SyntheticSpec& spec, Rng& rng) {
  const std::size_t d = kFraudFeatures;
  const std::size_t k = 3;
  const std::size_t clusters = k * spec.clusters_per_class;

  // Distinct cube vertices, encoded as d-bit masks.
  Rng layout = rng.fork(0);
  std::vector<std::uint64_t> vertices;
  std::set<std::uint64_t> used;
  while (vertices.size() < clusters) {
    const std::uint64_t v = layout.below(std::uint64_t{1} << d);
    if (used.insert(v).second) vertices.push_back(v);
  }

  Rng draws = rng.fork(1);
  const auto cdf = cumulative(spec.effective_priors());
  Dataset out;
  out.features = Matrix(spec.n_samples, d);
  for (std::size_t i = 0; i < spec.n_samples; ++i) {
    const std::size_t c = draw_class(draws, cdf);
    const std::size_t cluster = c * spec.clusters_per_class + draws.below(spec.clusters_per_class);
    out.labels.push_back(static_cast<int>(c));
    for (std::size_t j = 0; j < d; ++j) {
      const double center = ((vertices[cluster] >> j) & 1U) ? kFraudVertex : -kFraudVertex;
      double x = center + draws.uniform(-kFraudJitter, kFraudJitter);
      if (spec.noise > 0.0) x += spec.noise * draws.normal();
      out.features(i, j) = x;
    }
  }
  out.feature_names = feature_names("txn_", d);
  return out;
}

}  // namespace

std::string_view to_string(TaskKind task) noexcept {
  switch (task) {
    case TaskKind::malware_like: return "malware_like";
    case TaskKind::incident_like: return "incident_like";
    case TaskKind::fraud_like: return "fraud_like";
  }
  return "incident_like";
}

TaskKind task_from_string(std::string_view name) {
  for (auto t : {TaskKind::malware_like, TaskKind::incident_like, TaskKind::fraud_like}) {
    if (to_string(t) == name) return t;
  }
  throw ArgumentError("unknown task '" + std::string(name) +
                      "', expected malware_like, incident_like or fraud_like");
}

SyntheticSpec SyntheticSpec::defaults(TaskKind task) {
  SyntheticSpec s;
  s.task = task;
  switch (task) {
    case TaskKind::incident_like: s.noise = 0.25; break;
    case TaskKind::fraud_like: s.noise = 0.6; break;
    case TaskKind::malware_like: s.noise = 0.3; break;
  }
  return s;
}

std::size_t SyntheticSpec::num_classes() const noexcept { return task == TaskKind::fraud_like ? 3 : 2; }

std::vector<double> SyntheticSpec::effective_priors() const {
  if (!priors.empty()) return priors;
  if (task == TaskKind::fraud_like) return {0.4, 0.35, 0.25};
  return {0.5, 0.5};
}

void SyntheticSpec::validate() const {
  if (n_samples < 10) throw ArgumentError("synthetic datasets need at least 10 samples, got " + std::to_string(n_samples));
  if (!(noise >= 0.0) || !std::isfinite(noise)) throw ArgumentError("noise level must be a finite value >= 0");
  const auto p = effective_priors();
  if (p.size() != num_classes()) {
    throw ArgumentError(std::string(to_string(task)) + " needs " + std::to_string(num_classes()) +
                        " class priors, got " + std::to_string(p.size()));
  }
  double sum = 0.0;
  for (double v : p) {
    if (!(v > 0.0)) throw ArgumentError("class priors must be positive");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ArgumentError("class priors must sum to 1");
  if (task == TaskKind::fraud_like && (clusters_per_class == 0 || clusters_per_class * 3 > 4096)) {
    throw ArgumentError("fraud_like needs between 1 and 1365 clusters per class");
  }
  if (task == TaskKind::malware_like) {
    if (vocab_size < 20) throw ArgumentError("malware_like needs a vocabulary of at least 20 tokens");
    if (noise > 1.0) throw ArgumentError("malware_like noise must be in [0, 1]");
    if (min_doc_length == 0 || min_doc_length > max_doc_length) {
      throw ArgumentError("document length range must satisfy 1 <= min <= max");
    }
  }
}

TokenCorpus generate_corpus(const SyntheticSpec& spec) {
  spec.validate();
  if (spec.task != TaskKind::malware_like) throw ArgumentError("token corpora exist only for malware_like");
  Rng rng(spec.seed);
  const std::size_t v = spec.vocab_size;
  const std::size_t k = spec.num_classes();

  // Zipf background over a random ranking of the API ids.
  Rng layout = rng.fork(0);
  const auto rank = shuffled_indices(layout, v);
  std::vector<double> background(v);
  for (std::size_t j = 0; j < v; ++j) background[j] = 1.0 / static_cast<double>(rank[j] + 1);
  const auto background_cdf = cumulative(background);

  // Class signatures: windows of a second permutation overlapping by half.
  const auto order = shuffled_indices(layout, v);
  const std::size_t sig = std::max<std::size_t>(10, v / 10);
  std::vector<std::vector<std::size_t>> signatures(k);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t s = 0; s < sig; ++s) signatures[c].push_back(order[(c * sig / 2 + s) % v]);
  }

  const double signal = kMaxTokenSignal * (1.0 - spec.noise);
  Rng draws = rng.fork(1);
  const auto cdf = cumulative(spec.effective_priors());
  TokenCorpus out;
  out.class_names = class_names_for(spec.task);
  for (std::size_t i = 0; i < spec.n_samples; ++i) {
    const std::size_t c = draw_class(draws, cdf);
    const std::size_t len =
        spec.min_doc_length + draws.below(spec.max_doc_length - spec.min_doc_length + 1);
    std::string doc;
    for (std::size_t t = 0; t < len; ++t) {
      std::size_t token = 0;
      if (draws.uniform() < signal) {
        token = signatures[c][draws.below(sig)];
      } else {
        const double u = draws.uniform();
        token = static_cast<std::size_t>(std::upper_bound(background_cdf.begin(), background_cdf.end(), u) -
                                         background_cdf.begin());
        token = std::min(token, v - 1);
      }
      if (!doc.empty()) doc += ' ';
      doc += std::to_string(token);
    }
    out.docs.push_back(std::move(doc));
    out.labels.push_back(static_cast<int>(c));
  }
  return out;
}

Dataset generate(const SyntheticSpec& spec) {
  spec.validate();
  if (spec.task == TaskKind::malware_like) {
    TokenCorpus corpus = generate_corpus(spec);
    const Vocabulary vocab = fit_vocabulary(corpus.docs);
    Dataset out;
    out.features = transform_counts(vocab, corpus.docs).counts;
    out.labels = std::move(corpus.labels);
    out.class_names = std::move(corpus.class_names);
    out.feature_names = vocab.tokens();
    return out;
  }
  Rng rng(spec.seed);
  Dataset out = spec.task == TaskKind::incident_like ? generate_incident(spec, rng) : generate_fraud(spec, rng);
  out.class_names = class_names_for(spec.task);
  out.validate();
  return out;
}

}  // namespace deepnet
