#include "deepnet/cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "deepnet/cli/config.hpp"
#include "deepnet/cli/report_io.hpp"
#include "deepnet/crossval.hpp"
#include "deepnet/errors.hpp"
#include "deepnet/model_io.hpp"
#include "deepnet/synthetic.hpp"
#include "deepnet/training.hpp"
#include "deepnet/vectorizer.hpp"

namespace deepnet::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Flags shared by train, crossval and sweep. Each overrides the config file
// only when given on the command line.
struct RunFlags {
  std::string config_path;
  std::string out;
  std::string format;
  std::uint64_t seed = 0;
  std::string task;
  std::string network;
  std::size_t epochs = 0;
  double learning_rate = 0.0;
  std::size_t batch_size = 0;
  std::size_t samples = 0;
  double noise = 0.0;
  std::uint64_t data_seed = 0;
  double test_fraction = 0.0;
  std::string train_csv;
  std::string test_csv;
  std::string label_column;
  bool no_batch_norm = false;
  bool train_only_vocab = false;

  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> setters;

  void attach(CLI::App* app) {
    auto bind = [&](CLI::Option* opt, std::function<void(RunConfig&)> apply) { setters.emplace_back(opt, std::move(apply)); };
    app->add_option("--config", config_path, "Run configuration file (JSON)");
    bind(app->add_option("--out", out, "Output directory"), [this](RunConfig& c) { c.out_dir = out; });
    bind(app->add_option("--format", format, "Stdout format: table or json"), [this](RunConfig& c) { c.format = format; });
    bind(app->add_option("--seed", seed, "Training seed"), [this](RunConfig& c) { c.train.seed = seed; });
    bind(app->add_option("--task", task, "incident_like, fraud_like, malware_like or custom"),
         [this](RunConfig& c) { c.task = task; });
    bind(app->add_option("--network", network, "deepnet or depth-1..depth-5"), [this](RunConfig& c) { c.topology = network; });
    bind(app->add_option("--epochs", epochs, "Training epochs"), [this](RunConfig& c) { c.train.epochs = epochs; });
    bind(app->add_option("--lr", learning_rate, "Learning rate"), [this](RunConfig& c) { c.train.learning_rate = learning_rate; });
    bind(app->add_option("--batch-size", batch_size, "Mini-batch size"), [this](RunConfig& c) { c.train.batch_size = batch_size; });
    bind(app->add_option("--samples", samples, "Synthetic sample count"), [this](RunConfig& c) { c.samples = samples; });
    bind(app->add_option("--noise", noise, "Synthetic noise level"), [this](RunConfig& c) { c.noise = noise; });
    bind(app->add_option("--data-seed", data_seed, "Synthetic data and split seed"), [this](RunConfig& c) { c.data_seed = data_seed; });
    bind(app->add_option("--test-fraction", test_fraction, "Held-out fraction when no test CSV is given"),
         [this](RunConfig& c) { c.test_fraction = test_fraction; });
    bind(app->add_option("--train-csv", train_csv, "Training CSV"), [this](RunConfig& c) { c.train_csv = train_csv; });
    bind(app->add_option("--test-csv", test_csv, "Test CSV"), [this](RunConfig& c) { c.test_csv = test_csv; });
    bind(app->add_option("--label-column", label_column, "Label column name"),
         [this](RunConfig& c) { c.label_column = label_column; });
    bind(app->add_flag("--no-batch-norm", no_batch_norm, "Replace batch normalization with the identity"),
         [](RunConfig& c) { c.batch_norm = false; });
    bind(app->add_flag("--train-only-vocab", train_only_vocab, "Fit the token vocabulary on training documents only"),
         [](RunConfig& c) { c.train_only_vocab = true; });
  }

  RunConfig resolve() const {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_run_config(config_path);
    for (const auto& [opt, apply] : setters) {
      if (opt->count() > 0) apply(cfg);
    }
    cfg.validate();
    return cfg;
  }
};

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
}

struct Splits {
  Dataset train;
  Dataset test;
  json source;
};

SyntheticSpec synthetic_spec(const RunConfig& cfg) {
  SyntheticSpec spec = SyntheticSpec::defaults(task_from_string(cfg.task));
  spec.n_samples = cfg.samples;
  spec.seed = cfg.data_seed;
  spec.vocab_size = cfg.vocab_size;
  if (cfg.noise) spec.noise = *cfg.noise;
  return spec;
}

json spec_to_json(const SyntheticSpec& s) {
  json j = {{"task", std::string(to_string(s.task))},
            {"samples", s.n_samples},
            {"seed", s.seed},
            {"noise", s.noise},
            {"priors", s.effective_priors()}};
  if (s.task == TaskKind::fraud_like) j["clusters_per_class"] = s.clusters_per_class;
  if (s.task == TaskKind::malware_like) {
    j["vocab_size"] = s.vocab_size;
    j["doc_length"] = {s.min_doc_length, s.max_doc_length};
  }
  return j;
}

struct VectorizedPair {
  Dataset train;
  Dataset test;
  Vocabulary vocab;
  std::size_t oov_train = 0;
  std::size_t oov_test = 0;
};

VectorizedPair vectorize_pair(const std::vector<std::string>& train_docs, const std::vector<std::string>& test_docs,
                              bool train_only_vocab) {
  VectorizedPair out;
  out.vocab = train_only_vocab ? fit_vocabulary(train_docs) : fit_vocabulary(train_docs, test_docs);
  auto tr = transform_counts(out.vocab, train_docs);
  auto te = transform_counts(out.vocab, test_docs);
  out.train.features = std::move(tr.counts);
  out.test.features = std::move(te.counts);
  out.oov_train = tr.oov_tokens;
  out.oov_test = te.oov_tokens;
  out.train.feature_names = out.vocab.tokens();
  out.test.feature_names = out.vocab.tokens();
  return out;
}

template <class T>
std::vector<T> pick(const std::vector<T>& v, const std::vector<std::size_t>& idx) {
  std::vector<T> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(v[i]);
  return out;
}

Splits acquire_data(const RunConfig& cfg) {
  Splits s;
  if (!cfg.train_csv.empty()) {
    Dataset train = load_csv(cfg.train_csv, cfg.label_column);
    s.source = {{"train_csv", cfg.train_csv}, {"label_column", cfg.label_column}};
    if (!cfg.test_csv.empty()) {
      s.train = std::move(train);
      s.test = align_classes(load_csv(cfg.test_csv, cfg.label_column), s.train.class_names);
      s.source["test_csv"] = cfg.test_csv;
    } else {
      std::tie(s.train, s.test) = train_test_split(train, cfg.test_fraction, cfg.data_seed);
      s.source["test_fraction"] = cfg.test_fraction;
      s.source["split_seed"] = cfg.data_seed;
    }
    if (s.train.num_features() != s.test.num_features()) {
      throw DataError("train data has " + std::to_string(s.train.num_features()) + " features, test data has " +
                      std::to_string(s.test.num_features()));
    }
    return s;
  }
  const SyntheticSpec spec = synthetic_spec(cfg);
  s.source = {{"synthetic", spec_to_json(spec)}, {"test_fraction", cfg.test_fraction}};
  if (spec.task == TaskKind::malware_like) {
    const TokenCorpus corpus = generate_corpus(spec);
    const auto [tr, te] =
        stratified_split_indices(corpus.labels, corpus.class_names.size(), cfg.test_fraction, cfg.data_seed);
    VectorizedPair v = vectorize_pair(pick(corpus.docs, tr), pick(corpus.docs, te), cfg.train_only_vocab);
    v.train.labels = pick(corpus.labels, tr);
    v.test.labels = pick(corpus.labels, te);
    v.train.class_names = v.test.class_names = corpus.class_names;
    s.train = std::move(v.train);
    s.test = std::move(v.test);
    s.source["vocabulary"] = cfg.train_only_vocab ? "train" : "train+test";
    return s;
  }
  std::tie(s.train, s.test) = train_test_split(generate(spec), cfg.test_fraction, cfg.data_seed);
  return s;
}

void emit(std::ostream& out, const std::string& format, const json& doc, const std::string& table) {
  if (format == "json") {
    out << doc.dump(2) << '\n';
  } else {
    out << table;
  }
}

// ---- gen ----

struct GenFlags {
  std::string task;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  double noise = 0.0;
  std::size_t vocab_size = 500;
  double test_fraction = 0.3;
  std::string out = "data";
  CLI::Option* noise_opt = nullptr;
};

int cmd_gen(const GenFlags& f, std::ostream& out) {
  SyntheticSpec spec = SyntheticSpec::defaults(task_from_string(f.task));
  spec.n_samples = f.samples;
  spec.seed = f.seed;
  spec.vocab_size = f.vocab_size;
  if (f.noise_opt->count() > 0) spec.noise = f.noise;
  spec.validate();
  if (!(f.test_fraction > 0.0 && f.test_fraction < 1.0)) throw ArgumentError("--test-fraction must be in (0, 1)");

  const fs::path dir = f.out;
  ensure_dir(dir);
  json meta = {{"generator", spec_to_json(spec)}, {"test_fraction", f.test_fraction}, {"split_seed", f.seed}};
  const std::string provenance = "deepnet gen " + meta.dump();
  std::vector<std::string> files;
  if (spec.task == TaskKind::malware_like) {
    const TokenCorpus corpus = generate_corpus(spec);
    const auto [tr, te] = stratified_split_indices(corpus.labels, corpus.class_names.size(), f.test_fraction, f.seed);
    auto names = [&](const std::vector<std::size_t>& idx) {
      std::vector<std::string> out;
      for (std::size_t i : idx) out.push_back(corpus.class_names[static_cast<std::size_t>(corpus.labels[i])]);
      return out;
    };
    write_lines(dir / "train.txt", pick(corpus.docs, tr));
    write_lines(dir / "test.txt", pick(corpus.docs, te));
    write_lines(dir / "train.labels", names(tr));
    write_lines(dir / "test.labels", names(te));
    files = {"train.txt", "test.txt", "train.labels", "test.labels"};
    meta["train_rows"] = tr.size();
    meta["test_rows"] = te.size();
    meta["class_names"] = corpus.class_names;
  } else {
    const auto [train, test] = train_test_split(generate(spec), f.test_fraction, f.seed);
    write_csv(train, dir / "train.csv", "label", {provenance});
    write_csv(test, dir / "test.csv", "label", {provenance});
    files = {"train.csv", "test.csv"};
    meta["train_rows"] = train.size();
    meta["test_rows"] = test.size();
    meta["class_names"] = train.class_names;
  }
  meta["files"] = files;
  write_json(dir / "meta.json", meta);
  out << "wrote";
  for (const auto& file : files) out << ' ' << (dir / file).string();
  out << ' ' << (dir / "meta.json").string() << '\n';
  return kExitOk;
}

// ---- vectorize ----

struct VectorizeFlags {
  std::string train;
  std::string test;
  std::string train_labels;
  std::string test_labels;
  std::string out = "vectorized";
  bool train_only_vocab = false;
};

int cmd_vectorize(const VectorizeFlags& f, std::ostream& out) {
  const auto train_docs = read_corpus(f.train);
  const auto test_docs = read_corpus(f.test);
  VectorizedPair v = vectorize_pair(train_docs, test_docs, f.train_only_vocab);
  for (const auto& tok : v.vocab.tokens()) {
    if (tok.find(',') != std::string::npos) throw DataError("token '" + tok + "' contains a comma and cannot be a CSV header");
  }
  if (!f.train_labels.empty()) {
    const auto labels = read_corpus(f.train_labels);
    if (labels.size() != train_docs.size()) {
      throw DataError("train labels file has " + std::to_string(labels.size()) + " lines for " +
                      std::to_string(train_docs.size()) + " documents");
    }
    for (const auto& l : labels) {
      auto it = std::find(v.train.class_names.begin(), v.train.class_names.end(), l);
      if (it == v.train.class_names.end()) {
        v.train.class_names.push_back(l);
        it = v.train.class_names.end() - 1;
      }
      v.train.labels.push_back(static_cast<int>(it - v.train.class_names.begin()));
    }
  }
  if (!f.test_labels.empty()) {
    const auto labels = read_corpus(f.test_labels);
    if (labels.size() != test_docs.size()) {
      throw DataError("test labels file has " + std::to_string(labels.size()) + " lines for " +
                      std::to_string(test_docs.size()) + " documents");
    }
    v.test.class_names = v.train.class_names;
    for (const auto& l : labels) {
      auto it = std::find(v.test.class_names.begin(), v.test.class_names.end(), l);
      if (it == v.test.class_names.end()) {
        v.test.class_names.push_back(l);
        it = v.test.class_names.end() - 1;
      }
      v.test.labels.push_back(static_cast<int>(it - v.test.class_names.begin()));
    }
  }

  const fs::path dir = f.out;
  ensure_dir(dir);
  const json meta = {{"train_corpus", f.train},
                     {"test_corpus", f.test},
                     {"train_labels", f.train_labels},
                     {"test_labels", f.test_labels},
                     {"vocabulary_fit", f.train_only_vocab ? "train" : "train+test"},
                     {"vocabulary_size", v.vocab.size()},
                     {"oov_tokens", {{"train", v.oov_train}, {"test", v.oov_test}}}};
  const std::string provenance = "deepnet vectorize " + meta.dump();
  write_csv(v.train, dir / "train.csv", "label", {provenance});
  write_csv(v.test, dir / "test.csv", "label", {provenance});
  write_lines(dir / "vocabulary.txt", v.vocab.tokens());
  write_json(dir / "meta.json", meta);
  out << "vocabulary " << v.vocab.size() << " tokens; " << train_docs.size() << " train and " << test_docs.size()
      << " test documents";
  if (v.oov_test + v.oov_train > 0) out << "; ignored " << v.oov_train + v.oov_test << " out-of-vocabulary tokens";
  out << '\n';
  return kExitOk;
}

// ---- train ----

int cmd_train(const RunFlags& flags, std::ostream& out) {
  const RunConfig cfg = flags.resolve();
  const json config_json = to_json(cfg);
  const Splits data = acquire_data(cfg);
  Sequential net = build_network(cfg.network_config(data.train.num_features(), data.train.num_classes()), cfg.train.seed);
  net.set_class_names(data.train.class_names);

  const fs::path dir = cfg.out_dir;
  ensure_dir(dir);
  const TrainHistory history = fit(net, data.train, cfg.train, &data.test);
  const MetricsReport test_metrics = evaluate(net, data.test);

  const json provenance = {{"command", "train"}, {"config", config_json}, {"data", data.source}};
  save_model(net, dir / "model.json", provenance);
  write_history_csv(dir / "history.csv", history, {"deepnet train " + provenance.dump()});
  json rep = provenance;
  rep["class_names"] = data.train.class_names;
  rep["train_rows"] = data.train.size();
  rep["test_rows"] = data.test.size();
  rep["parameters"] = net.param_count();
  rep["epochs_completed"] = history.epochs.size();
  rep["test_metrics"] = metrics_to_json(test_metrics, data.train.class_names);
  write_json(dir / "report.json", rep);

  std::ostringstream table;
  table << "Test set (" << data.test.size() << " rows) after " << history.epochs.size() << " epochs\n";
  print_metrics_table(table, test_metrics, data.train.class_names);
  write_text(dir / "report.txt", table.str());
  emit(out, cfg.format, rep, table.str());
  return kExitOk;
}

// ---- crossval ----

struct CrossvalFlags {
  std::size_t folds = 10;
  std::string sweep_axis;
  std::size_t trials = 1;
};

int cmd_crossval(const RunFlags& flags, const CrossvalFlags& cv, std::ostream& out) {
  const RunConfig cfg = flags.resolve();
  const Splits data = acquire_data(cfg);
  const fs::path dir = cfg.out_dir;
  ensure_dir(dir);
  json rep = {{"command", "crossval"}, {"config", to_json(cfg)}, {"data", data.source}, {"folds", cv.folds}};
  std::ostringstream table;
  if (!cv.sweep_axis.empty()) {
    SweepSpec spec = SweepSpec::defaults(sweep_axis_from_string(cv.sweep_axis));
    spec.folds = cv.folds;
    spec.trials = cv.trials;
    spec.epochs = cfg.train.epochs;
    spec.batch_norm = cfg.batch_norm;
    spec.dropout_rate = cfg.dropout;
    const SweepResult result = sweep(spec, data.train, cfg.train);
    rep["sweep"] = sweep_to_json(result);
    if (spec.axis == SweepAxis::depth) {
      print_topology_table(table, result, cfg.task);
    } else {
      print_sweep_table(table, result);
    }
  } else {
    const NetworkConfig net_cfg = cfg.network_config(data.train.num_features(), data.train.num_classes());
    const CrossValResult result =
        cross_validate([&](std::uint64_t seed) { return build_network(net_cfg, seed); }, data.train, cv.folds, cfg.train);
    rep["crossval"] = crossval_to_json(result);
    print_crossval_table(table, result);
  }
  write_json(dir / "crossval.json", rep);
  write_text(dir / "crossval.txt", table.str());
  emit(out, cfg.format, rep, table.str());
  return kExitOk;
}

// ---- sweep ----

struct SweepFlags {
  std::string axis;
  std::size_t trials = 2;
  std::size_t folds = 10;
  std::vector<double> grid;
};

int cmd_sweep(const RunFlags& flags, const SweepFlags& sf, const CLI::Option* epochs_opt, std::ostream& out) {
  const RunConfig cfg = flags.resolve();
  SweepSpec spec = SweepSpec::defaults(sweep_axis_from_string(sf.axis));
  spec.trials = sf.trials;
  spec.folds = sf.folds;
  if (!sf.grid.empty()) spec.grid = sf.grid;
  if (epochs_opt->count() > 0) spec.epochs = cfg.train.epochs;
  spec.batch_norm = cfg.batch_norm;
  spec.dropout_rate = cfg.dropout;
  spec.validate();

  const Splits data = acquire_data(cfg);
  const fs::path dir = cfg.out_dir;
  ensure_dir(dir);
  const SweepResult result = sweep(spec, data.train, cfg.train);
  const json rep = {{"command", "sweep"},
                    {"config", to_json(cfg)},
                    {"data", data.source},
                    {"spec", {{"axis", std::string(to_string(spec.axis))}, {"grid", spec.grid}, {"trials", spec.trials},
                              {"folds", spec.folds}, {"epochs", spec.epochs}}},
                    {"sweep", sweep_to_json(result)}};
  std::ostringstream table;
  print_sweep_table(table, result);
  write_json(dir / "sweep.json", rep);
  write_text(dir / "sweep.txt", table.str());
  emit(out, cfg.format, rep, table.str());
  return kExitOk;
}

// ---- eval ----

struct EvalFlags {
  std::string model;
  std::string data;
  std::string label_column = "label";
  std::string out = "out";
  std::string format = "table";
};

int cmd_eval(const EvalFlags& f, std::ostream& out) {
  if (f.format != "table" && f.format != "json") throw ConfigError("--format must be 'table' or 'json'");
  const Sequential net = load_model(f.model);
  Dataset data = load_csv(f.data, f.label_column);
  if (data.num_features() != net.config().input_dim) {
    throw DataError("model expects " + std::to_string(net.config().input_dim) + " features, data '" + f.data +
                    "' has " + std::to_string(data.num_features()));
  }
  if (!net.class_names().empty()) data = align_classes(std::move(data), net.class_names());
  const auto names = net.class_names().empty() ? data.class_names : net.class_names();
  const MetricsReport metrics = evaluate(net, data);

  json model_provenance = nullptr;
  {
    // The provenance block is re-read so the report names the run that built the model.
    std::ifstream in(f.model, std::ios::binary);
    json doc = json::parse(in, nullptr, false);
    if (!doc.is_discarded() && doc.contains("provenance")) model_provenance = doc["provenance"];
  }
  const fs::path dir = f.out;
  ensure_dir(dir);
  const json rep = {{"command", "eval"},
                    {"model", f.model},
                    {"data", f.data},
                    {"label_column", f.label_column},
                    {"model_provenance", model_provenance},
                    {"class_names", names},
                    {"rows", data.size()},
                    {"metrics", metrics_to_json(metrics, names)}};
  std::ostringstream table;
  table << "Evaluation of " << f.model << " on " << f.data << " (" << data.size() << " rows)\n";
  print_metrics_table(table, metrics, names);
  write_json(dir / "eval_report.json", rep);
  write_text(dir / "eval_report.txt", table.str());
  emit(out, f.format, rep, table.str());
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deep feedforward classifiers for malware, incident and fraud detection"};
  app.require_subcommand(1);

  GenFlags gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic dataset");
  gen_cmd->add_option("--task", gen.task, "incident_like, fraud_like or malware_like")->required();
  gen_cmd->add_option("--samples", gen.samples, "Number of samples (>= 10)");
  gen_cmd->add_option("--seed", gen.seed, "Generator and split seed");
  gen.noise_opt = gen_cmd->add_option("--noise", gen.noise, "Noise level");
  gen_cmd->add_option("--vocab-size", gen.vocab_size, "Token vocabulary size (malware_like)");
  gen_cmd->add_option("--test-fraction", gen.test_fraction, "Held-out fraction");
  gen_cmd->add_option("--out", gen.out, "Output directory");

  VectorizeFlags vec;
  auto* vec_cmd = app.add_subcommand("vectorize", "Build term-document count matrices from token corpora");
  vec_cmd->add_option("--train", vec.train, "Training corpus, one document per line")->required();
  vec_cmd->add_option("--test", vec.test, "Test corpus, one document per line")->required();
  vec_cmd->add_option("--train-labels", vec.train_labels, "Training labels, one per line");
  vec_cmd->add_option("--test-labels", vec.test_labels, "Test labels, one per line");
  vec_cmd->add_option("--out", vec.out, "Output directory");
  vec_cmd->add_flag("--train-only-vocab", vec.train_only_vocab, "Fit the vocabulary on the training corpus only");

  RunFlags train_flags;
  auto* train_cmd = app.add_subcommand("train", "Train a network and report test metrics");
  train_flags.attach(train_cmd);

  RunFlags cv_flags;
  CrossvalFlags cv;
  auto* cv_cmd = app.add_subcommand("crossval", "Stratified k-fold cross-validation");
  cv_flags.attach(cv_cmd);
  cv_cmd->add_option("--folds", cv.folds, "Number of folds");
  cv_cmd->add_option("--sweep", cv.sweep_axis, "Cross-validate every point of an axis (units, lr, depth)");
  cv_cmd->add_option("--trials", cv.trials, "Trials per grid point with --sweep");

  RunFlags sweep_flags;
  SweepFlags sf;
  auto* sweep_cmd = app.add_subcommand("sweep", "Hyperparameter grid search with cross-validation");
  sweep_flags.attach(sweep_cmd);
  sweep_cmd->add_option("--axis", sf.axis, "units, lr or depth")->required();
  sweep_cmd->add_option("--trials", sf.trials, "Trials per grid point");
  sweep_cmd->add_option("--folds", sf.folds, "Folds per trial");
  sweep_cmd->add_option("--grid", sf.grid, "Grid values (default: the axis's standard grid)")->delimiter(',');

  EvalFlags ev;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a saved model on a CSV dataset");
  eval_cmd->add_option("--model", ev.model, "Model file")->required();
  eval_cmd->add_option("--data", ev.data, "CSV dataset")->required();
  eval_cmd->add_option("--label-column", ev.label_column, "Label column name");
  eval_cmd->add_option("--out", ev.out, "Output directory");
  eval_cmd->add_option("--format", ev.format, "Stdout format: table or json");

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("deepnet");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen, out);
    if (vec_cmd->parsed()) return cmd_vectorize(vec, out);
    if (train_cmd->parsed()) return cmd_train(train_flags, out);
    if (cv_cmd->parsed()) return cmd_crossval(cv_flags, cv, out);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_flags, sf, sweep_cmd->get_option("--epochs"), out);
    if (eval_cmd->parsed()) return cmd_eval(ev, out);
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ArgumentError& e) {
    err << "argument error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace deepnet::cli
