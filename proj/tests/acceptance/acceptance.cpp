// One PASS/FAIL line per acceptance criterion. Exit status is non-zero when any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "deepnet/cli/commands.hpp"
#include "deepnet/crossval.hpp"
#include "deepnet/dataset.hpp"
#include "deepnet/layers.hpp"
#include "deepnet/losses.hpp"
#include "deepnet/metrics.hpp"
#include "deepnet/model.hpp"
#include "deepnet/synthetic.hpp"
#include "deepnet/vectorizer.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace deepnet;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Collects failed sub-checks for one criterion.
struct Verdict {
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int run_cli(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream o, e;
  const int code = cli::run(args, o, e);
  if (out) *out = o.str();
  if (code != 0) std::fprintf(stderr, "deepnet %s: %s", args.front().c_str(), e.str().c_str());
  return code;
}

// ---- 1 ----

void parameter_parity(Verdict& v) {
  const auto t0 = Clock::now();
  const Sequential binary = build_deepnet(12, 2, true, 0);
  std::vector<std::size_t> counts;
  for (const auto& row : binary.summary()) {
    if (row.params > 0) counts.push_back(row.params);
  }
  const std::vector<std::size_t> table = {13312, 4096, 787200, 3072, 393728, 2048, 131328, 1024, 32896, 512, 129, 4};
  v.expect(counts == table, "per-layer counts differ from the reference table");
  v.expect(binary.param_count() == 1369349, "binary total " + std::to_string(binary.param_count()) + " != 1369349");

  const Sequential three = build_deepnet(12, 3, true, 0);
  std::vector<std::size_t> tail;
  for (const auto& row : three.summary()) {
    if (row.params > 0) tail.push_back(row.params);
  }
  v.expect(tail.size() == 12 && tail[10] == 387 && tail[11] == 12, "3-class head is not 387 + 12");
  v.expect(three.param_count() == 1369615, "3-class total " + std::to_string(three.param_count()) + " != 1369615");
  // With 9 inputs the first dense row shrinks by 3 * 1024.
  const std::size_t nine = build_deepnet(9, 3, true, 0).param_count();
  v.expect(nine == 1366543, "9-input 3-class total " + std::to_string(nine) + " != 1366543");

  const double s = seconds_since(t0);
  v.expect(s < 1.0, "took " + fmt("%.2f", s) + " s");
  v.note("1369349 / 1369615 (12 inputs), " + fmt("%.3f s", s));
}

// ---- 2 ----

constexpr std::size_t kConfigs = 20;

double dense_check(oracle::TestRandom& r) {
  const std::size_t n = 1 + r.index(8), in = 1 + r.index(8), out = 1 + r.index(8);
  DenseLayer d(r.matrix(in, out), r.matrix(1, out));
  Matrix x = r.matrix(n, in);
  const Matrix w = r.matrix(n, out);
  auto f = [&] { return oracle::weighted_sum(d.infer(x), w); };
  d.forward(x);
  const auto g = d.backward(w);
  return std::max({oracle::max_relative_error(g.input, oracle::numeric_gradient(f, x)),
                   oracle::max_relative_error(g.weights, oracle::numeric_gradient(f, d.weights())),
                   oracle::max_relative_error(g.bias, oracle::numeric_gradient(f, d.bias()))});
}

double batchnorm_check(oracle::TestRandom& r) {
  // Two-row batches normalize to +-1 whatever x is; their gradient is pure eps
  // residue that central differences cannot resolve.
  const std::size_t n = 4 + r.index(6), dim = 1 + r.index(8);
  BatchNormLayer bn(dim);
  bn.gamma() = r.matrix(1, dim, 0.5, 2);
  bn.beta() = r.matrix(1, dim);
  Matrix x = r.matrix(n, dim, -2, 2);
  const Matrix w = r.matrix(n, dim);
  auto f = [&] {
    BatchNormLayer probe = bn;
    return oracle::weighted_sum(probe.forward_train(x), w);
  };
  BatchNormLayer live = bn;
  live.forward_train(x);
  const auto g = live.backward(w);
  return std::max({oracle::max_relative_error(g.input, oracle::numeric_gradient(f, x)),
                   oracle::max_relative_error(g.gamma, oracle::numeric_gradient(f, bn.gamma())),
                   oracle::max_relative_error(g.beta, oracle::numeric_gradient(f, bn.beta()))});
}

double activation_check(oracle::TestRandom& r, ActivationKind kind) {
  const std::size_t n = 1 + r.index(8), dim = 1 + r.index(8);
  Matrix x = r.matrix(n, dim, -3, 3);
  for (double& e : x.values()) {
    if (std::abs(e) < 1e-3) e = 0.5;  // away from the ReLU kink
  }
  const Matrix w = r.matrix(n, dim);
  ActivationLayer layer(kind);
  layer.forward(x);
  auto f = [&] { return oracle::weighted_sum(activate(kind, x), w); };
  return oracle::max_relative_error(layer.backward(w), oracle::numeric_gradient(f, x));
}

double network_check(std::uint64_t seed, std::size_t classes) {
  NetworkConfig c;
  c.input_dim = 12;
  c.num_classes = classes;
  c.hidden = {4, 3};
  Sequential net = build_network(c, seed);
  oracle::TestRandom r(seed + 1000);
  const Matrix x = r.matrix(8, 12, -2, 2);
  std::vector<int> labels(8);
  for (std::size_t i = 0; i < 8; ++i) labels[i] = static_cast<int>(i % classes);
  const Matrix y = encode_targets(c.loss(), labels, classes);
  auto loss = [&] {
    net.reseed_dropout(5);
    return loss_value(c.loss(), net.forward(x, Mode::train), y);
  };
  net.reseed_dropout(5);
  const Matrix p = net.forward(x, Mode::train);
  const GradientSet g = net.backward(output_gradient(c.loss(), p, y));
  double worst = 0.0;
  auto params = net.parameters();
  for (std::size_t i = 0; i < params.size(); ++i) {
    worst = std::max(worst, oracle::max_relative_error(g.grads[i], oracle::numeric_gradient(loss, *params[i])));
  }
  return worst;
}

void gradient_correctness(Verdict& v) {
  const auto t0 = Clock::now();
  oracle::TestRandom r(2024);
  double dense = 0.0, bn = 0.0, act = 0.0;
  for (std::size_t t = 0; t < kConfigs; ++t) {
    dense = std::max(dense, dense_check(r));
    bn = std::max(bn, batchnorm_check(r));
    for (auto kind : {ActivationKind::relu, ActivationKind::sigmoid, ActivationKind::tanh, ActivationKind::identity}) {
      act = std::max(act, activation_check(r, kind));
    }
  }
  double net = 0.0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    net = std::max(net, network_check(seed, 2));
    net = std::max(net, network_check(seed, 3));
  }
  v.expect(dense <= 1e-5, "dense max rel err " + fmt("%.2e", dense));
  v.expect(bn <= 1e-5, "batch norm max rel err " + fmt("%.2e", bn));
  v.expect(act <= 1e-5, "activation max rel err " + fmt("%.2e", act));
  v.expect(net <= 1e-4, "network max rel err " + fmt("%.2e", net));
  const double s = seconds_since(t0);
  v.expect(s < 30.0, "took " + fmt("%.1f", s) + " s");
  v.note("dense " + fmt("%.1e", dense) + ", bn " + fmt("%.1e", bn) + ", act " + fmt("%.1e", act) + ", net " +
         fmt("%.1e", net) + ", " + fmt("%.2f s", s));
}

// ---- 3 ----

void loss_oracles(Verdict& v) {
  const double third = 1.0 / 3.0;
  const double cases[][2] = {
      {bce_loss(Matrix{{0.5}}, Matrix{{1}}), std::log(2.0)},
      {bce_loss(Matrix{{0.9}, {0.1}}, Matrix{{1}, {0}}), -0.5 * (std::log(0.9) + std::log(0.9))},
      {cce_loss(Matrix{{third, third, third}}, Matrix{{0, 0, 1}}), std::log(3.0)},
      {cce_loss(Matrix{{0.7, 0.2, 0.1}}, Matrix{{1, 0, 0}}), std::log(1.0 / 0.7)},
  };
  const double printed[] = {0.693147, 0.105361, 1.098612, 0.356675};
  for (std::size_t i = 0; i < 4; ++i) {
    v.expect(std::abs(cases[i][0] - cases[i][1]) <= 1e-9, "case " + std::to_string(i) + " = " + fmt("%.12f", cases[i][0]));
    v.expect(std::abs(cases[i][0] - printed[i]) <= 5e-7, "case " + std::to_string(i) + " disagrees with the 6-digit value");
  }
  v.note("ln2, 0.105361, ln3, 0.356675 within 1e-9");
}

// ---- 4 ----

struct TaskRun {
  const char* task;
  std::size_t samples;
  std::size_t epochs;
  double threshold;
  std::size_t epoch_cap;
};

double train_synthetic(const TaskRun& t, const std::filesystem::path& out, Verdict& v, double* secs) {
  const auto t0 = Clock::now();
  const int code = run_cli({"train", "--task", t.task, "--samples", std::to_string(t.samples), "--data-seed", "7",
                            "--seed", "7", "--network", "deepnet", "--lr", "0.1", "--batch-size", "64", "--epochs",
                            std::to_string(t.epochs), "--out", out.string(), "--format", "json"});
  *secs = seconds_since(t0);
  if (code != 0) {
    v.expect(false, std::string(t.task) + " training exited with " + std::to_string(code));
    return 0.0;
  }
  const json rep = json::parse(oracle::read_file(out / "report.json"));
  return rep["test_metrics"]["accuracy"].get<double>();
}

void synthetic_performance(Verdict& v, const std::filesystem::path& work) {
  const TaskRun runs[] = {
      {"incident_like", 2000, 40, 0.99, 100},
      {"fraud_like", 5000, 20, 0.90, 300},
      {"malware_like", 2000, 20, 0.85, 300},
  };
  std::map<std::string, double> acc;
  std::string summary;
  for (const auto& t : runs) {
    double secs = 0.0;
    const double a = train_synthetic(t, work / t.task, v, &secs);
    acc[t.task] = a;
    v.expect(t.epochs <= t.epoch_cap, std::string(t.task) + " epoch budget exceeded");
    v.expect(a >= t.threshold, std::string(t.task) + " accuracy " + fmt("%.4f", a) + " < " + fmt("%.2f", t.threshold));
    v.expect(secs < 300.0, std::string(t.task) + " took " + fmt("%.0f", secs) + " s");
    summary += std::string(summary.empty() ? "" : ", ") + t.task + " " + fmt("%.4f", a) + " (" +
               std::to_string(t.epochs) + " ep, " + fmt("%.0f s", secs) + ")";
  }
  v.expect(acc["incident_like"] >= acc["fraud_like"] && acc["fraud_like"] >= acc["malware_like"],
           "difficulty ordering incident >= fraud >= malware does not hold");
  v.note(summary);
}

// ---- 5 ----

void depth_trend(Verdict& v) {
  SyntheticSpec spec = SyntheticSpec::defaults(TaskKind::fraud_like);
  spec.n_samples = 2000;
  spec.seed = 7;
  const Dataset data = generate(spec);
  SweepSpec s = SweepSpec::defaults(SweepAxis::depth);
  s.grid = {1, 5};
  s.trials = 1;
  s.folds = 10;
  s.epochs = 10;
  TrainConfig tc;
  tc.seed = 7;
  const auto t0 = Clock::now();
  const SweepResult r = sweep(s, data, tc);
  const double shallow = r.rows[0].mean_accuracy;
  const double deep = r.rows[1].mean_accuracy;
  v.expect(deep >= shallow + 0.02, "depth-5 " + fmt("%.4f", deep) + " vs depth-1 " + fmt("%.4f", shallow));
  v.note("10-fold CV on fraud_like n=2000, 10 epochs: depth-1 " + fmt("%.4f", shallow) + ", depth-5 " +
         fmt("%.4f", deep) + ", " + fmt("%.0f s", seconds_since(t0)));
}

// ---- 6 ----

void protocol_parity(Verdict& v, const std::filesystem::path& work) {
  const SweepSpec units = SweepSpec::defaults(SweepAxis::units);
  v.expect(units.grid == std::vector<double>{128, 256, 384, 512, 640, 768, 896, 1024}, "units grid");
  const SweepSpec lr = SweepSpec::defaults(SweepAxis::learning_rate);
  v.expect(!lr.grid.empty() && lr.grid.front() == 0.01 && lr.grid.back() == 0.5 &&
               std::is_sorted(lr.grid.begin(), lr.grid.end()),
           "learning-rate grid does not span [0.01, 0.5]");
  for (const auto& s : {units, lr, SweepSpec::defaults(SweepAxis::depth)}) {
    v.expect(s.trials == 2, "default trials != 2");
    v.expect(s.folds == 10, "default folds != 10");
  }

  std::string out;
  const int code = run_cli({"crossval", "--sweep", "depth", "--task", "incident_like", "--samples", "40", "--folds",
                            "2", "--trials", "1", "--epochs", "1", "--out", (work / "topology").string()},
                           &out);
  v.expect(code == 0, "crossval --sweep depth failed");
  const std::regex row("^DNN ([1-5]) layer\\s+incident_like\\s+[0-9.]+$");
  std::size_t rows = 0;
  std::istringstream lines(out);
  for (std::string line; std::getline(lines, line);) {
    std::smatch m;
    if (std::regex_match(line, m, row) && m[1] == std::to_string(rows + 1)) ++rows;
  }
  v.expect(rows == 5, "topology table has " + std::to_string(rows) + " DNN rows");
  v.note("8 unit values, " + std::to_string(lr.grid.size()) + " learning rates, 5 topology rows");
}

// ---- 7 ----

void determinism(Verdict& v, const std::filesystem::path& work) {
  const auto d = work / "det";
  const std::string data = (d / "data").string();
  const std::string corpus = (d / "corpus").string();
  const std::vector<std::vector<std::string>> commands = {
      {"gen", "--task", "fraud_like", "--samples", "300", "--seed", "3", "--out", data},
      {"gen", "--task", "malware_like", "--samples", "100", "--seed", "3", "--out", corpus},
      {"vectorize", "--train", corpus + "/train.txt", "--test", corpus + "/test.txt", "--train-labels",
       corpus + "/train.labels", "--test-labels", corpus + "/test.labels", "--out", (d / "vec").string()},
      {"train", "--train-csv", data + "/train.csv", "--test-csv", data + "/test.csv", "--network", "depth-2",
       "--epochs", "3", "--seed", "11", "--out", (d / "train").string()},
      {"eval", "--model", (d / "train" / "model.json").string(), "--data", data + "/test.csv", "--out",
       (d / "train").string()},
      {"crossval", "--train-csv", data + "/train.csv", "--network", "depth-1", "--epochs", "2", "--folds", "3",
       "--out", (d / "cv").string()},
      {"sweep", "--axis", "lr", "--grid", "0.05,0.1", "--folds", "2", "--epochs", "1", "--train-csv",
       data + "/train.csv", "--out", (d / "sweep").string()},
  };
  auto snapshot = [&] {
    std::map<std::string, std::string> files;
    for (const auto& e : std::filesystem::recursive_directory_iterator(d)) {
      if (e.is_regular_file()) files[e.path().string()] = oracle::read_file(e.path());
    }
    return files;
  };
  std::filesystem::remove_all(d);
  for (const auto& c : commands) v.expect(run_cli(c) == 0, c.front() + " failed on the first run");
  const auto first = snapshot();
  for (const auto& c : commands) v.expect(run_cli(c) == 0, c.front() + " failed on the rerun");
  const auto second = snapshot();
  v.expect(first.size() == second.size(), "artifact sets differ");
  std::size_t same = 0;
  for (const auto& [path, bytes] : first) {
    const auto it = second.find(path);
    if (it != second.end() && it->second == bytes) {
      ++same;
    } else {
      v.expect(false, path + " changed between runs");
    }
  }
  v.note(std::to_string(same) + " artifacts from 7 commands byte-identical");
  v.expect(first.count((d / "train" / "model.json").string()) == 1, "model.json missing");
  v.expect(first.count((d / "train" / "history.csv").string()) == 1, "history.csv missing");
  v.expect(first.count((d / "train" / "report.json").string()) == 1, "report.json missing");
}

// ---- 8 ----

void metric_oracle(Verdict& v) {
  oracle::TestRandom r(8);
  std::size_t mismatches = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = 2 + r.index(4);
    const std::size_t n = 1 + r.index(80);
    std::vector<int> truth(n), pred(n);
    for (std::size_t i = 0; i < n; ++i) {
      truth[i] = static_cast<int>(r.index(k));
      pred[i] = r.index(2) == 0 ? truth[i] : static_cast<int>(r.index(k));
    }
    const MetricsReport got = report(confusion(truth, pred, k));
    const oracle::BruteMetrics want = oracle::brute_force_metrics(truth, pred, k);
    bool ok = got.accuracy == want.accuracy && got.macro.precision == want.macro_precision &&
              got.macro.recall == want.macro_recall && got.macro.f1 == want.macro_f1 &&
              got.weighted.precision == want.weighted_precision && got.weighted.f1 == want.weighted_f1;
    for (std::size_t c = 0; c < k; ++c) {
      ok = ok && got.per_class[c].precision == want.precision[c] && got.per_class[c].recall == want.recall[c] &&
           got.per_class[c].f1 == want.f1[c] && got.per_class[c].support == want.support[c];
    }
    mismatches += !ok;
  }
  v.expect(mismatches == 0, std::to_string(mismatches) + " of 100 random cases disagree");

  const std::vector<int> truth = {0, 0, 1, 1, 2};
  const std::vector<int> pred = {0, 1, 1, 1, 0};
  const MetricsReport hand = report(confusion(truth, pred, 3));
  v.expect(std::abs(hand.accuracy - 0.6) <= 1e-9, "hand accuracy " + fmt("%.12f", hand.accuracy));
  v.expect(std::abs(hand.macro.f1 - 1.3 / 3.0) <= 1e-9, "hand macro-F1 " + fmt("%.12f", hand.macro.f1));
  v.note("100/100 random cases exact, hand macro-F1 " + fmt("%.6f", hand.macro.f1));
}

// ---- 9 ----

void vectorizer_oracle(Verdict& v, const std::filesystem::path& work) {
  const std::vector<std::string> docs = {"1 5 5", "5 2"};
  const Vocabulary vocab = fit_vocabulary(docs);
  v.expect(vocab.tokens() == std::vector<std::string>{"1", "2", "5"}, "vocabulary order");
  v.expect(transform_counts(vocab, docs).counts == Matrix{{1, 0, 2}, {0, 1, 1}}, "count matrix");

  const auto path = work / "nan.csv";
  oracle::write_file(path, "f1,f2,f3,label\nNaN,1.5,,a\n2,nan,NAN,b\n");
  const Dataset d = load_csv(path, "label");
  v.expect(d.features == Matrix{{0, 1.5, 0}, {2, 0, 0}}, "NaN and empty cells are not 0");
  v.note("[[1,0,2],[0,1,1]]; NaN/nan/NAN/empty -> 0");
}

}  // namespace

int main() {
  oracle::TempDir work("acceptance");
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Verdict&)> check;
  };
  const std::vector<Criterion> criteria = {
      {1, "parameter parity", parameter_parity},
      {2, "gradient correctness", gradient_correctness},
      {3, "loss oracles", loss_oracles},
      {4, "synthetic task performance", [&](Verdict& v) { synthetic_performance(v, work.path()); }},
      {5, "depth sweep trend", depth_trend},
      {6, "protocol parity", [&](Verdict& v) { protocol_parity(v, work.path()); }},
      {7, "determinism", [&](Verdict& v) { determinism(v, work.path()); }},
      {8, "metric oracle", metric_oracle},
      {9, "vectorizer oracle", [&](Verdict& v) { vectorizer_oracle(v, work.path()); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Verdict v;
    try {
      c.check(v);
    } catch (const std::exception& e) {
      v.expect(false, std::string("exception: ") + e.what());
    }
    const bool ok = v.failures.empty();
    failed += !ok;
    std::string detail;
    for (const auto& s : v.failures) detail += (detail.empty() ? "" : "; ") + s;
    for (const auto& s : v.notes) detail += (detail.empty() ? "" : "; ") + s;
    std::printf("%s criterion %d (%s): %s\n", ok ? "PASS" : "FAIL", c.id, c.name, detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
