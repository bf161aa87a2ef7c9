#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "deepnet/dataset.hpp"
#include "deepnet/errors.hpp"
#include "deepnet/synthetic.hpp"
#include "deepnet/vectorizer.hpp"
#include "oracles.hpp"

using namespace deepnet;

TEST_CASE("csv ingestion replaces NaN and empty cells with zero") {
  const Dataset d = parse_csv(
      "# comment line\n"
      "a,b,c,label\n"
      "1.5,NaN,,b\n"
      "nan,2,NAN,m\n"
      "-3e2, 4 ,nAn,b\n",
      "label");
  CHECK(d.features == Matrix{{1.5, 0, 0}, {0, 2, 0}, {-300, 4, 0}});
  CHECK(d.labels == std::vector<int>{0, 1, 0});
  CHECK(d.class_names == std::vector<std::string>{"b", "m"});
  CHECK(d.feature_names == std::vector<std::string>{"a", "b", "c"});
  CHECK(all_finite(d.features));
}

TEST_CASE("label column may sit anywhere") {
  const Dataset d = parse_csv("y,x1,x2\nno,1,2\nyes,3,4\n", "y");
  CHECK(d.features == Matrix{{1, 2}, {3, 4}});
  CHECK(d.labels == std::vector<int>{0, 1});
}

TEST_CASE("csv errors") {
  CHECK_THROWS_AS(parse_csv("a,label\n", "label"), DataError);
  CHECK_THROWS_AS(parse_csv("", "label"), DataError);
  CHECK_THROWS_AS(parse_csv("a,b\n1,2\n", "label"), DataError);
  CHECK_THROWS_AS(parse_csv("a,label\n1,x\n2\n", "label"), ParseError);
  CHECK_THROWS_AS(parse_csv("a,label\ninf,x\n", "label"), DataError);
  try {
    parse_csv("a,b,label\n1,2,x\n3,abc,y\n", "label");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("'b'") != std::string::npos);
    CHECK(msg.find("abc") != std::string::npos);
    CHECK(msg.find("3") != std::string::npos);
  }
  CHECK_THROWS_AS(load_csv("/nonexistent/file.csv", "label"), IoError);
}

TEST_CASE("csv round trip is exact") {
  oracle::TempDir dir("csv");
  oracle::TestRandom r(8);
  Dataset d;
  d.features = r.matrix(20, 4, -1e3, 1e3);
  d.features(0, 0) = 1.0 / 3.0;
  for (std::size_t i = 0; i < 20; ++i) d.labels.push_back(static_cast<int>(i % 3));
  d.class_names = {"x", "y", "z"};
  d.feature_names = {"f0", "f1", "f2", "f3"};
  write_csv(d, dir / "d.csv", "label", {"made by a test"});
  const std::string text = oracle::read_file(dir / "d.csv");
  CHECK(text.rfind("# made by a test\nf0,f1,f2,f3,label\n", 0) == 0);
  const Dataset back = load_csv(dir / "d.csv", "label");
  CHECK(back.features == d.features);
  CHECK(back.labels == d.labels);
  CHECK(back.class_names == d.class_names);
}

TEST_CASE("align classes") {
  Dataset d = parse_csv("a,label\n1,m\n2,b\n", "label");
  const Dataset aligned = align_classes(d, {"b", "m", "q"});
  CHECK(aligned.labels == std::vector<int>{1, 0});
  CHECK(aligned.class_names == std::vector<std::string>{"b", "m", "q"});
  CHECK_THROWS_AS(align_classes(d, {"b"}), DataError);
}

TEST_CASE("vocabulary hand example") {
  const std::vector<std::string> docs = {"1 5 5", "5 2"};
  const Vocabulary v = fit_vocabulary(docs);
  CHECK(v.tokens() == std::vector<std::string>{"1", "2", "5"});
  CHECK(v.column("5") == 2u);
  CHECK(!v.column("7").has_value());
  CHECK(transform_counts(v, docs).counts == Matrix{{1, 0, 2}, {0, 1, 1}});
}

TEST_CASE("vocabulary spans train and test unless asked not to") {
  const std::vector<std::string> train = {"a b", "b b"};
  const std::vector<std::string> test = {"c a", ""};
  const Vocabulary both = fit_vocabulary(train, test);
  CHECK(both.tokens() == std::vector<std::string>{"a", "b", "c"});
  const Vocabulary only = fit_vocabulary(train);
  CHECK(only.tokens() == std::vector<std::string>{"a", "b"});

  const CountMatrix t = transform_counts(only, test);
  CHECK(t.counts == Matrix{{1, 0}, {0, 0}});
  CHECK(t.oov_tokens == 1);

  const std::vector<std::string> none = {"", "  "};
  CHECK_THROWS_AS(fit_vocabulary(none), DataError);
}

TEST_CASE("count matrix properties") {
  const std::vector<std::string> docs = {"7 7 7 7", "3\t9  3", "9 3 3"};
  const Vocabulary v = fit_vocabulary(docs);
  const Matrix m = transform_counts(v, docs).counts;
  CHECK(m(0, *v.column("7")) == 4);
  CHECK(Matrix::row_vector(m.row(1)) == Matrix::row_vector(m.row(2)));
  for (std::size_t i = 0; i < docs.size(); ++i) {
    double s = 0.0;
    for (double x : m.row(i)) s += x;
    CHECK(s == static_cast<double>(tokenize(docs[i]).size()));
  }
}

TEST_CASE("corpus files") {
  oracle::TempDir dir("corpus");
  const std::vector<std::string> lines = {"1 2 3", "", "4"};
  write_lines(dir / "c.txt", lines);
  CHECK(read_corpus(dir / "c.txt") == lines);
  CHECK_THROWS_AS(read_corpus(dir / "missing.txt"), IoError);
}

TEST_CASE("stratified train/test split") {
  Dataset d;
  d.features = Matrix(100, 1);
  for (std::size_t i = 0; i < 100; ++i) {
    d.features(i, 0) = static_cast<double>(i);
    d.labels.push_back(i < 70 ? 0 : 1);
  }
  d.class_names = {"a", "b"};
  const auto [train, test] = train_test_split(d, 0.3, 7);
  CHECK(train.size() == 70);
  CHECK(test.size() == 30);
  CHECK(test.class_counts() == std::vector<std::size_t>{21, 9});
  std::set<double> seen;
  for (double v : train.features.values()) seen.insert(v);
  for (double v : test.features.values()) seen.insert(v);
  CHECK(seen.size() == 100);

  const auto again = train_test_split(d, 0.3, 7);
  CHECK(again.first.features == train.features);
  CHECK_THROWS_AS(train_test_split(d, 0.0, 7), ArgumentError);
  CHECK_THROWS_AS(train_test_split(d, 1.0, 7), ArgumentError);
}

TEST_CASE("generators: shapes and determinism") {
  SyntheticSpec incident = SyntheticSpec::defaults(TaskKind::incident_like);
  incident.n_samples = 1000;
  incident.seed = 7;
  const Dataset a = generate(incident);
  CHECK(a.size() == 1000);
  CHECK(a.num_features() == 9);
  CHECK(a.num_classes() == 2);
  CHECK(generate(incident).features == a.features);

  SyntheticSpec fraud = SyntheticSpec::defaults(TaskKind::fraud_like);
  fraud.n_samples = 500;
  const Dataset f = generate(fraud);
  CHECK(f.num_features() == 12);
  CHECK(f.num_classes() == 3);

  SyntheticSpec malware = SyntheticSpec::defaults(TaskKind::malware_like);
  malware.n_samples = 200;
  const TokenCorpus c = generate_corpus(malware);
  CHECK(c.docs.size() == 200);
  for (const auto& doc : c.docs) {
    const auto n = tokenize(doc).size();
    CHECK((n >= malware.min_doc_length && n <= malware.max_doc_length));
    for (auto tok : tokenize(doc)) CHECK(std::stoul(std::string(tok)) < malware.vocab_size);
  }
  CHECK(generate_corpus(malware).docs == c.docs);
  const Dataset m = generate(malware);
  CHECK(m.size() == 200);
  CHECK(m.num_features() <= malware.vocab_size);
}

TEST_CASE("generators: label priors within three binomial sigmas") {
  for (TaskKind task : {TaskKind::incident_like, TaskKind::fraud_like, TaskKind::malware_like}) {
    SyntheticSpec s = SyntheticSpec::defaults(task);
    s.n_samples = 3000;
    s.seed = 21;
    const Dataset d = generate(s);
    const auto priors = s.effective_priors();
    const auto counts = d.class_counts();
    for (std::size_t c = 0; c < priors.size(); ++c) {
      const double n = 3000.0;
      const double sigma = std::sqrt(n * priors[c] * (1 - priors[c]));
      CHECK_MESSAGE(std::abs(static_cast<double>(counts[c]) - n * priors[c]) <= 3 * sigma, to_string(task));
    }
  }
}

TEST_CASE("incident clusters are at least four sigma apart") {
  for (double noise : {0.0, 1.0, 50.0}) {
    SyntheticSpec s = SyntheticSpec::defaults(TaskKind::incident_like);
    s.n_samples = 20000;
    s.noise = noise;
    const Dataset d = generate(s);
    std::vector<double> mean[2] = {std::vector<double>(9), std::vector<double>(9)};
    const auto counts = d.class_counts();
    for (std::size_t i = 0; i < d.size(); ++i) {
      for (std::size_t j = 0; j < 9; ++j) mean[d.labels[i]][j] += d.features(i, j) / counts[d.labels[i]];
    }
    double dist = 0.0;
    for (std::size_t j = 0; j < 9; ++j) dist += (mean[0][j] - mean[1][j]) * (mean[0][j] - mean[1][j]);
    CHECK(std::sqrt(dist) >= 4.0 - 0.1);
  }
}

TEST_CASE("noise-free fraud clusters are disjoint boxes") {
  SyntheticSpec s = SyntheticSpec::defaults(TaskKind::fraud_like);
  s.noise = 0.0;
  s.n_samples = 2000;
  const Dataset d = generate(s);
  // Every point lies within 0.5 of a cube vertex; vertices identify the class.
  std::map<std::vector<int>, int> owner;
  for (std::size_t i = 0; i < d.size(); ++i) {
    std::vector<int> vertex;
    for (double v : d.features.row(i)) {
      CHECK(std::abs(std::abs(v) - 2.0) <= 0.5);
      vertex.push_back(v > 0 ? 1 : 0);
    }
    const auto [it, fresh] = owner.emplace(vertex, d.labels[i]);
    CHECK(it->second == d.labels[i]);
  }
  CHECK(owner.size() <= 3 * s.clusters_per_class);
}

TEST_CASE("spec validation") {
  SyntheticSpec s = SyntheticSpec::defaults(TaskKind::fraud_like);
  s.n_samples = 5;
  CHECK_THROWS_AS(generate(s), ArgumentError);
  s.n_samples = 100;
  s.priors = {0.5, 0.5};
  CHECK_THROWS_AS(generate(s), ArgumentError);
  s.priors = {0.5, 0.4, 0.2};
  CHECK_THROWS_AS(generate(s), ArgumentError);
  s.priors.clear();
  s.noise = -1;
  CHECK_THROWS_AS(generate(s), ArgumentError);
  CHECK_THROWS_AS(generate_corpus(SyntheticSpec::defaults(TaskKind::fraud_like)), ArgumentError);
  CHECK_THROWS_AS(task_from_string("spam_like"), ArgumentError);
}
