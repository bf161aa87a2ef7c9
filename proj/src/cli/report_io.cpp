#include "deepnet/cli/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>

#include "deepnet/errors.hpp"

namespace deepnet::cli {

using nlohmann::json;

namespace {

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string class_name(const std::vector<std::string>& names, std::size_t c) {
  return c < names.size() ? names[c] : "class_" + std::to_string(c);
}

}  // namespace

json metrics_to_json(const MetricsReport& r, const std::vector<std::string>& class_names) {
  const std::size_t k = r.confusion.num_classes();
  json per_class = json::array();
  json confusion = json::array();
  for (std::size_t c = 0; c < k; ++c) {
    const auto& m = r.per_class[c];
    per_class.push_back({{"class", class_name(class_names, c)},
                         {"precision", m.precision},
                         {"recall", m.recall},
                         {"f1", m.f1},
                         {"support", m.support},
                         {"precision_undefined", m.precision_undefined},
                         {"recall_undefined", m.recall_undefined}});
    json row = json::array();
    for (std::size_t p = 0; p < k; ++p) row.push_back(r.confusion.at(c, p));
    confusion.push_back(std::move(row));
  }
  return {{"accuracy", r.accuracy},
          {"macro", {{"precision", r.macro.precision}, {"recall", r.macro.recall}, {"f1", r.macro.f1}}},
          {"weighted", {{"precision", r.weighted.precision}, {"recall", r.weighted.recall}, {"f1", r.weighted.f1}}},
          {"per_class", std::move(per_class)},
          {"confusion", std::move(confusion)},
          {"zero_division", r.zero_division}};
}

void print_metrics_table(std::ostream& os, const MetricsReport& r, const std::vector<std::string>& class_names) {
  os << "Accuracy  " << fixed(r.accuracy) << "\n\n";
  os << std::left << std::setw(14) << "" << std::setw(11) << "Precision" << std::setw(11) << "Recall"
     << std::setw(11) << "F-score" << "Support\n";
  for (std::size_t c = 0; c < r.per_class.size(); ++c) {
    const auto& m = r.per_class[c];
    os << std::setw(14) << class_name(class_names, c) << std::setw(11) << fixed(m.precision) << std::setw(11)
       << fixed(m.recall) << std::setw(11) << fixed(m.f1) << m.support << '\n';
  }
  os << std::setw(14) << "macro" << std::setw(11) << fixed(r.macro.precision) << std::setw(11)
     << fixed(r.macro.recall) << std::setw(11) << fixed(r.macro.f1) << '\n';
  os << std::setw(14) << "weighted" << std::setw(11) << fixed(r.weighted.precision) << std::setw(11)
     << fixed(r.weighted.recall) << std::setw(11) << fixed(r.weighted.f1) << '\n';
  if (r.zero_division) os << "(some precision/recall values had empty denominators and are reported as 0)\n";
  os << "\nConfusion (rows true, columns predicted)\n";
  for (std::size_t t = 0; t < r.confusion.num_classes(); ++t) {
    os << std::setw(14) << class_name(class_names, t);
    for (std::size_t p = 0; p < r.confusion.num_classes(); ++p) os << std::setw(8) << r.confusion.at(t, p);
    os << '\n';
  }
  os << std::right;
}

void write_history_csv(const std::filesystem::path& path, const TrainHistory& history,
                       const std::vector<std::string>& comments) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "epoch,train_loss,train_acc,val_loss,val_acc\n";
  char buf[32];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& e : history.epochs) {
    out << e.epoch << ',' << num(e.train_loss) << ',' << num(e.train_accuracy) << ','
        << (e.val_loss ? num(*e.val_loss) : "") << ',' << (e.val_accuracy ? num(*e.val_accuracy) : "") << '\n';
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

json crossval_to_json(const CrossValResult& r) {
  json folds = json::array();
  for (std::size_t f = 0; f < r.folds.size(); ++f) {
    folds.push_back({{"fold", f + 1}, {"accuracy", r.folds[f].accuracy}, {"macro_f1", r.folds[f].macro.f1},
                     {"weighted_f1", r.folds[f].weighted.f1}});
  }
  return {{"folds", std::move(folds)},
          {"mean_accuracy", r.mean_accuracy},
          {"stdev_accuracy", r.stdev_accuracy},
          {"min_accuracy", r.min_accuracy},
          {"max_accuracy", r.max_accuracy},
          {"mean_macro_f1", r.mean_macro_f1}};
}

void print_crossval_table(std::ostream& os, const CrossValResult& r) {
  os << std::left << std::setw(8) << "Fold" << std::setw(11) << "Accuracy" << "Macro-F1\n";
  for (std::size_t f = 0; f < r.folds.size(); ++f) {
    os << std::setw(8) << f + 1 << std::setw(11) << fixed(r.folds[f].accuracy) << fixed(r.folds[f].macro.f1)
       << '\n';
  }
  os << std::setw(8) << "mean" << std::setw(11) << fixed(r.mean_accuracy) << fixed(r.mean_macro_f1) << "  (stdev "
     << fixed(r.stdev_accuracy) << ")\n"
     << std::right;
}

json sweep_to_json(const SweepResult& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json trials = json::array();
    for (const auto& t : row.trials) trials.push_back(crossval_to_json(t));
    rows.push_back({{"value", row.value}, {"mean_accuracy", row.mean_accuracy}, {"best", row.best},
                    {"trials", std::move(trials)}});
  }
  json ranking = json::array();
  for (std::size_t i : r.ranking()) ranking.push_back(r.rows[i].value);
  return {{"axis", std::string(to_string(r.axis))}, {"rows", std::move(rows)}, {"ranking", std::move(ranking)},
          {"best_value", r.rows.at(r.best_index).value}};
}

void print_sweep_table(std::ostream& os, const SweepResult& r) {
  os << std::left << std::setw(6) << "Rank" << std::setw(10) << std::string(to_string(r.axis));
  const std::size_t trials = r.rows.empty() ? 0 : r.rows.front().trials.size();
  for (std::size_t t = 0; t < trials; ++t) os << std::setw(10) << "trial " + std::to_string(t + 1);
  os << "Mean\n";
  std::size_t rank = 1;
  for (std::size_t i : r.ranking()) {
    const auto& row = r.rows[i];
    char value[32];
    std::snprintf(value, sizeof value, "%g", row.value);
    os << std::setw(6) << rank++ << std::setw(10) << value;
    for (const auto& t : row.trials) os << std::setw(10) << fixed(t.mean_accuracy);
    os << fixed(row.mean_accuracy) << (row.best ? " *" : "") << '\n';
  }
  os << std::right;
}

void print_topology_table(std::ostream& os, const SweepResult& r, const std::string& task) {
  os << std::left << std::setw(24) << "DNN network topology" << std::setw(16) << "Task" << "Accuracy\n";
  for (const auto& row : r.rows) {
    char name[32];
    std::snprintf(name, sizeof name, "DNN %g layer", row.value);
    os << std::setw(24) << name << std::setw(16) << task << fixed(row.mean_accuracy, 3) << '\n';
  }
  os << std::right;
}

void write_json(const std::filesystem::path& path, const json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace deepnet::cli
