#include "deepnet/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "deepnet/errors.hpp"
#include "deepnet/rng.hpp"

namespace deepnet {

void Dataset::validate() const {
  if (labels.empty()) throw DataError("dataset has no samples");
  if (features.rows() != labels.size()) {
    throw DataError("dataset has " + std::to_string(features.rows()) + " feature rows but " +
                    std::to_string(labels.size()) + " labels");
  }
  if (!feature_names.empty() && feature_names.size() != features.cols()) {
    throw DataError("dataset has " + std::to_string(feature_names.size()) + " feature names for " +
                    std::to_string(features.cols()) + " columns");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= num_classes()) {
      throw DataError("label " + std::to_string(labels[i]) + " at row " + std::to_string(i) +
                      " outside [0, " + std::to_string(num_classes()) + ")");
    }
  }
  if (!all_finite(features)) throw DataError("dataset features contain NaN or Inf");
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.features = gather_rows(features, indices);
  out.labels.reserve(indices.size());
  for (std::size_t i : indices) out.labels.push_back(labels[i]);
  out.class_names = class_names;
  out.feature_names = feature_names;
  return out;
}

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(num_classes(), 0);
  for (int l : labels) ++counts[static_cast<std::size_t>(l)];
  return counts;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool is_nan_token(std::string_view s) {
  if (s.empty()) return true;
  if (s.size() != 3) return false;
  auto lower = [](char c) { return static_cast<char>(c | 0x20); };
  return lower(s[0]) == 'n' && lower(s[1]) == 'a' && lower(s[2]) == 'n';
}

}  // namespace

Dataset parse_csv(std::string_view text, std::string_view label_column, std::string_view source) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = nl + 1;
    if (line.empty() || line.front() == '#') continue;
    lines.push_back(line);
  }
  const std::string src(source);
  if (lines.empty()) throw DataError(src + ": missing header row");

  const auto header = split_fields(lines.front());
  std::size_t label_idx = header.size();
  Dataset d;
  for (std::size_t j = 0; j < header.size(); ++j) {
    const auto name = trim(header[j]);
    if (name == label_column && label_idx == header.size()) {
      label_idx = j;
    } else {
      d.feature_names.emplace_back(name);
    }
  }
  if (label_idx == header.size()) {
    throw DataError(src + ": label column '" + std::string(label_column) + "' not found in header");
  }
  const std::size_t n = lines.size() - 1;
  if (n == 0) throw DataError(src + ": no data rows after the header");

  const std::size_t d_cols = header.size() - 1;
  std::vector<double> values;
  values.reserve(n * d_cols);
  std::vector<std::string> names;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split_fields(lines[i]);
    const std::string where = src + ": row " + std::to_string(i + 1);
    if (fields.size() != header.size()) {
      throw ParseError(where + " has " + std::to_string(fields.size()) + " fields, header has " +
                       std::to_string(header.size()));
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
      const auto cell = trim(fields[j]);
      if (j == label_idx) {
        auto it = std::find(names.begin(), names.end(), cell);
        if (it == names.end()) {
          names.emplace_back(cell);
          it = names.end() - 1;
        }
        d.labels.push_back(static_cast<int>(it - names.begin()));
        continue;
      }
      if (is_nan_token(cell)) {
        values.push_back(0.0);
        continue;
      }
      double v = 0.0;
      const char* first = cell.data();
      const char* last = first + cell.size();
      if (*first == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, last, v);
      const bool overflow = ec == std::errc::result_out_of_range && ptr == last;
      if ((ec != std::errc() && !overflow) || ptr != last) {
        throw ParseError(where + ", column '" + std::string(trim(header[j])) + "': cannot parse '" +
                         std::string(cell) + "' as a number");
      }
      if (overflow || !std::isfinite(v)) {
        throw DataError(where + ", column '" + std::string(trim(header[j])) + "': non-finite value '" +
                        std::string(cell) + "'");
      }
      values.push_back(v);
    }
  }
  d.features = Matrix(n, d_cols, std::move(values));
  d.class_names = std::move(names);
  d.validate();
  return d;
}

Dataset load_csv(const std::filesystem::path& path, std::string_view label_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), label_column, path.string());
}

void write_csv(const Dataset& data, const std::filesystem::path& path, std::string_view label_column,
               const std::vector<std::string>& comments) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  for (const auto& c : comments) out << "# " << c << '\n';
  const bool labelled = !data.labels.empty();
  for (std::size_t j = 0; j < data.num_features(); ++j) {
    if (j > 0) out << ',';
    out << (data.feature_names.empty() ? "f" + std::to_string(j) : data.feature_names[j]);
  }
  if (labelled) out << (data.num_features() > 0 ? "," : "") << label_column;
  out << '\n';
  char buf[32];
  for (std::size_t i = 0; i < data.features.rows(); ++i) {
    const auto row = data.features.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", row[j]);
      out << buf << (j + 1 < row.size() || labelled ? "," : "");
    }
    if (labelled) out << data.class_names[static_cast<std::size_t>(data.labels[i])];
    out << '\n';
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Dataset align_classes(Dataset data, const std::vector<std::string>& names) {
  std::vector<int> remap(data.class_names.size());
  for (std::size_t c = 0; c < data.class_names.size(); ++c) {
    const auto it = std::find(names.begin(), names.end(), data.class_names[c]);
    if (it == names.end()) throw DataError("class '" + data.class_names[c] + "' is unknown to the model");
    remap[c] = static_cast<int>(it - names.begin());
  }
  for (int& l : data.labels) l = remap[static_cast<std::size_t>(l)];
  data.class_names = names;
  return data;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split_indices(
    std::span<const int> labels, std::size_t num_classes, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ArgumentError("test fraction must be in (0, 1), got " + std::to_string(test_fraction));
  }
  std::vector<std::vector<std::size_t>> by_class(num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= num_classes) {
      throw DataError("label " + std::to_string(labels[i]) + " outside [0, " + std::to_string(num_classes) + ")");
    }
    by_class[static_cast<std::size_t>(labels[i])].push_back(i);
  }

  // Largest-remainder apportionment of the test rows.
  const auto target = static_cast<std::size_t>(std::llround(static_cast<double>(labels.size()) * test_fraction));
  std::vector<std::size_t> take(num_classes);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    const double exact = static_cast<double>(by_class[c].size()) * test_fraction;
    take[c] = static_cast<std::size_t>(std::floor(exact));
    assigned += take[c];
    remainders.emplace_back(exact - std::floor(exact), c);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < target && r < remainders.size(); ++r) {
    const std::size_t c = remainders[r].second;
    if (take[c] < by_class[c].size()) {
      ++take[c];
      ++assigned;
    }
  }

  Rng rng(seed);
  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> test_idx;
  for (std::size_t c = 0; c < num_classes; ++c) {
    const auto perm = shuffled_indices(rng, by_class[c].size());
    for (std::size_t p = 0; p < perm.size(); ++p) {
      (p < take[c] ? test_idx : train_idx).push_back(by_class[c][perm[p]]);
    }
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());
  return {std::move(train_idx), std::move(test_idx)};
}

std::pair<Dataset, Dataset> train_test_split(const Dataset& data, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ArgumentError("test fraction must be in (0, 1), got " + std::to_string(test_fraction));
  }
  data.validate();
  const auto [train_idx, test_idx] = stratified_split_indices(data.labels, data.num_classes(), test_fraction, seed);
  return {data.subset(train_idx), data.subset(test_idx)};
}

}  // namespace deepnet
