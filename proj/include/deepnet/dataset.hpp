#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "deepnet/matrix.hpp"

namespace deepnet {

struct Dataset {
  Matrix features;                       // n x d
  std::vector<int> labels;               // class ids in [0, num_classes)
  std::vector<std::string> class_names;  // id -> name
  std::vector<std::string> feature_names;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t num_features() const noexcept { return features.cols(); }
  std::size_t num_classes() const noexcept { return class_names.size(); }

  // Checks n >= 1, matching lengths, label range and finite features.
  void validate() const;
  // Rows in `indices` order; metadata is shared.
  Dataset subset(std::span<const std::size_t> indices) const;
  std::vector<std::size_t> class_counts() const;
};

// Comma separated, header row first, '.' decimals, no quoting. Empty cells and
// any case of "nan" become 0. Class names are assigned ids in order of first
// appearance in `label_column`.
Dataset load_csv(const std::filesystem::path& path, std::string_view label_column);
Dataset parse_csv(std::string_view text, std::string_view label_column, std::string_view source = "<memory>");

// Writes features with %.17g and the class name in a trailing `label_column`;
// a dataset without labels is written as features only.
// Lines starting with '#' in `comments` are emitted before the header.
void write_csv(const Dataset& data, const std::filesystem::path& path, std::string_view label_column = "label",
               const std::vector<std::string>& comments = {});

// Relabels `data` so its ids follow `names`. Throws DataError when the data
// holds a class that `names` lacks.
Dataset align_classes(Dataset data, const std::vector<std::string>& names);

// Stratified test/train index split shared by train_test_split and corpus
// splitting. Returns (train, test), each ascending.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split_indices(
    std::span<const int> labels, std::size_t num_classes, double test_fraction, std::uint64_t seed);

// Stratified split; the test side gets round(n * test_fraction) rows shared
// among classes by largest remainder. Throws ArgumentError unless 0 < fraction < 1.
std::pair<Dataset, Dataset> train_test_split(const Dataset& data, double test_fraction, std::uint64_t seed);

}  // namespace deepnet
