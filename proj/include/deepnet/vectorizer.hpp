#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "deepnet/matrix.hpp"

namespace deepnet {

// Sorted token -> column map; columns are dense 0..V-1 in lexicographic order.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> tokens);

  std::size_t size() const noexcept { return tokens_.size(); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  std::optional<std::size_t> column(std::string_view token) const;

 private:
  std::vector<std::string> tokens_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

std::vector<std::string_view> tokenize(std::string_view doc);

// Vocabulary over the union of both corpora, mirroring a fit on train and test
// together. Throws DataError when no tokens exist.
Vocabulary fit_vocabulary(std::span<const std::string> train_docs, std::span<const std::string> test_docs);
// Train-only fit.
Vocabulary fit_vocabulary(std::span<const std::string> docs);

struct CountMatrix {
  Matrix counts;               // documents x vocabulary
  std::size_t oov_tokens = 0;  // tokens skipped because they are not in the vocabulary
};

CountMatrix transform_counts(const Vocabulary& vocab, std::span<const std::string> docs);

// One document per line.
std::vector<std::string> read_corpus(const std::filesystem::path& path);
void write_lines(const std::filesystem::path& path, std::span<const std::string> lines);

}  // namespace deepnet
