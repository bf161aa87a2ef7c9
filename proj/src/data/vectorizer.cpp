#include "deepnet/vectorizer.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "deepnet/errors.hpp"

namespace deepnet {

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  std::sort(tokens_.begin(), tokens_.end());
  tokens_.erase(std::unique(tokens_.begin(), tokens_.end()), tokens_.end());
  for (std::size_t i = 0; i < tokens_.size(); ++i) index_.emplace(tokens_[i], i);
}

std::optional<std::size_t> Vocabulary::column(std::string_view token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string_view> tokenize(std::string_view doc) {
  std::vector<std::string_view> out;
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f'; };
  std::size_t i = 0;
  while (i < doc.size()) {
    while (i < doc.size() && is_space(doc[i])) ++i;
    const std::size_t start = i;
    while (i < doc.size() && !is_space(doc[i])) ++i;
    if (i > start) out.push_back(doc.substr(start, i - start));
  }
  return out;
}

namespace {
void collect(std::span<const std::string> docs, std::set<std::string, std::less<>>& seen) {
  for (const auto& doc : docs) {
    for (auto tok : tokenize(doc)) {
      if (seen.find(tok) == seen.end()) seen.emplace(tok);
    }
  }
}
}  // namespace

Vocabulary fit_vocabulary(std::span<const std::string> train_docs, std::span<const std::string> test_docs) {
  std::set<std::string, std::less<>> seen;
  collect(train_docs, seen);
  collect(test_docs, seen);
  if (seen.empty()) throw DataError("cannot fit a vocabulary: the corpora contain no tokens");
  return Vocabulary(std::vector<std::string>(seen.begin(), seen.end()));
}

Vocabulary fit_vocabulary(std::span<const std::string> docs) { return fit_vocabulary(docs, {}); }

CountMatrix transform_counts(const Vocabulary& vocab, std::span<const std::string> docs) {
  CountMatrix out{Matrix(docs.size(), vocab.size()), 0};
  for (std::size_t i = 0; i < docs.size(); ++i) {
    for (auto tok : tokenize(docs[i])) {
      if (auto col = vocab.column(tok)) {
        out.counts(i, *col) += 1.0;
      } else {
        ++out.oov_tokens;
      }
    }
  }
  return out;
}

std::vector<std::string> read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus '" + path.string() + "'");
  std::vector<std::string> docs;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    docs.push_back(std::move(line));
  }
  return docs;
}

void write_lines(const std::filesystem::path& path, std::span<const std::string> lines) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  for (const auto& l : lines) out << l << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace deepnet
