#ifndef TSCNN_PREPROCESS_HPP
#define TSCNN_PREPROCESS_HPP

#include <filesystem>
#include <string>
#include <unordered_set>
#include <vector>

namespace tscnn {

struct TokenSequence {
  std::string doc_id;
  std::vector<std::string> tokens;
};

struct StopwordList {
  std::unordered_set<std::string> words;
  bool contains(const std::string& w) const { return words.count(w) != 0; }
};

// Splits on any non-alphabetic character, lowercases, keeps purely alphabetic
// tokens of length >= 2.
std::vector<std::string> tokenize(const std::string& text);

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const StopwordList& stopwords);

// File format: one lowercase word per line, UTF-8, '#' comment lines ignored.
// Each entry is passed through tokenize() so the list is closed under the
// tokenizer's normalization.
StopwordList load_stopwords(const std::filesystem::path& path);

// Built-in copy of the shipped English list, for callers without the asset.
StopwordList default_stopwords();

}  // namespace tscnn

#endif
