#ifndef TSCNN_CORPUS_HPP
#define TSCNN_CORPUS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace tscnn {

enum class Partition { None, Train, Test };

struct RawDocument {
  std::string id;     // relative path from the dataset root, '/'-separated
  std::string label;  // class directory name
  std::string text;   // UTF-8, invalid sequences replaced with U+FFFD
  Partition partition = Partition::None;
};

struct LabeledCorpus {
  std::vector<std::string> classes;    // sorted, unique
  std::vector<RawDocument> documents;  // ordered by id

  int class_index(const std::string& label) const;
  std::size_t class_size(const std::string& label) const;
};

// 20NG layout: <root>/20news-bydate-train/<group>/<docid> and
// <root>/20news-bydate-test/<group>/<docid>. Falls back to treating <root>
// itself as containing the two partition directories named *train / *test.
LabeledCorpus load_20newsgroups(const std::filesystem::path& root);

// BBC layout: <root>/bbc/<category>/<nnn>.txt, or <root>/<category>/... when
// no bbc/ subdirectory exists.
LabeledCorpus load_bbc(const std::filesystem::path& root);

enum class SplitSpec {
  PredefinedCarveValidation,  // keep Train/Test partitions; 10% of train -> val
  Stratified603010,           // 60/10/30 random, stratified by class
};

struct DatasetSplit {
  std::vector<std::string> train;
  std::vector<std::string> validation;
  std::vector<std::string> test;
  std::uint64_t seed = 0;
};

// Deterministic given (corpus, spec, seed). Per-class rounding: validation and
// test buckets floored, remainder goes to train.
DatasetSplit split(const LabeledCorpus& corpus, SplitSpec spec,
                   std::uint64_t seed);

}  // namespace tscnn

#endif
