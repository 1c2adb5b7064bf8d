#ifndef TSCNN_PIPELINE_HPP
#define TSCNN_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "tscnn/corpus.hpp"
#include "tscnn/eval.hpp"
#include "tscnn/fselect.hpp"
#include "tscnn/model.hpp"
#include "tscnn/preprocess.hpp"
#include "tscnn/termstats.hpp"

namespace tscnn {

// Resolved run configuration. Precedence: flag > config file > default.
struct RunConfig {
  std::string dataset = "bbc";  // "20ng" | "bbc"
  std::string root;
  std::string metric = "NDM";
  std::size_t k = 1000;
  std::string mode = "tscnn";  // "scnn" | "tscnn"
  std::uint64_t seed = 7;
  std::string pretrained;
  std::string out = "out";
  std::string stopwords;  // empty -> built-in list
  int threads = 1;

  std::size_t embed_dim = 300;
  std::size_t filters = 16;
  std::size_t dense_units = 128;
  std::size_t seq_len = 400;
  std::size_t batch_size = 50;
  std::size_t epochs = 20;
  double lr = 0.001;

  Mode mode_kind() const;
  MetricKind metric_kind() const;
  ModelConfig model_config(std::size_t vocab_size,
                           std::size_t num_classes) const;
  std::map<std::string, std::string> as_map() const;
};

// Flat `key = value` file, '#' comments. Unknown keys are errors.
void apply_config_file(RunConfig& config, const std::filesystem::path& path);
void apply_config_entry(RunConfig& config, const std::string& key,
                        const std::string& value);

// Corpus loaded, split, tokenized, with train-only term statistics.
struct PreparedData {
  LabeledCorpus corpus;
  DatasetSplit split;
  std::vector<std::vector<std::string>> tokens;  // aligned with documents
  std::vector<int> labels;                       // class indices
  std::map<std::string, std::size_t> doc_index;  // id -> position
  TermStatsTable stats;
};

PreparedData prepare_data(const RunConfig& config);

// Per-class NDM (or other metric) rankings over the training statistics.
std::vector<RankedTermList> rank_all_classes(const TermStatsTable& stats,
                                             MetricKind kind);

// TSCNN: union of per-class top-k. SCNN: the full training vocabulary.
Vocabulary vocabulary_for_mode(const PreparedData& data,
                               const RunConfig& config, Mode mode);

EncodedDataset encode_split(const PreparedData& data,
                            const std::vector<std::string>& ids,
                            const Vocabulary& vocab, std::size_t seq_len);

struct TrainedRun {
  Vocabulary vocab;
  double pretrained_coverage = -1.0;  // -1 when no pretrained file used
  TrainResult result;
  Metrics test_metrics;
  ConfusionMatrix test_confusion;
};

// Full train + test evaluation for one mode.
TrainedRun run_mode(const PreparedData& data, const RunConfig& config,
                    Mode mode);

}  // namespace tscnn

#endif
