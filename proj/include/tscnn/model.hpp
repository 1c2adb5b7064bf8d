#ifndef TSCNN_MODEL_HPP
#define TSCNN_MODEL_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tscnn/fselect.hpp"
#include "tscnn/tensor.hpp"

namespace tscnn {

enum class Mode { SCNN, TSCNN };

constexpr std::size_t kChannels = 3;

struct ModelConfig {
  Mode mode = Mode::TSCNN;
  std::size_t vocab_size = 0;  // V; embedding tables have V+1 rows
  std::size_t embed_dim = 300;
  std::size_t filters = 16;
  std::array<std::size_t, 2> kernel_sizes{5, 3};
  std::size_t dense_units = 128;
  std::size_t num_classes = 0;
  std::size_t seq_len = 400;
  double lr = 0.001;
  std::size_t batch_size = 50;
  std::size_t epochs = 20;
  std::uint64_t seed = 7;
  std::string pretrained_path;  // empty -> channel 1 randomly initialized
  int threads = 1;

  double rmsprop_rho = 0.9;
  double rmsprop_eps = 1e-7;
  double l2_eps = 1e-12;
};

// Per channel: embedding [V+1, d], conv1 [k1, d, f] + bias, conv2 [k2, f, f]
// + bias; shared head: dense1 [3f, dense_units] + bias, dense2
// [dense_units, C] + bias.
struct ModelParams {
  std::array<Tensor, kChannels> embedding;
  std::array<Tensor, kChannels> conv1_kernel, conv1_bias;
  std::array<Tensor, kChannels> conv2_kernel, conv2_bias;
  Tensor dense1_weights, dense1_bias;
  Tensor dense2_weights, dense2_bias;

  std::vector<std::pair<std::string, Tensor*>> named();
  std::vector<std::pair<std::string, const Tensor*>> named() const;
  std::size_t parameter_count() const;
};

// Same shapes as ModelParams, used for gradients and optimizer state.
using ModelGrads = ModelParams;

// Glorot-uniform conv/dense weights, uniform(-0.05, 0.05) embeddings, padding
// row zero. Channel sub-seeds are derived from config.seed and differ by
// construction. When pretrained is given, it becomes channel 1's table.
ModelParams init_params(const ModelConfig& config,
                        const std::optional<Tensor>& pretrained = std::nullopt);
ModelGrads zero_like(const ModelParams& params);

// Word-vector text file: optional "count dim" header, then one word plus
// `dim` reals per line. Vocabulary words missing from the file get
// uniform(-0.05, 0.05) rows; row 0 stays zero. coverage_out reports the
// fraction of vocabulary words found.
Tensor load_pretrained_vectors(const std::filesystem::path& path,
                               const Vocabulary& vocab, std::size_t dim,
                               std::uint64_t seed, double* coverage_out);

// OOV tokens dropped, the rest mapped to indices, right-padded with 0 or
// truncated to seq_len.
std::vector<int> encode_document(const std::vector<std::string>& tokens,
                                 const Vocabulary& vocab, std::size_t seq_len);

struct EncodedDataset {
  std::vector<std::vector<int>> docs;
  std::vector<int> labels;
};

// Probabilities [C] for one encoded document.
Tensor forward_probs(const ModelParams& params, const ModelConfig& config,
                     const std::vector<int>& ids);

// Mean loss and summed gradients over a list of documents. Parallel over
// items; reduction order is fixed by item index, independent of thread count.
double loss_and_grads(const ModelParams& params, const ModelConfig& config,
                      const std::vector<const std::vector<int>*>& docs,
                      const std::vector<int>& labels, ModelGrads& grads);

struct EpochLog {
  std::size_t epoch;  // 1-based
  double train_loss;
  double val_loss;
  double val_acc;
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochLog> log;
};

// When a pretrained table is given it seeds channel 1's embeddings; channels
// 2 and 3 always start random.
TrainResult train(const ModelConfig& config, const EncodedDataset& train_set,
                  const EncodedDataset& val_set,
                  const std::optional<Tensor>& pretrained = std::nullopt);

// Argmax of forward probabilities; ties resolve to the lowest index.
std::vector<int> predict(const ModelParams& params, const ModelConfig& config,
                         const std::vector<std::vector<int>>& docs);

// CSV: epoch,train_loss,val_loss,val_acc.
void export_epoch_log(std::ostream& os, const std::vector<EpochLog>& log);

}  // namespace tscnn

#endif
