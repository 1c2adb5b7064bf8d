#include "tscnn/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "tscnn/error.hpp"
#include "tscnn/layers.hpp"
#include "tscnn/rng.hpp"

namespace tscnn {

namespace {

void glorot_init(Tensor& t, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (double& v : t.data) v = rng.uniform(-limit, limit);
}

void embedding_init(Tensor& t, Rng& rng) {
  for (double& v : t.data) v = rng.uniform(-0.05, 0.05);
  for (std::size_t j = 0; j < t.dim(1); ++j) t.at(std::size_t{0}, j) = 0.0;
}

}  // namespace

std::vector<std::pair<std::string, Tensor*>> ModelParams::named() {
  std::vector<std::pair<std::string, Tensor*>> out;
  for (std::size_t ch = 0; ch < kChannels; ++ch) {
    const std::string p = "ch" + std::to_string(ch) + ".";
    out.emplace_back(p + "embedding", &embedding[ch]);
    out.emplace_back(p + "conv1.kernel", &conv1_kernel[ch]);
    out.emplace_back(p + "conv1.bias", &conv1_bias[ch]);
    out.emplace_back(p + "conv2.kernel", &conv2_kernel[ch]);
    out.emplace_back(p + "conv2.bias", &conv2_bias[ch]);
  }
  out.emplace_back("dense1.weights", &dense1_weights);
  out.emplace_back("dense1.bias", &dense1_bias);
  out.emplace_back("dense2.weights", &dense2_weights);
  out.emplace_back("dense2.bias", &dense2_bias);
  return out;
}

std::vector<std::pair<std::string, const Tensor*>> ModelParams::named() const {
  std::vector<std::pair<std::string, const Tensor*>> out;
  for (auto& [name, t] : const_cast<ModelParams*>(this)->named())
    out.emplace_back(name, t);
  return out;
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& [name, t] : named()) n += t->size();
  return n;
}

ModelParams init_params(const ModelConfig& config,
                        const std::optional<Tensor>& pretrained) {
  if (config.vocab_size == 0 || config.num_classes < 2)
    throw UsageError("model config needs vocab_size > 0 and num_classes >= 2");

  const std::size_t V1 = config.vocab_size + 1;
  const std::size_t d = config.embed_dim;
  const std::size_t f = config.filters;
  const std::size_t k1 = config.kernel_sizes[0];
  const std::size_t k2 = config.kernel_sizes[1];

  ModelParams p;
  for (std::size_t ch = 0; ch < kChannels; ++ch) {
    // Distinct sub-seed per channel so random channels differ.
    Rng rng(config.seed * 0x9E3779B97F4A7C15ULL + ch + 1);
    p.embedding[ch] = Tensor({V1, d});
    if (ch == 0 && pretrained) {
      if (pretrained->shape != p.embedding[ch].shape)
        throw DataError("pretrained table shape mismatch");
      p.embedding[ch] = *pretrained;
    } else {
      embedding_init(p.embedding[ch], rng);
    }
    p.conv1_kernel[ch] = Tensor({k1, d, f});
    glorot_init(p.conv1_kernel[ch], k1 * d, k1 * f, rng);
    p.conv1_bias[ch] = Tensor({f});
    p.conv2_kernel[ch] = Tensor({k2, f, f});
    glorot_init(p.conv2_kernel[ch], k2 * f, k2 * f, rng);
    p.conv2_bias[ch] = Tensor({f});
  }
  Rng rng(config.seed * 0x9E3779B97F4A7C15ULL + kChannels + 1);
  p.dense1_weights = Tensor({kChannels * f, config.dense_units});
  glorot_init(p.dense1_weights, kChannels * f, config.dense_units, rng);
  p.dense1_bias = Tensor({config.dense_units});
  p.dense2_weights = Tensor({config.dense_units, config.num_classes});
  glorot_init(p.dense2_weights, config.dense_units, config.num_classes, rng);
  p.dense2_bias = Tensor({config.num_classes});
  return p;
}

ModelGrads zero_like(const ModelParams& params) {
  ModelGrads g;
  for (std::size_t ch = 0; ch < kChannels; ++ch) {
    g.embedding[ch] = Tensor(params.embedding[ch].shape);
    g.conv1_kernel[ch] = Tensor(params.conv1_kernel[ch].shape);
    g.conv1_bias[ch] = Tensor(params.conv1_bias[ch].shape);
    g.conv2_kernel[ch] = Tensor(params.conv2_kernel[ch].shape);
    g.conv2_bias[ch] = Tensor(params.conv2_bias[ch].shape);
  }
  g.dense1_weights = Tensor(params.dense1_weights.shape);
  g.dense1_bias = Tensor(params.dense1_bias.shape);
  g.dense2_weights = Tensor(params.dense2_weights.shape);
  g.dense2_bias = Tensor(params.dense2_bias.shape);
  return g;
}

Tensor load_pretrained_vectors(const std::filesystem::path& path,
                               const Vocabulary& vocab, std::size_t dim,
                               std::uint64_t seed, double* coverage_out) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open word-vector file: " + path.string());

  Tensor table({vocab.size() + 1, dim});
  Rng rng(seed);
  embedding_init(table, rng);

  std::size_t found = 0;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    std::vector<double> values;
    double v;
    while (ss >> v) values.push_back(v);
    std::string trailing;
    if (ss.fail() && !ss.eof() && (ss.clear(), ss >> trailing))
      throw DataError("unparseable value at line " + std::to_string(line_no) +
                      " of " + path.string());
    if (first) {
      first = false;
      // Optional header: "count dim" (word parses as an integer).
      if (values.size() == 1 &&
          word.find_first_not_of("0123456789") == std::string::npos) {
        if (static_cast<std::size_t>(values[0]) != dim)
          throw DataError("word-vector dimension " +
                          std::to_string(static_cast<std::size_t>(values[0])) +
                          " != expected " + std::to_string(dim));
        continue;
      }
    }
    if (values.size() != dim)
      throw DataError("wrong arity (" + std::to_string(values.size()) +
                      " values, expected " + std::to_string(dim) +
                      ") at line " + std::to_string(line_no) + " of " +
                      path.string());
    const int idx = vocab.lookup(word);
    if (idx == 0) continue;
    ++found;
    for (std::size_t j = 0; j < dim; ++j)
      table.at(static_cast<std::size_t>(idx), j) = values[j];
  }
  if (coverage_out)
    *coverage_out = vocab.size() == 0
                        ? 0.0
                        : static_cast<double>(found) / static_cast<double>(vocab.size());
  return table;
}

std::vector<int> encode_document(const std::vector<std::string>& tokens,
                                 const Vocabulary& vocab, std::size_t seq_len) {
  std::vector<int> ids;
  ids.reserve(seq_len);
  for (const auto& tok : tokens) {
    if (ids.size() == seq_len) break;
    const int idx = vocab.lookup(tok);
    if (idx != 0) ids.push_back(idx);
  }
  ids.resize(seq_len, 0);
  return ids;
}

namespace {

struct ChannelCache {
  Tensor emb;     // [L, d]
  Tensor h1;      // tanh(conv1) [L+k1-1, f]
  Tensor h2;      // tanh(conv2) [L+k1+k2-2, f]
  std::vector<std::size_t> argmax;
  Tensor pooled;  // [f]
};

struct ForwardCache {
  std::array<ChannelCache, kChannels> channel;
  Tensor concat48;   // [3f]
  Tensor normalized; // [3f]
  Tensor d1_pre;     // [dense_units]
  Tensor d1;         // relu(d1_pre)
  Tensor logits;     // [C]
};

Tensor forward_doc(const ModelParams& p, const ModelConfig& cfg,
                   const std::vector<int>& ids, ForwardCache& cache) {
  std::vector<Tensor> pooled;
  for (std::size_t ch = 0; ch < kChannels; ++ch) {
    ChannelCache& cc = cache.channel[ch];
    cc.emb = nn::embedding_forward(ids, p.embedding[ch]);
    cc.h1 = nn::tanh_forward(
        nn::wide_conv1d(cc.emb, p.conv1_kernel[ch], p.conv1_bias[ch]));
    cc.h2 = nn::tanh_forward(
        nn::wide_conv1d(cc.h1, p.conv2_kernel[ch], p.conv2_bias[ch]));
    cc.pooled = nn::global_max_pool(cc.h2, cc.argmax);
    pooled.push_back(cc.pooled);
  }
  cache.concat48 = nn::concat(pooled);
  cache.normalized = nn::l2_normalize(cache.concat48, cfg.l2_eps);
  cache.d1_pre = nn::dense(cache.normalized, p.dense1_weights, p.dense1_bias);
  cache.d1 = nn::relu_forward(cache.d1_pre);
  cache.logits = nn::dense(cache.d1, p.dense2_weights, p.dense2_bias);
  return cache.logits;
}

// Per-item gradient; embedding gradients stay in [L, d] form and are
// scatter-added during the ordered reduction.
struct ItemGrad {
  double loss = 0.0;
  std::array<Tensor, kChannels> emb_rows;
  std::array<Tensor, kChannels> conv1_kernel, conv1_bias;
  std::array<Tensor, kChannels> conv2_kernel, conv2_bias;
  Tensor dense1_weights, dense1_bias, dense2_weights, dense2_bias;
};

ItemGrad backward_doc(const ModelParams& p, const ModelConfig& cfg,
                      const std::vector<int>& ids, int gold) {
  ForwardCache cache;
  forward_doc(p, cfg, ids, cache);
  const nn::SoftmaxLoss sm = nn::softmax_cross_entropy(cache.logits, gold);

  ItemGrad g;
  g.loss = sm.loss;
  for (std::size_t ch = 0; ch < kChannels; ++ch) {
    g.conv1_kernel[ch] = Tensor(p.conv1_kernel[ch].shape);
    g.conv1_bias[ch] = Tensor(p.conv1_bias[ch].shape);
    g.conv2_kernel[ch] = Tensor(p.conv2_kernel[ch].shape);
    g.conv2_bias[ch] = Tensor(p.conv2_bias[ch].shape);
  }
  g.dense1_weights = Tensor(p.dense1_weights.shape);
  g.dense1_bias = Tensor(p.dense1_bias.shape);
  g.dense2_weights = Tensor(p.dense2_weights.shape);
  g.dense2_bias = Tensor(p.dense2_bias.shape);

  Tensor g_d1({cfg.dense_units});
  nn::dense_backward(cache.d1, p.dense2_weights, sm.grad, g_d1,
                     g.dense2_weights, g.dense2_bias);
  const Tensor g_d1pre = nn::relu_backward(cache.d1_pre, g_d1);
  Tensor g_norm({cache.normalized.size()});
  nn::dense_backward(cache.normalized, p.dense1_weights, g_d1pre, g_norm,
                     g.dense1_weights, g.dense1_bias);
  const Tensor g_concat =
      nn::l2_normalize_backward(cache.concat48, g_norm, cfg.l2_eps);

  const std::vector<std::size_t> sizes(kChannels, cfg.filters);
  const std::vector<Tensor> g_pooled = nn::concat_backward(g_concat, sizes);

  for (std::size_t ch = 0; ch < kChannels; ++ch) {
    const ChannelCache& cc = cache.channel[ch];
    const Tensor g_h2 = nn::global_max_pool_backward(g_pooled[ch], cc.argmax,
                                                     cc.h2.dim(0));
    const Tensor g_c2 = nn::tanh_backward(cc.h2, g_h2);
    Tensor g_h1(cc.h1.shape);
    nn::wide_conv1d_backward(cc.h1, p.conv2_kernel[ch], g_c2, g_h1,
                             g.conv2_kernel[ch], g.conv2_bias[ch]);
    const Tensor g_c1 = nn::tanh_backward(cc.h1, g_h1);
    g.emb_rows[ch] = Tensor(cc.emb.shape);
    nn::wide_conv1d_backward(cc.emb, p.conv1_kernel[ch], g_c1, g.emb_rows[ch],
                             g.conv1_kernel[ch], g.conv1_bias[ch]);
  }
  return g;
}

// Static chunking over [0, n) for `threads` workers.
void parallel_for_items(std::size_t n, int threads,
                        const std::function<void(std::size_t)>& fn) {
  const int t = std::max(1, threads);
  if (t == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  const std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(t), n);
  for (std::size_t w = 0; w < nt; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += nt) fn(i);
    });
  }
  for (auto& th : workers) th.join();
}

}  // namespace

Tensor forward_probs(const ModelParams& params, const ModelConfig& config,
                     const std::vector<int>& ids) {
  ForwardCache cache;
  const Tensor logits = forward_doc(params, config, ids, cache);
  // Softmax without a loss target: reuse the stabilized path with gold 0.
  return nn::softmax_cross_entropy(logits, 0).probs;
}

double loss_and_grads(const ModelParams& params, const ModelConfig& config,
                      const std::vector<const std::vector<int>*>& docs,
                      const std::vector<int>& labels, ModelGrads& grads) {
  const std::size_t n = docs.size();
  if (n == 0) throw UsageError("empty batch");
  std::vector<ItemGrad> items(n);
  parallel_for_items(n, config.threads, [&](std::size_t i) {
    items[i] = backward_doc(params, config, *docs[i], labels[i]);
  });

  // Ordered reduction: results are independent of thread count.
  double loss_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ItemGrad& g = items[i];
    loss_sum += g.loss;
    for (std::size_t ch = 0; ch < kChannels; ++ch) {
      nn::embedding_backward(*docs[i], g.emb_rows[ch], grads.embedding[ch]);
      grads.conv1_kernel[ch].add_scaled(g.conv1_kernel[ch]);
      grads.conv1_bias[ch].add_scaled(g.conv1_bias[ch]);
      grads.conv2_kernel[ch].add_scaled(g.conv2_kernel[ch]);
      grads.conv2_bias[ch].add_scaled(g.conv2_bias[ch]);
    }
    grads.dense1_weights.add_scaled(g.dense1_weights);
    grads.dense1_bias.add_scaled(g.dense1_bias);
    grads.dense2_weights.add_scaled(g.dense2_weights);
    grads.dense2_bias.add_scaled(g.dense2_bias);
  }
  return loss_sum / static_cast<double>(n);
}

TrainResult train(const ModelConfig& config, const EncodedDataset& train_set,
                  const EncodedDataset& val_set,
                  const std::optional<Tensor>& pretrained) {
  if (train_set.docs.empty() || val_set.docs.empty())
    throw DataError("empty training or validation split");

  TrainResult result{init_params(config, pretrained), {}};
  ModelParams& params = result.params;
  ModelGrads rms_state = zero_like(params);

  std::vector<std::size_t> order(train_set.docs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    Rng shuffle_rng(config.seed + 0x5DEECE66DULL * epoch);
    shuffle_rng.shuffle(order);

    double loss_sum = 0.0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < order.size();
         start += config.batch_size) {
      const std::size_t end =
          std::min(order.size(), start + config.batch_size);
      std::vector<const std::vector<int>*> docs;
      std::vector<int> labels;
      for (std::size_t i = start; i < end; ++i) {
        docs.push_back(&train_set.docs[order[i]]);
        labels.push_back(train_set.labels[order[i]]);
      }
      ModelGrads grads = zero_like(params);
      const double batch_loss =
          loss_and_grads(params, config, docs, labels, grads);
      if (!std::isfinite(batch_loss))
        throw NumericError("non-finite training loss at epoch " +
                           std::to_string(epoch));
      loss_sum += batch_loss * static_cast<double>(docs.size());
      seen += docs.size();

      // Mean gradient over the batch, then dense RMSprop over all tensors.
      const double inv = 1.0 / static_cast<double>(docs.size());
      auto named_params = params.named();
      auto named_grads = grads.named();
      auto named_state = rms_state.named();
      for (std::size_t t = 0; t < named_params.size(); ++t) {
        Tensor& g = *named_grads[t].second;
        for (double& v : g.data) v *= inv;
        nn::rmsprop_update(*named_params[t].second, g, *named_state[t].second,
                           config.lr, config.rmsprop_rho, config.rmsprop_eps);
      }
      // Padding row must never move.
      for (std::size_t ch = 0; ch < kChannels; ++ch)
        for (std::size_t j = 0; j < config.embed_dim; ++j)
          params.embedding[ch].at(std::size_t{0}, j) = 0.0;
    }

    // Validation pass.
    const std::size_t n_val = val_set.docs.size();
    std::vector<double> val_losses(n_val);
    std::vector<char> val_correct(n_val);
    parallel_for_items(n_val, config.threads, [&](std::size_t i) {
      ForwardCache cache;
      const Tensor logits = forward_doc(params, config, val_set.docs[i], cache);
      const nn::SoftmaxLoss sm =
          nn::softmax_cross_entropy(logits, val_set.labels[i]);
      val_losses[i] = sm.loss;
      const auto it = std::max_element(sm.probs.data.begin(), sm.probs.data.end());
      val_correct[i] =
          (it - sm.probs.data.begin()) == val_set.labels[i] ? 1 : 0;
    });
    double val_loss = 0.0;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n_val; ++i) {
      val_loss += val_losses[i];
      correct += val_correct[i];
    }
    val_loss /= static_cast<double>(n_val);
    if (!std::isfinite(val_loss))
      throw NumericError("non-finite validation loss at epoch " +
                         std::to_string(epoch));

    result.log.push_back({epoch, loss_sum / static_cast<double>(seen), val_loss,
                          static_cast<double>(correct) /
                              static_cast<double>(n_val)});
  }
  return result;
}

std::vector<int> predict(const ModelParams& params, const ModelConfig& config,
                         const std::vector<std::vector<int>>& docs) {
  std::vector<int> out(docs.size());
  parallel_for_items(docs.size(), config.threads, [&](std::size_t i) {
    const Tensor probs = forward_probs(params, config, docs[i]);
    const auto it = std::max_element(probs.data.begin(), probs.data.end());
    out[i] = static_cast<int>(it - probs.data.begin());
  });
  return out;
}

void export_epoch_log(std::ostream& os, const std::vector<EpochLog>& log) {
  os << "epoch,train_loss,val_loss,val_acc\n";
  os.precision(17);
  for (const auto& e : log)
    os << e.epoch << ',' << e.train_loss << ',' << e.val_loss << ','
       << e.val_acc << '\n';
}

}  // namespace tscnn
