#include "tscnn/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "tscnn/error.hpp"

namespace tscnn {

Mode RunConfig::mode_kind() const {
  if (mode == "scnn" || mode == "SCNN") return Mode::SCNN;
  if (mode == "tscnn" || mode == "TSCNN") return Mode::TSCNN;
  throw UsageError("unknown mode: " + mode + " (expected scnn or tscnn)");
}

MetricKind RunConfig::metric_kind() const { return metric_from_name(metric); }

ModelConfig RunConfig::model_config(std::size_t vocab_size,
                                    std::size_t num_classes) const {
  ModelConfig mc;
  mc.mode = mode_kind();
  mc.vocab_size = vocab_size;
  mc.num_classes = num_classes;
  mc.embed_dim = embed_dim;
  mc.filters = filters;
  mc.dense_units = dense_units;
  mc.seq_len = seq_len;
  mc.lr = lr;
  mc.batch_size = batch_size;
  mc.epochs = epochs;
  mc.seed = seed;
  mc.pretrained_path = pretrained;
  mc.threads = threads;
  return mc;
}

std::map<std::string, std::string> RunConfig::as_map() const {
  std::ostringstream lr_s;
  lr_s.precision(17);
  lr_s << lr;
  return {{"dataset", dataset},
          {"root", root},
          {"metric", metric},
          {"k", std::to_string(k)},
          {"mode", mode},
          {"seed", std::to_string(seed)},
          {"pretrained", pretrained},
          {"out", out},
          {"stopwords", stopwords},
          {"threads", std::to_string(threads)},
          {"embed_dim", std::to_string(embed_dim)},
          {"filters", std::to_string(filters)},
          {"dense_units", std::to_string(dense_units)},
          {"seq_len", std::to_string(seq_len)},
          {"batch_size", std::to_string(batch_size)},
          {"epochs", std::to_string(epochs)},
          {"lr", lr_s.str()}};
}

void apply_config_entry(RunConfig& c, const std::string& key,
                        const std::string& value) {
  try {
    if (key == "dataset") c.dataset = value;
    else if (key == "root") c.root = value;
    else if (key == "metric") c.metric = value;
    else if (key == "k") c.k = std::stoull(value);
    else if (key == "mode") c.mode = value;
    else if (key == "seed") c.seed = std::stoull(value);
    else if (key == "pretrained") c.pretrained = value;
    else if (key == "out") c.out = value;
    else if (key == "stopwords") c.stopwords = value;
    else if (key == "threads") c.threads = std::stoi(value);
    else if (key == "embed_dim") c.embed_dim = std::stoull(value);
    else if (key == "filters") c.filters = std::stoull(value);
    else if (key == "dense_units") c.dense_units = std::stoull(value);
    else if (key == "seq_len") c.seq_len = std::stoull(value);
    else if (key == "batch_size") c.batch_size = std::stoull(value);
    else if (key == "epochs") c.epochs = std::stoull(value);
    else if (key == "lr") c.lr = std::stod(value);
    else throw UsageError("unknown config key: " + key);
  } catch (const std::invalid_argument&) {
    throw UsageError("bad value for config key " + key + ": " + value);
  } catch (const std::out_of_range&) {
    throw UsageError("bad value for config key " + key + ": " + value);
  }
}

void apply_config_file(RunConfig& config, const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open config file: " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw UsageError("malformed config line " + std::to_string(line_no) +
                         " in " + path.string());
      continue;
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    apply_config_entry(config, trim(line.substr(0, eq)),
                       trim(line.substr(eq + 1)));
  }
}

PreparedData prepare_data(const RunConfig& config) {
  if (config.root.empty()) throw UsageError("dataset root not set");

  PreparedData data;
  SplitSpec spec;
  if (config.dataset == "20ng") {
    data.corpus = load_20newsgroups(config.root);
    spec = SplitSpec::PredefinedCarveValidation;
  } else if (config.dataset == "bbc") {
    data.corpus = load_bbc(config.root);
    spec = SplitSpec::Stratified603010;
  } else {
    throw UsageError("unknown dataset: " + config.dataset +
                     " (expected 20ng or bbc)");
  }
  data.split = split(data.corpus, spec, config.seed);

  const StopwordList stopwords = config.stopwords.empty()
                                     ? default_stopwords()
                                     : load_stopwords(config.stopwords);
  data.tokens.reserve(data.corpus.documents.size());
  data.labels.reserve(data.corpus.documents.size());
  for (std::size_t i = 0; i < data.corpus.documents.size(); ++i) {
    const auto& doc = data.corpus.documents[i];
    data.tokens.push_back(remove_stopwords(tokenize(doc.text), stopwords));
    data.labels.push_back(data.corpus.class_index(doc.label));
    data.doc_index[doc.id] = i;
  }

  std::vector<TokenSequence> train_docs;
  std::vector<int> train_labels;
  for (const auto& id : data.split.train) {
    const std::size_t i = data.doc_index.at(id);
    train_docs.push_back({id, data.tokens[i]});
    train_labels.push_back(data.labels[i]);
  }
  data.stats = TermStatsTable::compute(train_docs, train_labels,
                                       data.corpus.classes);
  return data;
}

std::vector<RankedTermList> rank_all_classes(const TermStatsTable& stats,
                                             MetricKind kind) {
  std::vector<RankedTermList> out;
  for (std::size_t c = 0; c < stats.num_classes(); ++c)
    out.push_back(rank_terms(stats, kind, static_cast<int>(c)));
  return out;
}

Vocabulary vocabulary_for_mode(const PreparedData& data,
                               const RunConfig& config, Mode mode) {
  if (mode == Mode::SCNN) return full_vocabulary(data.stats);
  Vocabulary vocab = build_vocabulary(
      rank_all_classes(data.stats, config.metric_kind()), config.k);
  vocab.metric = metric_name(config.metric_kind());
  return vocab;
}

EncodedDataset encode_split(const PreparedData& data,
                            const std::vector<std::string>& ids,
                            const Vocabulary& vocab, std::size_t seq_len) {
  EncodedDataset set;
  for (const auto& id : ids) {
    const std::size_t i = data.doc_index.at(id);
    set.docs.push_back(encode_document(data.tokens[i], vocab, seq_len));
    set.labels.push_back(data.labels[i]);
  }
  return set;
}

TrainedRun run_mode(const PreparedData& data, const RunConfig& config,
                    Mode mode) {
  TrainedRun run;
  run.vocab = vocabulary_for_mode(data, config, mode);

  ModelConfig mc = config.model_config(run.vocab.size(),
                                       data.corpus.classes.size());
  mc.mode = mode;

  std::optional<Tensor> pretrained;
  if (!config.pretrained.empty()) {
    double coverage = 0.0;
    pretrained = load_pretrained_vectors(config.pretrained, run.vocab,
                                         mc.embed_dim, mc.seed, &coverage);
    run.pretrained_coverage = coverage;
  }

  const EncodedDataset train_set =
      encode_split(data, data.split.train, run.vocab, mc.seq_len);
  const EncodedDataset val_set =
      encode_split(data, data.split.validation, run.vocab, mc.seq_len);
  const EncodedDataset test_set =
      encode_split(data, data.split.test, run.vocab, mc.seq_len);

  run.result = train(mc, train_set, val_set, pretrained);
  const std::vector<int> pred = predict(run.result.params, mc, test_set.docs);
  run.test_confusion = confusion(test_set.labels, pred, data.corpus.classes);
  run.test_metrics = metrics(run.test_confusion);
  return run;
}

}  // namespace tscnn
