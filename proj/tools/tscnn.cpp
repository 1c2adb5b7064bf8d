// Command-line driver for the two-stage text classification pipeline.
//
// Subcommands: rank, build-vocab, train, evaluate, compare, stats.
// Config precedence: flag > config file > built-in default.
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tscnn/checkpoint.hpp"
#include "tscnn/error.hpp"
#include "tscnn/pipeline.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace tscnn;

namespace {

struct FlagValues {
  std::string config_file;
  std::string dataset, root, metric, mode, pretrained, out;
  std::uint64_t k = 0, seed = 0, epochs = 0;
  int threads = 0;

  CLI::Option* o_dataset = nullptr;
  CLI::Option* o_root = nullptr;
  CLI::Option* o_metric = nullptr;
  CLI::Option* o_k = nullptr;
  CLI::Option* o_mode = nullptr;
  CLI::Option* o_seed = nullptr;
  CLI::Option* o_epochs = nullptr;
  CLI::Option* o_pretrained = nullptr;
  CLI::Option* o_out = nullptr;
  CLI::Option* o_threads = nullptr;
};

void add_common_flags(CLI::App* cmd, FlagValues& f) {
  cmd->add_option("--config", f.config_file, "flat key = value config file");
  f.o_dataset = cmd->add_option("--dataset", f.dataset, "20ng or bbc");
  f.o_root = cmd->add_option("--root", f.root, "dataset root directory");
  f.o_metric = cmd->add_option("--metric", f.metric,
                               "NDM ACC ACC2 IG CHI OR DFS GINI DF");
  f.o_k = cmd->add_option("--k", f.k, "top-k terms per class");
  f.o_mode = cmd->add_option("--mode", f.mode, "scnn or tscnn");
  f.o_seed = cmd->add_option("--seed", f.seed, "RNG seed");
  f.o_epochs = cmd->add_option("--epochs", f.epochs, "training epochs");
  f.o_pretrained = cmd->add_option("--pretrained", f.pretrained,
                                   "word-vector text file");
  f.o_out = cmd->add_option("--out", f.out, "output directory");
  f.o_threads = cmd->add_option("--threads", f.threads, "worker thread cap");
}

RunConfig resolve_config(const FlagValues& f) {
  RunConfig c;
  if (!f.config_file.empty()) apply_config_file(c, f.config_file);
  if (f.o_dataset->count()) c.dataset = f.dataset;
  if (f.o_root->count()) c.root = f.root;
  if (f.o_metric->count()) c.metric = f.metric;
  if (f.o_k->count()) c.k = f.k;
  if (f.o_mode->count()) c.mode = f.mode;
  if (f.o_seed->count()) c.seed = f.seed;
  if (f.o_epochs->count()) c.epochs = f.epochs;
  if (f.o_pretrained->count()) c.pretrained = f.pretrained;
  if (f.o_out->count()) c.out = f.out;
  if (f.o_threads->count()) c.threads = f.threads;
  if (c.threads < 1) throw UsageError("--threads must be >= 1");
  if (c.k < 1) throw UsageError("--k must be >= 1");
  return c;
}

fs::path ensure_out_dir(const RunConfig& c) {
  fs::path dir(c.out);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::trunc);
  if (!f) throw DataError("cannot write: " + p.string());
  f << content;
}

json config_json(const RunConfig& c) {
  json j;
  for (const auto& [k, v] : c.as_map()) j[k] = v;
  return j;
}

json metrics_json(const Metrics& m, const std::vector<std::string>& classes) {
  json j;
  j["accuracy"] = m.accuracy;
  j["macro_f1"] = m.macro_f1;
  j["per_class"] = json::array();
  for (std::size_t i = 0; i < m.per_class.size(); ++i) {
    const auto& pc = m.per_class[i];
    j["per_class"].push_back({{"class", classes[i]},
                              {"precision", pc.precision},
                              {"recall", pc.recall},
                              {"f1", pc.f1},
                              {"degenerate", pc.degenerate}});
  }
  return j;
}

int cmd_stats(const RunConfig& c) {
  const PreparedData data = prepare_data(c);
  const fs::path dir = ensure_out_dir(c);
  std::ofstream f(dir / "termstats.csv", std::ios::trunc);
  data.stats.dump_csv(f);
  std::cout << "documents: " << data.corpus.documents.size()
            << "\nclasses: " << data.corpus.classes.size()
            << "\ntrain/val/test: " << data.split.train.size() << "/"
            << data.split.validation.size() << "/" << data.split.test.size()
            << "\nterms (train): " << data.stats.num_terms() << "\nwrote "
            << (dir / "termstats.csv").string() << std::endl;
  return 0;
}

int cmd_rank(const RunConfig& c, bool vocab_only) {
  const PreparedData data = prepare_data(c);
  const MetricKind kind = c.metric_kind();
  const std::vector<RankedTermList> ranked = rank_all_classes(data.stats, kind);
  const fs::path dir = ensure_out_dir(c);

  if (!vocab_only) {
    for (std::size_t ci = 0; ci < ranked.size(); ++ci) {
      std::ofstream f(dir / ("rank_" + ranked[ci].class_name + ".csv"),
                      std::ios::trunc);
      export_ranking_csv(f, ranked[ci], data.stats, static_cast<int>(ci));
    }
  }
  Vocabulary vocab = build_vocabulary(ranked, c.k);
  vocab.metric = metric_name(kind);
  std::ofstream vf(dir / "vocabulary.txt", std::ios::trunc);
  export_vocabulary(vf, vocab, c.seed);
  std::cout << "vocabulary size: " << vocab.size() << std::endl;
  return 0;
}

// Removes partial artifacts when training fails partway.
struct ArtifactGuard {
  std::vector<fs::path> paths;
  bool committed = false;
  ~ArtifactGuard() {
    if (committed) return;
    for (const auto& p : paths) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }
};

int cmd_train(const RunConfig& c) {
  const PreparedData data = prepare_data(c);
  const fs::path dir = ensure_out_dir(c);

  ArtifactGuard guard;
  const fs::path ckpt_path = dir / "model.ckpt";
  const fs::path epochs_path = dir / "epochs.csv";
  const fs::path vocab_path = dir / "vocabulary.txt";
  const fs::path report_path = dir / "report.json";
  guard.paths = {ckpt_path, epochs_path, vocab_path, report_path};

  const TrainedRun run = run_mode(data, c, c.mode_kind());

  save_checkpoint(ckpt_path, run.result.params.named());
  {
    std::ofstream f(epochs_path, std::ios::trunc);
    export_epoch_log(f, run.result.log);
  }
  {
    std::ofstream f(vocab_path, std::ios::trunc);
    export_vocabulary(f, run.vocab, c.seed);
  }

  json report;
  report["config"] = config_json(c);
  report["vocabulary_size"] = run.vocab.size();
  if (run.pretrained_coverage >= 0.0)
    report["pretrained_coverage"] = run.pretrained_coverage;
  report["epochs"] = json::array();
  for (const auto& e : run.result.log)
    report["epochs"].push_back({{"epoch", e.epoch},
                                {"train_loss", e.train_loss},
                                {"val_loss", e.val_loss},
                                {"val_acc", e.val_acc}});
  report["test_metrics"] = metrics_json(run.test_metrics, data.corpus.classes);
  report["artifacts"] = {ckpt_path.string(), epochs_path.string(),
                         vocab_path.string()};
  write_text(report_path, report.dump(2) + "\n");
  guard.committed = true;

  std::cout << "test accuracy: " << run.test_metrics.accuracy
            << "\ntest macro F1: " << run.test_metrics.macro_f1 << "\nwrote "
            << report_path.string() << std::endl;
  return 0;
}

int cmd_evaluate(const RunConfig& c, const std::string& checkpoint) {
  if (checkpoint.empty()) throw UsageError("--checkpoint is required");
  const PreparedData data = prepare_data(c);
  const Vocabulary vocab = vocabulary_for_mode(data, c, c.mode_kind());

  ModelConfig mc = c.model_config(vocab.size(), data.corpus.classes.size());
  ModelParams params = init_params(mc);
  auto loaded = load_checkpoint(checkpoint);
  auto named = params.named();
  if (loaded.size() != named.size())
    throw DataError("checkpoint tensor count mismatch");
  for (std::size_t i = 0; i < named.size(); ++i) {
    if (loaded[i].first != named[i].first ||
        loaded[i].second.shape != named[i].second->shape)
      throw DataError("checkpoint tensor mismatch: " + loaded[i].first);
    *named[i].second = std::move(loaded[i].second);
  }

  const EncodedDataset test_set =
      encode_split(data, data.split.test, vocab, mc.seq_len);
  const std::vector<int> pred = predict(params, mc, test_set.docs);
  const ConfusionMatrix cm =
      confusion(test_set.labels, pred, data.corpus.classes);
  const Metrics m = metrics(cm);

  const fs::path dir = ensure_out_dir(c);
  write_text(dir / "metrics.json",
             metrics_json(m, data.corpus.classes).dump(2) + "\n");
  {
    std::ofstream f(dir / "confusion.csv", std::ios::trunc);
    export_confusion_csv(f, cm);
  }
  std::cout << "test accuracy: " << m.accuracy << "\nwrote "
            << (dir / "metrics.json").string() << std::endl;
  return 0;
}

int cmd_compare(const RunConfig& c) {
  const PreparedData data = prepare_data(c);
  const fs::path dir = ensure_out_dir(c);

  const TrainedRun tscnn = run_mode(data, c, Mode::TSCNN);
  const TrainedRun scnn = run_mode(data, c, Mode::SCNN);

  std::ostringstream table;
  table.precision(17);
  table << "mode,vocab_size,test_accuracy,test_macro_f1\n";
  table << "tscnn," << tscnn.vocab.size() << ',' << tscnn.test_metrics.accuracy
        << ',' << tscnn.test_metrics.macro_f1 << '\n';
  table << "scnn," << scnn.vocab.size() << ',' << scnn.test_metrics.accuracy
        << ',' << scnn.test_metrics.macro_f1 << '\n';
  write_text(dir / "compare.csv", table.str());

  std::ostringstream curves;
  curves.precision(17);
  curves << "mode,epoch,train_loss,val_loss,val_acc\n";
  for (const auto& e : tscnn.result.log)
    curves << "tscnn," << e.epoch << ',' << e.train_loss << ',' << e.val_loss
           << ',' << e.val_acc << '\n';
  for (const auto& e : scnn.result.log)
    curves << "scnn," << e.epoch << ',' << e.train_loss << ',' << e.val_loss
           << ',' << e.val_acc << '\n';
  write_text(dir / "curves.csv", curves.str());

  std::cout << table.str() << "wrote " << (dir / "compare.csv").string()
            << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-stage text classification: NDM feature selection plus a "
               "three-channel wide-convolution classifier"};
  app.require_subcommand(1);

  FlagValues f_stats, f_rank, f_vocab, f_train, f_eval, f_compare;
  std::string checkpoint;

  CLI::App* stats = app.add_subcommand("stats", "dump term statistics");
  add_common_flags(stats, f_stats);
  CLI::App* rank = app.add_subcommand("rank", "per-class rankings + vocabulary");
  add_common_flags(rank, f_rank);
  CLI::App* vocab = app.add_subcommand("build-vocab", "union vocabulary only");
  add_common_flags(vocab, f_vocab);
  CLI::App* train = app.add_subcommand("train", "train one mode");
  add_common_flags(train, f_train);
  CLI::App* evaluate = app.add_subcommand("evaluate", "evaluate a checkpoint");
  add_common_flags(evaluate, f_eval);
  evaluate->add_option("--checkpoint", checkpoint, "model checkpoint file");
  CLI::App* compare = app.add_subcommand("compare", "run both modes, shared seed");
  add_common_flags(compare, f_compare);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (stats->parsed()) return cmd_stats(resolve_config(f_stats));
    if (rank->parsed()) return cmd_rank(resolve_config(f_rank), false);
    if (vocab->parsed()) return cmd_rank(resolve_config(f_vocab), true);
    if (train->parsed()) return cmd_train(resolve_config(f_train));
    if (evaluate->parsed())
      return cmd_evaluate(resolve_config(f_eval), checkpoint);
    if (compare->parsed()) return cmd_compare(resolve_config(f_compare));
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << std::endl;
    return 1;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << std::endl;
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << std::endl;
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }
  return 1;
}
