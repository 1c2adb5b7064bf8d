#include "tscnn/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tscnn/error.hpp"

namespace tscnn {

std::int64_t ConfusionMatrix::total() const {
  return std::accumulate(cells.begin(), cells.end(), std::int64_t{0});
}

ConfusionMatrix confusion(const std::vector<int>& gold,
                          const std::vector<int>& pred,
                          const std::vector<std::string>& classes) {
  if (gold.size() != pred.size())
    throw DataError("gold/pred length mismatch");
  const std::size_t C = classes.size();
  ConfusionMatrix cm{classes, std::vector<std::int64_t>(C * C, 0)};
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] < 0 || static_cast<std::size_t>(gold[i]) >= C ||
        pred[i] < 0 || static_cast<std::size_t>(pred[i]) >= C)
      throw DataError("class index out of range in confusion()");
    ++cm.cells[static_cast<std::size_t>(gold[i]) * C +
               static_cast<std::size_t>(pred[i])];
  }
  return cm;
}

Metrics metrics(const ConfusionMatrix& cm) {
  const std::size_t C = cm.num_classes();
  Metrics m;
  m.per_class.resize(C);

  std::int64_t diag = 0;
  double f1_sum = 0.0;
  for (std::size_t c = 0; c < C; ++c) {
    std::int64_t tp = cm.at(c, c);
    std::int64_t gold_c = 0, pred_c = 0;
    for (std::size_t j = 0; j < C; ++j) {
      gold_c += cm.at(c, j);
      pred_c += cm.at(j, c);
    }
    diag += tp;
    PerClassMetrics& pc = m.per_class[c];
    if (gold_c == 0 && pred_c == 0) {
      pc.degenerate = true;  // contributes 0 to the macro mean, flagged
    } else {
      pc.precision = pred_c > 0 ? static_cast<double>(tp) / pred_c : 0.0;
      pc.recall = gold_c > 0 ? static_cast<double>(tp) / gold_c : 0.0;
      pc.f1 = (pc.precision + pc.recall) > 0.0
                  ? 2.0 * pc.precision * pc.recall / (pc.precision + pc.recall)
                  : 0.0;
    }
    f1_sum += pc.f1;
  }
  const std::int64_t total = cm.total();
  m.accuracy = total > 0 ? static_cast<double>(diag) / total : 0.0;
  m.macro_f1 = C > 0 ? f1_sum / static_cast<double>(C) : 0.0;
  return m;
}

void export_confusion_csv(std::ostream& os, const ConfusionMatrix& cm) {
  os << "gold\\pred";
  for (const auto& c : cm.classes) os << ',' << c;
  os << '\n';
  for (std::size_t r = 0; r < cm.num_classes(); ++r) {
    os << cm.classes[r];
    for (std::size_t c = 0; c < cm.num_classes(); ++c) os << ',' << cm.at(r, c);
    os << '\n';
  }
}

void export_metrics_json(std::ostream& os, const Metrics& m,
                         const std::vector<std::string>& classes) {
  os.precision(17);
  os << "{\n  \"accuracy\": " << m.accuracy
     << ",\n  \"macro_f1\": " << m.macro_f1 << ",\n  \"per_class\": [\n";
  for (std::size_t c = 0; c < m.per_class.size(); ++c) {
    const auto& pc = m.per_class[c];
    os << "    {\"class\": \"" << classes[c]
       << "\", \"precision\": " << pc.precision
       << ", \"recall\": " << pc.recall << ", \"f1\": " << pc.f1
       << ", \"degenerate\": " << (pc.degenerate ? "true" : "false") << "}"
       << (c + 1 < m.per_class.size() ? "," : "") << '\n';
  }
  os << "  ]\n}\n";
}

NaiveBayesModel nb_train(const std::vector<std::vector<int>>& docs,
                         const std::vector<int>& labels,
                         std::size_t num_classes, std::size_t vocab_size,
                         double alpha) {
  if (alpha <= 0.0) throw UsageError("NB smoothing alpha must be positive");
  if (docs.size() != labels.size())
    throw DataError("document/label count mismatch");

  NaiveBayesModel model;
  model.num_classes = num_classes;
  model.vocab_size = vocab_size;
  model.alpha = alpha;

  std::vector<std::int64_t> class_docs(num_classes, 0);
  std::vector<std::vector<std::int64_t>> counts(
      num_classes, std::vector<std::int64_t>(vocab_size + 1, 0));
  std::vector<std::int64_t> totals(num_classes, 0);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const int c = labels[d];
    ++class_docs[c];
    for (int idx : docs[d]) {
      if (idx <= 0) continue;
      ++counts[c][static_cast<std::size_t>(idx)];
      ++totals[c];
    }
  }
  for (std::size_t c = 0; c < num_classes; ++c)
    if (class_docs[c] == 0)
      throw DataError("empty training class in nb_train");

  model.log_prior.resize(num_classes);
  model.log_cond.assign(num_classes,
                        std::vector<double>(vocab_size + 1, 0.0));
  const double v = static_cast<double>(vocab_size);
  for (std::size_t c = 0; c < num_classes; ++c) {
    model.log_prior[c] = std::log(static_cast<double>(class_docs[c]) /
                                  static_cast<double>(docs.size()));
    const double denom = std::log(static_cast<double>(totals[c]) + alpha * v);
    for (std::size_t t = 1; t <= vocab_size; ++t)
      model.log_cond[c][t] =
          std::log(static_cast<double>(counts[c][t]) + alpha) - denom;
  }
  return model;
}

std::vector<double> nb_posterior(const NaiveBayesModel& model,
                                 const std::vector<int>& doc) {
  std::vector<double> log_post(model.num_classes);
  for (std::size_t c = 0; c < model.num_classes; ++c) {
    double lp = model.log_prior[c];
    for (int idx : doc) {
      if (idx <= 0) continue;
      lp += model.log_cond[c][static_cast<std::size_t>(idx)];
    }
    log_post[c] = lp;
  }
  const double m = *std::max_element(log_post.begin(), log_post.end());
  double z = 0.0;
  for (double& lp : log_post) {
    lp = std::exp(lp - m);
    z += lp;
  }
  for (double& lp : log_post) lp /= z;
  return log_post;
}

int nb_predict(const NaiveBayesModel& model, const std::vector<int>& doc) {
  const std::vector<double> post = nb_posterior(model, doc);
  return static_cast<int>(std::max_element(post.begin(), post.end()) -
                          post.begin());
}

}  // namespace tscnn
