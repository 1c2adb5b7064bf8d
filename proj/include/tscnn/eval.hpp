#ifndef TSCNN_EVAL_HPP
#define TSCNN_EVAL_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace tscnn {

struct ConfusionMatrix {
  std::vector<std::string> classes;
  std::vector<std::int64_t> cells;  // row-major, rows = gold, cols = predicted

  std::size_t num_classes() const { return classes.size(); }
  std::int64_t at(std::size_t gold, std::size_t pred) const {
    return cells[gold * classes.size() + pred];
  }
  std::int64_t total() const;
};

ConfusionMatrix confusion(const std::vector<int>& gold,
                          const std::vector<int>& pred,
                          const std::vector<std::string>& classes);

struct PerClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool degenerate = false;  // no gold members and no predictions
};

struct Metrics {
  double accuracy = 0.0;
  double macro_f1 = 0.0;  // unweighted mean of per-class F1
  std::vector<PerClassMetrics> per_class;
};

Metrics metrics(const ConfusionMatrix& cm);

// CSV with class names as header row and leading column.
void export_confusion_csv(std::ostream& os, const ConfusionMatrix& cm);
// JSON object {accuracy, macro_f1, per_class: [...]}.
void export_metrics_json(std::ostream& os, const Metrics& m,
                         const std::vector<std::string>& classes);

// Multinomial Naive Bayes over token counts on the selected vocabulary.
// Documents are vocabulary-index sequences; index 0 (padding/OOV) is ignored.
struct NaiveBayesModel {
  std::size_t num_classes = 0;
  std::size_t vocab_size = 0;
  double alpha = 1.0;
  std::vector<double> log_prior;              // [C]
  std::vector<std::vector<double>> log_cond;  // [C][V+1], entry 0 unused
};

NaiveBayesModel nb_train(const std::vector<std::vector<int>>& docs,
                         const std::vector<int>& labels,
                         std::size_t num_classes, std::size_t vocab_size,
                         double alpha);

// Normalized posterior P(class | doc); sums to 1.
std::vector<double> nb_posterior(const NaiveBayesModel& model,
                                 const std::vector<int>& doc);

// Ties resolve to the lowest class index.
int nb_predict(const NaiveBayesModel& model, const std::vector<int>& doc);

}  // namespace tscnn

#endif
