#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tscnn/error.hpp"
#include "tscnn/eval.hpp"
#include "tscnn/rng.hpp"

using namespace tscnn;

TEST_CASE("confusion matrix places counts at (gold, pred)") {
  const std::vector<int> gold = {0, 0, 1, 1, 2};
  const std::vector<int> pred = {0, 1, 1, 1, 0};
  const ConfusionMatrix cm = confusion(gold, pred, {"a", "b", "c"});
  CHECK(cm.at(0, 0) == 1);
  CHECK(cm.at(0, 1) == 1);
  CHECK(cm.at(1, 1) == 2);
  CHECK(cm.at(2, 0) == 1);
  CHECK(cm.at(2, 2) == 0);
  CHECK(cm.total() == 5);
}

TEST_CASE("confusion matrix agrees with a hand tally on random data") {
  Rng rng(321);
  const std::size_t n_classes = 4;
  std::vector<int> gold, pred;
  for (int i = 0; i < 30; ++i) {
    gold.push_back(static_cast<int>(rng.below(n_classes)));
    pred.push_back(static_cast<int>(rng.below(n_classes)));
  }
  const ConfusionMatrix cm = confusion(gold, pred, {"a", "b", "c", "d"});
  for (std::size_t g = 0; g < n_classes; ++g)
    for (std::size_t p = 0; p < n_classes; ++p) {
      std::int64_t count = 0;
      for (std::size_t i = 0; i < gold.size(); ++i)
        if (gold[i] == static_cast<int>(g) && pred[i] == static_cast<int>(p))
          ++count;
      CHECK(cm.at(g, p) == count);
    }
  CHECK(cm.total() == 30);
}

TEST_CASE("metrics on a hand-computed 2-class case") {
  // gold: a a a b b; pred: a a b b b
  // class a: tp=2 fp=0 fn=1 -> P=1, R=2/3, F1=0.8
  // class b: tp=2 fp=1 fn=0 -> P=2/3, R=1, F1=0.8
  const ConfusionMatrix cm =
      confusion({0, 0, 0, 1, 1}, {0, 0, 1, 1, 1}, {"a", "b"});
  const Metrics m = metrics(cm);
  CHECK(m.accuracy == doctest::Approx(0.8));
  CHECK(m.per_class[0].precision == doctest::Approx(1.0));
  CHECK(m.per_class[0].recall == doctest::Approx(2.0 / 3.0));
  CHECK(m.per_class[0].f1 == doctest::Approx(0.8));
  CHECK(m.per_class[1].f1 == doctest::Approx(0.8));
  CHECK(m.macro_f1 == doctest::Approx(0.8));
}

TEST_CASE("class absent from predictions gets F1 0, macro averages over all") {
  // gold: a a a b; pred: a a a a
  // class a: P=3/4 R=1 F1=6/7; class b: tp=0, gold present -> F1=0.
  const ConfusionMatrix cm = confusion({0, 0, 0, 1}, {0, 0, 0, 0}, {"a", "b"});
  const Metrics m = metrics(cm);
  CHECK(m.per_class[1].f1 == 0.0);
  CHECK_FALSE(m.per_class[1].degenerate);
  CHECK(m.macro_f1 == doctest::Approx((6.0 / 7.0 + 0.0) / 2.0));
}

TEST_CASE("degenerate class (no gold, no predictions) is flagged") {
  // Three classes declared, class c never appears either way.
  // class a: P=1 R=2/3 F1=0.8... using gold a a a b, pred a a b b:
  const ConfusionMatrix cm =
      confusion({0, 0, 0, 1}, {0, 0, 1, 1}, {"a", "b", "c"});
  const Metrics m = metrics(cm);
  CHECK(m.per_class[2].degenerate);
  CHECK(m.per_class[2].f1 == 0.0);
  // a: tp=2 fp=0 fn=1 -> F1=0.8; b: tp=1 fp=1 fn=0 -> P=.5 R=1 F1=2/3.
  CHECK(m.macro_f1 == doctest::Approx((0.8 + 2.0 / 3.0 + 0.0) / 3.0));
}

TEST_CASE("accuracy equals trace over total for any matrix") {
  Rng rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<int> gold, pred;
    for (int i = 0; i < 40; ++i) {
      gold.push_back(static_cast<int>(rng.below(3)));
      pred.push_back(static_cast<int>(rng.below(3)));
    }
    const ConfusionMatrix cm = confusion(gold, pred, {"a", "b", "c"});
    const Metrics m = metrics(cm);
    std::int64_t trace = 0;
    for (std::size_t i = 0; i < 3; ++i) trace += cm.at(i, i);
    CHECK(m.accuracy ==
          doctest::Approx(static_cast<double>(trace) / cm.total()));
  }
}

TEST_CASE("metrics are invariant under paired permutation of items") {
  Rng rng(17);
  std::vector<int> gold, pred;
  for (int i = 0; i < 25; ++i) {
    gold.push_back(static_cast<int>(rng.below(3)));
    pred.push_back(static_cast<int>(rng.below(3)));
  }
  std::vector<std::size_t> order(gold.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  std::vector<int> gold2, pred2;
  for (std::size_t i : order) {
    gold2.push_back(gold[i]);
    pred2.push_back(pred[i]);
  }
  const Metrics a = metrics(confusion(gold, pred, {"a", "b", "c"}));
  const Metrics b = metrics(confusion(gold2, pred2, {"a", "b", "c"}));
  CHECK(a.accuracy == b.accuracy);
  CHECK(a.macro_f1 == b.macro_f1);
}

TEST_CASE("mismatched gold/pred lengths and bad labels are errors") {
  CHECK_THROWS_AS(confusion({0, 1}, {0}, {"a", "b"}), DataError);
  CHECK_THROWS_AS(confusion({0, 2}, {0, 0}, {"a", "b"}), DataError);
}

TEST_CASE("confusion CSV header carries class names") {
  const ConfusionMatrix cm = confusion({0, 1}, {0, 1}, {"alpha", "beta"});
  std::ostringstream os;
  export_confusion_csv(os, cm);
  CHECK(os.str().rfind("gold\\pred,alpha,beta\n", 0) == 0);
}

TEST_CASE("metrics JSON names every class") {
  const ConfusionMatrix cm = confusion({0, 1}, {0, 1}, {"alpha", "beta"});
  const Metrics m = metrics(cm);
  std::ostringstream os;
  export_metrics_json(os, m, cm.classes);
  const std::string js = os.str();
  CHECK(js.find("\"accuracy\"") != std::string::npos);
  CHECK(js.find("\"macro_f1\"") != std::string::npos);
  CHECK(js.find("\"alpha\"") != std::string::npos);
  CHECK(js.find("\"beta\"") != std::string::npos);
}

TEST_CASE("naive Bayes learns a hand-checkable 2-class problem") {
  // Vocab {1, 2}; class 0 emits token 1, class 1 emits token 2.
  const std::vector<std::vector<int>> docs = {
      {1, 1, 0}, {1, 1, 1}, {2, 2, 0}, {2, 2, 2}};
  const std::vector<int> labels = {0, 0, 1, 1};
  const NaiveBayesModel nb = nb_train(docs, labels, 2, 2, 1.0);

  // Priors: 2/2 split.
  CHECK(nb.log_prior[0] == doctest::Approx(std::log(0.5)));

  // Class 0 saw 5 occurrences of token 1, 0 of token 2; alpha=1, V=2:
  // P(1|0) = (5+1)/(5+2) = 6/7, P(2|0) = 1/7.
  CHECK(nb.log_cond[0][1] == doctest::Approx(std::log(6.0 / 7.0)));
  CHECK(nb.log_cond[0][2] == doctest::Approx(std::log(1.0 / 7.0)));

  CHECK(nb_predict(nb, {1, 1}) == 0);
  CHECK(nb_predict(nb, {2}) == 1);
  CHECK(nb_predict(nb, {1, 2, 2}) == 1);
}

TEST_CASE("naive Bayes posterior is a distribution; padding ignored") {
  const std::vector<std::vector<int>> docs = {{1, 0}, {2, 0}, {1, 1}, {2, 2}};
  const NaiveBayesModel nb = nb_train(docs, {0, 1, 0, 1}, 2, 2, 1.0);
  for (const std::vector<int>& doc :
       {std::vector<int>{1, 2}, std::vector<int>{0, 0}, std::vector<int>{2}}) {
    const std::vector<double> post = nb_posterior(nb, doc);
    double sum = 0.0;
    for (double p : post) sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  // All-padding document carries no evidence: posterior equals the prior.
  const std::vector<double> post = nb_posterior(nb, {0, 0, 0});
  CHECK(post[0] == doctest::Approx(0.5));
}

TEST_CASE("naive Bayes ties resolve to the lowest class index") {
  // Perfectly symmetric training data; the empty document ties.
  const std::vector<std::vector<int>> docs = {{1}, {2}};
  const NaiveBayesModel nb = nb_train(docs, {0, 1}, 2, 2, 1.0);
  CHECK(nb_predict(nb, {}) == 0);
}

TEST_CASE("naive Bayes rejects bad inputs") {
  CHECK_THROWS_AS(nb_train({{1}}, {0}, 2, 1, 1.0), DataError);   // empty class
  CHECK_THROWS_AS(nb_train({{1}, {1}}, {0, 1}, 2, 1, 0.0), UsageError);
}
