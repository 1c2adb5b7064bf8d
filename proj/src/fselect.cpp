#include "tscnn/fselect.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include "tscnn/error.hpp"

namespace tscnn {

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// Entropy of a two-outcome split given joint counts (a, b) out of n.
double binary_entropy(double a, double b) {
  const double n = a + b;
  if (n <= 0.0) return 0.0;
  return -(xlogx(a / n) + xlogx(b / n));
}

}  // namespace

MetricKind metric_from_name(const std::string& name) {
  std::string up;
  for (char c : name) up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  static const std::map<std::string, MetricKind> kNames = {
      {"NDM", MetricKind::NDM},   {"ACC", MetricKind::ACC},
      {"ACC2", MetricKind::ACC2}, {"IG", MetricKind::IG},
      {"CHI", MetricKind::CHI},   {"CHISQ", MetricKind::CHI},
      {"OR", MetricKind::OR},     {"DFS", MetricKind::DFS},
      {"GINI", MetricKind::GINI}, {"DF", MetricKind::DF}};
  auto it = kNames.find(up);
  if (it == kNames.end()) throw UsageError("unknown metric: " + name);
  return it->second;
}

std::string metric_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::NDM: return "NDM";
    case MetricKind::ACC: return "ACC";
    case MetricKind::ACC2: return "ACC2";
    case MetricKind::IG: return "IG";
    case MetricKind::CHI: return "CHI";
    case MetricKind::OR: return "OR";
    case MetricKind::DFS: return "DFS";
    case MetricKind::GINI: return "GINI";
    case MetricKind::DF: return "DF";
  }
  throw UsageError("unknown metric kind");
}

double score_ndm(double tpr, double fpr, double epsilon) {
  return std::abs(tpr - fpr) / std::max(std::min(tpr, fpr), epsilon);
}

double score_acc2(double tpr, double fpr) { return std::abs(tpr - fpr); }

double score_metric(MetricKind kind, const ClassContingency& c) {
  const double A = static_cast<double>(c.tp);
  const double B = static_cast<double>(c.fp);
  const double C = static_cast<double>(c.n_pos - c.tp);
  const double D = static_cast<double>(c.n_neg - c.fp);
  const double N = A + B + C + D;
  const double tpr = c.tpr();
  const double fpr = c.fpr();

  switch (kind) {
    case MetricKind::DF:
      return A + B;
    case MetricKind::ACC:
      return A - B;
    case MetricKind::ACC2:
      return score_acc2(tpr, fpr);
    case MetricKind::NDM:
      return score_ndm(tpr, fpr, 1.0 / static_cast<double>(c.n_pos + c.n_neg));
    case MetricKind::CHI: {
      const double m1 = A + C, m2 = B + D, m3 = A + B, m4 = C + D;
      if (m1 == 0.0 || m2 == 0.0 || m3 == 0.0 || m4 == 0.0) return 0.0;
      const double diff = A * D - C * B;
      return N * diff * diff / (m1 * m2 * m3 * m4);
    }
    case MetricKind::IG: {
      const double h_class = binary_entropy(A + C, B + D);
      const double p_t = (A + B) / N;
      const double h_cond =
          p_t * binary_entropy(A, B) + (1.0 - p_t) * binary_entropy(C, D);
      return h_class - h_cond;
    }
    case MetricKind::OR:
      return std::log((A + 0.5) * (D + 0.5) / ((B + 0.5) * (C + 0.5)));
    case MetricKind::DFS: {
      const double p_pos_t = A / (A + B);  // in-table terms have A+B >= 1
      const double p_not_t_pos = C / static_cast<double>(c.n_pos);
      const double p_t_neg = fpr;
      return p_pos_t / (p_not_t_pos + p_t_neg + 1.0);
    }
    case MetricKind::GINI: {
      const double p_t_pos = tpr;
      const double p_t_neg = fpr;
      const double p_pos_t = A / (A + B);
      const double p_neg_t = B / (A + B);
      return p_t_pos * p_t_pos * p_pos_t * p_pos_t +
             p_t_neg * p_t_neg * p_neg_t * p_neg_t;
    }
  }
  throw UsageError("unknown metric kind");
}

RankedTermList rank_terms(const TermStatsTable& stats, MetricKind kind,
                          int class_idx) {
  struct Row {
    int term_idx;
    double score;
    std::int64_t df;
  };
  std::vector<Row> rows;
  rows.reserve(stats.num_terms());
  for (std::size_t t = 0; t < stats.num_terms(); ++t) {
    const int ti = static_cast<int>(t);
    rows.push_back({ti, score_metric(kind, stats.contingency(ti, class_idx)),
                    stats.doc_frequency(ti)});
  }
  std::sort(rows.begin(), rows.end(), [&](const Row& a, const Row& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.df != b.df) return a.df > b.df;
    return stats.terms()[a.term_idx] < stats.terms()[b.term_idx];
  });

  RankedTermList out;
  out.class_name = stats.classes()[class_idx];
  out.entries.reserve(rows.size());
  for (const Row& r : rows)
    out.entries.emplace_back(stats.terms()[r.term_idx], r.score);
  return out;
}

Vocabulary build_vocabulary(const std::vector<RankedTermList>& ranked,
                            std::size_t k) {
  Vocabulary vocab;
  vocab.k = k;
  std::set<std::string> unioned;
  for (const auto& list : ranked) {
    std::vector<std::string> selected;
    const std::size_t take = std::min(k, list.entries.size());
    for (std::size_t i = 0; i < take; ++i) {
      selected.push_back(list.entries[i].first);
      unioned.insert(list.entries[i].first);
    }
    vocab.per_class_selected.push_back(std::move(selected));
  }
  vocab.terms.assign(unioned.begin(), unioned.end());
  for (std::size_t i = 0; i < vocab.terms.size(); ++i)
    vocab.index[vocab.terms[i]] = static_cast<int>(i + 1);
  return vocab;
}

Vocabulary full_vocabulary(const TermStatsTable& stats) {
  Vocabulary vocab;
  vocab.metric = "FULL";
  vocab.k = stats.num_terms();
  vocab.terms = stats.terms();
  for (std::size_t i = 0; i < vocab.terms.size(); ++i)
    vocab.index[vocab.terms[i]] = static_cast<int>(i + 1);
  return vocab;
}

void export_ranking_csv(std::ostream& os, const RankedTermList& ranked,
                        const TermStatsTable& stats, int class_idx) {
  os << "rank,term,score,tp,fp,tpr,fpr\n";
  os.precision(17);
  std::size_t rank = 1;
  for (const auto& [term, score] : ranked.entries) {
    const ClassContingency c = stats.contingency(term, class_idx);
    os << rank++ << ',' << term << ',' << score << ',' << c.tp << ',' << c.fp
       << ',' << c.tpr() << ',' << c.fpr() << '\n';
  }
}

void export_vocabulary(std::ostream& os, const Vocabulary& vocab,
                       std::uint64_t seed) {
  os << "# metric=" << vocab.metric << " k=" << vocab.k << " seed=" << seed
     << "\n";
  for (const auto& term : vocab.terms) os << term << '\n';
}

Vocabulary import_vocabulary(std::istream& is) {
  Vocabulary vocab;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (!header_seen) {
        header_seen = true;
        std::istringstream ss(line.substr(1));
        std::string field;
        while (ss >> field) {
          if (field.rfind("metric=", 0) == 0) vocab.metric = field.substr(7);
          if (field.rfind("k=", 0) == 0) vocab.k = std::stoull(field.substr(2));
        }
      }
      continue;
    }
    vocab.terms.push_back(line);
  }
  for (std::size_t i = 0; i < vocab.terms.size(); ++i)
    vocab.index[vocab.terms[i]] = static_cast<int>(i + 1);
  return vocab;
}

}  // namespace tscnn
