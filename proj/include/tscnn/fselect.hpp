#ifndef TSCNN_FSELECT_HPP
#define TSCNN_FSELECT_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "tscnn/termstats.hpp"

namespace tscnn {

enum class MetricKind { NDM, ACC, ACC2, IG, CHI, OR, DFS, GINI, DF };

MetricKind metric_from_name(const std::string& name);  // throws UsageError
std::string metric_name(MetricKind kind);

// |tpr - fpr| / max(min(tpr, fpr), epsilon).
double score_ndm(double tpr, double fpr, double epsilon);

// |tpr - fpr|.
double score_acc2(double tpr, double fpr);

// Scores one (term, class) contingency. Higher = more discriminative.
// With A=tp, B=fp, C=n_pos-tp, D=n_neg-fp, N=A+B+C+D:
//   DF   = A + B
//   ACC  = A - B
//   ACC2 = |tpr - fpr|
//   CHI  = N(AD - CB)^2 / ((A+C)(B+D)(A+B)(C+D)); zero marginal -> 0
//   IG   = H(class) - H(class | presence), natural log, 0 log 0 = 0
//   OR   = log((A+0.5)(D+0.5) / ((B+0.5)(C+0.5)))
//   DFS  = P(pos|t) / (P(~t|pos) + P(t|neg) + 1)
//   GINI = P(t|pos)^2 P(pos|t)^2 + P(t|neg)^2 P(neg|t)^2
//   NDM  = |tpr - fpr| / max(min(tpr, fpr), 1/(n_pos+n_neg))
double score_metric(MetricKind kind, const ClassContingency& c);

struct RankedTermList {
  std::string class_name;
  // Sorted by score desc, then document frequency desc, then term asc.
  std::vector<std::pair<std::string, double>> entries;
};

RankedTermList rank_terms(const TermStatsTable& stats, MetricKind kind,
                          int class_idx);

struct Vocabulary {
  std::vector<std::string> terms;                 // index i -> terms[i-1]
  std::unordered_map<std::string, int> index;     // term -> 1..|V|; 0 = padding
  std::string metric;
  std::size_t k = 0;
  std::vector<std::vector<std::string>> per_class_selected;

  std::size_t size() const { return terms.size(); }
  // 0 for out-of-vocabulary terms.
  int lookup(const std::string& term) const {
    auto it = index.find(term);
    return it == index.end() ? 0 : it->second;
  }
};

// Union of per-class top-k entries; indices assigned 1..|V| in lexicographic
// term order.
Vocabulary build_vocabulary(const std::vector<RankedTermList>& ranked,
                            std::size_t k);

// Vocabulary covering every term in the table (the SCNN input).
Vocabulary full_vocabulary(const TermStatsTable& stats);

// CSV: rank,term,score,tp,fp,tpr,fpr.
void export_ranking_csv(std::ostream& os, const RankedTermList& ranked,
                        const TermStatsTable& stats, int class_idx);

// One term per line in index order, after a '#' header recording provenance.
void export_vocabulary(std::ostream& os, const Vocabulary& vocab,
                       std::uint64_t seed);
Vocabulary import_vocabulary(std::istream& is);

}  // namespace tscnn

#endif
