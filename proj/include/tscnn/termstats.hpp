#ifndef TSCNN_TERMSTATS_HPP
#define TSCNN_TERMSTATS_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "tscnn/preprocess.hpp"

namespace tscnn {

// One-vs-rest document-presence counts for a (term, class) pair.
struct ClassContingency {
  std::int64_t tp = 0;     // positive-class docs containing the term
  std::int64_t fp = 0;     // negative-class docs containing the term
  std::int64_t n_pos = 0;  // positive-class size
  std::int64_t n_neg = 0;  // negative-class size

  double tpr() const { return static_cast<double>(tp) / n_pos; }
  double fpr() const { return static_cast<double>(fp) / n_neg; }
};

class TermStatsTable {
 public:
  // Presence-based counting over training documents: a term counts once per
  // document regardless of repetitions.
  static TermStatsTable compute(const std::vector<TokenSequence>& docs,
                                const std::vector<int>& labels,
                                const std::vector<std::string>& classes);

  std::size_t num_terms() const { return terms_.size(); }
  std::size_t num_classes() const { return class_sizes_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<std::string>& classes() const { return classes_; }
  std::int64_t total_documents() const { return total_docs_; }

  bool has_term(const std::string& term) const;
  int term_index(const std::string& term) const;  // throws on unknown term

  // Document frequency of a term (tp + fp, class independent).
  std::int64_t doc_frequency(int term_idx) const { return df_[term_idx]; }

  ClassContingency contingency(int term_idx, int class_idx) const;
  ClassContingency contingency(const std::string& term, int class_idx) const;

  std::pair<double, double> tpr_fpr(const std::string& term,
                                    int class_idx) const;

  // CSV audit dump: term,class,tp,fp,n_pos,n_neg.
  void dump_csv(std::ostream& os) const;

 private:
  std::vector<std::string> terms_;            // sorted
  std::unordered_map<std::string, int> index_;
  std::vector<std::string> classes_;
  std::vector<std::int64_t> class_sizes_;
  std::vector<std::vector<std::int64_t>> tp_;  // [class][term]
  std::vector<std::int64_t> df_;               // [term]
  std::int64_t total_docs_ = 0;
};

}  // namespace tscnn

#endif
