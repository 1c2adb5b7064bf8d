#include "tscnn/termstats.hpp"

#include <algorithm>
#include <set>

#include "tscnn/error.hpp"

namespace tscnn {

TermStatsTable TermStatsTable::compute(const std::vector<TokenSequence>& docs,
                                       const std::vector<int>& labels,
                                       const std::vector<std::string>& classes) {
  if (docs.empty()) throw DataError("empty training set");
  if (classes.size() < 2)
    throw DataError("one-vs-rest statistics need at least two classes");
  if (docs.size() != labels.size())
    throw DataError("document/label count mismatch");

  TermStatsTable table;
  table.classes_ = classes;
  table.class_sizes_.assign(classes.size(), 0);
  table.total_docs_ = static_cast<std::int64_t>(docs.size());

  for (int label : labels) {
    if (label < 0 || label >= static_cast<int>(classes.size()))
      throw DataError("label index out of range");
    ++table.class_sizes_[label];
  }
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (table.class_sizes_[c] == 0)
      throw DataError("class with zero documents: " + classes[c]);
  }

  // Collect the sorted term universe first so indices are stable.
  std::set<std::string> universe;
  for (const auto& doc : docs)
    universe.insert(doc.tokens.begin(), doc.tokens.end());
  table.terms_.assign(universe.begin(), universe.end());
  for (std::size_t i = 0; i < table.terms_.size(); ++i)
    table.index_[table.terms_[i]] = static_cast<int>(i);

  table.tp_.assign(classes.size(),
                   std::vector<std::int64_t>(table.terms_.size(), 0));
  table.df_.assign(table.terms_.size(), 0);

  std::set<int> seen;  // unique term indices per document
  for (std::size_t d = 0; d < docs.size(); ++d) {
    seen.clear();
    for (const auto& tok : docs[d].tokens)
      seen.insert(table.index_.at(tok));
    for (int t : seen) {
      ++table.tp_[labels[d]][t];
      ++table.df_[t];
    }
  }
  return table;
}

bool TermStatsTable::has_term(const std::string& term) const {
  return index_.count(term) != 0;
}

int TermStatsTable::term_index(const std::string& term) const {
  auto it = index_.find(term);
  if (it == index_.end()) throw DataError("unknown term: " + term);
  return it->second;
}

ClassContingency TermStatsTable::contingency(int term_idx,
                                             int class_idx) const {
  ClassContingency c;
  c.tp = tp_[class_idx][term_idx];
  c.fp = df_[term_idx] - c.tp;
  c.n_pos = class_sizes_[class_idx];
  c.n_neg = total_docs_ - c.n_pos;
  return c;
}

ClassContingency TermStatsTable::contingency(const std::string& term,
                                             int class_idx) const {
  return contingency(term_index(term), class_idx);
}

std::pair<double, double> TermStatsTable::tpr_fpr(const std::string& term,
                                                  int class_idx) const {
  const ClassContingency c = contingency(term, class_idx);
  return {c.tpr(), c.fpr()};
}

void TermStatsTable::dump_csv(std::ostream& os) const {
  os << "term,class,tp,fp,n_pos,n_neg\n";
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    for (std::size_t c = 0; c < classes_.size(); ++c) {
      const ClassContingency cc = contingency(static_cast<int>(t),
                                              static_cast<int>(c));
      os << terms_[t] << ',' << classes_[c] << ',' << cc.tp << ',' << cc.fp
         << ',' << cc.n_pos << ',' << cc.n_neg << '\n';
    }
  }
}

}  // namespace tscnn
