#pragma once

#include <array>
#include <string>
#include <vector>

#include "cmsa/errors.hpp"
#include "cmsa/sentiment.hpp"

namespace cmsa {

// 3x3 counts, rows = gold class, columns = predicted class, both in
// canonical order (-1, 0, 1).
struct ConfusionMatrix {
  std::array<std::array<long long, 3>, 3> counts{};

  long long total() const;
  void add(Sentiment gold, Sentiment pred) {
    ++counts[static_cast<std::size_t>(class_index(gold))]
            [static_cast<std::size_t>(class_index(pred))];
  }
};

// Throws ArityError on length mismatch, EmptyEvalError on empty input.
ConfusionMatrix confusion_matrix(const std::vector<Sentiment>& gold,
                                 const std::vector<Sentiment>& pred);

struct ClassPrf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Per-class precision/recall/F1; any 0/0 denominator yields 0 for that
// quantity (a class absent from both gold and predictions scores 0, not 1).
ClassPrf class_prf(const ConfusionMatrix& cm, Sentiment cls);

// Unweighted mean of the three per-class F1 values; all three classes
// always enter the average, present in the data or not.
double macro_f1(const ConfusionMatrix& cm);

struct EvalReport {
  std::array<ClassPrf, 3> per_class;  // canonical order (-1, 0, 1)
  ClassPrf macro;                     // unweighted means of the columns
};

EvalReport evaluate(const ConfusionMatrix& cm);

// Table with rows Overall, Positive, Neutral, Negative and columns
// Precision, Recall, F1-Score, printed to 3 decimals.
std::string render_report(const EvalReport& report);

// The same report as a canonical JSON object.
std::string report_to_json(const EvalReport& report);

}  // namespace cmsa
