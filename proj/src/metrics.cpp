#include "cmsa/metrics.hpp"

#include <cstdio>

#include <json.hpp>

namespace cmsa {

long long ConfusionMatrix::total() const {
  long long n = 0;
  for (const auto& row : counts)
    for (long long c : row) n += c;
  return n;
}

ConfusionMatrix confusion_matrix(const std::vector<Sentiment>& gold,
                                 const std::vector<Sentiment>& pred) {
  if (gold.size() != pred.size()) {
    throw ArityError("gold and pred differ in length: " + std::to_string(gold.size()) +
                     " vs " + std::to_string(pred.size()));
  }
  if (gold.empty()) throw EmptyEvalError("nothing to evaluate");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < gold.size(); ++i) cm.add(gold[i], pred[i]);
  return cm;
}

ClassPrf class_prf(const ConfusionMatrix& cm, Sentiment cls) {
  const auto k = static_cast<std::size_t>(class_index(cls));
  long long tp = cm.counts[k][k];
  long long gold_total = 0, pred_total = 0;
  for (std::size_t j = 0; j < 3; ++j) {
    gold_total += cm.counts[k][j];
    pred_total += cm.counts[j][k];
  }
  ClassPrf out;
  out.precision = pred_total > 0 ? static_cast<double>(tp) / pred_total : 0.0;
  out.recall = gold_total > 0 ? static_cast<double>(tp) / gold_total : 0.0;
  const double pr = out.precision + out.recall;
  out.f1 = pr > 0.0 ? 2.0 * out.precision * out.recall / pr : 0.0;
  return out;
}

double macro_f1(const ConfusionMatrix& cm) {
  double sum = 0.0;
  for (Sentiment cls : kClasses) sum += class_prf(cm, cls).f1;
  return sum / static_cast<double>(kNumClasses);
}

EvalReport evaluate(const ConfusionMatrix& cm) {
  EvalReport report;
  for (Sentiment cls : kClasses) {
    report.per_class[static_cast<std::size_t>(class_index(cls))] = class_prf(cm, cls);
  }
  for (const ClassPrf& prf : report.per_class) {
    report.macro.precision += prf.precision / kNumClasses;
    report.macro.recall += prf.recall / kNumClasses;
    report.macro.f1 += prf.f1 / kNumClasses;
  }
  return report;
}

std::string render_report(const EvalReport& report) {
  char line[128];
  std::string out = "          Precision  Recall  F1-Score\n";
  auto row = [&](const char* name, const ClassPrf& prf) {
    std::snprintf(line, sizeof(line), "%-13s %.3f   %.3f     %.3f\n", name,
                  prf.precision, prf.recall, prf.f1);
    out += line;
  };
  row("Overall", report.macro);
  row("Positive", report.per_class[2]);
  row("Neutral", report.per_class[1]);
  row("Negative", report.per_class[0]);
  return out;
}

std::string report_to_json(const EvalReport& report) {
  using nlohmann::json;
  auto prf = [](const ClassPrf& p) {
    return json{{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}};
  };
  json doc{{"overall", prf(report.macro)},
           {"negative", prf(report.per_class[0])},
           {"neutral", prf(report.per_class[1])},
           {"positive", prf(report.per_class[2])}};
  return doc.dump();
}

}  // namespace cmsa
