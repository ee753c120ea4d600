// Python surface over the toolkit's main operations: training, prediction,
// evaluation, the fixed experiment grid, and the synthetic corpus generator.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cmsa/metrics.hpp"
#include "cmsa/pipeline.hpp"
#include "cmsa/synthetic.hpp"

namespace py = pybind11;

namespace {

cmsa::ExperimentConfig config_from_args(const std::string& preset,
                                        const std::string& config_json) {
  cmsa::ExperimentConfig config;
  if (!preset.empty()) config = cmsa::resolve_preset(preset);
  if (!config_json.empty()) cmsa::apply_config_json(config, config_json);
  return config;
}

py::dict prf_dict(const cmsa::ClassPrf& prf) {
  py::dict d;
  d["precision"] = prf.precision;
  d["recall"] = prf.recall;
  d["f1"] = prf.f1;
  return d;
}

py::dict report_dict(const cmsa::EvalReport& report) {
  py::dict d;
  d["overall"] = prf_dict(report.macro);
  d["negative"] = prf_dict(report.per_class[0]);
  d["neutral"] = prf_dict(report.per_class[1]);
  d["positive"] = prf_dict(report.per_class[2]);
  return d;
}

std::vector<cmsa::Sentiment> to_sentiments(const std::vector<long long>& values) {
  std::vector<cmsa::Sentiment> out;
  out.reserve(values.size());
  for (long long v : values) out.push_back(cmsa::sentiment_from_int(v));
  return out;
}

}  // namespace

PYBIND11_MODULE(_cmsa, m) {
  m.doc() = "code-mixed sentiment classification toolkit";

  py::register_exception<cmsa::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<cmsa::PresetError>(m, "PresetError", PyExc_ValueError);
  py::register_exception<cmsa::ValidationError>(m, "ValidationError", PyExc_ValueError);

  m.def(
      "train",
      [](const std::string& corpus_path, const std::string& out_path,
         const std::string& preset, const std::string& config_json) {
        const auto config = config_from_args(preset, config_json);
        const cmsa::TrainResult result = cmsa::run_train(config, corpus_path, out_path);
        py::dict d = report_dict(result.dev_report);
        d["n_train"] = result.n_train;
        d["n_dev"] = result.n_dev;
        return d;
      },
      py::arg("corpus_path"), py::arg("out_path") = "", py::arg("preset") = "",
      py::arg("config_json") = "",
      "Train a model; returns the dev evaluation plus split sizes.");

  m.def("predict", &cmsa::run_predict, py::arg("model_path"), py::arg("corpus_path"),
        py::arg("out_path"), py::arg("embeddings") = "",
        "Label a corpus with a stored model; writes the prediction file.");

  m.def(
      "evaluate",
      [](const std::string& gold_path, const std::string& pred_path) {
        return report_dict(cmsa::run_eval(gold_path, pred_path));
      },
      py::arg("gold_path"), py::arg("pred_path"),
      "Score a prediction file against a labeled corpus.");

  m.def(
      "grid",
      [](const std::string& corpus_path, const std::string& report_path,
         const std::string& preset, const std::string& config_json) {
        const auto config = config_from_args(preset, config_json);
        const cmsa::GridReport report = cmsa::run_grid(config, corpus_path, report_path);
        py::list rows;
        for (const cmsa::GridRow& row : report.rows) {
          py::dict d = prf_dict(row.macro);
          d["model"] = cmsa::model_kind_name(row.model);
          d["features"] = cmsa::feature_spec_name(row.features);
          rows.append(d);
        }
        py::dict d;
        d["rows"] = rows;
        d["skipped"] = report.skipped;
        d["n_train"] = report.n_train;
        d["n_dev"] = report.n_dev;
        return d;
      },
      py::arg("corpus_path"), py::arg("report_path") = "", py::arg("preset") = "",
      py::arg("config_json") = "", "Run the fixed model/feature grid.");

  m.def(
      "resolve_preset",
      [](const std::string& name) { return cmsa::config_to_json(cmsa::resolve_preset(name)); },
      py::arg("name"), "Resolve a preset name to its config JSON.");

  m.def(
      "default_config", [] { return cmsa::config_to_json(cmsa::ExperimentConfig{}); },
      "The default config as JSON.");

  m.def("make_synthetic_corpus", &cmsa::make_synthetic_corpus_json, py::arg("n_samples"),
        py::arg("seed") = 42,
        "A labeled synthetic code-mixed corpus in the shared-task JSON format.");

  m.def(
      "macro_f1",
      [](const std::vector<long long>& gold, const std::vector<long long>& pred) {
        return cmsa::macro_f1(
            cmsa::confusion_matrix(to_sentiments(gold), to_sentiments(pred)));
      },
      py::arg("gold"), py::arg("pred"),
      "Macro F1 over sentiment labels in {-1, 0, 1}.");

  m.def(
      "tokenize",
      [](const std::string& text) { return cmsa::tokenize(text); },
      py::arg("text"), "Case-folded whitespace tokenization.");

  py::class_<cmsa::ArtifactPredictor>(m, "Predictor",
                                      "Applies a stored model artifact to raw text.")
      .def(py::init([](const std::string& model_path, const std::string& embeddings) {
             return cmsa::ArtifactPredictor(cmsa::load_artifact_file(model_path),
                                            embeddings);
           }),
           py::arg("model_path"), py::arg("embeddings") = "")
      .def(
          "predict",
          [](const cmsa::ArtifactPredictor& self, const std::string& text) {
            const cmsa::Prediction pred = self.predict(text);
            py::dict d;
            d["sentiment"] = cmsa::to_int(pred.label);
            d["probs"] = pred.probs;
            return d;
          },
          py::arg("text"), "Predict one text; returns sentiment and class probabilities.");
}
