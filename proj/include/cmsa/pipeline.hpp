#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cmsa/corpus.hpp"
#include "cmsa/embedding.hpp"
#include "cmsa/ensemble.hpp"
#include "cmsa/errors.hpp"
#include "cmsa/forest.hpp"
#include "cmsa/linear.hpp"
#include "cmsa/metrics.hpp"
#include "cmsa/neural.hpp"
#include "cmsa/ngram.hpp"

namespace cmsa {

enum class ModelKind { svm, logreg, forest, voting, mlp, bilstm };

enum class FeatureKind { word_ngram, char_ngram, embed_avg, embed_seq };

struct FeatureSpec {
  FeatureKind kind = FeatureKind::char_ngram;
  int min_n = 2;
  int max_n = 6;
};

const char* model_kind_name(ModelKind kind);
const char* feature_kind_name(FeatureKind kind);
ModelKind model_kind_from_name(const std::string& name);

// "word_ngram(1,3)", "char_ngram(2,6)", "embed_avg", "embed_seq".
std::string feature_spec_name(const FeatureSpec& spec);
FeatureSpec feature_spec_from_name(const std::string& name);

struct ExperimentConfig {
  ModelKind model = ModelKind::svm;
  FeatureSpec features{FeatureKind::char_ngram, 2, 6};
  std::uint64_t seed = 42;
  double split_ratio = 0.85;
  std::string language_pair;
  std::string embeddings_path;  // required for embed_* features

  SvmParams svm;
  LogRegParams logreg;
  ForestParams forest;
  MlpParams mlp;
  BiLstmParams bilstm;

  int min_df = 1;
  std::size_t dense_feature_cap = 20000;  // top-k terms by df for densified n-grams
  std::size_t max_len = 64;               // sequence length cap for embed_seq
};

// Model/feature compatibility and general sanity. Throws ConfigError.
void validate_config(const ExperimentConfig& config);

// "model1" -> voting + char_ngram(2,6); "model2" -> svm + char_ngram(2,6);
// everything else defaults. Throws PresetError on unknown names.
ExperimentConfig resolve_preset(const std::string& name);

// Overlays keys of a JSON config document onto `config` (present keys win).
// Throws ConfigError on unknown keys or ill-typed values.
void apply_config_json(ExperimentConfig& config, const std::string& json_text);

std::string config_to_json(const ExperimentConfig& config);

using ClassifierModel =
    std::variant<OvoSvmModel, LogRegModel, RandomForest, VotingEnsemble, MlpModel,
                 BiLstmModel>;

struct EmbeddingRef {
  std::string path;
  std::size_t dim = 0;
};

// Everything needed to reproduce predictions: config snapshot, fitted
// feature extractor (TF-IDF model or embedding reference) and the fitted
// classifier. Serialized as a canonical JSON document, format_version 1.
struct ModelArtifact {
  int format_version = 1;
  std::string language_pair;
  ExperimentConfig config;
  FeatureSpec features;
  std::optional<TfidfModel> tfidf;
  std::optional<EmbeddingRef> embedding;
  ClassifierModel model;
};

// Canonical serialization: sorted keys, round-trip float formatting, no
// volatile fields, so identical artifacts are identical bytes.
std::string save_artifact(const ModelArtifact& artifact);

// Throws ArtifactError on a format_version other than 1, FormatError on
// truncated or malformed bytes.
ModelArtifact load_artifact(const std::string& bytes);

void save_artifact_file(const ModelArtifact& artifact, const std::string& path);
ModelArtifact load_artifact_file(const std::string& path);

// Applies a loaded artifact to raw text. Loads the referenced embedding
// table when the artifact needs one (embeddings_override, when non-empty,
// replaces the stored path). Throws ArtifactError when the table's
// dimension does not match the trained model.
class ArtifactPredictor {
 public:
  explicit ArtifactPredictor(ModelArtifact artifact,
                             const std::string& embeddings_override = "");

  Prediction predict(const std::string& text) const;
  const ModelArtifact& artifact() const { return artifact_; }

 private:
  ModelArtifact artifact_;
  std::optional<EmbeddingTable> table_;
};

struct TrainResult {
  ModelArtifact artifact;
  EvalReport dev_report;
  std::size_t n_train = 0;
  std::size_t n_dev = 0;
};

// Splits per config, fits features on the train split only, fits the model,
// and evaluates on the held-out split. Training data must be fully labeled.
TrainResult train_on_dataset(const ExperimentConfig& config, const Dataset& ds);

// train_on_dataset plus artifact I/O: reads the corpus, writes the artifact
// to out_path (empty = don't write).
TrainResult run_train(const ExperimentConfig& config, const std::string& corpus_path,
                      const std::string& out_path);

// Predicts one label per sample in input order and writes the prediction
// file, which by construction passes validate_predictions against the
// corpus ids.
void run_predict(const std::string& model_path, const std::string& corpus_path,
                 const std::string& out_path,
                 const std::string& embeddings_override = "");

// Scores a prediction file against a labeled corpus. Prediction ids must
// cover the gold ids exactly; otherwise throws ValidationError carrying the
// validation report.
EvalReport run_eval(const std::string& gold_path, const std::string& pred_path);

struct GridRow {
  ModelKind model;
  FeatureSpec features;
  ClassPrf macro;  // dev macro precision / recall / F1
};

struct GridReport {
  std::vector<GridRow> rows;
  std::vector<std::string> skipped;  // rows skipped with a notice
  std::size_t n_train = 0;
  std::size_t n_dev = 0;
};

// Runs the fixed configuration grid (the n-gram and embedding rows of the
// development-results table) on one fixed split of the corpus. Embedding
// rows are skipped with a notice when no embeddings file is configured.
// Rows are ordered by (model, feature); row seeds derive from
// (config.seed, row index). report_path, when non-empty, receives the
// report as JSON.
GridReport run_grid(const ExperimentConfig& config, const std::string& corpus_path,
                    const std::string& report_path);

std::string render_grid(const GridReport& report);

}  // namespace cmsa
