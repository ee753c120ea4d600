#include "cmsa/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace cmsa {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Names
// ---------------------------------------------------------------------------

const char* model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::svm: return "svm";
    case ModelKind::logreg: return "logreg";
    case ModelKind::forest: return "forest";
    case ModelKind::voting: return "voting";
    case ModelKind::mlp: return "mlp";
    case ModelKind::bilstm: return "bilstm";
  }
  return "?";
}

const char* feature_kind_name(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::word_ngram: return "word_ngram";
    case FeatureKind::char_ngram: return "char_ngram";
    case FeatureKind::embed_avg: return "embed_avg";
    case FeatureKind::embed_seq: return "embed_seq";
  }
  return "?";
}

ModelKind model_kind_from_name(const std::string& name) {
  if (name == "svm") return ModelKind::svm;
  if (name == "logreg") return ModelKind::logreg;
  if (name == "forest") return ModelKind::forest;
  if (name == "voting") return ModelKind::voting;
  if (name == "mlp") return ModelKind::mlp;
  if (name == "bilstm") return ModelKind::bilstm;
  throw ConfigError("unknown model '" + name +
                    "': valid models are svm, logreg, forest, voting, mlp, bilstm");
}

std::string feature_spec_name(const FeatureSpec& spec) {
  switch (spec.kind) {
    case FeatureKind::word_ngram:
    case FeatureKind::char_ngram:
      return std::string(feature_kind_name(spec.kind)) + "(" +
             std::to_string(spec.min_n) + "," + std::to_string(spec.max_n) + ")";
    default:
      return feature_kind_name(spec.kind);
  }
}

FeatureSpec feature_spec_from_name(const std::string& name) {
  if (name == "embed_avg") return {FeatureKind::embed_avg, 0, 0};
  if (name == "embed_seq") return {FeatureKind::embed_seq, 0, 0};
  FeatureSpec spec;
  std::string prefix;
  if (name.rfind("word_ngram(", 0) == 0) {
    spec.kind = FeatureKind::word_ngram;
    prefix = "word_ngram(";
  } else if (name.rfind("char_ngram(", 0) == 0) {
    spec.kind = FeatureKind::char_ngram;
    prefix = "char_ngram(";
  } else {
    throw ConfigError("unknown feature spec '" + name +
                      "': expected word_ngram(m,n), char_ngram(m,n), embed_avg or "
                      "embed_seq");
  }
  int min_n = 0, max_n = 0;
  char closing = 0;
  std::istringstream body(name.substr(prefix.size()));
  char comma = 0;
  if (!(body >> min_n >> comma >> max_n >> closing) || comma != ',' ||
      closing != ')' || body.peek() != EOF || min_n < 1 || max_n < min_n) {
    throw ConfigError("malformed n-gram range in feature spec '" + name + "'");
  }
  spec.min_n = min_n;
  spec.max_n = max_n;
  return spec;
}

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

void validate_config(const ExperimentConfig& config) {
  const bool ngram_features = config.features.kind == FeatureKind::word_ngram ||
                              config.features.kind == FeatureKind::char_ngram;
  if (ngram_features &&
      (config.features.min_n < 1 || config.features.max_n < config.features.min_n)) {
    throw ConfigError("n-gram range must satisfy 1 <= min_n <= max_n");
  }
  if (!(config.split_ratio > 0.0 && config.split_ratio < 1.0)) {
    throw ConfigError("split_ratio must lie strictly between 0 and 1");
  }
  const bool embed_features = config.features.kind == FeatureKind::embed_avg ||
                              config.features.kind == FeatureKind::embed_seq;
  if (embed_features && config.embeddings_path.empty()) {
    throw ConfigError(std::string(feature_kind_name(config.features.kind)) +
                      " features need an embeddings_path");
  }
  if (config.model == ModelKind::bilstm &&
      config.features.kind != FeatureKind::embed_seq) {
    throw ConfigError("bilstm requires embed_seq features");
  }
  if (config.model != ModelKind::bilstm &&
      config.features.kind == FeatureKind::embed_seq) {
    throw ConfigError("embed_seq features fit only the bilstm model");
  }
  if (config.min_df < 1) throw ConfigError("min_df must be >= 1");
  if (config.dense_feature_cap < 1) throw ConfigError("dense_feature_cap must be >= 1");
  if (config.max_len < 1) throw ConfigError("max_len must be >= 1");

  if (config.svm.c <= 0.0 || config.svm.tol <= 0.0 || config.svm.max_epochs < 1) {
    throw ConfigError("svm needs c > 0, tol > 0, max_epochs >= 1");
  }
  if (config.logreg.lambda < 0.0 || config.logreg.lr <= 0.0 ||
      config.logreg.max_iters < 1 || config.logreg.tol < 0.0) {
    throw ConfigError("logreg needs lambda >= 0, lr > 0, max_iters >= 1, tol >= 0");
  }
  if (config.forest.n_trees < 1 || config.forest.tree.min_samples_split < 2 ||
      config.forest.tree.max_depth < 0) {
    throw ConfigError("forest needs n_trees >= 1, min_samples_split >= 2, "
                      "max_depth >= 0");
  }
  if (config.mlp.hidden_units < 1 || config.mlp.dropout_rate < 0.0 ||
      config.mlp.dropout_rate >= 1.0 || config.mlp.learning_rate <= 0.0 ||
      config.mlp.epochs < 0 || config.mlp.batch_size < 1 || config.mlp.patience < 1) {
    throw ConfigError("mlp hyperparameters out of range");
  }
  if (config.bilstm.units < 1 || config.bilstm.learning_rate <= 0.0 ||
      config.bilstm.epochs < 0 || config.bilstm.batch_size < 1 ||
      config.bilstm.clip_norm < 0.0 || config.bilstm.patience < 1) {
    throw ConfigError("bilstm hyperparameters out of range");
  }
}

ExperimentConfig resolve_preset(const std::string& name) {
  ExperimentConfig config;
  if (name == "model1") {
    config.model = ModelKind::voting;
    config.features = {FeatureKind::char_ngram, 2, 6};
  } else if (name == "model2") {
    config.model = ModelKind::svm;
    config.features = {FeatureKind::char_ngram, 2, 6};
  } else {
    throw PresetError("unknown preset '" + name +
                      "': valid presets are model1 (voting ensemble) and model2 "
                      "(linear SVM), both over char_ngram(2,6)");
  }
  return config;
}

namespace {

json config_json(const ExperimentConfig& config) {
  return json{
      {"model", model_kind_name(config.model)},
      {"features", feature_spec_name(config.features)},
      {"seed", config.seed},
      {"split_ratio", config.split_ratio},
      {"language_pair", config.language_pair},
      {"embeddings_path", config.embeddings_path},
      {"min_df", config.min_df},
      {"dense_feature_cap", config.dense_feature_cap},
      {"max_len", config.max_len},
      {"svm",
       {{"c", config.svm.c}, {"tol", config.svm.tol},
        {"max_epochs", config.svm.max_epochs}}},
      {"logreg",
       {{"lambda", config.logreg.lambda}, {"lr", config.logreg.lr},
        {"max_iters", config.logreg.max_iters}, {"tol", config.logreg.tol}}},
      {"forest",
       {{"n_trees", config.forest.n_trees}, {"bootstrap", config.forest.bootstrap},
        {"max_depth", config.forest.tree.max_depth},
        {"min_samples_split", config.forest.tree.min_samples_split}}},
      {"mlp",
       {{"hidden_units", config.mlp.hidden_units},
        {"dropout_rate", config.mlp.dropout_rate},
        {"learning_rate", config.mlp.learning_rate}, {"epochs", config.mlp.epochs},
        {"batch_size", config.mlp.batch_size},
        {"early_stopping", config.mlp.early_stopping},
        {"patience", config.mlp.patience}}},
      {"bilstm",
       {{"units", config.bilstm.units},
        {"learning_rate", config.bilstm.learning_rate},
        {"epochs", config.bilstm.epochs}, {"batch_size", config.bilstm.batch_size},
        {"clip_norm", config.bilstm.clip_norm},
        {"early_stopping", config.bilstm.early_stopping},
        {"patience", config.bilstm.patience}}}};
}

template <typename T>
T typed(const json& value, const char* key) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

void apply_section(const json& section, const std::string& name,
                   const std::unordered_map<std::string, std::function<void(const json&)>>&
                       setters) {
  if (!section.is_object()) {
    throw ConfigError("config key '" + name + "' must be an object");
  }
  for (const auto& [key, value] : section.items()) {
    auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigError("unknown config key '" + name + "." + key + "'");
    }
    it->second(value);
  }
}

void apply_config(ExperimentConfig& config, const json& doc) {
  if (!doc.is_object()) throw ConfigError("config document must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "model") {
      config.model = model_kind_from_name(typed<std::string>(value, "model"));
    } else if (key == "features") {
      config.features = feature_spec_from_name(typed<std::string>(value, "features"));
    } else if (key == "seed") {
      config.seed = typed<std::uint64_t>(value, "seed");
    } else if (key == "split_ratio") {
      config.split_ratio = typed<double>(value, "split_ratio");
    } else if (key == "language_pair") {
      config.language_pair = typed<std::string>(value, "language_pair");
    } else if (key == "embeddings_path") {
      config.embeddings_path = typed<std::string>(value, "embeddings_path");
    } else if (key == "min_df") {
      config.min_df = typed<int>(value, "min_df");
    } else if (key == "dense_feature_cap") {
      config.dense_feature_cap = typed<std::size_t>(value, "dense_feature_cap");
    } else if (key == "max_len") {
      config.max_len = typed<std::size_t>(value, "max_len");
    } else if (key == "svm") {
      apply_section(value, "svm",
                    {{"c", [&](const json& v) { config.svm.c = typed<double>(v, "svm.c"); }},
                     {"tol",
                      [&](const json& v) { config.svm.tol = typed<double>(v, "svm.tol"); }},
                     {"max_epochs", [&](const json& v) {
                        config.svm.max_epochs = typed<int>(v, "svm.max_epochs");
                      }}});
    } else if (key == "logreg") {
      apply_section(
          value, "logreg",
          {{"lambda",
            [&](const json& v) { config.logreg.lambda = typed<double>(v, "logreg.lambda"); }},
           {"lr", [&](const json& v) { config.logreg.lr = typed<double>(v, "logreg.lr"); }},
           {"max_iters",
            [&](const json& v) { config.logreg.max_iters = typed<int>(v, "logreg.max_iters"); }},
           {"tol",
            [&](const json& v) { config.logreg.tol = typed<double>(v, "logreg.tol"); }}});
    } else if (key == "forest") {
      apply_section(
          value, "forest",
          {{"n_trees",
            [&](const json& v) { config.forest.n_trees = typed<int>(v, "forest.n_trees"); }},
           {"bootstrap",
            [&](const json& v) { config.forest.bootstrap = typed<bool>(v, "forest.bootstrap"); }},
           {"max_depth",
            [&](const json& v) { config.forest.tree.max_depth = typed<int>(v, "forest.max_depth"); }},
           {"min_samples_split", [&](const json& v) {
              config.forest.tree.min_samples_split =
                  typed<int>(v, "forest.min_samples_split");
            }}});
    } else if (key == "mlp") {
      apply_section(
          value, "mlp",
          {{"hidden_units",
            [&](const json& v) { config.mlp.hidden_units = typed<int>(v, "mlp.hidden_units"); }},
           {"dropout_rate",
            [&](const json& v) { config.mlp.dropout_rate = typed<double>(v, "mlp.dropout_rate"); }},
           {"learning_rate",
            [&](const json& v) {
              config.mlp.learning_rate = typed<double>(v, "mlp.learning_rate");
            }},
           {"epochs",
            [&](const json& v) { config.mlp.epochs = typed<int>(v, "mlp.epochs"); }},
           {"batch_size",
            [&](const json& v) { config.mlp.batch_size = typed<int>(v, "mlp.batch_size"); }},
           {"early_stopping",
            [&](const json& v) {
              config.mlp.early_stopping = typed<bool>(v, "mlp.early_stopping");
            }},
           {"patience",
            [&](const json& v) { config.mlp.patience = typed<int>(v, "mlp.patience"); }}});
    } else if (key == "bilstm") {
      apply_section(
          value, "bilstm",
          {{"units",
            [&](const json& v) { config.bilstm.units = typed<int>(v, "bilstm.units"); }},
           {"learning_rate",
            [&](const json& v) {
              config.bilstm.learning_rate = typed<double>(v, "bilstm.learning_rate");
            }},
           {"epochs",
            [&](const json& v) { config.bilstm.epochs = typed<int>(v, "bilstm.epochs"); }},
           {"batch_size",
            [&](const json& v) { config.bilstm.batch_size = typed<int>(v, "bilstm.batch_size"); }},
           {"clip_norm",
            [&](const json& v) { config.bilstm.clip_norm = typed<double>(v, "bilstm.clip_norm"); }},
           {"early_stopping",
            [&](const json& v) {
              config.bilstm.early_stopping = typed<bool>(v, "bilstm.early_stopping");
            }},
           {"patience",
            [&](const json& v) { config.bilstm.patience = typed<int>(v, "bilstm.patience"); }}});
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
}

}  // namespace

void apply_config_json(ExperimentConfig& config, const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  apply_config(config, doc);
}

std::string config_to_json(const ExperimentConfig& config) {
  return config_json(config).dump();
}

// ---------------------------------------------------------------------------
// Artifact serialization
// ---------------------------------------------------------------------------

namespace {

std::string read_file_or(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(std::string("cannot open ") + what + ": " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open for writing: " + path);
  out << bytes;
  if (!out) throw FormatError("failed writing: " + path);
}

json evec_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Eigen::VectorXd evec_from(const json& arr) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
  Eigen::Index i = 0;
  for (const json& entry : arr) v(i++) = entry.get<double>();
  return v;
}

json emat_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd emat_from(const json& rows) {
  const auto n_rows = static_cast<Eigen::Index>(rows.size());
  const auto n_cols =
      n_rows > 0 ? static_cast<Eigen::Index>(rows.front().size()) : Eigen::Index{0};
  Eigen::MatrixXd m(n_rows, n_cols);
  Eigen::Index r = 0;
  for (const json& row : rows) {
    if (static_cast<Eigen::Index>(row.size()) != n_cols) {
      throw FormatError("ragged matrix in artifact");
    }
    Eigen::Index c = 0;
    for (const json& entry : row) m(r, c++) = entry.get<double>();
    ++r;
  }
  return m;
}

json tfidf_json(const TfidfModel& model) {
  return json{{"unit", model.spec.unit == NGramUnit::character ? "char" : "word"},
              {"min_n", model.spec.min_n},
              {"max_n", model.spec.max_n},
              {"terms", model.vocab.terms},
              {"idf", model.idf},
              {"n_docs", model.n_docs}};
}

TfidfModel tfidf_from(const json& j) {
  TfidfModel model;
  const auto unit = j.at("unit").get<std::string>();
  if (unit == "char") {
    model.spec.unit = NGramUnit::character;
  } else if (unit == "word") {
    model.spec.unit = NGramUnit::word;
  } else {
    throw FormatError("unknown n-gram unit '" + unit + "' in artifact");
  }
  model.spec.min_n = j.at("min_n").get<int>();
  model.spec.max_n = j.at("max_n").get<int>();
  model.vocab.terms = j.at("terms").get<std::vector<std::string>>();
  model.idf = j.at("idf").get<std::vector<double>>();
  model.n_docs = j.at("n_docs").get<std::size_t>();
  if (model.idf.size() != model.vocab.terms.size()) {
    throw FormatError("idf/terms length mismatch in artifact");
  }
  model.vocab.build_index();
  return model;
}

json binary_model_json(const BinaryLinearModel& m) {
  return json{{"w", m.w}, {"b", m.b}};
}

BinaryLinearModel binary_model_from(const json& j) {
  BinaryLinearModel m;
  m.w = j.at("w").get<std::vector<double>>();
  m.b = j.at("b").get<double>();
  return m;
}

json svm_json(const OvoSvmModel& m) {
  json pairs = json::array();
  for (const BinaryLinearModel& pair_model : m.pair_models) {
    pairs.push_back(binary_model_json(pair_model));
  }
  return json{{"kind", "svm"}, {"dim", m.dim}, {"pairs", std::move(pairs)}};
}

OvoSvmModel svm_from(const json& j) {
  OvoSvmModel m;
  m.dim = j.at("dim").get<std::size_t>();
  const json& pairs = j.at("pairs");
  if (pairs.size() != m.pair_models.size()) {
    throw FormatError("svm artifact must hold exactly 3 pair models");
  }
  for (std::size_t p = 0; p < m.pair_models.size(); ++p) {
    m.pair_models[p] = binary_model_from(pairs[p]);
  }
  return m;
}

json logreg_json(const LogRegModel& m) {
  return json{{"kind", "logreg"},
              {"dim", m.dim},
              {"lambda", m.lambda},
              {"w", json::array({m.w[0], m.w[1], m.w[2]})},
              {"b", json::array({m.b[0], m.b[1], m.b[2]})}};
}

LogRegModel logreg_from(const json& j) {
  LogRegModel m;
  m.dim = j.at("dim").get<std::size_t>();
  m.lambda = j.at("lambda").get<double>();
  const json& w = j.at("w");
  const json& b = j.at("b");
  if (w.size() != 3 || b.size() != 3) {
    throw FormatError("logreg artifact must hold 3 weight rows and 3 biases");
  }
  for (std::size_t k = 0; k < 3; ++k) {
    m.w[k] = w[k].get<std::vector<double>>();
    m.b[k] = b[k].get<double>();
  }
  return m;
}

json forest_json(const RandomForest& m) {
  json trees = json::array();
  for (const DecisionTree& tree : m.trees) {
    json feature = json::array(), threshold = json::array(), left = json::array(),
         right = json::array(), counts = json::array();
    for (const TreeNode& node : tree.nodes) {
      feature.push_back(node.feature);
      threshold.push_back(node.threshold);
      left.push_back(node.left);
      right.push_back(node.right);
      counts.push_back(json::array({node.counts[0], node.counts[1], node.counts[2]}));
    }
    trees.push_back(json{{"feature", std::move(feature)},
                         {"threshold", std::move(threshold)},
                         {"left", std::move(left)},
                         {"right", std::move(right)},
                         {"counts", std::move(counts)}});
  }
  return json{{"kind", "forest"},
              {"dim", m.dim},
              {"seed", m.seed},
              {"trees", std::move(trees)}};
}

RandomForest forest_from(const json& j) {
  RandomForest m;
  m.dim = j.at("dim").get<std::size_t>();
  m.seed = j.at("seed").get<std::uint64_t>();
  for (const json& t : j.at("trees")) {
    DecisionTree tree;
    const json& feature = t.at("feature");
    const json& threshold = t.at("threshold");
    const json& left = t.at("left");
    const json& right = t.at("right");
    const json& counts = t.at("counts");
    const std::size_t n = feature.size();
    if (threshold.size() != n || left.size() != n || right.size() != n ||
        counts.size() != n) {
      throw FormatError("tree arrays disagree on length in artifact");
    }
    tree.nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      tree.nodes[i].feature = feature[i].get<std::int32_t>();
      tree.nodes[i].threshold = threshold[i].get<double>();
      tree.nodes[i].left = left[i].get<std::int32_t>();
      tree.nodes[i].right = right[i].get<std::int32_t>();
      const json& c = counts[i];
      if (c.size() != 3) throw FormatError("tree node counts must have 3 entries");
      for (std::size_t k = 0; k < 3; ++k) tree.nodes[i].counts[k] = c[k].get<long long>();
    }
    m.trees.push_back(std::move(tree));
  }
  return m;
}

json mlp_json(const MlpModel& m) {
  return json{{"kind", "mlp"},          {"w1", emat_json(m.w1)},
              {"b1", evec_json(m.b1)},  {"w2", emat_json(m.w2)},
              {"b2", evec_json(m.b2)},  {"dropout_rate", m.dropout_rate}};
}

MlpModel mlp_from(const json& j) {
  MlpModel m;
  m.w1 = emat_from(j.at("w1"));
  m.b1 = evec_from(j.at("b1"));
  m.w2 = emat_from(j.at("w2"));
  m.b2 = evec_from(j.at("b2"));
  m.dropout_rate = j.at("dropout_rate").get<double>();
  return m;
}

json gate_json(const LstmGate& g) {
  return json{{"w", emat_json(g.w)}, {"u", emat_json(g.u)}, {"b", evec_json(g.b)}};
}

LstmGate gate_from(const json& j) {
  return {emat_from(j.at("w")), emat_from(j.at("u")), evec_from(j.at("b"))};
}

json cell_json(const LstmCellParams& cell) {
  return json{{"input", gate_json(cell.input)},
              {"forget", gate_json(cell.forget)},
              {"output", gate_json(cell.output)},
              {"candidate", gate_json(cell.candidate)}};
}

LstmCellParams cell_from(const json& j) {
  return {gate_from(j.at("input")), gate_from(j.at("forget")),
          gate_from(j.at("output")), gate_from(j.at("candidate"))};
}

json bilstm_json(const BiLstmModel& m) {
  return json{{"kind", "bilstm"},
              {"forward", cell_json(m.forward_cell)},
              {"backward", cell_json(m.backward_cell)},
              {"w_out", emat_json(m.w_out)},
              {"b_out", evec_json(m.b_out)}};
}

BiLstmModel bilstm_from(const json& j) {
  BiLstmModel m;
  m.forward_cell = cell_from(j.at("forward"));
  m.backward_cell = cell_from(j.at("backward"));
  m.w_out = emat_from(j.at("w_out"));
  m.b_out = evec_from(j.at("b_out"));
  return m;
}

json model_json(const ClassifierModel& model) {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, OvoSvmModel>) return svm_json(m);
        if constexpr (std::is_same_v<T, LogRegModel>) return logreg_json(m);
        if constexpr (std::is_same_v<T, RandomForest>) return forest_json(m);
        if constexpr (std::is_same_v<T, VotingEnsemble>) {
          return json{{"kind", "voting"},
                      {"svm", svm_json(m.svm)},
                      {"logreg", logreg_json(m.logreg)},
                      {"forest", forest_json(m.forest)}};
        }
        if constexpr (std::is_same_v<T, MlpModel>) return mlp_json(m);
        if constexpr (std::is_same_v<T, BiLstmModel>) return bilstm_json(m);
        throw ArtifactError("unserializable model variant");
      },
      model);
}

ClassifierModel model_from(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "svm") return svm_from(j);
  if (kind == "logreg") return logreg_from(j);
  if (kind == "forest") return forest_from(j);
  if (kind == "voting") {
    VotingEnsemble ensemble;
    ensemble.svm = svm_from(j.at("svm"));
    ensemble.logreg = logreg_from(j.at("logreg"));
    ensemble.forest = forest_from(j.at("forest"));
    return ensemble;
  }
  if (kind == "mlp") return mlp_from(j);
  if (kind == "bilstm") return bilstm_from(j);
  throw FormatError("unknown model kind '" + kind + "' in artifact");
}

}  // namespace

std::string save_artifact(const ModelArtifact& artifact) {
  json doc{{"format_version", artifact.format_version},
           {"language_pair", artifact.language_pair},
           {"config", config_json(artifact.config)},
           {"features", feature_spec_name(artifact.features)},
           {"model", model_json(artifact.model)}};
  if (artifact.tfidf) doc["tfidf"] = tfidf_json(*artifact.tfidf);
  if (artifact.embedding) {
    doc["embedding"] =
        json{{"path", artifact.embedding->path}, {"dim", artifact.embedding->dim}};
  }
  return doc.dump();
}

ModelArtifact load_artifact(const std::string& bytes) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("artifact is not valid JSON: ") + e.what());
  }
  try {
    const int version = doc.at("format_version").get<int>();
    if (version != 1) {
      throw ArtifactError("unsupported artifact format_version " +
                          std::to_string(version) + " (this build reads version 1)");
    }
    ModelArtifact artifact;
    artifact.format_version = version;
    artifact.language_pair = doc.at("language_pair").get<std::string>();
    apply_config(artifact.config, doc.at("config"));
    artifact.features =
        feature_spec_from_name(doc.at("features").get<std::string>());
    if (doc.contains("tfidf")) artifact.tfidf = tfidf_from(doc["tfidf"]);
    if (doc.contains("embedding")) {
      artifact.embedding =
          EmbeddingRef{doc["embedding"].at("path").get<std::string>(),
                       doc["embedding"].at("dim").get<std::size_t>()};
    }
    artifact.model = model_from(doc.at("model"));
    return artifact;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed artifact: ") + e.what());
  }
}

void save_artifact_file(const ModelArtifact& artifact, const std::string& path) {
  write_file(path, save_artifact(artifact));
}

ModelArtifact load_artifact_file(const std::string& path) {
  return load_artifact(read_file_or(path, "model artifact"));
}

// ---------------------------------------------------------------------------
// Prediction
// ---------------------------------------------------------------------------

namespace {

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

// One code path for every (model, feature) combination; used for dev-set
// evaluation during training and by ArtifactPredictor afterwards so the two
// agree exactly.
Prediction predict_sample(const ClassifierModel& model, const FeatureSpec& features,
                          const TfidfModel* tfidf, const EmbeddingTable* table,
                          std::size_t max_len, const std::string& text) {
  if (features.kind == FeatureKind::embed_seq) {
    const auto* bilstm = std::get_if<BiLstmModel>(&model);
    if (bilstm == nullptr) {
      throw ArtifactError("embed_seq features require a bilstm model");
    }
    const PaddedSequence seq = sequence_embedding(tokenize(text), *table, max_len);
    Prediction pred;
    pred.probs = bilstm_encode(*bilstm, seq);
    pred.label = argmax_sentiment(pred.probs);
    return pred;
  }

  if (const auto* mlp = std::get_if<MlpModel>(&model)) {
    Eigen::VectorXd x;
    if (features.kind == FeatureKind::embed_avg) {
      x = to_eigen(average_embedding(tokenize(text), *table));
    } else {
      x = to_eigen(to_dense(transform(*tfidf, text)));
    }
    Prediction pred;
    pred.probs = mlp_forward(*mlp, x, RunMode::infer);
    pred.label = argmax_sentiment(pred.probs);
    return pred;
  }

  SparseVector x;
  if (features.kind == FeatureKind::embed_avg) {
    x = sparse_from_dense(average_embedding(tokenize(text), *table));
  } else {
    x = transform(*tfidf, text);
  }
  if (const auto* svm = std::get_if<OvoSvmModel>(&model)) return predict_ovo(*svm, x);
  if (const auto* lr = std::get_if<LogRegModel>(&model)) return predict_logreg(*lr, x);
  if (const auto* rf = std::get_if<RandomForest>(&model)) return predict_forest(*rf, x);
  if (const auto* vote = std::get_if<VotingEnsemble>(&model)) {
    return predict_voting(*vote, x);
  }
  throw ArtifactError("model and feature kinds do not fit together");
}

}  // namespace

ArtifactPredictor::ArtifactPredictor(ModelArtifact artifact,
                                     const std::string& embeddings_override)
    : artifact_(std::move(artifact)) {
  const FeatureKind kind = artifact_.features.kind;
  if (kind == FeatureKind::word_ngram || kind == FeatureKind::char_ngram) {
    if (!artifact_.tfidf) {
      throw ArtifactError("artifact with n-gram features lacks the tfidf model");
    }
    return;
  }
  std::string path = embeddings_override;
  if (path.empty()) {
    if (!artifact_.embedding) {
      throw ArtifactError("artifact with embedding features lacks the embedding "
                          "reference; pass an embeddings file");
    }
    path = artifact_.embedding->path;
  }
  table_ = load_embeddings_file(path);
  if (artifact_.embedding && artifact_.embedding->dim != 0 &&
      table_->dim != artifact_.embedding->dim) {
    throw ArtifactError("embedding table dimension " + std::to_string(table_->dim) +
                        " does not match the trained dimension " +
                        std::to_string(artifact_.embedding->dim));
  }
}

Prediction ArtifactPredictor::predict(const std::string& text) const {
  return predict_sample(artifact_.model, artifact_.features,
                        artifact_.tfidf ? &*artifact_.tfidf : nullptr,
                        table_ ? &*table_ : nullptr, artifact_.config.max_len, text);
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

namespace {

std::vector<Sentiment> require_labels(const Dataset& ds) {
  std::vector<Sentiment> labels;
  labels.reserve(ds.samples.size());
  for (const Sample& sample : ds.samples) {
    if (!sample.label) {
      throw LabelError("sample " + std::to_string(sample.id) +
                           " lacks a sentiment label",
                       sample.id);
    }
    labels.push_back(*sample.label);
  }
  return labels;
}

TrainResult train_on_split(const ExperimentConfig& config, const Dataset& train,
                           const Dataset& dev) {
  const std::vector<Sentiment> train_labels = require_labels(train);
  const std::vector<Sentiment> dev_labels = require_labels(dev);

  ModelArtifact artifact;
  artifact.config = config;
  artifact.features = config.features;
  artifact.language_pair =
      config.language_pair.empty() ? train.language_pair : config.language_pair;

  const FeatureKind kind = config.features.kind;
  EmbeddingTable table;
  if (kind == FeatureKind::word_ngram || kind == FeatureKind::char_ngram) {
    NGramSpec spec;
    spec.unit = kind == FeatureKind::char_ngram ? NGramUnit::character : NGramUnit::word;
    spec.min_n = config.features.min_n;
    spec.max_n = config.features.max_n;
    TfidfOptions options;
    options.min_df = config.min_df;
    if (config.model == ModelKind::mlp) options.max_features = config.dense_feature_cap;
    std::vector<std::string> texts;
    texts.reserve(train.samples.size());
    for (const Sample& sample : train.samples) texts.push_back(sample.text);
    artifact.tfidf = fit_tfidf(texts, spec, options);
  } else {
    table = load_embeddings_file(config.embeddings_path);
    artifact.embedding = EmbeddingRef{config.embeddings_path, table.dim};
  }
  const TfidfModel* tfidf = artifact.tfidf ? &*artifact.tfidf : nullptr;
  const EmbeddingTable* table_ptr = artifact.embedding ? &table : nullptr;

  switch (config.model) {
    case ModelKind::svm:
    case ModelKind::logreg:
    case ModelKind::forest:
    case ModelKind::voting: {
      std::vector<SparseVector> xs;
      xs.reserve(train.samples.size());
      for (const Sample& sample : train.samples) {
        xs.push_back(kind == FeatureKind::embed_avg
                         ? sparse_from_dense(
                               average_embedding(tokenize(sample.text), table))
                         : transform(*tfidf, sample.text));
      }
      if (config.model == ModelKind::svm) {
        artifact.model = train_ovo_svm(xs, train_labels, config.svm, config.seed);
      } else if (config.model == ModelKind::logreg) {
        artifact.model = train_logreg(xs, train_labels, config.logreg);
      } else if (config.model == ModelKind::forest) {
        artifact.model = fit_forest(xs, train_labels, config.forest, config.seed);
      } else {
        artifact.model =
            fit_voting(xs, train_labels,
                       {config.svm, config.logreg, config.forest}, config.seed);
      }
      break;
    }
    case ModelKind::mlp: {
      std::vector<Eigen::VectorXd> xs;
      xs.reserve(train.samples.size());
      for (const Sample& sample : train.samples) {
        xs.push_back(kind == FeatureKind::embed_avg
                         ? to_eigen(average_embedding(tokenize(sample.text), table))
                         : to_eigen(to_dense(transform(*tfidf, sample.text))));
      }
      std::vector<Eigen::VectorXd> dev_xs;
      if (config.mlp.early_stopping) {
        dev_xs.reserve(dev.samples.size());
        for (const Sample& sample : dev.samples) {
          dev_xs.push_back(
              kind == FeatureKind::embed_avg
                  ? to_eigen(average_embedding(tokenize(sample.text), table))
                  : to_eigen(to_dense(transform(*tfidf, sample.text))));
        }
      }
      artifact.model =
          train_mlp(xs, train_labels, config.mlp, config.seed,
                    config.mlp.early_stopping ? &dev_xs : nullptr,
                    config.mlp.early_stopping ? &dev_labels : nullptr);
      break;
    }
    case ModelKind::bilstm: {
      std::vector<PaddedSequence> seqs;
      seqs.reserve(train.samples.size());
      for (const Sample& sample : train.samples) {
        seqs.push_back(
            sequence_embedding(tokenize(sample.text), table, config.max_len));
      }
      std::vector<PaddedSequence> dev_seqs;
      if (config.bilstm.early_stopping) {
        dev_seqs.reserve(dev.samples.size());
        for (const Sample& sample : dev.samples) {
          dev_seqs.push_back(
              sequence_embedding(tokenize(sample.text), table, config.max_len));
        }
      }
      artifact.model =
          train_bilstm(seqs, train_labels, config.bilstm, config.seed,
                       config.bilstm.early_stopping ? &dev_seqs : nullptr,
                       config.bilstm.early_stopping ? &dev_labels : nullptr);
      break;
    }
  }

  std::vector<Sentiment> dev_pred;
  dev_pred.reserve(dev.samples.size());
  for (const Sample& sample : dev.samples) {
    dev_pred.push_back(predict_sample(artifact.model, artifact.features, tfidf,
                                      table_ptr, config.max_len, sample.text)
                           .label);
  }

  TrainResult result;
  result.artifact = std::move(artifact);
  result.dev_report = evaluate(confusion_matrix(dev_labels, dev_pred));
  result.n_train = train.samples.size();
  result.n_dev = dev.samples.size();
  return result;
}

}  // namespace

TrainResult train_on_dataset(const ExperimentConfig& config, const Dataset& ds) {
  validate_config(config);
  auto [train, dev] = split_dataset(ds, config.split_ratio, config.seed);
  return train_on_split(config, train, dev);
}

TrainResult run_train(const ExperimentConfig& config, const std::string& corpus_path,
                      const std::string& out_path) {
  const Dataset ds = parse_corpus_file(corpus_path);
  TrainResult result = train_on_dataset(config, ds);
  if (!out_path.empty()) save_artifact_file(result.artifact, out_path);
  return result;
}

void run_predict(const std::string& model_path, const std::string& corpus_path,
                 const std::string& out_path, const std::string& embeddings_override) {
  ModelArtifact artifact = load_artifact_file(model_path);
  const Dataset ds = parse_corpus_file(corpus_path);
  const ArtifactPredictor predictor(std::move(artifact), embeddings_override);

  std::vector<long long> ids;
  std::vector<Sentiment> labels;
  ids.reserve(ds.samples.size());
  labels.reserve(ds.samples.size());
  for (const Sample& sample : ds.samples) {
    ids.push_back(sample.id);
    labels.push_back(predictor.predict(sample.text).label);
  }
  write_file(out_path, write_predictions(ids, labels));
}

EvalReport run_eval(const std::string& gold_path, const std::string& pred_path) {
  const Dataset ds = parse_corpus_file(gold_path);
  const std::vector<Sentiment> gold = require_labels(ds);

  const std::string raw = read_file_or(pred_path, "prediction file");
  std::vector<long long> ids;
  ids.reserve(ds.samples.size());
  for (const Sample& sample : ds.samples) ids.push_back(sample.id);

  const ValidationReport report = validate_predictions(ids, raw);
  if (!report.valid()) {
    throw ValidationError("prediction file does not cover the gold ids exactly:\n" +
                          report.to_string());
  }

  std::unordered_map<long long, long long> by_id;
  for (const auto& [id, value] : parse_predictions(raw)) by_id[id] = value;
  std::vector<Sentiment> pred;
  pred.reserve(ids.size());
  for (long long id : ids) pred.push_back(sentiment_from_int(by_id.at(id), id));

  return evaluate(confusion_matrix(gold, pred));
}

// ---------------------------------------------------------------------------
// Grid
// ---------------------------------------------------------------------------

namespace {

// The development-results grid, in canonical (model, feature) order.
const std::vector<std::pair<ModelKind, FeatureSpec>> kGridRows = {
    {ModelKind::svm, {FeatureKind::word_ngram, 1, 1}},
    {ModelKind::svm, {FeatureKind::word_ngram, 1, 2}},
    {ModelKind::svm, {FeatureKind::word_ngram, 1, 3}},
    {ModelKind::svm, {FeatureKind::char_ngram, 2, 6}},
    {ModelKind::svm, {FeatureKind::char_ngram, 3, 6}},
    {ModelKind::svm, {FeatureKind::embed_avg, 0, 0}},
    {ModelKind::voting, {FeatureKind::char_ngram, 2, 6}},
    {ModelKind::mlp, {FeatureKind::word_ngram, 1, 1}},
    {ModelKind::mlp, {FeatureKind::word_ngram, 1, 2}},
    {ModelKind::mlp, {FeatureKind::word_ngram, 1, 3}},
    {ModelKind::mlp, {FeatureKind::embed_avg, 0, 0}},
    {ModelKind::bilstm, {FeatureKind::embed_seq, 0, 0}},
};

json grid_json(const GridReport& report) {
  json rows = json::array();
  for (const GridRow& row : report.rows) {
    rows.push_back(json{{"model", model_kind_name(row.model)},
                        {"features", feature_spec_name(row.features)},
                        {"precision", row.macro.precision},
                        {"recall", row.macro.recall},
                        {"f1", row.macro.f1}});
  }
  return json{{"n_train", report.n_train},
              {"n_dev", report.n_dev},
              {"rows", std::move(rows)},
              {"skipped", report.skipped}};
}

}  // namespace

GridReport run_grid(const ExperimentConfig& config, const std::string& corpus_path,
                    const std::string& report_path) {
  const Dataset ds = parse_corpus_file(corpus_path);
  auto [train, dev] = split_dataset(ds, config.split_ratio, config.seed);

  GridReport report;
  report.n_train = train.samples.size();
  report.n_dev = dev.samples.size();

  for (std::size_t row_index = 0; row_index < kGridRows.size(); ++row_index) {
    const auto& [model, features] = kGridRows[row_index];
    const std::string row_name =
        std::string(model_kind_name(model)) + " + " + feature_spec_name(features);
    const bool needs_embeddings = features.kind == FeatureKind::embed_avg ||
                                  features.kind == FeatureKind::embed_seq;
    if (needs_embeddings && config.embeddings_path.empty()) {
      report.skipped.push_back(row_name + ": no embeddings file configured");
      continue;
    }

    ExperimentConfig row_config = config;
    row_config.model = model;
    row_config.features = features;
    row_config.seed = config.seed + 1000 * (static_cast<std::uint64_t>(row_index) + 1);
    validate_config(row_config);

    const TrainResult result = train_on_split(row_config, train, dev);
    report.rows.push_back(GridRow{model, features, result.dev_report.macro});
  }

  if (!report_path.empty()) write_file(report_path, grid_json(report).dump());
  return report;
}

std::string render_grid(const GridReport& report) {
  char line[160];
  std::string out = "model    features          precision  recall  f1\n";
  for (const GridRow& row : report.rows) {
    std::snprintf(line, sizeof(line), "%-8s %-17s %.3f      %.3f   %.3f\n",
                  model_kind_name(row.model), feature_spec_name(row.features).c_str(),
                  row.macro.precision, row.macro.recall, row.macro.f1);
    out += line;
  }
  for (const std::string& notice : report.skipped) {
    out += "skipped: " + notice + "\n";
  }
  std::snprintf(line, sizeof(line), "split: %zu train / %zu dev\n", report.n_train,
                report.n_dev);
  out += line;
  return out;
}

}  // namespace cmsa
