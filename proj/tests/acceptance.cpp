// Acceptance gate: one self-contained check per criterion, one line of
// output each. Exits nonzero if any check fails.

#include <unistd.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cmsa/corpus.hpp"
#include "cmsa/embedding.hpp"
#include "cmsa/ensemble.hpp"
#include "cmsa/forest.hpp"
#include "cmsa/linear.hpp"
#include "cmsa/metrics.hpp"
#include "cmsa/neural.hpp"
#include "cmsa/ngram.hpp"
#include "cmsa/pipeline.hpp"
#include "cmsa/rng.hpp"
#include "cmsa/sentiment.hpp"
#include "cmsa/sparse.hpp"
#include "cmsa/synthetic.hpp"

using namespace cmsa;

namespace {

int failures = 0;

void run_criterion(int index, const std::string& description,
                   const std::function<void()>& body) {
  try {
    body();
    std::cout << "[PASS] criterion " << index << ": " << description << "\n";
  } catch (const std::exception& e) {
    ++failures;
    std::cout << "[FAIL] criterion " << index << ": " << description << " ("
              << e.what() << ")\n";
  }
}

void expect(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error(what);
}

// ---------------------------------------------------------------------------
// independent oracles
// ---------------------------------------------------------------------------

// Brute-force macro F1, written against the bare definition and sharing no
// code with the library implementation.
double oracle_macro_f1(const std::vector<int>& gold, const std::vector<int>& pred) {
  double f1_sum = 0.0;
  for (int cls = -1; cls <= 1; ++cls) {
    long tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      if (pred[i] == cls && gold[i] == cls) ++tp;
      if (pred[i] == cls && gold[i] != cls) ++fp;
      if (pred[i] != cls && gold[i] == cls) ++fn;
    }
    const double p = (tp + fp) == 0 ? 0.0 : double(tp) / double(tp + fp);
    const double r = (tp + fn) == 0 ? 0.0 : double(tp) / double(tp + fn);
    const double f = (p + r) == 0.0 ? 0.0 : 2 * p * r / (p + r);
    f1_sum += f;
  }
  return f1_sum / 3.0;
}

// Word-unigram TF-IDF oracle over plain ASCII documents: split on single
// spaces, smoothed idf, raw tf, L2 norm.
std::map<std::string, double> oracle_tfidf(const std::vector<std::string>& docs,
                                           const std::string& doc) {
  const auto words = [](const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string w; in >> w;) out.push_back(w);
    return out;
  };

  std::map<std::string, int> df;
  for (const auto& d : docs) {
    std::set<std::string> seen;
    for (const auto& w : words(d)) seen.insert(w);
    for (const auto& w : seen) ++df[w];
  }

  std::map<std::string, double> raw;
  for (const auto& w : words(doc)) {
    const auto it = df.find(w);
    if (it == df.end()) continue;
    const double idf =
        std::log((1.0 + double(docs.size())) / (1.0 + double(it->second))) + 1.0;
    raw[w] += idf;  // tf accumulates one idf per occurrence
  }
  double norm = 0.0;
  for (const auto& [w, v] : raw) norm += v * v;
  norm = std::sqrt(norm);
  if (norm > 0) {
    for (auto& [w, v] : raw) v /= norm;
  }
  return raw;
}

// Flat view of an LSTM cell for finite differences, gate order
// (input, forget, output, candidate), (w, u, b) within a gate.
Eigen::VectorXd pack_cell(const LstmCellParams& cell) {
  std::vector<const LstmGate*> gates = {&cell.input, &cell.forget, &cell.output,
                                        &cell.candidate};
  std::size_t total = 0;
  for (const auto* g : gates)
    total += static_cast<std::size_t>(g->w.size() + g->u.size() + g->b.size());
  Eigen::VectorXd flat(static_cast<Eigen::Index>(total));
  Eigen::Index at = 0;
  for (const auto* g : gates) {
    flat.segment(at, g->w.size()) = Eigen::Map<const Eigen::VectorXd>(g->w.data(), g->w.size());
    at += g->w.size();
    flat.segment(at, g->u.size()) = Eigen::Map<const Eigen::VectorXd>(g->u.data(), g->u.size());
    at += g->u.size();
    flat.segment(at, g->b.size()) = g->b;
    at += g->b.size();
  }
  return flat;
}

void unpack_cell(const Eigen::VectorXd& flat, LstmCellParams& cell) {
  std::vector<LstmGate*> gates = {&cell.input, &cell.forget, &cell.output,
                                  &cell.candidate};
  Eigen::Index at = 0;
  for (auto* g : gates) {
    Eigen::Map<Eigen::VectorXd>(g->w.data(), g->w.size()) = flat.segment(at, g->w.size());
    at += g->w.size();
    Eigen::Map<Eigen::VectorXd>(g->u.data(), g->u.size()) = flat.segment(at, g->u.size());
    at += g->u.size();
    g->b = flat.segment(at, g->b.size());
    at += g->b.size();
  }
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("cmsa_accept_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  expect(in.good(), "cannot read " + path);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

// ---------------------------------------------------------------------------
// criteria
// ---------------------------------------------------------------------------

void criterion_1_metric_oracle() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(101);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<int> gold_i(50), pred_i(50);
    std::vector<Sentiment> gold(50), pred(50);
    for (int i = 0; i < 50; ++i) {
      gold_i[i] = int(rng.bounded(3)) - 1;
      pred_i[i] = int(rng.bounded(3)) - 1;
      gold[i] = sentiment_from_int(gold_i[i]);
      pred[i] = sentiment_from_int(pred_i[i]);
    }
    const double lib = macro_f1(confusion_matrix(gold, pred));
    const double ora = oracle_macro_f1(gold_i, pred_i);
    expect(std::abs(lib - ora) < 1e-12, "macro F1 deviates from brute force");
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  expect(secs < 5.0, "runtime " + std::to_string(secs) + "s exceeds 5s");
}

void criterion_2_tfidf_oracle() {
  const std::vector<std::string> docs = {
      "acha movie hai", "bura movie tha", "acha acha gaana", "phone bekar hai",
      "gaana sahi tha"};
  const TfidfModel model = fit_tfidf(docs, NGramSpec{NGramUnit::word, 1, 1});
  for (const auto& doc : docs) {
    const SparseVector v = transform(model, doc);
    const auto expected = oracle_tfidf(docs, doc);
    expect(v.nnz() == expected.size(), "entry count mismatch");
    for (std::size_t k = 0; k < v.nnz(); ++k) {
      const std::string& term = model.vocab.terms[v.indices[k]];
      const auto it = expected.find(term);
      expect(it != expected.end(), "unexpected term " + term);
      expect(std::abs(v.values[k] - it->second) < 1e-9,
             "value mismatch on '" + term + "'");
    }
    expect(std::abs(std::sqrt(v.squared_norm()) - 1.0) < 1e-9, "norm not 1");
  }
}

void criterion_3_ngram_count_law() {
  Rng rng(202);
  const std::string alphabet = "abcde ";
  const NGramSpec spec{NGramUnit::character, 2, 6};
  for (int trial = 0; trial < 200; ++trial) {
    const auto len = rng.bounded(40);
    std::string s;
    for (std::uint64_t i = 0; i < len; ++i)
      s += alphabet[static_cast<std::size_t>(rng.bounded(alphabet.size()))];
    std::size_t want = 0;
    for (std::size_t n = 2; n <= 6; ++n)
      if (s.size() + 1 > n) want += s.size() - n + 1;
    expect(extract_ngrams(s, spec).size() == want,
           "count law broken for length " + std::to_string(s.size()));
  }
}

void criterion_4_svm() {
  Rng rng(303);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<SparseVector> x;
    std::vector<int> y;
    // Linearly separable: two unit-ish blobs pushed apart along a random axis.
    const double angle = rng.uniform(0.0, 6.28318);
    const double ax = std::cos(angle), ay = std::sin(angle);
    for (int i = 0; i < 25; ++i) {
      const int label = i % 2 == 0 ? 1 : -1;
      const double along = label * (2.0 + rng.uniform());
      const double off = rng.uniform(-1.0, 1.0);
      x.push_back(sparse_from_dense({along * ax - off * ay, along * ay + off * ax}));
      y.push_back(label);
    }
    SvmParams params;
    const BinaryLinearModel m =
        train_svm_binary(x, y, params, 1000 + static_cast<std::uint64_t>(trial));
    for (std::size_t i = 0; i < x.size(); ++i) {
      expect(m.decision_value(x[i]) * y[i] > 0.0, "misclassified training point");
    }
    for (std::size_t i = 1; i < m.dual_objective_trace.size(); ++i) {
      expect(m.dual_objective_trace[i] >= m.dual_objective_trace[i - 1] - 1e-9,
             "dual objective decreased");
    }
    for (double a : m.alphas)
      expect(a >= 0.0 && a <= params.c, "alpha outside [0, C]");
  }
}

void criterion_5_gradient_checks() {
  const auto start = std::chrono::steady_clock::now();

  // logistic regression < 1e-6
  {
    Rng rng(404);
    std::vector<SparseVector> x;
    std::vector<Sentiment> labels;
    for (int i = 0; i < 9; ++i) {
      x.push_back(sparse_from_dense({rng.uniform(-1, 1), rng.uniform(-1, 1)}));
      labels.push_back(class_at(i % 3));
    }
    std::array<std::vector<double>, 3> w;
    std::array<double, 3> b{};
    Eigen::VectorXd flat(9);
    for (Eigen::Index i = 0; i < 9; ++i) flat(i) = rng.uniform(-0.5, 0.5);
    const auto unflatten = [&](const Eigen::VectorXd& f) {
      for (int c = 0; c < 3; ++c) {
        w[size_t(c)] = {f(c * 2), f(c * 2 + 1)};
        b[size_t(c)] = f(6 + c);
      }
    };
    unflatten(flat);
    const auto g = logreg_loss_grad(w, b, x, labels, 0.01);
    Eigen::VectorXd analytic(9);
    for (int c = 0; c < 3; ++c) {
      analytic(c * 2) = g.gw[size_t(c)][0];
      analytic(c * 2 + 1) = g.gw[size_t(c)][1];
      analytic(6 + c) = g.gb[size_t(c)];
    }
    const auto loss_at = [&](const Eigen::VectorXd& f) {
      unflatten(f);
      return logreg_loss_grad(w, b, x, labels, 0.01).loss;
    };
    const double err = gradient_check(loss_at, flat, analytic);
    expect(err < 1e-6, "logreg gradient error " + std::to_string(err));
  }

  // MLP < 1e-4
  {
    Rng rng(505);
    std::vector<Eigen::VectorXd> x;
    std::vector<Sentiment> labels;
    for (int i = 0; i < 4; ++i) {
      Eigen::VectorXd v(5);
      for (Eigen::Index d = 0; d < 5; ++d) v(d) = rng.uniform(-1, 1);
      x.push_back(v);
      labels.push_back(class_at(i % 3));
    }
    MlpParams params;
    params.hidden_units = 7;
    const MlpModel m = init_mlp(5, params, 55);
    const auto [loss, grad] = mlp_loss_grad(m, x, labels);
    (void)loss;
    MlpModel probe = m;
    const auto loss_at = [&](const Eigen::VectorXd& f) {
      mlp_unpack(f, probe);
      return mlp_loss(probe, x, labels);
    };
    const double err = gradient_check(loss_at, mlp_pack(m), mlp_pack(grad));
    expect(err < 1e-4, "mlp gradient error " + std::to_string(err));
  }

  // LSTM cell < 1e-4 on loss 0.5(|h|^2 + |c|^2)
  {
    Rng rng(606);
    LstmCellParams cell;
    for (LstmGate* g : {&cell.input, &cell.forget, &cell.output, &cell.candidate}) {
      g->w = Eigen::MatrixXd::NullaryExpr(3, 2, [&] { return rng.uniform(-0.8, 0.8); });
      g->u = Eigen::MatrixXd::NullaryExpr(3, 3, [&] { return rng.uniform(-0.8, 0.8); });
      g->b = Eigen::VectorXd::NullaryExpr(3, [&] { return rng.uniform(-0.5, 0.5); });
    }
    Eigen::VectorXd x(2), h0(3), c0(3);
    x << 0.4, -0.6;
    h0 << 0.2, -0.1, 0.3;
    c0 << -0.3, 0.5, 0.1;

    const LstmStepCache cache = lstm_step_cached(cell, x, h0, c0);
    LstmCellParams grads;
    for (LstmGate* g : {&grads.input, &grads.forget, &grads.output, &grads.candidate}) {
      g->w = Eigen::MatrixXd::Zero(3, 2);
      g->u = Eigen::MatrixXd::Zero(3, 3);
      g->b = Eigen::VectorXd::Zero(3);
    }
    lstm_step_backward(cell, cache, cache.h, cache.c, grads);

    LstmCellParams probe = cell;
    const auto loss_at = [&](const Eigen::VectorXd& f) {
      unpack_cell(f, probe);
      const auto [h, c] = lstm_step(probe, x, h0, c0);
      return 0.5 * (h.squaredNorm() + c.squaredNorm());
    };
    const double err = gradient_check(loss_at, pack_cell(cell), pack_cell(grads));
    expect(err < 1e-4, "lstm cell gradient error " + std::to_string(err));
  }

  // full Bi-LSTM BPTT on a 2-token / 3-unit instance < 1e-4
  {
    BiLstmParams params;
    params.units = 3;
    const BiLstmModel m = init_bilstm(2, params, 66);
    PaddedSequence seq;
    seq.rows = Eigen::MatrixXd::Zero(4, 2);
    seq.rows << 0.5, -0.3, -0.1, 0.9, 0, 0, 0, 0;
    seq.mask = {true, true, false, false};
    const std::vector<PaddedSequence> seqs = {seq};
    const std::vector<Sentiment> labels = {Sentiment::positive};
    const auto [loss, grad] = bilstm_loss_grad(m, seqs, labels);
    (void)loss;
    BiLstmModel probe = m;
    const auto loss_at = [&](const Eigen::VectorXd& f) {
      bilstm_unpack(f, probe);
      return bilstm_loss(probe, seqs, labels);
    };
    const double err = gradient_check(loss_at, bilstm_pack(m), bilstm_pack(grad));
    expect(err < 1e-4, "bilstm gradient error " + std::to_string(err));
  }

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  expect(secs < 30.0, "runtime " + std::to_string(secs) + "s exceeds 30s");
}

void criterion_6_forest_memorization() {
  Rng rng(707);
  std::vector<SparseVector> x;
  std::vector<Sentiment> y;
  for (int i = 0; i < 50; ++i) {
    // continuous draws: duplicate feature vectors have probability ~0
    x.push_back(sparse_from_dense(
        {rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()}));
    y.push_back(class_at(int(rng.bounded(3))));
  }
  ForestParams params;
  params.n_trees = 1;
  params.bootstrap = false;
  const RandomForest f = fit_forest(x, y, params, 17);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Prediction p = predict_forest(f, x[i]);
    expect(p.label == y[i], "tree failed to memorize sample");
    expect(std::abs(p.probs[0] + p.probs[1] + p.probs[2] - 1.0) < 1e-12,
           "probability row does not sum to 1");
  }
}

void criterion_7_soft_voting() {
  Rng rng(808);
  for (int trial = 0; trial < 1000; ++trial) {
    std::array<std::array<double, 3>, 3> probs{};
    for (auto& member : probs) {
      double total = 0;
      for (auto& v : member) {
        v = rng.uniform();
        total += v;
      }
      for (auto& v : member) v /= total;
    }
    if (trial % 7 == 0) probs[1] = probs[0];          // partial ties
    if (trial % 13 == 0) probs[2] = probs[1] = probs[0];  // full three-way tie

    const Prediction p = combine_soft_votes(probs);
    int best = 0;
    double best_sum = -1.0;
    for (int c = 0; c < 3; ++c) {
      const double s =
          probs[0][size_t(c)] + probs[1][size_t(c)] + probs[2][size_t(c)];
      if (s > best_sum) {  // strict: keeps the smaller class on ties
        best_sum = s;
        best = c;
      }
    }
    expect(p.label == class_at(best), "vote argmax deviates from brute force");
  }
}

void criterion_8_determinism() {
  TempDir tmp;
  const std::string corpus_path = tmp.file("corpus.json");
  spit(corpus_path, make_synthetic_corpus_json(150, 42));

  for (const std::string preset : {"model1", "model2"}) {
    ExperimentConfig config = resolve_preset(preset);
    config.seed = 42;

    const std::string m1 = tmp.file(preset + "_a.json");
    const std::string m2 = tmp.file(preset + "_b.json");
    run_train(config, corpus_path, m1);
    run_train(config, corpus_path, m2);
    expect(slurp(m1) == slurp(m2), preset + ": artifacts differ between runs");

    const std::string p1 = tmp.file(preset + "_a_pred.json");
    const std::string p2 = tmp.file(preset + "_b_pred.json");
    run_predict(m1, corpus_path, p1);
    run_predict(m2, corpus_path, p2);
    expect(slurp(p1) == slurp(p2), preset + ": prediction files differ");
  }
}

void criterion_9_split_fidelity() {
  const auto sized_dataset = [](std::size_t n) {
    Dataset ds;
    ds.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
      ds.samples.push_back(Sample{static_cast<long long>(i + 1), "x", {}, {}});
    return ds;
  };
  const auto [hi_train, hi_dev] = split_dataset(sized_dataset(12936), 0.85, 42);
  expect(hi_train.size() == 10995, "12936 split train side");
  expect(hi_dev.size() == 1941, "12936 split dev side");
  const auto [bn_train, bn_dev] = split_dataset(sized_dataset(2500), 0.85, 42);
  expect(bn_train.size() == 2125, "2500 split train side");
  expect(bn_dev.size() == 375, "2500 split dev side");
}

void criterion_10_directional() {
  const auto start = std::chrono::steady_clock::now();
  int char_wins = 0;
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const Dataset ds = make_synthetic_corpus(1000, seed);

    ExperimentConfig char_cfg;
    char_cfg.model = ModelKind::svm;
    char_cfg.features = FeatureSpec{FeatureKind::char_ngram, 2, 6};
    char_cfg.seed = seed;

    ExperimentConfig word_cfg = char_cfg;
    word_cfg.features = FeatureSpec{FeatureKind::word_ngram, 1, 1};

    const double char_f1 = train_on_dataset(char_cfg, ds).dev_report.macro.f1;
    const double word_f1 = train_on_dataset(word_cfg, ds).dev_report.macro.f1;
    if (char_f1 >= word_f1) ++char_wins;
  }
  expect(char_wins >= 2, "char(2,6) beat word(1,1) in only " +
                             std::to_string(char_wins) + "/3 seeds");
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  expect(secs < 120.0, "runtime " + std::to_string(secs) + "s exceeds 2min");
}

void criterion_11_toy_overfit() {
  // 10-sample separable toy set, shared across both models.
  Rng rng(909);
  std::vector<Eigen::VectorXd> dense;
  std::vector<PaddedSequence> seqs;
  std::vector<Sentiment> labels;
  for (int i = 0; i < 10; ++i) {
    const int c = i % 3;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(4);
    v(c) = 1.0;
    v(3) = rng.uniform(-0.1, 0.1);
    dense.push_back(v);
    labels.push_back(class_at(c));

    PaddedSequence seq;
    seq.rows = Eigen::MatrixXd::Zero(4, 4);
    seq.rows.row(0) = v.transpose();
    seq.rows.row(1) = Eigen::RowVector4d(0.1, 0.1, 0.1, 0.1);
    seq.mask = {true, true, false, false};
    seqs.push_back(seq);
  }

  MlpParams mlp_params;  // defaults: 100 units, Adam, lr 0.001
  mlp_params.dropout_rate = 0.0;
  mlp_params.epochs = 200;
  const MlpModel mlp = train_mlp(dense, labels, mlp_params, 42);
  int mlp_correct = 0;
  for (std::size_t i = 0; i < dense.size(); ++i)
    mlp_correct += argmax_sentiment(mlp_forward(mlp, dense[i], RunMode::infer)) ==
                   labels[i];
  expect(mlp_correct == 10,
         "mlp train accuracy " + std::to_string(mlp_correct) + "/10");

  BiLstmParams lstm_params;  // defaults: 100 units, RMSProp, lr 0.01
  lstm_params.epochs = 200;
  const BiLstmModel lstm = train_bilstm(seqs, labels, lstm_params, 42);
  int lstm_correct = 0;
  for (std::size_t i = 0; i < seqs.size(); ++i)
    lstm_correct += argmax_sentiment(bilstm_encode(lstm, seqs[i])) == labels[i];
  expect(lstm_correct == 10,
         "bilstm train accuracy " + std::to_string(lstm_correct) + "/10");
}

void criterion_12_io_contract() {
  TempDir tmp;

  // Every run_predict output passes validate_predictions: exercise a labeled
  // and an unlabeled corpus.
  const std::string corpus_path = tmp.file("corpus.json");
  spit(corpus_path, make_synthetic_corpus_json(80, 12));
  ExperimentConfig config = resolve_preset("model2");
  config.svm.max_epochs = 100;
  const std::string model_path = tmp.file("model.json");
  run_train(config, corpus_path, model_path);

  const std::string unlabeled_path = tmp.file("unlabeled.json");
  spit(unlabeled_path,
       "[{\"id\": 501, \"text\": \"acha movie hai\"},"
       "{\"id\": 502, \"text\": \"bura bakwas phone\"},"
       "{\"id\": 503, \"text\": \"aaj kal\"}]");

  for (const auto& [input, ids] :
       std::vector<std::pair<std::string, std::vector<long long>>>{
           {corpus_path, {}}, {unlabeled_path, {501, 502, 503}}}) {
    const std::string out = tmp.file("pred_out.json");
    run_predict(model_path, input, out);
    std::vector<long long> want = ids;
    if (want.empty()) {
      for (const auto& s : parse_corpus_file(input).samples) want.push_back(s.id);
    }
    expect(validate_predictions(want, slurp(out)).valid(),
           "prediction file failed validation");
  }

  // Fixture: gold [1,1,0,-1] / pred [1,0,0,-1] -> overall F1 0.778 +- 0.001.
  const std::string gold_path = tmp.file("gold.json");
  spit(gold_path,
       "[{\"id\": 1, \"text\": \"a\", \"sentiment\": 1},"
       "{\"id\": 2, \"text\": \"b\", \"sentiment\": 1},"
       "{\"id\": 3, \"text\": \"c\", \"sentiment\": 0},"
       "{\"id\": 4, \"text\": \"d\", \"sentiment\": -1}]");
  const std::string pred_path = tmp.file("pred.json");
  spit(pred_path, write_predictions({1, 2, 3, 4},
                                    {Sentiment::positive, Sentiment::neutral,
                                     Sentiment::neutral, Sentiment::negative}));
  const EvalReport report = run_eval(gold_path, pred_path);
  expect(std::abs(report.macro.f1 - 0.778) <= 0.001,
         "fixture overall F1 " + std::to_string(report.macro.f1));
}

}  // namespace

int main() {
  run_criterion(1, "macro F1 matches brute force on 1000 random pairs (<1e-12, <5s)",
                criterion_1_metric_oracle);
  run_criterion(2, "TF-IDF values match the hand formula on a 5-doc corpus (<1e-9)",
                criterion_2_tfidf_oracle);
  run_criterion(3, "char(2,6) gram count obeys the count law on 200 random strings",
                criterion_3_ngram_count_law);
  run_criterion(4, "SVM solves 20 separable 2-D sets; dual monotone; alphas boxed",
                criterion_4_svm);
  run_criterion(5, "gradient checks: logreg<1e-6, mlp<1e-4, lstm cell<1e-4, bilstm<1e-4",
                criterion_5_gradient_checks);
  run_criterion(6, "single unbounded tree memorizes 50 samples; prob rows sum to 1",
                criterion_6_forest_memorization);
  run_criterion(7, "soft-vote argmax equals brute force on 1000 triples incl. ties",
                criterion_7_soft_voting);
  run_criterion(8, "train/predict twice with model1+model2 at seed 42 is byte-identical",
                criterion_8_determinism);
  run_criterion(9, "0.85 splits reproduce 12936->10995/1941 and 2500->2125/375",
                criterion_9_split_fidelity);
  run_criterion(10, "svm char(2,6) >= word(1,1) dev macro F1 in >=2 of 3 seeds (<2min)",
                criterion_10_directional);
  run_criterion(11, "MLP and Bi-LSTM reach 100% train accuracy on the 10-sample toy",
                criterion_11_toy_overfit);
  run_criterion(12, "predictions validate; 0.778 eval fixture reproduces",
                criterion_12_io_contract);

  if (failures > 0) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all 12 criteria passed\n";
  return 0;
}
