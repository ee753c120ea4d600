#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cmsa/errors.hpp"
#include "cmsa/sentiment.hpp"
#include "cmsa/sparse.hpp"

namespace cmsa {

struct SvmParams {
  double c = 1.0;
  double tol = 1e-4;
  int max_epochs = 1000;
};

// Binary hinge-loss linear SVM in primal form w.x + b, trained in the dual.
// alphas and the per-epoch dual objective trace are retained for
// diagnostics and the optimizer's correctness checks.
struct BinaryLinearModel {
  std::vector<double> w;
  double b = 0.0;
  std::vector<double> alphas;                 // in [0, C], one per training sample
  std::vector<double> dual_objective_trace;   // recorded after every epoch
  int epochs_run = 0;

  double decision_value(const SparseVector& x) const;
};

// Dual coordinate descent for the L1-loss (hinge) SVM with L2
// regularization. The bias is handled by augmenting every sample with a
// constant-1 feature inside the trainer. Coordinates are visited in a
// seeded per-epoch permutation; training stops when the maximum
// projected-gradient violation drops below tol or max_epochs is reached.
//
// y entries must be +1 or -1 and both labels must occur
// (DegenerateLabelsError otherwise); all vectors must share one dimension
// (DimError otherwise). Deterministic given the seed.
BinaryLinearModel train_svm_binary(const std::vector<SparseVector>& x,
                                   const std::vector<int>& y, const SvmParams& params,
                                   std::uint64_t seed);

// One-vs-one composition over the canonical class pairs
// (-1,0), (-1,1), (0,1); in each pair the first class maps to +1.
struct OvoSvmModel {
  static constexpr std::array<std::pair<Sentiment, Sentiment>, 3> kPairs{{
      {Sentiment::negative, Sentiment::neutral},
      {Sentiment::negative, Sentiment::positive},
      {Sentiment::neutral, Sentiment::positive},
  }};
  std::array<BinaryLinearModel, 3> pair_models;
  std::size_t dim = 0;
};

// Trains one binary model per pair on the subset carrying those two labels,
// with generator seeds derived as seed + pair_index. All three classes must
// be present (DegenerateLabelsError naming the missing one).
OvoSvmModel train_ovo_svm(const std::vector<SparseVector>& x,
                          const std::vector<Sentiment>& labels, const SvmParams& params,
                          std::uint64_t seed);

// Pairwise sigmoid voting: each pair (a,b) with decision value d adds
// sigmoid(d) to a's vote and sigmoid(-d) to b's, so the three votes sum to
// the number of pairs and probs = votes / 3 is normalized by construction.
Prediction predict_ovo(const OvoSvmModel& model, const SparseVector& x);

struct LogRegParams {
  double lambda = 1e-4;  // L2 strength on W (biases unregularized)
  double lr = 0.1;
  int max_iters = 500;
  double tol = 1e-5;  // stop when the gradient infinity-norm drops below this
};

// Multinomial logistic regression; rows of w follow the canonical class
// order.
struct LogRegModel {
  std::array<std::vector<double>, 3> w;
  std::array<double, 3> b{};
  double lambda = 0.0;
  std::vector<double> loss_trace;  // objective after every accepted step
  std::size_t dim = 0;
};

struct LogRegGradient {
  double loss = 0.0;
  std::array<std::vector<double>, 3> gw;
  std::array<double, 3> gb{};
};

// Mean cross-entropy + (lambda/2)*||W||^2 and its exact gradient at (w, b).
// Exposed so the gradient can be verified against finite differences.
LogRegGradient logreg_loss_grad(const std::array<std::vector<double>, 3>& w,
                                const std::array<double, 3>& b,
                                const std::vector<SparseVector>& x,
                                const std::vector<Sentiment>& labels, double lambda);

// Full-batch gradient descent from W = 0, b = 0. Requires at least two
// distinct classes (DegenerateLabelsError otherwise).
LogRegModel train_logreg(const std::vector<SparseVector>& x,
                         const std::vector<Sentiment>& labels,
                         const LogRegParams& params);

Prediction predict_logreg(const LogRegModel& model, const SparseVector& x);

// softmax(logits), numerically stabilized; sums to 1.
std::array<double, 3> softmax3(const std::array<double, 3>& logits);

}  // namespace cmsa
