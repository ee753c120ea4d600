#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "cmsa/embedding.hpp"
#include "cmsa/errors.hpp"
#include "cmsa/rng.hpp"
#include "cmsa/sentiment.hpp"

namespace cmsa {

// ---------------------------------------------------------------------------
// Optimizers. Both operate on flat parameter vectors; moment buffers are
// sized on first use.
// ---------------------------------------------------------------------------

struct AdamOptimizer {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long step = 0;
  Eigen::VectorXd m;  // first moment
  Eigen::VectorXd v;  // second moment

  void update(Eigen::VectorXd& params, const Eigen::VectorXd& grad);
};

struct RmsPropOptimizer {
  double lr = 0.01;
  double rho = 0.9;
  double eps = 1e-8;
  Eigen::VectorXd mean_square;

  void update(Eigen::VectorXd& params, const Eigen::VectorXd& grad);
};

// ---------------------------------------------------------------------------
// Gradient verification. Central differences of `loss` around `point`,
// compared coordinate-wise against `analytic`; returns the maximum relative
// error |a - n| / max(|a|, |n|, 1e-8). Throws NonFiniteLossError when the
// loss evaluates non-finite.
// ---------------------------------------------------------------------------
double gradient_check(const std::function<double(const Eigen::VectorXd&)>& loss,
                      const Eigen::VectorXd& point, const Eigen::VectorXd& analytic,
                      double epsilon = 1e-5);

// ---------------------------------------------------------------------------
// Multi-layer perceptron: one relu hidden layer, softmax output over the
// three classes, inverted dropout on the hidden activations at train time.
// ---------------------------------------------------------------------------

struct MlpParams {
  int hidden_units = 100;
  double dropout_rate = 0.3;
  double learning_rate = 0.001;  // Adam
  int epochs = 10;
  int batch_size = 32;
  bool early_stopping = false;  // monitors dev macro-F1 when a dev set is given
  int patience = 3;
};

// Also serves as the gradient carrier in training and checking code: a
// gradient has exactly the shape of the model.
struct MlpModel {
  Eigen::MatrixXd w1;  // hidden x in
  Eigen::VectorXd b1;  // hidden
  Eigen::MatrixXd w2;  // 3 x hidden
  Eigen::VectorXd b2;  // 3
  double dropout_rate = 0.3;

  std::size_t in_dim() const { return static_cast<std::size_t>(w1.cols()); }
  std::size_t hidden_units() const { return static_cast<std::size_t>(w1.rows()); }
};

enum class RunMode { train, infer };

// Weights Glorot-uniform in +-sqrt(6/(fan_in+fan_out)) drawn from the seeded
// generator, biases zero.
MlpModel init_mlp(std::size_t in_dim, const MlpParams& params, std::uint64_t seed);

// Train mode applies inverted dropout (retained units scaled by
// 1/(1-rate)) using rng; infer mode is deterministic and rng may be null.
std::array<double, 3> mlp_forward(const MlpModel& model, const Eigen::VectorXd& x,
                                  RunMode mode, Rng* rng = nullptr);

// Mean cross-entropy over the batch, dropout off. The gradient returned in
// the second member has the model's shape.
double mlp_loss(const MlpModel& model, const std::vector<Eigen::VectorXd>& x,
                const std::vector<Sentiment>& labels);
std::pair<double, MlpModel> mlp_loss_grad(const MlpModel& model,
                                          const std::vector<Eigen::VectorXd>& x,
                                          const std::vector<Sentiment>& labels);

// Parameter flattening in a fixed order (w1, b1, w2, b2, column-major), used
// by the optimizers and the finite-difference checks.
Eigen::VectorXd mlp_pack(const MlpModel& model);
void mlp_unpack(const Eigen::VectorXd& flat, MlpModel& model);

// Mini-batch Adam with a seeded per-epoch shuffle and seeded dropout masks;
// bitwise deterministic given the seed. Passing a dev set with
// params.early_stopping enables best-epoch selection on dev macro-F1.
MlpModel train_mlp(const std::vector<Eigen::VectorXd>& x,
                   const std::vector<Sentiment>& labels, const MlpParams& params,
                   std::uint64_t seed,
                   const std::vector<Eigen::VectorXd>* dev_x = nullptr,
                   const std::vector<Sentiment>* dev_labels = nullptr);

// ---------------------------------------------------------------------------
// Bidirectional LSTM over padded embedding sequences.
// ---------------------------------------------------------------------------

struct LstmGate {
  Eigen::MatrixXd w;  // units x in_dim
  Eigen::MatrixXd u;  // units x units
  Eigen::VectorXd b;  // units
};

struct LstmCellParams {
  LstmGate input, forget, output, candidate;

  std::size_t units() const { return static_cast<std::size_t>(input.b.size()); }
  std::size_t in_dim() const { return static_cast<std::size_t>(input.w.cols()); }
};

// i = sig(Wi x + Ui h + bi), f = sig(...), o = sig(...), g = tanh(...);
// c' = f.c + i.g; h' = o.tanh(c').
std::pair<Eigen::VectorXd, Eigen::VectorXd> lstm_step(const LstmCellParams& cell,
                                                      const Eigen::VectorXd& x,
                                                      const Eigen::VectorXd& h_prev,
                                                      const Eigen::VectorXd& c_prev);

// Intermediate values of one step, kept for backpropagation through time.
struct LstmStepCache {
  Eigen::VectorXd x, h_prev, c_prev;
  Eigen::VectorXd i, f, o, g, c, tanh_c, h;
};

LstmStepCache lstm_step_cached(const LstmCellParams& cell, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& h_prev,
                               const Eigen::VectorXd& c_prev);

// Backward through one step. dh/dc are the incoming gradients on h and c;
// parameter gradients accumulate into `grads` (same shape as the cell);
// returns (dh_prev, dc_prev).
std::pair<Eigen::VectorXd, Eigen::VectorXd> lstm_step_backward(
    const LstmCellParams& cell, const LstmStepCache& cache, const Eigen::VectorXd& dh,
    const Eigen::VectorXd& dc, LstmCellParams& grads);

struct BiLstmParams {
  int units = 100;
  double learning_rate = 0.01;  // RMSProp
  int epochs = 10;
  int batch_size = 32;
  double clip_norm = 5.0;  // global gradient norm clip
  bool early_stopping = false;
  int patience = 3;
};

// Doubles as the gradient carrier, like MlpModel.
struct BiLstmModel {
  LstmCellParams forward_cell, backward_cell;
  Eigen::MatrixXd w_out;  // 3 x 2*units
  Eigen::VectorXd b_out;  // 3

  std::size_t units() const { return forward_cell.units(); }
  std::size_t emb_dim() const { return forward_cell.in_dim(); }
};

// Weights Glorot-uniform from the seeded generator; biases zero except the
// forget-gate biases, which start at 1.0.
BiLstmModel init_bilstm(std::size_t emb_dim, const BiLstmParams& params,
                        std::uint64_t seed);

// Runs the forward cell left-to-right and the backward cell right-to-left
// over the unmasked rows, concatenates the two final hidden states and
// applies the softmax output layer. Padding rows never enter either cell.
// Throws EmptySequenceError on an all-padding sequence.
std::array<double, 3> bilstm_encode(const BiLstmModel& model, const PaddedSequence& seq);

double bilstm_loss(const BiLstmModel& model, const std::vector<PaddedSequence>& seqs,
                   const std::vector<Sentiment>& labels);
std::pair<double, BiLstmModel> bilstm_loss_grad(const BiLstmModel& model,
                                                const std::vector<PaddedSequence>& seqs,
                                                const std::vector<Sentiment>& labels);

Eigen::VectorXd bilstm_pack(const BiLstmModel& model);
void bilstm_unpack(const Eigen::VectorXd& flat, BiLstmModel& model);

// Mini-batch RMSProp with full backpropagation through time and global-norm
// gradient clipping; deterministic given the seed.
BiLstmModel train_bilstm(const std::vector<PaddedSequence>& seqs,
                         const std::vector<Sentiment>& labels,
                         const BiLstmParams& params, std::uint64_t seed,
                         const std::vector<PaddedSequence>* dev_seqs = nullptr,
                         const std::vector<Sentiment>* dev_labels = nullptr);

}  // namespace cmsa
