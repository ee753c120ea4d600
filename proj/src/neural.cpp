#include "cmsa/neural.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cmsa/metrics.hpp"

namespace cmsa {

namespace {

Eigen::VectorXd stable_softmax(const Eigen::VectorXd& z) {
  const double m = z.maxCoeff();
  const Eigen::VectorXd e = (z.array() - m).exp().matrix();
  return e / e.sum();
}

double log_softmax_at(const Eigen::VectorXd& z, std::size_t k) {
  const double m = z.maxCoeff();
  const double lse = std::log((z.array() - m).exp().sum());
  return z(static_cast<Eigen::Index>(k)) - m - lse;
}

void glorot_fill(Eigen::MatrixXd& m, std::size_t fan_in, std::size_t fan_out,
                 Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      m(r, c) = rng.uniform(-limit, limit);
    }
  }
}

void check_labels(std::size_t n_x, const std::vector<Sentiment>& labels) {
  if (n_x != labels.size()) throw ArityError("inputs and labels differ in length");
  if (n_x == 0) throw FitError("cannot train on an empty set");
  std::array<int, 3> counts{};
  for (Sentiment s : labels) ++counts[static_cast<std::size_t>(class_index(s))];
  int present = 0;
  for (int c : counts) present += c > 0 ? 1 : 0;
  if (present < 2) {
    throw DegenerateLabelsError("training data carries fewer than 2 distinct classes");
  }
}

std::size_t gold_index(Sentiment s) {
  return static_cast<std::size_t>(class_index(s));
}

}  // namespace

// ---------------------------------------------------------------------------
// Optimizers
// ---------------------------------------------------------------------------

void AdamOptimizer::update(Eigen::VectorXd& params, const Eigen::VectorXd& grad) {
  if (m.size() != params.size()) {
    m = Eigen::VectorXd::Zero(params.size());
    v = Eigen::VectorXd::Zero(params.size());
    step = 0;
  }
  ++step;
  m = beta1 * m + (1.0 - beta1) * grad;
  v = (beta2 * v.array() + (1.0 - beta2) * grad.array().square()).matrix();
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
  params.array() -= lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + eps);
}

void RmsPropOptimizer::update(Eigen::VectorXd& params, const Eigen::VectorXd& grad) {
  if (mean_square.size() != params.size()) {
    mean_square = Eigen::VectorXd::Zero(params.size());
  }
  mean_square =
      (rho * mean_square.array() + (1.0 - rho) * grad.array().square()).matrix();
  params.array() -= lr * grad.array() / (mean_square.array().sqrt() + eps);
}

// ---------------------------------------------------------------------------
// Gradient verification
// ---------------------------------------------------------------------------

double gradient_check(const std::function<double(const Eigen::VectorXd&)>& loss,
                      const Eigen::VectorXd& point, const Eigen::VectorXd& analytic,
                      double epsilon) {
  if (analytic.size() != point.size()) {
    throw DimError("analytic gradient size does not match the parameter point");
  }
  auto eval = [&](const Eigen::VectorXd& p) {
    const double value = loss(p);
    if (!std::isfinite(value)) {
      throw NonFiniteLossError("loss evaluated non-finite during gradient check");
    }
    return value;
  };
  double max_rel = 0.0;
  Eigen::VectorXd probe = point;
  for (Eigen::Index j = 0; j < point.size(); ++j) {
    const double saved = probe(j);
    probe(j) = saved + epsilon;
    const double up = eval(probe);
    probe(j) = saved - epsilon;
    const double down = eval(probe);
    probe(j) = saved;
    const double numeric = (up - down) / (2.0 * epsilon);
    const double a = analytic(j);
    const double rel =
        std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-8});
    max_rel = std::max(max_rel, rel);
  }
  return max_rel;
}

// ---------------------------------------------------------------------------
// MLP
// ---------------------------------------------------------------------------

MlpModel init_mlp(std::size_t in_dim, const MlpParams& params, std::uint64_t seed) {
  if (in_dim == 0) throw DimError("MLP input dimension must be >= 1");
  if (params.hidden_units < 1) throw ConfigError("hidden_units must be >= 1");
  if (params.dropout_rate < 0.0 || params.dropout_rate >= 1.0) {
    throw ConfigError("dropout_rate must lie in [0, 1)");
  }
  const auto hidden = static_cast<std::size_t>(params.hidden_units);
  Rng rng(seed);
  MlpModel model;
  model.w1.resize(static_cast<Eigen::Index>(hidden), static_cast<Eigen::Index>(in_dim));
  glorot_fill(model.w1, in_dim, hidden, rng);
  model.b1 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(hidden));
  model.w2.resize(3, static_cast<Eigen::Index>(hidden));
  glorot_fill(model.w2, hidden, 3, rng);
  model.b2 = Eigen::VectorXd::Zero(3);
  model.dropout_rate = params.dropout_rate;
  return model;
}

namespace {

struct MlpCache {
  Eigen::VectorXd z1;     // pre-activation
  Eigen::VectorXd h;      // post-relu, post-dropout
  Eigen::VectorXd scale;  // per-unit dropout scale actually applied
  Eigen::VectorXd z2;     // output logits
};

MlpCache mlp_forward_cached(const MlpModel& model, const Eigen::VectorXd& x,
                            RunMode mode, Rng* rng) {
  if (static_cast<std::size_t>(x.size()) != model.in_dim()) {
    throw DimError("MLP input dimension " + std::to_string(x.size()) +
                   " does not match model dimension " + std::to_string(model.in_dim()));
  }
  MlpCache cache;
  cache.z1 = model.w1 * x + model.b1;
  cache.h = cache.z1.cwiseMax(0.0);
  cache.scale = Eigen::VectorXd::Ones(cache.h.size());
  if (mode == RunMode::train && model.dropout_rate > 0.0) {
    if (rng == nullptr) {
      throw ConfigError("train-mode forward with dropout needs a generator");
    }
    const double keep_scale = 1.0 / (1.0 - model.dropout_rate);
    for (Eigen::Index j = 0; j < cache.h.size(); ++j) {
      cache.scale(j) = rng->uniform() < model.dropout_rate ? 0.0 : keep_scale;
    }
    cache.h = cache.h.cwiseProduct(cache.scale);
  }
  cache.z2 = model.w2 * cache.h + model.b2;
  return cache;
}

MlpModel mlp_zero_like(const MlpModel& model) {
  MlpModel g;
  g.w1 = Eigen::MatrixXd::Zero(model.w1.rows(), model.w1.cols());
  g.b1 = Eigen::VectorXd::Zero(model.b1.size());
  g.w2 = Eigen::MatrixXd::Zero(model.w2.rows(), model.w2.cols());
  g.b2 = Eigen::VectorXd::Zero(model.b2.size());
  g.dropout_rate = 0.0;
  return g;
}

// Batch loss and gradient; dropout participates only when rng is non-null,
// in which case the backward pass reuses each sample's forward mask.
std::pair<double, MlpModel> mlp_batch_grad(const MlpModel& model,
                                           const std::vector<Eigen::VectorXd>& x,
                                           const std::vector<Sentiment>& labels,
                                           const std::vector<std::size_t>& at,
                                           Rng* rng) {
  MlpModel grad = mlp_zero_like(model);
  double loss = 0.0;
  const double inv_n = 1.0 / static_cast<double>(at.size());
  const RunMode mode = rng != nullptr ? RunMode::train : RunMode::infer;

  for (std::size_t i : at) {
    const MlpCache cache = mlp_forward_cached(model, x[i], mode, rng);
    loss -= log_softmax_at(cache.z2, gold_index(labels[i])) * inv_n;

    Eigen::VectorXd dz2 = stable_softmax(cache.z2);
    dz2(static_cast<Eigen::Index>(gold_index(labels[i]))) -= 1.0;
    dz2 *= inv_n;

    grad.w2.noalias() += dz2 * cache.h.transpose();
    grad.b2 += dz2;

    Eigen::VectorXd dh = model.w2.transpose() * dz2;
    dh = dh.cwiseProduct(cache.scale);  // identity when dropout is off
    Eigen::VectorXd dz1 =
        (cache.z1.array() > 0.0).select(dh, Eigen::VectorXd::Zero(dh.size()));

    grad.w1.noalias() += dz1 * x[i].transpose();
    grad.b1 += dz1;
  }
  return {loss, std::move(grad)};
}

std::vector<std::size_t> full_index(std::size_t n) {
  std::vector<std::size_t> at(n);
  std::iota(at.begin(), at.end(), 0);
  return at;
}

}  // namespace

std::array<double, 3> mlp_forward(const MlpModel& model, const Eigen::VectorXd& x,
                                  RunMode mode, Rng* rng) {
  const MlpCache cache = mlp_forward_cached(model, x, mode, rng);
  const Eigen::VectorXd p = stable_softmax(cache.z2);
  return {p(0), p(1), p(2)};
}

double mlp_loss(const MlpModel& model, const std::vector<Eigen::VectorXd>& x,
                const std::vector<Sentiment>& labels) {
  if (x.size() != labels.size()) throw ArityError("inputs and labels differ in length");
  if (x.empty()) throw FitError("cannot evaluate the loss on an empty set");
  double loss = 0.0;
  const double inv_n = 1.0 / static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const MlpCache cache = mlp_forward_cached(model, x[i], RunMode::infer, nullptr);
    loss -= log_softmax_at(cache.z2, gold_index(labels[i])) * inv_n;
  }
  return loss;
}

std::pair<double, MlpModel> mlp_loss_grad(const MlpModel& model,
                                          const std::vector<Eigen::VectorXd>& x,
                                          const std::vector<Sentiment>& labels) {
  if (x.size() != labels.size()) throw ArityError("inputs and labels differ in length");
  if (x.empty()) throw FitError("cannot evaluate the loss on an empty set");
  return mlp_batch_grad(model, x, labels, full_index(x.size()), nullptr);
}

Eigen::VectorXd mlp_pack(const MlpModel& model) {
  Eigen::VectorXd flat(model.w1.size() + model.b1.size() + model.w2.size() +
                       model.b2.size());
  Eigen::Index off = 0;
  auto put = [&](const auto& block) {
    flat.segment(off, block.size()) =
        Eigen::Map<const Eigen::VectorXd>(block.data(), block.size());
    off += block.size();
  };
  put(model.w1);
  put(model.b1);
  put(model.w2);
  put(model.b2);
  return flat;
}

void mlp_unpack(const Eigen::VectorXd& flat, MlpModel& model) {
  const Eigen::Index expected =
      model.w1.size() + model.b1.size() + model.w2.size() + model.b2.size();
  if (flat.size() != expected) {
    throw DimError("flat parameter vector has wrong length");
  }
  Eigen::Index off = 0;
  auto take = [&](auto& block) {
    Eigen::Map<Eigen::VectorXd>(block.data(), block.size()) =
        flat.segment(off, block.size());
    off += block.size();
  };
  take(model.w1);
  take(model.b1);
  take(model.w2);
  take(model.b2);
}

MlpModel train_mlp(const std::vector<Eigen::VectorXd>& x,
                   const std::vector<Sentiment>& labels, const MlpParams& params,
                   std::uint64_t seed, const std::vector<Eigen::VectorXd>* dev_x,
                   const std::vector<Sentiment>* dev_labels) {
  check_labels(x.size(), labels);
  const auto in_dim = static_cast<std::size_t>(x.front().size());
  for (const Eigen::VectorXd& v : x) {
    if (static_cast<std::size_t>(v.size()) != in_dim) {
      throw DimError("training vectors disagree on dimension");
    }
  }
  if (params.batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (params.epochs < 0) throw ConfigError("epochs must be >= 0");

  MlpModel model = init_mlp(in_dim, params, seed);
  Rng rng(seed + 1);  // shuffle and dropout stream, separate from init
  AdamOptimizer adam;
  adam.lr = params.learning_rate;
  Eigen::VectorXd flat = mlp_pack(model);

  const bool monitor = params.early_stopping && dev_x != nullptr &&
                       dev_labels != nullptr && !dev_x->empty();
  double best_f1 = -1.0;
  Eigen::VectorXd best_flat = flat;
  int stale_epochs = 0;

  std::vector<std::size_t> order = full_index(x.size());
  const auto batch = static_cast<std::size_t>(params.batch_size);

  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t stop = std::min(start + batch, order.size());
      const std::vector<std::size_t> at(order.begin() + static_cast<long>(start),
                                        order.begin() + static_cast<long>(stop));
      auto [loss, grad] = mlp_batch_grad(model, x, labels, at, &rng);
      if (!std::isfinite(loss)) {
        throw NonFiniteLossError("MLP loss became non-finite in epoch " +
                                 std::to_string(epoch));
      }
      adam.update(flat, mlp_pack(grad));
      mlp_unpack(flat, model);
    }

    if (monitor) {
      std::vector<Sentiment> pred;
      pred.reserve(dev_x->size());
      for (const Eigen::VectorXd& v : *dev_x) {
        pred.push_back(argmax_sentiment(mlp_forward(model, v, RunMode::infer)));
      }
      const double f1 = macro_f1(confusion_matrix(*dev_labels, pred));
      if (f1 > best_f1) {
        best_f1 = f1;
        best_flat = flat;
        stale_epochs = 0;
      } else if (++stale_epochs >= params.patience) {
        break;
      }
    }
  }

  if (monitor) mlp_unpack(best_flat, model);
  return model;
}

// ---------------------------------------------------------------------------
// LSTM cell
// ---------------------------------------------------------------------------

namespace {

Eigen::VectorXd sigmoid_vec(const Eigen::VectorXd& z) {
  return (1.0 / (1.0 + (-z.array()).exp())).matrix();
}

void check_step_dims(const LstmCellParams& cell, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& h_prev, const Eigen::VectorXd& c_prev) {
  if (static_cast<std::size_t>(x.size()) != cell.in_dim() ||
      static_cast<std::size_t>(h_prev.size()) != cell.units() ||
      static_cast<std::size_t>(c_prev.size()) != cell.units()) {
    throw DimError("LSTM step input dimensions do not match the cell");
  }
}

LstmGate gate_zero_like(const LstmGate& g) {
  return {Eigen::MatrixXd::Zero(g.w.rows(), g.w.cols()),
          Eigen::MatrixXd::Zero(g.u.rows(), g.u.cols()),
          Eigen::VectorXd::Zero(g.b.size())};
}

LstmCellParams cell_zero_like(const LstmCellParams& cell) {
  return {gate_zero_like(cell.input), gate_zero_like(cell.forget),
          gate_zero_like(cell.output), gate_zero_like(cell.candidate)};
}

}  // namespace

LstmStepCache lstm_step_cached(const LstmCellParams& cell, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& h_prev,
                               const Eigen::VectorXd& c_prev) {
  check_step_dims(cell, x, h_prev, c_prev);
  LstmStepCache cache;
  cache.x = x;
  cache.h_prev = h_prev;
  cache.c_prev = c_prev;
  cache.i = sigmoid_vec(cell.input.w * x + cell.input.u * h_prev + cell.input.b);
  cache.f = sigmoid_vec(cell.forget.w * x + cell.forget.u * h_prev + cell.forget.b);
  cache.o = sigmoid_vec(cell.output.w * x + cell.output.u * h_prev + cell.output.b);
  cache.g = (cell.candidate.w * x + cell.candidate.u * h_prev + cell.candidate.b)
                .array()
                .tanh()
                .matrix();
  cache.c = cache.f.cwiseProduct(c_prev) + cache.i.cwiseProduct(cache.g);
  cache.tanh_c = cache.c.array().tanh().matrix();
  cache.h = cache.o.cwiseProduct(cache.tanh_c);
  return cache;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> lstm_step(const LstmCellParams& cell,
                                                      const Eigen::VectorXd& x,
                                                      const Eigen::VectorXd& h_prev,
                                                      const Eigen::VectorXd& c_prev) {
  const LstmStepCache cache = lstm_step_cached(cell, x, h_prev, c_prev);
  return {cache.h, cache.c};
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> lstm_step_backward(
    const LstmCellParams& cell, const LstmStepCache& cache, const Eigen::VectorXd& dh,
    const Eigen::VectorXd& dc, LstmCellParams& grads) {
  const Eigen::VectorXd d_o = dh.cwiseProduct(cache.tanh_c);
  const Eigen::VectorXd dc_total =
      dc + dh.cwiseProduct(cache.o)
               .cwiseProduct((1.0 - cache.tanh_c.array().square()).matrix());

  const Eigen::VectorXd di = dc_total.cwiseProduct(cache.g);
  const Eigen::VectorXd df = dc_total.cwiseProduct(cache.c_prev);
  const Eigen::VectorXd dg = dc_total.cwiseProduct(cache.i);

  const Eigen::VectorXd dzi =
      di.cwiseProduct(cache.i).cwiseProduct((1.0 - cache.i.array()).matrix());
  const Eigen::VectorXd dzf =
      df.cwiseProduct(cache.f).cwiseProduct((1.0 - cache.f.array()).matrix());
  const Eigen::VectorXd dzo =
      d_o.cwiseProduct(cache.o).cwiseProduct((1.0 - cache.o.array()).matrix());
  const Eigen::VectorXd dzg = dg.cwiseProduct((1.0 - cache.g.array().square()).matrix());

  auto accumulate = [&](LstmGate& gate, const Eigen::VectorXd& dz) {
    gate.w.noalias() += dz * cache.x.transpose();
    gate.u.noalias() += dz * cache.h_prev.transpose();
    gate.b += dz;
  };
  accumulate(grads.input, dzi);
  accumulate(grads.forget, dzf);
  accumulate(grads.output, dzo);
  accumulate(grads.candidate, dzg);

  Eigen::VectorXd dh_prev = cell.input.u.transpose() * dzi;
  dh_prev.noalias() += cell.forget.u.transpose() * dzf;
  dh_prev.noalias() += cell.output.u.transpose() * dzo;
  dh_prev.noalias() += cell.candidate.u.transpose() * dzg;

  return {std::move(dh_prev), dc_total.cwiseProduct(cache.f)};
}

// ---------------------------------------------------------------------------
// Bi-LSTM
// ---------------------------------------------------------------------------

namespace {

LstmCellParams init_cell(std::size_t emb_dim, std::size_t units, Rng& rng) {
  auto make_gate = [&](double forget_bias) {
    LstmGate gate;
    gate.w.resize(static_cast<Eigen::Index>(units), static_cast<Eigen::Index>(emb_dim));
    glorot_fill(gate.w, emb_dim, units, rng);
    gate.u.resize(static_cast<Eigen::Index>(units), static_cast<Eigen::Index>(units));
    glorot_fill(gate.u, units, units, rng);
    gate.b = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(units), forget_bias);
    return gate;
  };
  LstmCellParams cell;
  cell.input = make_gate(0.0);
  cell.forget = make_gate(1.0);
  cell.output = make_gate(0.0);
  cell.candidate = make_gate(0.0);
  return cell;
}

struct EncodeCache {
  std::vector<LstmStepCache> fwd, bwd;  // in processing order
  Eigen::VectorXd rep;                  // concatenated final hidden states
  Eigen::VectorXd logits;
};

EncodeCache bilstm_encode_cached(const BiLstmModel& model, const PaddedSequence& seq) {
  if (static_cast<std::size_t>(seq.rows.cols()) != model.emb_dim()) {
    throw DimError("sequence embedding dimension does not match the model");
  }
  const std::size_t len = seq.valid_length();
  if (len == 0) throw EmptySequenceError("all-padding sequence");

  const auto units = static_cast<Eigen::Index>(model.units());
  EncodeCache cache;
  cache.fwd.reserve(len);
  cache.bwd.reserve(len);

  Eigen::VectorXd h = Eigen::VectorXd::Zero(units);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(units);
  for (std::size_t t = 0; t < len; ++t) {
    const Eigen::VectorXd x_t = seq.rows.row(static_cast<Eigen::Index>(t)).transpose();
    cache.fwd.push_back(lstm_step_cached(model.forward_cell, x_t, h, c));
    h = cache.fwd.back().h;
    c = cache.fwd.back().c;
  }
  const Eigen::VectorXd h_fwd = h;

  h.setZero();
  c.setZero();
  for (std::size_t t = len; t-- > 0;) {
    const Eigen::VectorXd x_t = seq.rows.row(static_cast<Eigen::Index>(t)).transpose();
    cache.bwd.push_back(lstm_step_cached(model.backward_cell, x_t, h, c));
    h = cache.bwd.back().h;
    c = cache.bwd.back().c;
  }

  cache.rep.resize(2 * units);
  cache.rep.head(units) = h_fwd;
  cache.rep.tail(units) = h;
  cache.logits = model.w_out * cache.rep + model.b_out;
  return cache;
}

BiLstmModel bilstm_zero_like(const BiLstmModel& model) {
  BiLstmModel g;
  g.forward_cell = cell_zero_like(model.forward_cell);
  g.backward_cell = cell_zero_like(model.backward_cell);
  g.w_out = Eigen::MatrixXd::Zero(model.w_out.rows(), model.w_out.cols());
  g.b_out = Eigen::VectorXd::Zero(model.b_out.size());
  return g;
}

// Backpropagation through time over one cached encoding; accumulates into
// `grad` scaled by `weight`.
void bilstm_backward_one(const BiLstmModel& model, const EncodeCache& cache,
                         Sentiment gold, double weight, BiLstmModel& grad) {
  Eigen::VectorXd dlogits = stable_softmax(cache.logits);
  dlogits(static_cast<Eigen::Index>(gold_index(gold))) -= 1.0;
  dlogits *= weight;

  grad.w_out.noalias() += dlogits * cache.rep.transpose();
  grad.b_out += dlogits;

  const Eigen::VectorXd drep = model.w_out.transpose() * dlogits;
  const auto units = static_cast<Eigen::Index>(model.units());

  auto run_bptt = [&](const std::vector<LstmStepCache>& steps,
                      const LstmCellParams& cell, LstmCellParams& cell_grad,
                      const Eigen::VectorXd& dh_final) {
    Eigen::VectorXd dh = dh_final;
    Eigen::VectorXd dc = Eigen::VectorXd::Zero(units);
    for (std::size_t s = steps.size(); s-- > 0;) {
      auto [dh_prev, dc_prev] = lstm_step_backward(cell, steps[s], dh, dc, cell_grad);
      dh = std::move(dh_prev);
      dc = std::move(dc_prev);
    }
  };
  run_bptt(cache.fwd, model.forward_cell, grad.forward_cell, drep.head(units));
  run_bptt(cache.bwd, model.backward_cell, grad.backward_cell, drep.tail(units));
}

template <typename Fn>
void for_each_gate(LstmCellParams& cell, Fn&& fn) {
  fn(cell.input);
  fn(cell.forget);
  fn(cell.output);
  fn(cell.candidate);
}

template <typename Fn>
void for_each_gate(const LstmCellParams& cell, Fn&& fn) {
  fn(cell.input);
  fn(cell.forget);
  fn(cell.output);
  fn(cell.candidate);
}

}  // namespace

BiLstmModel init_bilstm(std::size_t emb_dim, const BiLstmParams& params,
                        std::uint64_t seed) {
  if (emb_dim == 0) throw DimError("embedding dimension must be >= 1");
  if (params.units < 1) throw ConfigError("units must be >= 1");
  const auto units = static_cast<std::size_t>(params.units);
  Rng rng(seed);
  BiLstmModel model;
  model.forward_cell = init_cell(emb_dim, units, rng);
  model.backward_cell = init_cell(emb_dim, units, rng);
  model.w_out.resize(3, static_cast<Eigen::Index>(2 * units));
  glorot_fill(model.w_out, 2 * units, 3, rng);
  model.b_out = Eigen::VectorXd::Zero(3);
  return model;
}

std::array<double, 3> bilstm_encode(const BiLstmModel& model,
                                    const PaddedSequence& seq) {
  const EncodeCache cache = bilstm_encode_cached(model, seq);
  const Eigen::VectorXd p = stable_softmax(cache.logits);
  return {p(0), p(1), p(2)};
}

double bilstm_loss(const BiLstmModel& model, const std::vector<PaddedSequence>& seqs,
                   const std::vector<Sentiment>& labels) {
  if (seqs.size() != labels.size()) {
    throw ArityError("sequences and labels differ in length");
  }
  if (seqs.empty()) throw FitError("cannot evaluate the loss on an empty set");
  double loss = 0.0;
  const double inv_n = 1.0 / static_cast<double>(seqs.size());
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    const EncodeCache cache = bilstm_encode_cached(model, seqs[i]);
    loss -= log_softmax_at(cache.logits, gold_index(labels[i])) * inv_n;
  }
  return loss;
}

std::pair<double, BiLstmModel> bilstm_loss_grad(const BiLstmModel& model,
                                                const std::vector<PaddedSequence>& seqs,
                                                const std::vector<Sentiment>& labels) {
  if (seqs.size() != labels.size()) {
    throw ArityError("sequences and labels differ in length");
  }
  if (seqs.empty()) throw FitError("cannot evaluate the loss on an empty set");
  BiLstmModel grad = bilstm_zero_like(model);
  double loss = 0.0;
  const double inv_n = 1.0 / static_cast<double>(seqs.size());
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    const EncodeCache cache = bilstm_encode_cached(model, seqs[i]);
    loss -= log_softmax_at(cache.logits, gold_index(labels[i])) * inv_n;
    bilstm_backward_one(model, cache, labels[i], inv_n, grad);
  }
  return {loss, std::move(grad)};
}

Eigen::VectorXd bilstm_pack(const BiLstmModel& model) {
  Eigen::Index total = model.w_out.size() + model.b_out.size();
  for_each_gate(model.forward_cell, [&](const LstmGate& g) {
    total += g.w.size() + g.u.size() + g.b.size();
  });
  for_each_gate(model.backward_cell, [&](const LstmGate& g) {
    total += g.w.size() + g.u.size() + g.b.size();
  });

  Eigen::VectorXd flat(total);
  Eigen::Index off = 0;
  auto put = [&](const auto& block) {
    flat.segment(off, block.size()) =
        Eigen::Map<const Eigen::VectorXd>(block.data(), block.size());
    off += block.size();
  };
  for_each_gate(model.forward_cell, [&](const LstmGate& g) {
    put(g.w);
    put(g.u);
    put(g.b);
  });
  for_each_gate(model.backward_cell, [&](const LstmGate& g) {
    put(g.w);
    put(g.u);
    put(g.b);
  });
  put(model.w_out);
  put(model.b_out);
  return flat;
}

void bilstm_unpack(const Eigen::VectorXd& flat, BiLstmModel& model) {
  Eigen::Index off = 0;
  auto take = [&](auto& block) {
    if (off + block.size() > flat.size()) {
      throw DimError("flat parameter vector has wrong length");
    }
    Eigen::Map<Eigen::VectorXd>(block.data(), block.size()) =
        flat.segment(off, block.size());
    off += block.size();
  };
  for_each_gate(model.forward_cell, [&](LstmGate& g) {
    take(g.w);
    take(g.u);
    take(g.b);
  });
  for_each_gate(model.backward_cell, [&](LstmGate& g) {
    take(g.w);
    take(g.u);
    take(g.b);
  });
  take(model.w_out);
  take(model.b_out);
  if (off != flat.size()) throw DimError("flat parameter vector has wrong length");
}

BiLstmModel train_bilstm(const std::vector<PaddedSequence>& seqs,
                         const std::vector<Sentiment>& labels,
                         const BiLstmParams& params, std::uint64_t seed,
                         const std::vector<PaddedSequence>* dev_seqs,
                         const std::vector<Sentiment>* dev_labels) {
  check_labels(seqs.size(), labels);
  if (params.batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (params.epochs < 0) throw ConfigError("epochs must be >= 0");
  const auto emb_dim = static_cast<std::size_t>(seqs.front().rows.cols());
  for (const PaddedSequence& s : seqs) {
    if (static_cast<std::size_t>(s.rows.cols()) != emb_dim) {
      throw DimError("sequences disagree on embedding dimension");
    }
  }

  BiLstmModel model = init_bilstm(emb_dim, params, seed);
  Rng rng(seed + 1);
  RmsPropOptimizer rmsprop;
  rmsprop.lr = params.learning_rate;
  Eigen::VectorXd flat = bilstm_pack(model);

  const bool monitor = params.early_stopping && dev_seqs != nullptr &&
                       dev_labels != nullptr && !dev_seqs->empty();
  double best_f1 = -1.0;
  Eigen::VectorXd best_flat = flat;
  int stale_epochs = 0;

  std::vector<std::size_t> order(seqs.size());
  std::iota(order.begin(), order.end(), 0);
  const auto batch = static_cast<std::size_t>(params.batch_size);

  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t stop = std::min(start + batch, order.size());

      BiLstmModel grad = bilstm_zero_like(model);
      double loss = 0.0;
      const double inv_b = 1.0 / static_cast<double>(stop - start);
      for (std::size_t k = start; k < stop; ++k) {
        const std::size_t i = order[k];
        const EncodeCache cache = bilstm_encode_cached(model, seqs[i]);
        loss -= log_softmax_at(cache.logits, gold_index(labels[i])) * inv_b;
        bilstm_backward_one(model, cache, labels[i], inv_b, grad);
      }
      if (!std::isfinite(loss)) {
        throw NonFiniteLossError("Bi-LSTM loss became non-finite in epoch " +
                                 std::to_string(epoch));
      }

      Eigen::VectorXd grad_flat = bilstm_pack(grad);
      if (params.clip_norm > 0.0) {
        const double norm = grad_flat.norm();
        if (norm > params.clip_norm) grad_flat *= params.clip_norm / norm;
      }
      rmsprop.update(flat, grad_flat);
      bilstm_unpack(flat, model);
    }

    if (monitor) {
      std::vector<Sentiment> pred;
      pred.reserve(dev_seqs->size());
      for (const PaddedSequence& s : *dev_seqs) {
        pred.push_back(argmax_sentiment(bilstm_encode(model, s)));
      }
      const double f1 = macro_f1(confusion_matrix(*dev_labels, pred));
      if (f1 > best_f1) {
        best_f1 = f1;
        best_flat = flat;
        stale_epochs = 0;
      } else if (++stale_epochs >= params.patience) {
        break;
      }
    }
  }

  if (monitor) bilstm_unpack(best_flat, model);
  return model;
}

}  // namespace cmsa
