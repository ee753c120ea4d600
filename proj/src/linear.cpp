#include "cmsa/linear.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cmsa/rng.hpp"

namespace cmsa {

namespace {

double sigmoid(double d) {
  if (d >= 0.0) return 1.0 / (1.0 + std::exp(-d));
  const double e = std::exp(d);
  return e / (1.0 + e);
}

void check_same_dim(const std::vector<SparseVector>& x) {
  for (const SparseVector& v : x) {
    if (v.dim != x.front().dim) {
      throw DimError("feature vectors disagree on dimension: " +
                     std::to_string(v.dim) + " vs " + std::to_string(x.front().dim));
    }
  }
}

}  // namespace

double BinaryLinearModel::decision_value(const SparseVector& x) const {
  return dot(w, x) + b;
}

BinaryLinearModel train_svm_binary(const std::vector<SparseVector>& x,
                                   const std::vector<int>& y, const SvmParams& params,
                                   std::uint64_t seed) {
  if (x.size() != y.size()) {
    throw ArityError("x and y differ in length: " + std::to_string(x.size()) + " vs " +
                     std::to_string(y.size()));
  }
  bool has_pos = false, has_neg = false;
  for (int label : y) {
    if (label == 1) {
      has_pos = true;
    } else if (label == -1) {
      has_neg = true;
    } else {
      throw DegenerateLabelsError("binary labels must be +1 or -1, got " +
                                  std::to_string(label));
    }
  }
  if (!has_pos || !has_neg) {
    throw DegenerateLabelsError("both binary labels must occur in the training data");
  }
  check_same_dim(x);

  const std::size_t n = x.size();
  const std::size_t dim = x.front().dim;
  const double c = params.c;

  BinaryLinearModel model;
  model.w.assign(dim, 0.0);
  model.b = 0.0;
  model.alphas.assign(n, 0.0);

  // Q_ii with the implicit constant-1 bias feature folded in.
  std::vector<double> q_diag(n);
  for (std::size_t i = 0; i < n; ++i) q_diag[i] = x[i].squared_norm() + 1.0;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);

  for (int epoch = 0; epoch < params.max_epochs; ++epoch) {
    rng.shuffle(order);
    double max_violation = 0.0;

    for (std::size_t i : order) {
      const double yi = static_cast<double>(y[i]);
      const double g = yi * (dot(model.w, x[i]) + model.b) - 1.0;
      const double alpha = model.alphas[i];

      double pg = g;
      if (alpha <= 0.0) {
        pg = std::min(g, 0.0);
      } else if (alpha >= c) {
        pg = std::max(g, 0.0);
      }
      max_violation = std::max(max_violation, std::abs(pg));

      if (std::abs(pg) > 1e-12) {
        const double alpha_new = std::min(std::max(alpha - g / q_diag[i], 0.0), c);
        const double delta = alpha_new - alpha;
        if (delta != 0.0) {
          axpy(delta * yi, x[i], model.w);
          model.b += delta * yi;
          model.alphas[i] = alpha_new;
        }
      }
    }

    // Dual objective in maximization form: sum(alpha) - 0.5 * ||w_aug||^2.
    double w_norm2 = model.b * model.b;
    for (double v : model.w) w_norm2 += v * v;
    const double alpha_sum =
        std::accumulate(model.alphas.begin(), model.alphas.end(), 0.0);
    model.dual_objective_trace.push_back(alpha_sum - 0.5 * w_norm2);
    model.epochs_run = epoch + 1;

    if (max_violation < params.tol) break;
  }
  return model;
}

OvoSvmModel train_ovo_svm(const std::vector<SparseVector>& x,
                          const std::vector<Sentiment>& labels, const SvmParams& params,
                          std::uint64_t seed) {
  if (x.size() != labels.size()) {
    throw ArityError("x and labels differ in length");
  }
  std::array<std::size_t, 3> class_counts{};
  for (Sentiment s : labels) ++class_counts[static_cast<std::size_t>(class_index(s))];
  for (Sentiment cls : kClasses) {
    if (class_counts[static_cast<std::size_t>(class_index(cls))] == 0) {
      throw DegenerateLabelsError(std::string("class ") + sentiment_name(cls) +
                                  " is absent from the training data");
    }
  }
  check_same_dim(x);

  OvoSvmModel model;
  model.dim = x.front().dim;
  for (std::size_t p = 0; p < OvoSvmModel::kPairs.size(); ++p) {
    const auto [a, b] = OvoSvmModel::kPairs[p];
    std::vector<SparseVector> sub_x;
    std::vector<int> sub_y;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (labels[i] == a) {
        sub_x.push_back(x[i]);
        sub_y.push_back(1);
      } else if (labels[i] == b) {
        sub_x.push_back(x[i]);
        sub_y.push_back(-1);
      }
    }
    model.pair_models[p] =
        train_svm_binary(sub_x, sub_y, params, seed + static_cast<std::uint64_t>(p));
  }
  return model;
}

Prediction predict_ovo(const OvoSvmModel& model, const SparseVector& x) {
  if (x.dim != model.dim) {
    throw DimError("input dimension " + std::to_string(x.dim) +
                   " does not match model dimension " + std::to_string(model.dim));
  }
  std::array<double, 3> votes{};
  for (std::size_t p = 0; p < OvoSvmModel::kPairs.size(); ++p) {
    const auto [a, b] = OvoSvmModel::kPairs[p];
    const double d = model.pair_models[p].decision_value(x);
    votes[static_cast<std::size_t>(class_index(a))] += sigmoid(d);
    votes[static_cast<std::size_t>(class_index(b))] += sigmoid(-d);
  }
  Prediction pred;
  for (std::size_t k = 0; k < 3; ++k) {
    pred.probs[k] = votes[k] / static_cast<double>(OvoSvmModel::kPairs.size());
  }
  pred.label = argmax_sentiment(pred.probs);
  return pred;
}

std::array<double, 3> softmax3(const std::array<double, 3>& logits) {
  const double m = std::max({logits[0], logits[1], logits[2]});
  std::array<double, 3> out;
  double sum = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    out[k] = std::exp(logits[k] - m);
    sum += out[k];
  }
  for (double& v : out) v /= sum;
  return out;
}

LogRegGradient logreg_loss_grad(const std::array<std::vector<double>, 3>& w,
                                const std::array<double, 3>& b,
                                const std::vector<SparseVector>& x,
                                const std::vector<Sentiment>& labels, double lambda) {
  if (x.size() != labels.size()) {
    throw ArityError("x and labels differ in length");
  }
  if (x.empty()) throw FitError("cannot evaluate the loss on an empty set");
  const std::size_t dim = w[0].size();

  LogRegGradient grad;
  for (auto& gw : grad.gw) gw.assign(dim, 0.0);

  const double inv_n = 1.0 / static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::array<double, 3> z;
    for (std::size_t k = 0; k < 3; ++k) z[k] = dot(w[k], x[i]) + b[k];

    // Stable log-softmax for the loss; plain softmax for the gradient.
    const double m = std::max({z[0], z[1], z[2]});
    double sum_exp = 0.0;
    for (double v : z) sum_exp += std::exp(v - m);
    const auto gold = static_cast<std::size_t>(class_index(labels[i]));
    grad.loss -= (z[gold] - m - std::log(sum_exp)) * inv_n;

    for (std::size_t k = 0; k < 3; ++k) {
      const double p = std::exp(z[k] - m) / sum_exp;
      const double coeff = (p - (k == gold ? 1.0 : 0.0)) * inv_n;
      axpy(coeff, x[i], grad.gw[k]);
      grad.gb[k] += coeff;
    }
  }

  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t d = 0; d < dim; ++d) {
      grad.loss += 0.5 * lambda * w[k][d] * w[k][d];
      grad.gw[k][d] += lambda * w[k][d];
    }
  }
  return grad;
}

LogRegModel train_logreg(const std::vector<SparseVector>& x,
                         const std::vector<Sentiment>& labels,
                         const LogRegParams& params) {
  if (x.size() != labels.size()) {
    throw ArityError("x and labels differ in length");
  }
  if (x.empty()) throw FitError("cannot train on an empty set");
  std::array<std::size_t, 3> class_counts{};
  for (Sentiment s : labels) ++class_counts[static_cast<std::size_t>(class_index(s))];
  int present = 0;
  for (std::size_t count : class_counts) present += count > 0 ? 1 : 0;
  if (present < 2) {
    throw DegenerateLabelsError("logistic regression needs at least 2 distinct classes");
  }
  check_same_dim(x);

  LogRegModel model;
  model.dim = x.front().dim;
  model.lambda = params.lambda;
  for (auto& row : model.w) row.assign(model.dim, 0.0);

  for (int iter = 0; iter < params.max_iters; ++iter) {
    LogRegGradient grad = logreg_loss_grad(model.w, model.b, x, labels, params.lambda);
    if (!std::isfinite(grad.loss)) {
      throw NonFiniteLossError("objective became non-finite at iteration " +
                               std::to_string(iter));
    }
    model.loss_trace.push_back(grad.loss);

    double inf_norm = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      for (double g : grad.gw[k]) inf_norm = std::max(inf_norm, std::abs(g));
      inf_norm = std::max(inf_norm, std::abs(grad.gb[k]));
    }
    if (inf_norm < params.tol) break;

    for (std::size_t k = 0; k < 3; ++k) {
      for (std::size_t d = 0; d < model.dim; ++d) {
        model.w[k][d] -= params.lr * grad.gw[k][d];
      }
      model.b[k] -= params.lr * grad.gb[k];
    }
  }
  return model;
}

Prediction predict_logreg(const LogRegModel& model, const SparseVector& x) {
  if (x.dim != model.dim) {
    throw DimError("input dimension " + std::to_string(x.dim) +
                   " does not match model dimension " + std::to_string(model.dim));
  }
  std::array<double, 3> z;
  for (std::size_t k = 0; k < 3; ++k) z[k] = dot(model.w[k], x) + model.b[k];
  Prediction pred;
  pred.probs = softmax3(z);
  pred.label = argmax_sentiment(pred.probs);
  return pred;
}

}  // namespace cmsa
