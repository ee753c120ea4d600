#include "cmsa/ensemble.hpp"

namespace cmsa {

namespace {

// Keeps the original error type where callers match on it (degenerate
// labels) and folds everything else into FitError, either way naming the
// member that failed.
template <typename Fit>
auto fit_member(const char* name, Fit&& fit) {
  const std::string who = std::string("voting member ") + name + ": ";
  try {
    return fit();
  } catch (const DegenerateLabelsError& e) {
    throw DegenerateLabelsError(who + e.what());
  } catch (const Error& e) {
    throw FitError(who + e.what());
  }
}

}  // namespace

VotingEnsemble fit_voting(const std::vector<SparseVector>& x,
                          const std::vector<Sentiment>& labels,
                          const VotingParams& params, std::uint64_t seed) {
  VotingEnsemble ensemble;
  ensemble.svm = fit_member(
      "svm", [&] { return train_ovo_svm(x, labels, params.svm, seed); });
  ensemble.logreg = fit_member(
      "logreg", [&] { return train_logreg(x, labels, params.logreg); });
  ensemble.forest = fit_member(
      "forest", [&] { return fit_forest(x, labels, params.forest, seed + 2); });
  return ensemble;
}

Prediction combine_soft_votes(
    const std::array<std::array<double, 3>, 3>& member_probs) {
  Prediction pred;
  pred.probs = {0.0, 0.0, 0.0};
  for (const auto& p : member_probs) {
    for (std::size_t k = 0; k < 3; ++k) pred.probs[k] += p[k] / 3.0;
  }
  pred.label = argmax_sentiment(pred.probs);
  return pred;
}

Prediction predict_voting(const VotingEnsemble& ensemble, const SparseVector& x) {
  return combine_soft_votes({predict_ovo(ensemble.svm, x).probs,
                             predict_logreg(ensemble.logreg, x).probs,
                             predict_forest(ensemble.forest, x).probs});
}

}  // namespace cmsa
