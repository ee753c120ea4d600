#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cmsa/forest.hpp"
#include "cmsa/linear.hpp"
#include "cmsa/sentiment.hpp"
#include "cmsa/sparse.hpp"

namespace cmsa {

struct VotingParams {
  SvmParams svm;
  LogRegParams logreg;
  ForestParams forest;
};

// Soft-voting ensemble over the three estimators, equal weights, member
// order fixed (SVM, logistic regression, random forest).
struct VotingEnsemble {
  OvoSvmModel svm;
  LogRegModel logreg;
  RandomForest forest;
};

// Members are fitted independently on the same data with seeds derived
// seed, seed + 1, seed + 2. A member's fit error propagates with the member
// named in the message.
VotingEnsemble fit_voting(const std::vector<SparseVector>& x,
                          const std::vector<Sentiment>& labels,
                          const VotingParams& params, std::uint64_t seed);

// The soft-vote reduction itself: mean of the member probability vectors,
// label = argmax with ties toward the smaller sentiment value. Exposed
// separately so the rule can be checked against brute force.
Prediction combine_soft_votes(const std::array<std::array<double, 3>, 3>& member_probs);

Prediction predict_voting(const VotingEnsemble& ensemble, const SparseVector& x);

}  // namespace cmsa
