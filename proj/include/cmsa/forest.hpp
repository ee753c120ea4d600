#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cmsa/errors.hpp"
#include "cmsa/rng.hpp"
#include "cmsa/sentiment.hpp"
#include "cmsa/sparse.hpp"

namespace cmsa {

// Gini impurity 1 - sum((c/total)^2) of a 3-class count vector.
// Throws DegenerateNodeError on an all-zero count.
double gini(const std::array<long long, 3>& class_counts);

struct TreeParams {
  int max_depth = 0;          // 0 = unlimited
  int min_samples_split = 2;
};

// Node arena. Splits send value <= threshold left; leaves carry the class
// counts of the samples that reached them.
struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::array<long long, 3> counts{};

  bool is_leaf() const { return feature < 0; }
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  // Leaf class counts normalized to a distribution.
  std::array<double, 3> predict_proba(const SparseVector& x) const;
};

// CART induction with Gini impurity. At every node floor(sqrt(dim)) distinct
// candidate features (at least 1) are drawn from rng; candidate thresholds
// are midpoints between consecutive distinct values of a feature at the
// node, with implicit zeros of the sparse vectors participating. The split
// with the largest impurity decrease wins, ties broken by lower feature
// index then lower threshold; nodes become leaves on purity,
// min_samples_split, max_depth, or when no split has positive gain.
DecisionTree fit_tree(const std::vector<SparseVector>& x,
                      const std::vector<Sentiment>& labels, Rng& rng,
                      const TreeParams& params);

struct ForestParams {
  int n_trees = 100;
  bool bootstrap = true;  // size-N resample with replacement per tree
  TreeParams tree;
};

struct RandomForest {
  std::vector<DecisionTree> trees;
  std::size_t dim = 0;
  std::uint64_t seed = 0;
};

// Tree t draws its bootstrap sample and feature subsets from a generator
// seeded seed + t, so sequential and parallel training agree bit for bit.
RandomForest fit_forest(const std::vector<SparseVector>& x,
                        const std::vector<Sentiment>& labels,
                        const ForestParams& params, std::uint64_t seed);

// Unweighted mean of the member trees' leaf distributions.
Prediction predict_forest(const RandomForest& forest, const SparseVector& x);

}  // namespace cmsa
