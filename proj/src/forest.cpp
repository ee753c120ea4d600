#include "cmsa/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace cmsa {

namespace {

constexpr double kMinGain = 1e-12;

std::array<long long, 3> count_classes(const std::vector<Sentiment>& labels,
                                       const std::vector<std::size_t>& at) {
  std::array<long long, 3> counts{};
  for (std::size_t i : at) ++counts[static_cast<std::size_t>(class_index(labels[i]))];
  return counts;
}

bool is_pure(const std::array<long long, 3>& counts) {
  int nonzero = 0;
  for (long long c : counts) nonzero += c > 0 ? 1 : 0;
  return nonzero <= 1;
}

// Induction state shared across the recursion; samples are index lists into
// the caller's arrays so bootstrap duplicates cost nothing.
struct TreeBuilder {
  const std::vector<SparseVector>& x;
  const std::vector<Sentiment>& labels;
  Rng& rng;
  const TreeParams& params;
  std::size_t dim;
  std::size_t n_candidates;
  std::vector<TreeNode> nodes;

  std::vector<std::size_t> sample_features() {
    std::unordered_set<std::size_t> chosen;
    while (chosen.size() < n_candidates) {
      chosen.insert(static_cast<std::size_t>(rng.bounded(dim)));
    }
    std::vector<std::size_t> out(chosen.begin(), chosen.end());
    std::sort(out.begin(), out.end());
    return out;
  }

  struct Split {
    double gain = 0.0;
    std::size_t feature = 0;
    double threshold = 0.0;
    bool found = false;
  };

  Split best_split(const std::vector<std::size_t>& at,
                   const std::array<long long, 3>& counts) {
    const double parent_gini = gini(counts);
    const auto n = static_cast<double>(at.size());
    Split best;

    std::vector<std::pair<double, std::size_t>> ordered;  // (value, class index)
    for (std::size_t f : sample_features()) {
      ordered.clear();
      for (std::size_t i : at) {
        ordered.emplace_back(x[i].get(static_cast<std::uint32_t>(f)),
                             static_cast<std::size_t>(class_index(labels[i])));
      }
      std::sort(ordered.begin(), ordered.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });

      // Sweep thresholds at midpoints between consecutive distinct values.
      std::array<long long, 3> left{};
      long long n_left = 0;
      for (std::size_t j = 0; j < ordered.size(); ++j) {
        if (j > 0 && ordered[j].first != ordered[j - 1].first) {
          const double threshold = 0.5 * (ordered[j - 1].first + ordered[j].first);
          std::array<long long, 3> right;
          for (std::size_t k = 0; k < 3; ++k) right[k] = counts[k] - left[k];
          const auto n_right = static_cast<long long>(at.size()) - n_left;
          const double weighted =
              (static_cast<double>(n_left) / n) * gini(left) +
              (static_cast<double>(n_right) / n) * gini(right);
          const double gain = parent_gini - weighted;
          // Strictly-better comparison keeps the first (lowest feature,
          // lowest threshold) candidate on ties.
          if (gain > best.gain + kMinGain) {
            best = {gain, f, threshold, true};
          }
        }
        ++left[ordered[j].second];
        ++n_left;
      }
    }
    return best;
  }

  std::int32_t build(const std::vector<std::size_t>& at, int depth) {
    const auto index = static_cast<std::int32_t>(nodes.size());
    nodes.emplace_back();
    nodes[static_cast<std::size_t>(index)].counts = count_classes(labels, at);
    const auto counts = nodes[static_cast<std::size_t>(index)].counts;

    const bool depth_capped = params.max_depth > 0 && depth >= params.max_depth;
    if (is_pure(counts) || at.size() < static_cast<std::size_t>(params.min_samples_split) ||
        depth_capped) {
      return index;
    }

    const Split split = best_split(at, counts);
    if (!split.found) return index;

    std::vector<std::size_t> left_at, right_at;
    for (std::size_t i : at) {
      const double v = x[i].get(static_cast<std::uint32_t>(split.feature));
      (v <= split.threshold ? left_at : right_at).push_back(i);
    }

    nodes[static_cast<std::size_t>(index)].feature =
        static_cast<std::int32_t>(split.feature);
    nodes[static_cast<std::size_t>(index)].threshold = split.threshold;
    const std::int32_t left = build(left_at, depth + 1);
    nodes[static_cast<std::size_t>(index)].left = left;
    const std::int32_t right = build(right_at, depth + 1);
    nodes[static_cast<std::size_t>(index)].right = right;
    return index;
  }
};

DecisionTree fit_tree_at(const std::vector<SparseVector>& x,
                         const std::vector<Sentiment>& labels,
                         const std::vector<std::size_t>& at, Rng& rng,
                         const TreeParams& params) {
  if (at.empty()) throw FitError("cannot fit a tree on an empty sample set");
  const std::size_t dim = x.front().dim;
  std::size_t k = static_cast<std::size_t>(
      std::floor(std::sqrt(static_cast<double>(dim))));
  if (k == 0) k = 1;

  TreeBuilder builder{x, labels, rng, params, dim, k, {}};
  builder.build(at, 0);
  DecisionTree tree;
  tree.nodes = std::move(builder.nodes);
  return tree;
}

void check_training_input(const std::vector<SparseVector>& x,
                          const std::vector<Sentiment>& labels) {
  if (x.empty()) throw FitError("cannot train on an empty set");
  if (x.size() != labels.size()) {
    throw ArityError("x and labels differ in length");
  }
  for (const SparseVector& v : x) {
    if (v.dim != x.front().dim) {
      throw DimError("feature vectors disagree on dimension");
    }
  }
}

}  // namespace

double gini(const std::array<long long, 3>& class_counts) {
  long long total = 0;
  for (long long c : class_counts) total += c;
  if (total <= 0) throw DegenerateNodeError("gini of an empty count vector");
  double sum_sq = 0.0;
  for (long long c : class_counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

std::array<double, 3> DecisionTree::predict_proba(const SparseVector& x) const {
  std::size_t node = 0;
  while (!nodes[node].is_leaf()) {
    const double v = x.get(static_cast<std::uint32_t>(nodes[node].feature));
    node = static_cast<std::size_t>(v <= nodes[node].threshold ? nodes[node].left
                                                               : nodes[node].right);
  }
  const auto& counts = nodes[node].counts;
  const auto total = static_cast<double>(counts[0] + counts[1] + counts[2]);
  return {static_cast<double>(counts[0]) / total, static_cast<double>(counts[1]) / total,
          static_cast<double>(counts[2]) / total};
}

DecisionTree fit_tree(const std::vector<SparseVector>& x,
                      const std::vector<Sentiment>& labels, Rng& rng,
                      const TreeParams& params) {
  check_training_input(x, labels);
  std::vector<std::size_t> at(x.size());
  std::iota(at.begin(), at.end(), 0);
  return fit_tree_at(x, labels, at, rng, params);
}

RandomForest fit_forest(const std::vector<SparseVector>& x,
                        const std::vector<Sentiment>& labels,
                        const ForestParams& params, std::uint64_t seed) {
  check_training_input(x, labels);
  if (params.n_trees < 1) throw ConfigError("n_trees must be >= 1");

  RandomForest forest;
  forest.dim = x.front().dim;
  forest.seed = seed;
  forest.trees.reserve(static_cast<std::size_t>(params.n_trees));

  const std::size_t n = x.size();
  for (int t = 0; t < params.n_trees; ++t) {
    Rng rng(seed + static_cast<std::uint64_t>(t));
    std::vector<std::size_t> at(n);
    if (params.bootstrap) {
      for (std::size_t& i : at) i = static_cast<std::size_t>(rng.bounded(n));
    } else {
      std::iota(at.begin(), at.end(), 0);
    }
    forest.trees.push_back(fit_tree_at(x, labels, at, rng, params.tree));
  }
  return forest;
}

Prediction predict_forest(const RandomForest& forest, const SparseVector& x) {
  if (x.dim != forest.dim) {
    throw DimError("input dimension " + std::to_string(x.dim) +
                   " does not match forest dimension " + std::to_string(forest.dim));
  }
  Prediction pred;
  pred.probs = {0.0, 0.0, 0.0};
  for (const DecisionTree& tree : forest.trees) {
    const auto p = tree.predict_proba(x);
    for (std::size_t k = 0; k < 3; ++k) pred.probs[k] += p[k];
  }
  const auto inv = 1.0 / static_cast<double>(forest.trees.size());
  for (double& v : pred.probs) v *= inv;
  pred.label = argmax_sentiment(pred.probs);
  return pred;
}

}  // namespace cmsa
