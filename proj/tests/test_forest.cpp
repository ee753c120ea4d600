#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "cmsa/forest.hpp"
#include "cmsa/rng.hpp"
#include "cmsa/sparse.hpp"

using namespace cmsa;

namespace {

SparseVector sv(const std::vector<double>& dense) { return sparse_from_dense(dense); }

}  // namespace

TEST_CASE("gini of the canonical count vectors") {
  CHECK(gini({4, 0, 0}) == doctest::Approx(0.0));
  CHECK(gini({2, 2, 0}) == doctest::Approx(0.5));
  CHECK(gini({1, 1, 1}) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(gini({0, 0, 0}), DegenerateNodeError);
}

TEST_CASE("1-D binary data yields a depth-1 tree at threshold 0.5") {
  const std::vector<SparseVector> x = {sv({0.0}), sv({1.0}), sv({0.0}), sv({1.0})};
  const std::vector<Sentiment> y = {Sentiment::negative, Sentiment::positive,
                                    Sentiment::negative, Sentiment::positive};
  Rng rng(1);
  const DecisionTree t = fit_tree(x, y, rng, TreeParams{});
  REQUIRE(t.nodes.size() == 3);  // root + two leaves
  CHECK(t.nodes[0].feature == 0);
  CHECK(t.nodes[0].threshold == doctest::Approx(0.5));
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto p = t.predict_proba(x[i]);
    CHECK(class_at(static_cast<int>(
              std::max_element(p.begin(), p.end()) - p.begin())) == y[i]);
  }
}

TEST_CASE("unbounded tree memorizes conflict-free data") {
  Rng data_rng(31);
  std::vector<SparseVector> x;
  std::vector<Sentiment> y;
  for (int i = 0; i < 50; ++i) {
    x.push_back(sv({data_rng.uniform(), data_rng.uniform(), data_rng.uniform()}));
    y.push_back(class_at(static_cast<int>(data_rng.bounded(3))));
  }
  Rng rng(7);
  const DecisionTree t = fit_tree(x, y, rng, TreeParams{});
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto p = t.predict_proba(x[i]);
    CHECK(p[static_cast<std::size_t>(class_index(y[i]))] == doctest::Approx(1.0));
    CHECK(p[0] + p[1] + p[2] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("max_depth caps growth; min_samples_split stops small nodes") {
  Rng data_rng(5);
  std::vector<SparseVector> x;
  std::vector<Sentiment> y;
  for (int i = 0; i < 30; ++i) {
    x.push_back(sv({data_rng.uniform(), data_rng.uniform()}));
    y.push_back(class_at(static_cast<int>(data_rng.bounded(3))));
  }

  TreeParams stump;
  stump.max_depth = 1;
  Rng r1(3);
  const DecisionTree t1 = fit_tree(x, y, r1, stump);
  CHECK(t1.nodes.size() <= 3);

  TreeParams coarse;
  coarse.min_samples_split = 1000;  // root can never split
  Rng r2(3);
  const DecisionTree t2 = fit_tree(x, y, r2, coarse);
  CHECK(t2.nodes.size() == 1);
  CHECK(t2.nodes[0].is_leaf());
}

TEST_CASE("pure nodes become leaves immediately") {
  const std::vector<SparseVector> x = {sv({0.2}), sv({0.9})};
  const std::vector<Sentiment> y = {Sentiment::neutral, Sentiment::neutral};
  Rng rng(1);
  const DecisionTree t = fit_tree(x, y, rng, TreeParams{});
  CHECK(t.nodes.size() == 1);
  const auto p = t.predict_proba(sv({0.5}));
  CHECK(p[1] == doctest::Approx(1.0));
}

TEST_CASE("forest training is deterministic and prediction averages trees") {
  Rng data_rng(12);
  std::vector<SparseVector> x;
  std::vector<Sentiment> y;
  for (int i = 0; i < 60; ++i) {
    const int c = i % 3;
    x.push_back(sv({(c - 1) * 2.0 + data_rng.uniform(-0.5, 0.5),
                    data_rng.uniform(-0.5, 0.5)}));
    y.push_back(class_at(c));
  }

  ForestParams params;
  params.n_trees = 15;
  const RandomForest a = fit_forest(x, y, params, 42);
  const RandomForest b = fit_forest(x, y, params, 42);
  REQUIRE(a.trees.size() == 15);
  for (std::size_t t = 0; t < a.trees.size(); ++t) {
    REQUIRE(a.trees[t].nodes.size() == b.trees[t].nodes.size());
    for (std::size_t n = 0; n < a.trees[t].nodes.size(); ++n) {
      CHECK(a.trees[t].nodes[n].feature == b.trees[t].nodes[n].feature);
      CHECK(a.trees[t].nodes[n].threshold == b.trees[t].nodes[n].threshold);
    }
  }

  int correct = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Prediction p = predict_forest(a, x[i]);
    CHECK(p.probs[0] + p.probs[1] + p.probs[2] == doctest::Approx(1.0).epsilon(1e-9));
    correct += p.label == y[i];
  }
  CHECK(correct > static_cast<int>(x.size() * 0.9));  // separable blobs
}

TEST_CASE("single-tree forest without bootstrap equals fit_tree on identity order") {
  Rng data_rng(8);
  std::vector<SparseVector> x;
  std::vector<Sentiment> y;
  for (int i = 0; i < 20; ++i) {
    x.push_back(sv({data_rng.uniform(), data_rng.uniform()}));
    y.push_back(class_at(static_cast<int>(data_rng.bounded(3))));
  }
  ForestParams params;
  params.n_trees = 1;
  params.bootstrap = false;
  const RandomForest f = fit_forest(x, y, params, 9);
  Rng rng(9);  // tree 0 uses seed + 0
  const DecisionTree t = fit_tree(x, y, rng, params.tree);
  REQUIRE(f.trees.size() == 1);
  REQUIRE(f.trees[0].nodes.size() == t.nodes.size());
  for (std::size_t n = 0; n < t.nodes.size(); ++n) {
    CHECK(f.trees[0].nodes[n].feature == t.nodes[n].feature);
    CHECK(f.trees[0].nodes[n].threshold == t.nodes[n].threshold);
    CHECK(f.trees[0].nodes[n].counts == t.nodes[n].counts);
  }
}

TEST_CASE("implicit sparse zeros participate in splits") {
  // The informative feature reads 0 implicitly on one class: no stored entry.
  SparseVector a;  // all-zero vector, dim 1
  a.dim = 1;
  SparseVector b;
  b.dim = 1;
  b.push_back(0, 1.0);
  const std::vector<SparseVector> x = {a, b, a, b};
  const std::vector<Sentiment> y = {Sentiment::negative, Sentiment::positive,
                                    Sentiment::negative, Sentiment::positive};
  Rng rng(2);
  const DecisionTree t = fit_tree(x, y, rng, TreeParams{});
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto p = t.predict_proba(x[i]);
    CHECK(p[static_cast<std::size_t>(class_index(y[i]))] == doctest::Approx(1.0));
  }
}
