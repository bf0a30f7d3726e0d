#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "depdetect/corpus.hpp"
#include "depdetect/vectorize.hpp"

namespace dd {

// ---------------------------------------------------------------- Naive Bayes

struct MNBModel {
  std::array<double, 2> log_prior{0.0, 0.0};          // [non_depressive, depressive]
  std::array<std::vector<double>, 2> log_likelihood;  // per class, size V
  double alpha = 1.0;
  std::size_t n_features = 0;
};

// prior_c = n_c/n, likelihood(t|c) = (count(t,c)+alpha)/(total_c+alpha*V).
// X must be nonnegative count or binary vectors.
MNBModel nb_fit(const std::vector<SparseVector>& x, const std::vector<Label>& y,
                std::size_t n_features, double alpha = 1.0);

// Returns the argmax label (ties go to non_depressive) and the normalized
// log-posteriors per class.
std::pair<Label, std::array<double, 2>> nb_predict(const MNBModel& model,
                                                   const SparseVector& x);

// ------------------------------------------------------------------ linear SVM

struct SVMConfig {
  double lambda = 1e-4;
  int epochs = 50;
  std::uint64_t seed = 0;
};

struct SVMModel {
  std::vector<double> weights;
  double bias = 0.0;
  double lambda = 1e-4;
  int epochs = 0;
  std::uint64_t seed = 0;
  // Regularized objective after each epoch.
  std::vector<double> objective_trace;
};

// Pegasos-style SGD on the hinge loss; labels are +1 for depressive and -1
// for non_depressive; the bias is unregularized.
SVMModel svm_fit(const std::vector<SparseVector>& x,
                 const std::vector<Label>& y, std::size_t n_features,
                 const SVMConfig& cfg);

// decision = w.x + b; depressive iff decision > 0.
std::pair<Label, double> svm_predict(const SVMModel& model,
                                     const SparseVector& x);

double svm_objective(const SVMModel& model, const std::vector<SparseVector>& x,
                     const std::vector<Label>& y);

// --------------------------------------------------------------- random forest

struct TreeNode {
  // feature == -1 marks a leaf.
  std::int32_t feature = -1;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  Label leaf_class = Label::NonDepressive;
  double leaf_fraction = 0.0;  // fraction of leaf rows holding leaf_class
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // node 0 is the root
  int max_depth = 0;            // 0 = unlimited
  Label predict(const std::vector<double>& row) const;
};

struct RFConfig {
  int n_estimators = 40;
  int max_depth = 0;           // 0 = unlimited
  int features_per_split = 0;  // 0 = ceil(sqrt(V))
  bool bootstrap = true;
  bool weighted = false;       // out-of-bag error voting weights
  std::uint64_t seed = 0;
};

struct RFModel {
  std::vector<DecisionTree> trees;
  std::vector<double> tree_weights;
  std::size_t n_features = 0;
  RFConfig config;
};

// Rows of a dense feature matrix, one per example.
using DenseMatrix = std::vector<std::vector<double>>;

DenseMatrix densify(const std::vector<SparseVector>& x, std::size_t n_features);

// Gini-impurity trees over bootstrap samples; per-tree seed = seed + index.
// With `weighted`, tree weight = max(0.01, 1 - out-of-bag error).
RFModel rf_fit(const DenseMatrix& x, const std::vector<Label>& y,
               const RFConfig& cfg);

// Weighted vote; returns the winning label (ties go to non_depressive) and
// the depressive weight fraction.
std::pair<Label, double> rf_predict(const RFModel& model,
                                    const std::vector<double>& row);

}  // namespace dd
