#include <algorithm>
#include <cmath>
#include <numeric>

#include "depdetect/error.hpp"
#include "depdetect/rng.hpp"
#include "depdetect/shallow.hpp"

namespace dd {

namespace {

struct SplitChoice {
  bool found = false;
  std::int32_t feature = -1;
  double threshold = 0.0;
  double gini = 0.0;
};

double gini_of(std::size_t dep, std::size_t total) {
  if (total == 0) return 0.0;
  const double p = static_cast<double>(dep) / static_cast<double>(total);
  return 1.0 - p * p - (1.0 - p) * (1.0 - p);
}

// Minimum weighted-Gini split over the candidate features; thresholds are
// midpoints between consecutive distinct sorted values. Ties break toward
// the lowest feature index, then the lowest threshold.
SplitChoice best_split(const DenseMatrix& x, const std::vector<Label>& y,
                       const std::vector<std::size_t>& rows,
                       std::vector<std::int32_t>& features) {
  SplitChoice best;
  std::sort(features.begin(), features.end());
  std::vector<std::pair<double, bool>> column(rows.size());
  for (std::int32_t f : features) {
    for (std::size_t i = 0; i < rows.size(); ++i)
      column[i] = {x[rows[i]][static_cast<std::size_t>(f)],
                   y[rows[i]] == Label::Depressive};
    std::sort(column.begin(), column.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::size_t total_dep = 0;
    for (const auto& [v, d] : column) total_dep += d;
    const std::size_t n = column.size();

    std::size_t left_n = 0, left_dep = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      ++left_n;
      left_dep += column[i].second;
      if (column[i].first == column[i + 1].first) continue;
      const double threshold = 0.5 * (column[i].first + column[i + 1].first);
      const std::size_t right_n = n - left_n;
      const double w_gini =
          (static_cast<double>(left_n) * gini_of(left_dep, left_n) +
           static_cast<double>(right_n) *
               gini_of(total_dep - left_dep, right_n)) /
          static_cast<double>(n);
      if (!best.found || w_gini < best.gini) {
        best = {true, f, threshold, w_gini};
      }
    }
  }
  return best;
}

Label majority_label(const std::vector<Label>& y,
                     const std::vector<std::size_t>& rows, double* fraction) {
  std::size_t dep = 0;
  for (std::size_t r : rows) dep += y[r] == Label::Depressive;
  const Label label = 2 * dep > rows.size() ? Label::Depressive
                                            : Label::NonDepressive;
  const std::size_t won = label == Label::Depressive ? dep : rows.size() - dep;
  *fraction = rows.empty()
                  ? 0.0
                  : static_cast<double>(won) / static_cast<double>(rows.size());
  return label;
}

struct TreeBuilder {
  const DenseMatrix& x;
  const std::vector<Label>& y;
  int max_depth;
  int features_per_split;
  Rng& rng;
  DecisionTree tree;

  std::int32_t build(std::vector<std::size_t> rows, int depth) {
    const auto node_id = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();

    bool pure = true;
    for (std::size_t i = 1; i < rows.size(); ++i)
      if (y[rows[i]] != y[rows[0]]) { pure = false; break; }

    const std::size_t n_features = x.empty() ? 0 : x[0].size();
    SplitChoice split;
    if (!pure && rows.size() >= 2 && (max_depth == 0 || depth < max_depth)) {
      // sample features without replacement (partial Fisher-Yates)
      std::vector<std::int32_t> all(n_features);
      std::iota(all.begin(), all.end(), 0);
      const auto m = std::min<std::size_t>(
          static_cast<std::size_t>(features_per_split), n_features);
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j =
            i + static_cast<std::size_t>(uniform_u64(rng, all.size() - i));
        std::swap(all[i], all[j]);
      }
      std::vector<std::int32_t> chosen(all.begin(),
                                       all.begin() + static_cast<long>(m));
      split = best_split(x, y, rows, chosen);
    }

    if (!split.found) {
      double fraction = 0.0;
      const Label label = majority_label(y, rows, &fraction);
      tree.nodes[static_cast<std::size_t>(node_id)] =
          TreeNode{-1, 0.0, -1, -1, label, fraction};
      return node_id;
    }

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : rows) {
      if (x[r][static_cast<std::size_t>(split.feature)] <= split.threshold)
        left_rows.push_back(r);
      else
        right_rows.push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    const std::int32_t left = build(std::move(left_rows), depth + 1);
    const std::int32_t right = build(std::move(right_rows), depth + 1);
    auto& node = tree.nodes[static_cast<std::size_t>(node_id)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = left;
    node.right = right;
    return node_id;
  }
};

}  // namespace

Label DecisionTree::predict(const std::vector<double>& row) const {
  std::size_t i = 0;
  for (;;) {
    const TreeNode& node = nodes[i];
    if (node.feature < 0) return node.leaf_class;
    const double v = row[static_cast<std::size_t>(node.feature)];
    i = static_cast<std::size_t>(v <= node.threshold ? node.left : node.right);
  }
}

DenseMatrix densify(const std::vector<SparseVector>& x,
                    std::size_t n_features) {
  DenseMatrix dense(x.size(), std::vector<double>(n_features, 0.0));
  for (std::size_t i = 0; i < x.size(); ++i)
    for (const auto& e : x[i].entries)
      if (e.index < n_features) dense[i][e.index] = e.weight;
  return dense;
}

RFModel rf_fit(const DenseMatrix& x, const std::vector<Label>& y,
               const RFConfig& cfg) {
  if (x.size() != y.size() || x.size() < 2)
    fail(Errc::fit, "need at least 2 examples with matching labels");
  std::size_t dep = 0;
  for (Label l : y) dep += l == Label::Depressive;
  if (dep == 0 || dep == y.size())
    fail(Errc::fit, "training data must contain both classes");
  if (cfg.n_estimators < 1) fail(Errc::param, "n_estimators must be >= 1");

  const std::size_t n = x.size();
  const std::size_t n_features = x[0].size();
  int m = cfg.features_per_split;
  if (m <= 0)
    m = static_cast<int>(
        std::ceil(std::sqrt(static_cast<double>(n_features))));

  RFModel model;
  model.n_features = n_features;
  model.config = cfg;
  model.config.features_per_split = m;

  for (int t = 0; t < cfg.n_estimators; ++t) {
    // per-tree seed keeps results independent of scheduling
    Rng rng(cfg.seed + static_cast<std::uint64_t>(t));

    std::vector<std::size_t> rows;
    std::vector<bool> in_bag(n, !cfg.bootstrap);
    if (cfg.bootstrap) {
      rows.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        const auto r = static_cast<std::size_t>(uniform_u64(rng, n));
        rows.push_back(r);
        in_bag[r] = true;
      }
    } else {
      rows.resize(n);
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }

    TreeBuilder builder{x, y, cfg.max_depth, m, rng, {}};
    builder.tree.max_depth = cfg.max_depth;
    builder.build(std::move(rows), 0);
    model.trees.push_back(std::move(builder.tree));

    double weight = 1.0;
    if (cfg.weighted) {
      std::size_t oob = 0, wrong = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (in_bag[i]) continue;
        ++oob;
        wrong += model.trees.back().predict(x[i]) != y[i];
      }
      const double err =
          oob == 0 ? 0.0
                   : static_cast<double>(wrong) / static_cast<double>(oob);
      weight = std::max(0.01, 1.0 - err);
    }
    model.tree_weights.push_back(weight);
  }
  return model;
}

std::pair<Label, double> rf_predict(const RFModel& model,
                                    const std::vector<double>& row) {
  double total = 0.0, dep = 0.0;
  for (std::size_t t = 0; t < model.trees.size(); ++t) {
    total += model.tree_weights[t];
    if (model.trees[t].predict(row) == Label::Depressive)
      dep += model.tree_weights[t];
  }
  const double fraction = total > 0.0 ? dep / total : 0.0;
  return {fraction > 0.5 ? Label::Depressive : Label::NonDepressive, fraction};
}

}  // namespace dd
