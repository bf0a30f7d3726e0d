#include <cmath>

#include "depdetect/error.hpp"
#include "depdetect/shallow.hpp"

namespace dd {

MNBModel nb_fit(const std::vector<SparseVector>& x, const std::vector<Label>& y,
                std::size_t n_features, double alpha) {
  if (x.size() != y.size() || x.empty())
    fail(Errc::fit, "feature/label sizes must match and be nonempty");
  if (!(alpha > 0.0)) fail(Errc::param, "smoothing alpha must be positive");

  std::array<std::size_t, 2> class_n{0, 0};
  for (Label l : y) class_n[static_cast<std::size_t>(l)]++;
  if (class_n[0] == 0 || class_n[1] == 0)
    fail(Errc::fit, "training data must contain both classes");

  std::array<std::vector<double>, 2> counts;
  std::array<double, 2> totals{0.0, 0.0};
  counts[0].assign(n_features, 0.0);
  counts[1].assign(n_features, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto c = static_cast<std::size_t>(y[i]);
    for (const auto& e : x[i].entries) {
      if (e.weight < 0.0)
        fail(Errc::domain,
             "multinomial naive Bayes requires nonnegative features");
      if (e.index >= n_features)
        fail(Errc::shape, "feature index out of range");
      counts[c][e.index] += e.weight;
      totals[c] += e.weight;
    }
  }

  MNBModel model;
  model.alpha = alpha;
  model.n_features = n_features;
  const double n = static_cast<double>(x.size());
  const double v = static_cast<double>(n_features);
  for (std::size_t c = 0; c < 2; ++c) {
    model.log_prior[c] = std::log(static_cast<double>(class_n[c]) / n);
    model.log_likelihood[c].resize(n_features);
    const double denom = totals[c] + alpha * v;
    for (std::size_t t = 0; t < n_features; ++t)
      model.log_likelihood[c][t] = std::log((counts[c][t] + alpha) / denom);
  }
  return model;
}

std::pair<Label, std::array<double, 2>> nb_predict(const MNBModel& model,
                                                   const SparseVector& x) {
  std::array<double, 2> score = model.log_prior;
  for (const auto& e : x.entries) {
    if (e.index >= model.n_features) continue;  // OOV-safe
    score[0] += e.weight * model.log_likelihood[0][e.index];
    score[1] += e.weight * model.log_likelihood[1][e.index];
  }
  // log-normalize so exp(posteriors) sums to 1
  const double hi = std::max(score[0], score[1]);
  const double logz =
      hi + std::log(std::exp(score[0] - hi) + std::exp(score[1] - hi));
  std::array<double, 2> posterior{score[0] - logz, score[1] - logz};
  const Label label = score[1] > score[0] ? Label::Depressive
                                          : Label::NonDepressive;
  return {label, posterior};
}

}  // namespace dd
