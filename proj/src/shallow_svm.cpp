#include <cmath>
#include <numeric>

#include "depdetect/error.hpp"
#include "depdetect/rng.hpp"
#include "depdetect/shallow.hpp"

namespace dd {

namespace {

double sparse_dot(const std::vector<double>& w, const SparseVector& x) {
  double s = 0.0;
  for (const auto& e : x.entries)
    if (e.index < w.size()) s += w[e.index] * e.weight;
  return s;
}

double signed_label(Label l) { return l == Label::Depressive ? 1.0 : -1.0; }

}  // namespace

double svm_objective(const SVMModel& model, const std::vector<SparseVector>& x,
                     const std::vector<Label>& y) {
  double reg = 0.0;
  for (double w : model.weights) reg += w * w;
  reg *= 0.5 * model.lambda;
  double hinge = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double margin =
        signed_label(y[i]) * (sparse_dot(model.weights, x[i]) + model.bias);
    hinge += std::max(0.0, 1.0 - margin);
  }
  return reg + hinge / static_cast<double>(x.size());
}

SVMModel svm_fit(const std::vector<SparseVector>& x,
                 const std::vector<Label>& y, std::size_t n_features,
                 const SVMConfig& cfg) {
  if (x.size() != y.size() || x.empty())
    fail(Errc::fit, "feature/label sizes must match and be nonempty");
  std::size_t dep = 0;
  for (Label l : y) dep += l == Label::Depressive;
  if (dep == 0 || dep == y.size())
    fail(Errc::fit, "training data must contain both classes");
  if (!(cfg.lambda > 0.0)) fail(Errc::param, "lambda must be positive");
  if (cfg.epochs < 1) fail(Errc::param, "epochs must be at least 1");

  SVMModel model;
  model.weights.assign(n_features, 0.0);
  model.lambda = cfg.lambda;
  model.epochs = cfg.epochs;
  model.seed = cfg.seed;

  Rng rng(cfg.seed);
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::size_t t = 0;  // global step counter, eta_t = 1/(lambda*t)
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle(order, rng);
    for (std::size_t i : order) {
      ++t;
      const double eta = 1.0 / (cfg.lambda * static_cast<double>(t));
      const double yi = signed_label(y[i]);
      const double margin =
          yi * (sparse_dot(model.weights, x[i]) + model.bias);
      const double scale = 1.0 - eta * cfg.lambda;
      for (double& w : model.weights) w *= scale;
      if (margin < 1.0) {
        for (const auto& e : x[i].entries)
          model.weights[e.index] += eta * yi * e.weight;
        model.bias += eta * yi;
      }
    }
    model.objective_trace.push_back(svm_objective(model, x, y));
  }
  return model;
}

std::pair<Label, double> svm_predict(const SVMModel& model,
                                     const SparseVector& x) {
  const double decision = sparse_dot(model.weights, x) + model.bias;
  return {decision > 0.0 ? Label::Depressive : Label::NonDepressive, decision};
}

}  // namespace dd
