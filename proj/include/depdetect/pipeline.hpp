#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "depdetect/config.hpp"
#include "depdetect/corpus.hpp"
#include "depdetect/embed.hpp"
#include "depdetect/evalx.hpp"
#include "depdetect/lstm.hpp"
#include "depdetect/persist.hpp"
#include "depdetect/profiler.hpp"
#include "depdetect/shallow.hpp"
#include "depdetect/textprep.hpp"
#include "depdetect/vectorize.hpp"

namespace dd {

// A trained classifier together with everything needed to serve it: the
// resolved run configuration (training/serving parity), the preprocessing
// lexicons, the vocabulary and the feature model.
struct ModelBundle {
  RunConfig config;
  PipelineConfig pipeline;
  std::shared_ptr<const Lexicons> lexicons;
  std::string model_kind;    // mnb | svm | rf | lstm
  std::string feature_kind;  // binary | count | tfidf | w2v | d2v | seq
  Vocabulary vocab;

  std::optional<VectorizerModel> vectorizer;
  std::optional<EmbeddingMatrix> w2v;
  std::optional<D2VModel> d2v;

  std::optional<MNBModel> mnb;
  std::optional<SVMModel> svm;
  std::optional<RFModel> rf;
  std::optional<LSTMModel> lstm;
};

PipelineConfig pipeline_from_config(const RunConfig& config);
std::shared_ptr<const Lexicons> lexicons_from_config(const RunConfig& config);

// Resolves `features = auto` and rejects invalid model/feature pairings
// (naive Bayes cannot consume embedding features; only the lstm takes
// sequences). Returns the resolved feature kind.
std::string resolve_features(const RunConfig& config);

struct TrainOutput {
  ModelBundle bundle;
  std::string log;  // deterministic: per-epoch losses, held-out metrics
};

// Split -> preprocess -> fit features on the train side -> fit classifier
// -> measure held-out metrics.
TrainOutput train_bundle(const Corpus& corpus, const RunConfig& config);

// Applies the bundle's stored pipeline configuration. The score is the
// classifier's native confidence: depressive posterior (mnb), decision
// value (svm), depressive vote fraction (rf) or probability (lstm).
std::pair<Label, double> predict_text(const ModelBundle& bundle,
                                      const std::string& text);

struct EvalOutput {
  ConfusionMatrix cm;
  Metrics m;
  double oov_rate = 0.0;  // fraction of preprocessed test tokens not in vocab
};

EvalOutput evaluate_bundle(const ModelBundle& bundle, const Corpus& test);

ProfileResult profile_texts(const ModelBundle& bundle, std::string user_id,
                            const std::vector<std::string>& texts,
                            double threshold);

// Table-1 style display name for a model kind.
std::string classifier_display_name(const std::string& kind);

Artifact bundle_to_artifact(const ModelBundle& bundle);
ModelBundle bundle_from_artifact(const Artifact& artifact);

void save_bundle(const ModelBundle& bundle, const std::string& path);
ModelBundle load_bundle(const std::string& path);

}  // namespace dd
