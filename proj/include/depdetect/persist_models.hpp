#pragma once

#include "depdetect/embed.hpp"
#include "depdetect/lstm.hpp"
#include "depdetect/persist.hpp"
#include "depdetect/shallow.hpp"
#include "depdetect/vectorize.hpp"

namespace dd {

const char* feature_mode_name(FeatureMode mode);
FeatureMode parse_feature_mode(const std::string& name);

// Vocabulary rides in the header (escaped tokens) plus a df array.
void put_vocab(Artifact& artifact, const Vocabulary& vocab);
Vocabulary get_vocab(const Artifact& artifact);

Artifact pack_mnb(const MNBModel& model);
MNBModel unpack_mnb(const Artifact& artifact);

Artifact pack_svm(const SVMModel& model);
SVMModel unpack_svm(const Artifact& artifact);

Artifact pack_rf(const RFModel& model);
RFModel unpack_rf(const Artifact& artifact);

Artifact pack_lstm(const LSTMModel& model);
LSTMModel unpack_lstm(const Artifact& artifact);

Artifact pack_w2v(const EmbeddingMatrix& emb, const Vocabulary& vocab);
std::pair<EmbeddingMatrix, Vocabulary> unpack_w2v(const Artifact& artifact);

Artifact pack_d2v(const D2VModel& model, const Vocabulary& vocab);
std::pair<D2VModel, Vocabulary> unpack_d2v(const Artifact& artifact);

Artifact pack_vectorizer(const VectorizerModel& model);
VectorizerModel unpack_vectorizer(const Artifact& artifact);

}  // namespace dd
