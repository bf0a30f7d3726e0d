#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "depdetect/textprep.hpp"
#include "depdetect/vectorize.hpp"

namespace dd {

struct EmbeddingMatrix {
  std::size_t rows = 0;
  std::size_t dim = 0;
  std::vector<double> w_in;   // rows x dim, input side
  std::vector<double> w_out;  // rows x dim, output side

  std::span<double> row_in(std::size_t r) {
    return {w_in.data() + r * dim, dim};
  }
  std::span<const double> row_in(std::size_t r) const {
    return {w_in.data() + r * dim, dim};
  }
  std::span<double> row_out(std::size_t r) {
    return {w_out.data() + r * dim, dim};
  }
  std::span<const double> row_out(std::size_t r) const {
    return {w_out.data() + r * dim, dim};
  }
};

struct W2VConfig {
  enum class Mode { Cbow, SkipGram };
  Mode mode = Mode::Cbow;
  int dim = 50;
  int window = 4;
  int negatives = 5;
  int epochs = 15;
  double lr = 0.025;  // decays linearly to lr/100 over training
  std::uint64_t seed = 0;
};

struct TrainTrace {
  std::vector<double> epoch_loss;
};

// Negative-sampling pair loss and gradients:
//   L = -ln s(u_o . v) - sum_i ln s(-u_i . v)
// where v is the (already averaged) predictor vector. d_out holds one entry
// per distinct output row touched, duplicates summed.
struct NsGradients {
  double loss = 0.0;
  std::vector<double> d_predictor;
  std::vector<std::pair<std::uint32_t, std::vector<double>>> d_out;
};

NsGradients ns_pair_gradients(std::span<const double> predictor,
                              const EmbeddingMatrix& emb, std::uint32_t target,
                              std::span<const std::uint32_t> negatives);

EmbeddingMatrix train_word2vec(const std::vector<TokenizedDoc>& docs,
                               const Vocabulary& vocab, const W2VConfig& cfg,
                               TrainTrace* trace = nullptr);

struct D2VModel {
  EmbeddingMatrix words;
  std::vector<std::string> doc_ids;
  std::vector<double> doc_vectors;  // one row per training document
  std::vector<std::string> tag_names;
  std::vector<double> tag_vectors;  // one row per distinct tag
  std::vector<double> token_counts;  // unigram counts behind negative sampling
  int window = 4;
  int negatives = 5;

  std::size_t dim() const { return words.dim; }
  std::span<const double> doc_vector(std::size_t i) const {
    return {doc_vectors.data() + i * words.dim, words.dim};
  }
  std::optional<std::size_t> tag_row(const std::string& tag) const;
};

// PV-DM with a tag vector: the predictor is the mean of the context word
// vectors, the document vector, and the document's tag vector. tags runs
// parallel to docs; an empty tag is an error.
D2VModel train_doc2vec(const std::vector<TokenizedDoc>& docs,
                       const std::vector<std::string>& tags,
                       const Vocabulary& vocab, const W2VConfig& cfg,
                       TrainTrace* trace = nullptr);

// Freezes word and tag parameters and fits a fresh document vector with
// `steps` passes over the document. steps == 0 returns the seeded random
// initialization.
std::vector<double> infer_doc_vector(const TokenizedDoc& doc,
                                     const D2VModel& model,
                                     const Vocabulary& vocab, int steps,
                                     std::uint64_t seed,
                                     const std::optional<std::string>& tag = {});

// Mean of the input-side vectors of in-vocabulary tokens; zero vector when
// none are known.
std::vector<double> doc_embedding_avg(const TokenizedDoc& doc,
                                      const Vocabulary& vocab,
                                      const EmbeddingMatrix& emb);

// a.b / (|a||b|); 0 when either norm is 0.
double cosine(std::span<const double> a, std::span<const double> b);

}  // namespace dd
