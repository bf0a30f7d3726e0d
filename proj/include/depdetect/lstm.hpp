#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "depdetect/corpus.hpp"
#include "depdetect/vectorize.hpp"

namespace dd {

struct LSTMConfig {
  int hidden = 64;
  int embed_dim = 50;
  int max_len = 30;
  int epochs = 10;
  int batch = 32;
  double lr = 0.05;
  double dropout_in = 0.2;
  double dropout_rec = 0.2;
  std::uint64_t seed = 0;
};

// Single-layer LSTM with a trainable embedding table (row 0 = padding) and
// a sigmoid readout on the final hidden state.
struct LSTMModel {
  std::size_t vocab = 0;  // token ids run 1..vocab
  std::size_t dim = 0;
  std::size_t hidden = 0;
  std::size_t max_len = 0;  // expected input length
  std::vector<double> embed;                  // (vocab+1) x dim
  std::vector<double> w_i, w_f, w_o, w_c;     // dim x hidden
  std::vector<double> u_i, u_f, u_o, u_c;     // hidden x hidden
  std::vector<double> b_i, b_f, b_o, b_c;     // hidden
  std::vector<double> w_out;                  // hidden
  double b_out = 0.0;

  std::vector<std::span<double>> params();
  std::vector<std::span<const double>> params() const;
};

// Mirrors the model's parameter arrays.
struct LSTMGrads {
  std::vector<double> embed;
  std::vector<double> w_i, w_f, w_o, w_c;
  std::vector<double> u_i, u_f, u_o, u_c;
  std::vector<double> b_i, b_f, b_o, b_c;
  std::vector<double> w_out;
  double b_out = 0.0;

  void resize_like(const LSTMModel& model);
  void zero();
  std::vector<std::span<double>> params();
  double global_norm() const;
};

// Per-sequence inverted-dropout masks; entries are 0 or 1/(1-p).
struct LSTMDropoutMasks {
  std::vector<double> input;      // dim
  std::vector<double> recurrent;  // hidden
};

// Maps tokens to ids 1..V (OOV dropped), left-pads with 0 and keeps the
// most recent max_len ids when longer.
std::vector<std::uint32_t> encode_sequence(const TokenizedDoc& doc,
                                           const Vocabulary& vocab,
                                           int max_len);

LSTMModel lstm_init(std::size_t vocab, const LSTMConfig& cfg);

// Probability of the depressive class. Padding ids carry the state through
// unchanged. Throws Error(shape) on an id beyond the embedding table.
double lstm_forward(const LSTMModel& model, std::span<const std::uint32_t> ids,
                    const LSTMDropoutMasks* masks = nullptr);

// Binary cross-entropy of one example; gradients are accumulated into
// `grads`. target is 1 for depressive, 0 otherwise.
double lstm_backward(const LSTMModel& model,
                     std::span<const std::uint32_t> ids, double target,
                     const LSTMDropoutMasks* masks, LSTMGrads& grads);

// Mini-batch SGD on mean binary cross-entropy, full backpropagation through
// time, gradient norm clipped at 5.0. Returns the per-epoch mean loss.
std::vector<double> lstm_train(LSTMModel& model,
                               const std::vector<std::vector<std::uint32_t>>& x,
                               const std::vector<Label>& y,
                               const LSTMConfig& cfg);

// Depressive iff probability > 0.5 (dropout off).
std::pair<Label, double> lstm_predict(const LSTMModel& model,
                                      std::span<const std::uint32_t> ids);

}  // namespace dd
