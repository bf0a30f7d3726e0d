#include "depdetect/embed.hpp"

#include <algorithm>
#include <cmath>

#include "depdetect/error.hpp"
#include "depdetect/rng.hpp"
#include "depdetect/vecmath.hpp"

namespace dd {

namespace {

std::vector<std::vector<std::uint32_t>> to_id_docs(
    const std::vector<TokenizedDoc>& docs, const Vocabulary& vocab) {
  std::vector<std::vector<std::uint32_t>> out;
  out.reserve(docs.size());
  for (const auto& doc : docs) {
    std::vector<std::uint32_t> ids;
    ids.reserve(doc.tokens.size());
    for (const auto& tok : doc.tokens) {
      const std::uint32_t idx = vocab.index_of(tok);
      if (idx != Vocabulary::npos) ids.push_back(idx);
    }
    out.push_back(std::move(ids));
  }
  return out;
}

std::vector<double> count_tokens(
    const std::vector<std::vector<std::uint32_t>>& id_docs, std::size_t v) {
  std::vector<double> counts(v, 0.0);
  for (const auto& ids : id_docs)
    for (std::uint32_t id : ids) counts[id] += 1.0;
  return counts;
}

// Cumulative unigram^(3/4) table for negative sampling.
std::vector<double> noise_cdf(const std::vector<double>& counts) {
  std::vector<double> cdf(counts.size(), 0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    acc += std::pow(counts[i], 0.75);
    cdf[i] = acc;
  }
  return cdf;
}

std::uint32_t sample_noise(const std::vector<double>& cdf, Rng& rng) {
  const double u = uniform_unit(rng) * cdf.back();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return static_cast<std::uint32_t>(
      std::min<std::ptrdiff_t>(it - cdf.begin(),
                               static_cast<std::ptrdiff_t>(cdf.size()) - 1));
}

// Negatives equal to the target are dropped rather than redrawn, so a pair
// sees at most k negative terms.
std::vector<std::uint32_t> draw_negatives(const std::vector<double>& cdf,
                                          std::uint32_t target, int k,
                                          Rng& rng) {
  std::vector<std::uint32_t> negs;
  negs.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const std::uint32_t n = sample_noise(cdf, rng);
    if (n != target) negs.push_back(n);
  }
  return negs;
}

void init_uniform(std::vector<double>& m, double half_range, Rng& rng) {
  for (double& x : m) x = uniform_real(rng, -half_range, half_range);
}

// One SGD update on the pair loss. `inputs` are the predictor constituents;
// each receives grad/|inputs|. Returns the pair loss.
double ns_update(std::vector<std::span<double>>& inputs, EmbeddingMatrix& emb,
                 std::uint32_t target, std::span<const std::uint32_t> negatives,
                 double lr, std::vector<double>& predictor) {
  const std::size_t dim = emb.dim;
  predictor.assign(dim, 0.0);
  for (const auto& in : inputs) axpy(1.0, in, predictor);
  const double inv_n = 1.0 / static_cast<double>(inputs.size());
  for (double& p : predictor) p *= inv_n;

  const NsGradients g = ns_pair_gradients(predictor, emb, target, negatives);

  const double step = lr * inv_n;
  for (auto& in : inputs) axpy(-step, g.d_predictor, in);
  for (const auto& [row, grad] : g.d_out) axpy(-lr, grad, emb.row_out(row));
  return g.loss;
}

std::uint64_t doc_stream_seed(std::uint64_t seed, int epoch,
                              std::span<const std::uint32_t> ids,
                              std::uint64_t extra) {
  std::uint64_t h = fnv1a64(ids.data(), ids.size() * sizeof(std::uint32_t));
  h = mix_seed(h, extra);
  return mix_seed(mix_seed(seed, static_cast<std::uint64_t>(epoch)), h);
}

struct LrSchedule {
  double lr0;
  std::uint64_t total;
  std::uint64_t done = 0;
  double next() {
    const double lr_min = lr0 / 100.0;
    double lr = lr0;
    if (total > 1)
      lr = lr0 + (lr_min - lr0) * (static_cast<double>(done) /
                                   static_cast<double>(total - 1));
    ++done;
    return lr;
  }
};

void check_config(const W2VConfig& cfg) {
  if (cfg.dim < 1 || cfg.window < 1 || cfg.negatives < 1 || cfg.epochs < 1 ||
      !(cfg.lr > 0.0))
    fail(Errc::param, "embedding config values out of range");
}

}  // namespace

NsGradients ns_pair_gradients(std::span<const double> predictor,
                              const EmbeddingMatrix& emb, std::uint32_t target,
                              std::span<const std::uint32_t> negatives) {
  const std::size_t dim = emb.dim;
  NsGradients g;
  g.d_predictor.assign(dim, 0.0);

  auto accumulate_out = [&](std::uint32_t row, double coeff) {
    for (auto& [r, grad] : g.d_out) {
      if (r == row) {
        axpy(coeff, predictor, grad);
        return;
      }
    }
    std::vector<double> grad(dim, 0.0);
    axpy(coeff, predictor, grad);
    g.d_out.emplace_back(row, std::move(grad));
  };

  // positive term
  {
    const double z = dot(emb.row_out(target), predictor);
    g.loss -= log_sigmoid(z);
    const double coeff = sigmoid(z) - 1.0;
    axpy(coeff, emb.row_out(target), g.d_predictor);
    accumulate_out(target, coeff);
  }
  // negative terms
  for (std::uint32_t n : negatives) {
    const double z = dot(emb.row_out(n), predictor);
    g.loss -= log_sigmoid(-z);
    const double coeff = sigmoid(z);
    axpy(coeff, emb.row_out(n), g.d_predictor);
    accumulate_out(n, coeff);
  }
  return g;
}

EmbeddingMatrix train_word2vec(const std::vector<TokenizedDoc>& docs,
                               const Vocabulary& vocab, const W2VConfig& cfg,
                               TrainTrace* trace) {
  check_config(cfg);
  if (vocab.size() == 0) fail(Errc::fit, "vocabulary is empty");
  const auto id_docs = to_id_docs(docs, vocab);
  std::uint64_t updates_per_epoch = 0;
  for (const auto& ids : id_docs) {
    if (ids.size() < 2) continue;
    if (cfg.mode == W2VConfig::Mode::Cbow) {
      updates_per_epoch += ids.size();
    } else {
      const auto n = static_cast<std::int64_t>(ids.size());
      for (std::int64_t t = 0; t < n; ++t) {
        const std::int64_t lo = std::max<std::int64_t>(0, t - cfg.window);
        const std::int64_t hi = std::min<std::int64_t>(n - 1, t + cfg.window);
        updates_per_epoch += static_cast<std::uint64_t>(hi - lo);
      }
    }
  }
  if (updates_per_epoch == 0)
    fail(Errc::fit, "no trainable documents (all shorter than 2 tokens)");

  const auto dim = static_cast<std::size_t>(cfg.dim);
  EmbeddingMatrix emb;
  emb.rows = vocab.size();
  emb.dim = dim;
  emb.w_in.resize(emb.rows * dim);
  emb.w_out.assign(emb.rows * dim, 0.0);
  Rng init_rng(mix_seed(cfg.seed, 0x1717));
  init_uniform(emb.w_in, 0.5 / static_cast<double>(dim), init_rng);

  const auto counts = count_tokens(id_docs, vocab.size());
  const auto cdf = noise_cdf(counts);

  LrSchedule schedule{cfg.lr,
                      updates_per_epoch *
                          static_cast<std::uint64_t>(cfg.epochs)};
  std::vector<double> predictor;
  std::vector<std::span<double>> inputs;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double epoch_loss = 0.0;
    for (const auto& ids : id_docs) {
      if (ids.size() < 2) continue;
      Rng rng(doc_stream_seed(cfg.seed, epoch, ids, 0));
      const auto n = static_cast<std::int64_t>(ids.size());
      for (std::int64_t t = 0; t < n; ++t) {
        const std::int64_t lo = std::max<std::int64_t>(0, t - cfg.window);
        const std::int64_t hi = std::min<std::int64_t>(n - 1, t + cfg.window);
        if (cfg.mode == W2VConfig::Mode::Cbow) {
          inputs.clear();
          for (std::int64_t c = lo; c <= hi; ++c)
            if (c != t)
              inputs.push_back(
                  emb.row_in(ids[static_cast<std::size_t>(c)]));
          const auto negs = draw_negatives(
              cdf, ids[static_cast<std::size_t>(t)], cfg.negatives, rng);
          epoch_loss +=
              ns_update(inputs, emb, ids[static_cast<std::size_t>(t)], negs,
                        schedule.next(), predictor);
        } else {
          for (std::int64_t c = lo; c <= hi; ++c) {
            if (c == t) continue;
            inputs.clear();
            inputs.push_back(emb.row_in(ids[static_cast<std::size_t>(t)]));
            const auto target = ids[static_cast<std::size_t>(c)];
            const auto negs = draw_negatives(cdf, target, cfg.negatives, rng);
            epoch_loss +=
                ns_update(inputs, emb, target, negs, schedule.next(),
                          predictor);
          }
        }
      }
    }
    if (trace)
      trace->epoch_loss.push_back(epoch_loss /
                                  static_cast<double>(updates_per_epoch));
  }
  return emb;
}

std::optional<std::size_t> D2VModel::tag_row(const std::string& tag) const {
  for (std::size_t i = 0; i < tag_names.size(); ++i)
    if (tag_names[i] == tag) return i;
  return std::nullopt;
}

D2VModel train_doc2vec(const std::vector<TokenizedDoc>& docs,
                       const std::vector<std::string>& tags,
                       const Vocabulary& vocab, const W2VConfig& cfg,
                       TrainTrace* trace) {
  check_config(cfg);
  if (vocab.size() == 0) fail(Errc::fit, "vocabulary is empty");
  if (docs.empty()) fail(Errc::fit, "no documents");
  if (tags.size() != docs.size())
    fail(Errc::tag, "tags must run parallel to documents");
  for (const auto& t : tags)
    if (t.empty()) fail(Errc::tag, "every document needs a nonempty tag");

  const auto id_docs = to_id_docs(docs, vocab);
  const auto dim = static_cast<std::size_t>(cfg.dim);

  D2VModel model;
  model.window = cfg.window;
  model.negatives = cfg.negatives;
  model.words.rows = vocab.size();
  model.words.dim = dim;
  model.words.w_in.resize(vocab.size() * dim);
  model.words.w_out.assign(vocab.size() * dim, 0.0);

  std::vector<std::size_t> tag_of_doc(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto row = model.tag_row(tags[i]);
    if (row) {
      tag_of_doc[i] = *row;
    } else {
      tag_of_doc[i] = model.tag_names.size();
      model.tag_names.push_back(tags[i]);
    }
    model.doc_ids.push_back(docs[i].source_id.empty()
                                ? "doc-" + std::to_string(i + 1)
                                : docs[i].source_id);
  }

  Rng init_rng(mix_seed(cfg.seed, 0xD2D2));
  const double half = 0.5 / static_cast<double>(dim);
  init_uniform(model.words.w_in, half, init_rng);
  model.doc_vectors.resize(docs.size() * dim);
  init_uniform(model.doc_vectors, half, init_rng);
  model.tag_vectors.resize(model.tag_names.size() * dim);
  init_uniform(model.tag_vectors, half, init_rng);

  model.token_counts = count_tokens(id_docs, vocab.size());
  const auto cdf = noise_cdf(model.token_counts);

  std::uint64_t updates_per_epoch = 0;
  for (const auto& ids : id_docs) updates_per_epoch += ids.size();
  if (updates_per_epoch == 0)
    fail(Errc::fit, "no trainable tokens in any document");

  LrSchedule schedule{cfg.lr,
                      updates_per_epoch *
                          static_cast<std::uint64_t>(cfg.epochs)};
  std::vector<double> predictor;
  std::vector<std::span<double>> inputs;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double epoch_loss = 0.0;
    for (std::size_t d = 0; d < id_docs.size(); ++d) {
      const auto& ids = id_docs[d];
      if (ids.empty()) continue;
      Rng rng(doc_stream_seed(cfg.seed, epoch, ids, tag_of_doc[d] + 1));
      std::span<double> doc_vec{model.doc_vectors.data() + d * dim, dim};
      std::span<double> tag_vec{
          model.tag_vectors.data() + tag_of_doc[d] * dim, dim};
      const auto n = static_cast<std::int64_t>(ids.size());
      for (std::int64_t t = 0; t < n; ++t) {
        const std::int64_t lo = std::max<std::int64_t>(0, t - cfg.window);
        const std::int64_t hi = std::min<std::int64_t>(n - 1, t + cfg.window);
        inputs.clear();
        for (std::int64_t c = lo; c <= hi; ++c)
          if (c != t)
            inputs.push_back(
                model.words.row_in(ids[static_cast<std::size_t>(c)]));
        inputs.push_back(doc_vec);
        inputs.push_back(tag_vec);
        const auto target = ids[static_cast<std::size_t>(t)];
        const auto negs = draw_negatives(cdf, target, cfg.negatives, rng);
        epoch_loss += ns_update(inputs, model.words, target, negs,
                                schedule.next(), predictor);
      }
    }
    if (trace)
      trace->epoch_loss.push_back(epoch_loss /
                                  static_cast<double>(updates_per_epoch));
  }
  return model;
}

std::vector<double> infer_doc_vector(const TokenizedDoc& doc,
                                     const D2VModel& model,
                                     const Vocabulary& vocab, int steps,
                                     std::uint64_t seed,
                                     const std::optional<std::string>& tag) {
  if (doc.tokens.empty()) fail(Errc::fit, "cannot infer a vector for an empty document");
  const std::size_t dim = model.words.dim;

  std::vector<std::uint32_t> ids;
  for (const auto& tok : doc.tokens) {
    const std::uint32_t idx = vocab.index_of(tok);
    if (idx != Vocabulary::npos) ids.push_back(idx);
  }

  std::vector<double> vec(dim);
  Rng init_rng(mix_seed(seed, 0x1FE2));
  init_uniform(vec, 0.5 / static_cast<double>(dim), init_rng);
  if (steps == 0 || ids.empty()) return vec;

  std::optional<std::size_t> tag_row;
  if (tag) {
    tag_row = model.tag_row(*tag);
    if (!tag_row) fail(Errc::tag, "unknown tag '" + *tag + "'");
  }

  const auto cdf = noise_cdf(model.token_counts);
  // Word and tag parameters stay frozen; only `vec` is updated below.
  const EmbeddingMatrix& frozen = model.words;
  const std::vector<double>& frozen_tags = model.tag_vectors;

  LrSchedule schedule{0.025, static_cast<std::uint64_t>(steps) * ids.size()};
  std::vector<double> predictor(dim);
  const auto n = static_cast<std::int64_t>(ids.size());

  for (int pass = 0; pass < steps; ++pass) {
    Rng rng(doc_stream_seed(seed, pass, ids, 0));
    for (std::int64_t t = 0; t < n; ++t) {
      const std::int64_t lo = std::max<std::int64_t>(0, t - model.window);
      const std::int64_t hi = std::min<std::int64_t>(n - 1, t + model.window);
      predictor.assign(dim, 0.0);
      std::size_t n_inputs = 0;
      for (std::int64_t c = lo; c <= hi; ++c) {
        if (c == t) continue;
        axpy(1.0, frozen.row_in(ids[static_cast<std::size_t>(c)]), predictor);
        ++n_inputs;
      }
      axpy(1.0, std::span<const double>{vec}, predictor);
      ++n_inputs;
      if (tag_row) {
        axpy(1.0,
             std::span<const double>{frozen_tags.data() + *tag_row * dim, dim},
             predictor);
        ++n_inputs;
      }
      const double inv_n = 1.0 / static_cast<double>(n_inputs);
      for (double& p : predictor) p *= inv_n;

      const auto target = ids[static_cast<std::size_t>(t)];
      const auto negs = draw_negatives(cdf, target, model.negatives, rng);
      const NsGradients g = ns_pair_gradients(predictor, frozen, target, negs);
      axpy(-schedule.next() * inv_n, g.d_predictor, std::span<double>{vec});
    }
  }
  return vec;
}

std::vector<double> doc_embedding_avg(const TokenizedDoc& doc,
                                      const Vocabulary& vocab,
                                      const EmbeddingMatrix& emb) {
  std::vector<double> out(emb.dim, 0.0);
  std::size_t n = 0;
  for (const auto& tok : doc.tokens) {
    const std::uint32_t idx = vocab.index_of(tok);
    if (idx == Vocabulary::npos) continue;
    axpy(1.0, emb.row_in(idx), out);
    ++n;
  }
  if (n > 0)
    for (double& x : out) x /= static_cast<double>(n);
  return out;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  const double na = norm2(a);
  const double nb = norm2(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / (na * nb);
}

}  // namespace dd
