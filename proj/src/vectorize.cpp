#include "depdetect/vectorize.hpp"

#include <algorithm>
#include <cmath>

#include "depdetect/error.hpp"
#include "depdetect/vecmath.hpp"

namespace dd {

void Vocabulary::add(std::string token, std::uint32_t df) {
  const auto idx = static_cast<std::uint32_t>(tokens_.size());
  if (!index_.emplace(token, idx).second)
    fail(Errc::internal, "duplicate vocabulary token '" + token + "'");
  tokens_.push_back(std::move(token));
  df_.push_back(df);
}

Vocabulary fit_vocab(const std::vector<TokenizedDoc>& docs,
                     std::uint32_t min_df,
                     std::optional<std::size_t> max_features) {
  if (docs.empty()) fail(Errc::fit, "cannot fit a vocabulary on zero documents");

  // df counting with first-occurrence order.
  std::unordered_map<std::string, std::uint32_t> df;
  std::vector<std::string> order;
  std::vector<std::string> seen;
  for (const auto& doc : docs) {
    seen.clear();
    for (const auto& tok : doc.tokens) {
      auto [it, inserted] = df.emplace(tok, 0u);
      if (inserted) order.push_back(tok);
      if (std::find(seen.begin(), seen.end(), tok) == seen.end()) {
        ++it->second;
        seen.push_back(tok);
      }
    }
  }

  std::vector<std::string> kept;
  for (const auto& tok : order)
    if (df[tok] >= min_df) kept.push_back(tok);

  if (max_features && kept.size() > *max_features) {
    // stable sort by descending df keeps first-occurrence order inside ties
    std::stable_sort(kept.begin(), kept.end(),
                     [&](const std::string& a, const std::string& b) {
                       return df[a] > df[b];
                     });
    kept.resize(*max_features);
  }

  Vocabulary vocab;
  for (auto& tok : kept) {
    const std::uint32_t d = df[tok];
    vocab.add(std::move(tok), d);
  }
  vocab.set_n_docs(docs.size());
  return vocab;
}

namespace {

// (index, count) pairs for the in-vocabulary tokens of a document.
std::vector<SparseEntry> count_in_vocab(const TokenizedDoc& doc,
                                        const Vocabulary& vocab) {
  std::unordered_map<std::uint32_t, double> counts;
  for (const auto& tok : doc.tokens) {
    const std::uint32_t idx = vocab.index_of(tok);
    if (idx != Vocabulary::npos) counts[idx] += 1.0;
  }
  std::vector<SparseEntry> entries;
  entries.reserve(counts.size());
  for (const auto& [idx, c] : counts) entries.push_back({idx, c});
  std::sort(entries.begin(), entries.end(),
            [](const SparseEntry& a, const SparseEntry& b) {
              return a.index < b.index;
            });
  return entries;
}

}  // namespace

SparseVector transform_binary(const TokenizedDoc& doc,
                              const VectorizerModel& model) {
  SparseVector v;
  v.entries = count_in_vocab(doc, model.vocab);
  for (auto& e : v.entries) e.weight = 1.0;
  return v;
}

SparseVector transform_count(const TokenizedDoc& doc,
                             const VectorizerModel& model) {
  SparseVector v;
  v.entries = count_in_vocab(doc, model.vocab);
  return v;
}

VectorizerModel fit_tfidf(const Vocabulary& vocab) {
  VectorizerModel model;
  model.vocab = vocab;
  model.mode = FeatureMode::Tfidf;
  const double n = static_cast<double>(vocab.n_docs());
  model.idf.reserve(vocab.size());
  for (std::uint32_t d : vocab.df())
    model.idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(d))) +
                        1.0);
  return model;
}

SparseVector transform_tfidf(const TokenizedDoc& doc,
                             const VectorizerModel& model) {
  SparseVector v;
  v.entries = count_in_vocab(doc, model.vocab);
  double sq = 0.0;
  for (auto& e : v.entries) {
    e.weight *= model.idf[e.index];
    sq += e.weight * e.weight;
  }
  if (sq > 0.0) {
    const double inv = 1.0 / std::sqrt(sq);
    for (auto& e : v.entries) e.weight *= inv;
  }
  return v;
}

SparseVector transform(const TokenizedDoc& doc, const VectorizerModel& model) {
  switch (model.mode) {
    case FeatureMode::Binary: return transform_binary(doc, model);
    case FeatureMode::Count: return transform_count(doc, model);
    case FeatureMode::Tfidf: return transform_tfidf(doc, model);
  }
  fail(Errc::internal, "unhandled feature mode");
}

}  // namespace dd
