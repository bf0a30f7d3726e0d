#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "depdetect/textprep.hpp"

namespace dd {

struct SparseEntry {
  std::uint32_t index = 0;
  double weight = 0.0;
  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

// Strictly increasing indices, no stored zeros.
struct SparseVector {
  std::vector<SparseEntry> entries;
  bool empty() const { return entries.empty(); }
};

class Vocabulary {
 public:
  // Index of a token, or npos if absent.
  static constexpr std::uint32_t npos = 0xffffffffu;
  std::uint32_t index_of(const std::string& token) const {
    auto it = index_.find(token);
    return it == index_.end() ? npos : it->second;
  }
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::vector<std::uint32_t>& df() const { return df_; }
  std::size_t n_docs() const { return n_docs_; }

  // Used by fit_vocab and persistence.
  void add(std::string token, std::uint32_t df);
  void set_n_docs(std::size_t n) { n_docs_ = n; }

 private:
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::string> tokens_;
  std::vector<std::uint32_t> df_;
  std::size_t n_docs_ = 0;
};

enum class FeatureMode { Binary, Count, Tfidf };

struct VectorizerModel {
  Vocabulary vocab;
  FeatureMode mode = FeatureMode::Count;
  std::vector<double> idf;  // populated iff mode == Tfidf
};

// Tokens with document frequency >= min_df, insertion-ordered by first
// occurrence. When max_features is set, keeps the top-df tokens (ties broken
// by first occurrence) and orders the vocabulary by descending df.
Vocabulary fit_vocab(const std::vector<TokenizedDoc>& docs,
                     std::uint32_t min_df = 1,
                     std::optional<std::size_t> max_features = std::nullopt);

SparseVector transform_binary(const TokenizedDoc& doc,
                              const VectorizerModel& model);
SparseVector transform_count(const TokenizedDoc& doc,
                             const VectorizerModel& model);

// idf[t] = ln((1+N)/(1+df[t])) + 1.
VectorizerModel fit_tfidf(const Vocabulary& vocab);

// count * idf, L2-normalized; all-OOV documents give the zero vector.
SparseVector transform_tfidf(const TokenizedDoc& doc,
                             const VectorizerModel& model);

// Dispatch on model.mode.
SparseVector transform(const TokenizedDoc& doc, const VectorizerModel& model);

}  // namespace dd
