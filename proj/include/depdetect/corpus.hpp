#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace dd {

enum class Label : std::uint8_t { NonDepressive = 0, Depressive = 1 };

// Case-insensitive parse of "depressive" / "non_depressive".
Label parse_label(std::string_view text);
const char* label_name(Label label);

struct LabeledTweet {
  std::string id;
  std::string text;
  Label label = Label::NonDepressive;
};

struct AnnotationSet {
  std::string id;
  std::vector<Label> votes;  // must hold exactly three entries
};

class Corpus {
 public:
  Corpus() = default;

  // Throws Error(duplicate_id) if the id is already present.
  void add(LabeledTweet tweet);

  const std::vector<LabeledTweet>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  std::size_t count(Label label) const {
    return counts_[static_cast<std::size_t>(label)];
  }
  bool contains_id(const std::string& id) const {
    return ids_.count(id) != 0;
  }

 private:
  std::vector<LabeledTweet> items_;
  std::unordered_set<std::string> ids_;
  std::array<std::size_t, 2> counts_{0, 0};
};

struct SplitPair {
  Corpus train;
  Corpus test;
  double ratio = 0.0;
  std::uint64_t seed = 0;
};

// CSV with header `id,text,label`, RFC-4180 quoting, labels parsed
// case-insensitively. Row order is preserved.
Corpus load_csv(std::istream& in);
void write_csv(const Corpus& corpus, std::ostream& out);

// Label held by at least two of the three annotators.
Label majority_vote(const AnnotationSet& votes);

// Downsamples the majority class so both counts equal the minority count.
// Survivors keep their input order.
Corpus balance(const Corpus& corpus, std::uint64_t seed);

// Seeded stratified split. |train| = round(ratio * N); per-class counts are
// apportioned by largest remainder so class proportions survive rounding.
SplitPair split_train_test(const Corpus& corpus, double ratio,
                           std::uint64_t seed);

// Seeded synthetic corpus: n/2 documents per class, 5-15 tokens each, drawn
// from a class keyword pool with probability 1-noise and from a shared pool
// with probability noise.
Corpus synth_corpus(std::size_t n, double noise, std::uint64_t seed);

// Pools used by synth_corpus, exposed for tests.
const std::vector<std::string>& synth_pool(Label label);
const std::vector<std::string>& synth_shared_pool();

}  // namespace dd
