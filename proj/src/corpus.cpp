#include "depdetect/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "depdetect/csv.hpp"
#include "depdetect/error.hpp"
#include "depdetect/rng.hpp"

namespace dd {

namespace {

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

Label parse_label(std::string_view text) {
  const std::string t = lower_ascii(text);
  if (t == "depressive") return Label::Depressive;
  if (t == "non_depressive") return Label::NonDepressive;
  fail(Errc::label, "unknown label '" + std::string(text) + "'");
}

const char* label_name(Label label) {
  return label == Label::Depressive ? "depressive" : "non_depressive";
}

void Corpus::add(LabeledTweet tweet) {
  if (tweet.id.empty()) fail(Errc::param, "tweet id must be nonempty");
  if (!ids_.insert(tweet.id).second)
    fail(Errc::duplicate_id, "duplicate tweet id '" + tweet.id + "'");
  counts_[static_cast<std::size_t>(tweet.label)]++;
  items_.push_back(std::move(tweet));
}

Corpus load_csv(std::istream& in) {
  CsvReader reader(in);
  CsvRecord rec;
  if (!reader.next(rec))
    fail(Errc::parse, "empty input: expected header id,text,label");
  if (rec.fields.size() != 3 || lower_ascii(rec.fields[0]) != "id" ||
      lower_ascii(rec.fields[1]) != "text" ||
      lower_ascii(rec.fields[2]) != "label")
    fail(Errc::parse, "line " + std::to_string(rec.line) +
                          ": expected header id,text,label");
  Corpus corpus;
  while (reader.next(rec)) {
    if (rec.fields.size() == 1 && rec.fields[0].empty()) continue;  // blank line
    if (rec.fields.size() != 3)
      fail(Errc::parse, "line " + std::to_string(rec.line) + ": expected 3 fields, got " +
                            std::to_string(rec.fields.size()));
    LabeledTweet tweet;
    tweet.id = rec.fields[0];
    tweet.text = rec.fields[1];
    try {
      tweet.label = parse_label(rec.fields[2]);
    } catch (const Error&) {
      fail(Errc::label, "line " + std::to_string(rec.line) + ": unknown label '" +
                            rec.fields[2] + "'");
    }
    corpus.add(std::move(tweet));
  }
  return corpus;
}

void write_csv(const Corpus& corpus, std::ostream& out) {
  out << "id,text,label\n";
  for (const auto& t : corpus.items())
    write_csv_row(out, {t.id, t.text, label_name(t.label)});
}

Label majority_vote(const AnnotationSet& votes) {
  if (votes.votes.size() != 3)
    fail(Errc::arity, "expected exactly 3 votes, got " +
                          std::to_string(votes.votes.size()));
  int depressive = 0;
  for (Label v : votes.votes)
    if (v == Label::Depressive) ++depressive;
  return depressive >= 2 ? Label::Depressive : Label::NonDepressive;
}

Corpus balance(const Corpus& corpus, std::uint64_t seed) {
  const std::size_t n_dep = corpus.count(Label::Depressive);
  const std::size_t n_non = corpus.count(Label::NonDepressive);
  if (n_dep == 0 || n_non == 0)
    fail(Errc::balance, "both classes must be present to balance");
  if (n_dep == n_non) return corpus;

  const Label majority =
      n_dep > n_non ? Label::Depressive : Label::NonDepressive;
  const std::size_t keep = std::min(n_dep, n_non);

  std::vector<std::size_t> majority_idx;
  for (std::size_t i = 0; i < corpus.items().size(); ++i)
    if (corpus.items()[i].label == majority) majority_idx.push_back(i);

  Rng rng(seed);
  shuffle(majority_idx, rng);
  majority_idx.resize(keep);
  std::sort(majority_idx.begin(), majority_idx.end());

  std::vector<bool> survives(corpus.size(), false);
  for (std::size_t i : majority_idx) survives[i] = true;

  Corpus out;
  for (std::size_t i = 0; i < corpus.items().size(); ++i) {
    const auto& item = corpus.items()[i];
    if (item.label != majority || survives[i]) out.add(item);
  }
  return out;
}

SplitPair split_train_test(const Corpus& corpus, double ratio,
                           std::uint64_t seed) {
  const std::size_t n = corpus.size();
  if (n < 2) fail(Errc::split, "need at least 2 items to split");
  if (!(ratio > 0.0 && ratio < 1.0))
    fail(Errc::split, "ratio must lie strictly between 0 and 1");

  // Per-class index lists in corpus order.
  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t i = 0; i < n; ++i)
    by_class[static_cast<std::size_t>(corpus.items()[i].label)].push_back(i);

  const auto total_train =
      static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));

  // Largest-remainder apportionment of the train quota across classes.
  std::array<std::size_t, 2> quota{0, 0};
  std::array<double, 2> frac{0.0, 0.0};
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < 2; ++c) {
    const double exact = ratio * static_cast<double>(by_class[c].size());
    quota[c] = static_cast<std::size_t>(exact);
    frac[c] = exact - static_cast<double>(quota[c]);
    assigned += quota[c];
  }
  while (assigned < total_train) {
    std::size_t pick = frac[0] >= frac[1] ? 0 : 1;
    if (quota[pick] >= by_class[pick].size()) pick = 1 - pick;
    ++quota[pick];
    frac[pick] = -1.0;
    ++assigned;
  }

  Rng rng(seed);
  std::vector<bool> in_train(n, false);
  for (std::size_t c = 0; c < 2; ++c) {
    std::vector<std::size_t> idx = by_class[c];
    shuffle(idx, rng);
    for (std::size_t i = 0; i < quota[c] && i < idx.size(); ++i)
      in_train[idx[i]] = true;
  }

  SplitPair pair;
  pair.ratio = ratio;
  pair.seed = seed;
  for (std::size_t i = 0; i < n; ++i) {
    if (in_train[i])
      pair.train.add(corpus.items()[i]);
    else
      pair.test.add(corpus.items()[i]);
  }
  return pair;
}

namespace {

// Keyword pools for the synthetic generator. The three lists are disjoint;
// tests rely on that to detect class leakage at noise=0.
const std::vector<std::string> kDepressivePool = {
    "hopeless", "worthless", "emptiness", "sadness",  "crying",
    "lonely",   "miserable", "exhausted", "numb",     "broken",
    "despair",  "anxious",   "hurting",   "darkness", "painful",
    "insomnia", "grief",     "ashamed",   "hollow",   "defeated",
    "drained",  "suffering", "trapped",   "unwanted", "gloom",
    "regret",   "sorrow",    "weeping",   "aching",   "dread"};

const std::vector<std::string> kNonDepressivePool = {
    "happy",     "sunshine",  "grateful",  "joyful",    "awesome",
    "fantastic", "excited",   "smiling",   "blessed",   "cheerful",
    "amazing",   "laughing",  "wonderful", "vacation",  "party",
    "celebrate", "delicious", "friends",   "winning",   "beautiful",
    "adventure", "thriving",  "sunny",     "hopeful",   "energized",
    "playful",   "victory",   "picnic",    "carefree",  "dancing"};

const std::vector<std::string> kSharedPool = {
    "today",    "morning",  "evening",  "tonight",  "week",     "weather",
    "coffee",   "tea",      "lunch",    "dinner",   "office",   "school",
    "home",     "city",     "street",   "music",    "song",     "movie",
    "book",     "game",     "phone",    "computer", "train",    "bus",
    "car",      "road",     "river",    "mountain", "rain",     "snow",
    "wind",     "cloud",    "market",   "store",    "shop",     "money",
    "hour",     "minute",   "year",     "month",    "monday",   "friday",
    "weekend",  "breakfast","kitchen",  "window",   "door",     "room",
    "house",    "yard",     "tree",     "flower",   "bird",     "dog",
    "cat",      "fish",     "bread",    "fruit",    "water",    "juice",
    "news",     "paper",    "letter",   "email",    "message",  "meeting",
    "class",    "teacher",  "student",  "doctor",   "neighbor", "family",
    "brother",  "sister",   "mother",   "father",   "cousin",   "uncle",
    "valley",   "park",     "beach",    "lake",     "forest",   "field",
    "bridge",   "station",  "airport",  "hotel",    "ticket",   "journey",
    "summer",   "winter",   "spring",   "autumn",   "holiday",  "birthday",
    "clock",    "shoes",    "jacket",   "umbrella"};

}  // namespace

const std::vector<std::string>& synth_pool(Label label) {
  return label == Label::Depressive ? kDepressivePool : kNonDepressivePool;
}

const std::vector<std::string>& synth_shared_pool() { return kSharedPool; }

Corpus synth_corpus(std::size_t n, double noise, std::uint64_t seed) {
  if (n < 2 || n % 2 != 0)
    fail(Errc::param, "n must be even and at least 2");
  if (!(noise >= 0.0 && noise < 0.5))
    fail(Errc::param, "noise must lie in [0, 0.5)");

  Rng rng(seed);
  Corpus out;
  for (std::size_t i = 0; i < n; ++i) {
    const Label label = (i % 2 == 0) ? Label::Depressive : Label::NonDepressive;
    const auto& pool = synth_pool(label);
    const std::size_t len = 5 + uniform_u64(rng, 11);  // 5..15 tokens
    std::string text;
    for (std::size_t t = 0; t < len; ++t) {
      const bool shared = uniform_unit(rng) < noise;
      const auto& source = shared ? kSharedPool : pool;
      if (t) text.push_back(' ');
      text += source[uniform_u64(rng, source.size())];
    }
    LabeledTweet tweet;
    tweet.id = "synth-" + std::to_string(i + 1);
    tweet.text = std::move(text);
    tweet.label = label;
    out.add(std::move(tweet));
  }
  return out;
}

}  // namespace dd
