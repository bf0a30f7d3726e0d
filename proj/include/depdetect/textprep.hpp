#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace dd {

enum class Reducer { Stem, Lemma, None };

struct PipelineConfig {
  bool lowercase = true;
  bool strip_urls = true;
  bool strip_mentions = true;
  bool strip_nonalnum = true;
  bool drop_retweets = true;
  bool expand_slang = true;
  bool remove_stopwords = true;
  Reducer reducer = Reducer::Stem;
  bool pos_filter = false;
};

enum class PosTag { Noun, Verb, Adj, Adv, Pron, Other };

PosTag parse_pos_tag(std::string_view text);

// Word lists backing the pipeline. Loaded once, immutable afterwards.
// File layout under a lexicon directory:
//   stopwords.txt          one word per line
//   pronouns.txt           one word per line (stop-word exceptions)
//   slang.tsv              key<TAB>expansion
//   pos.tsv                word<TAB>NOUN|VERB|ADJ|ADV|PRON|OTHER
//   lemma_exceptions.tsv   word<TAB>lemma
// Lines starting with '#' are ignored.
struct Lexicons {
  std::unordered_set<std::string> stopwords;
  std::unordered_set<std::string> pronoun_whitelist;
  // Expansions are normalized and tokenized at load time.
  std::unordered_map<std::string, std::vector<std::string>> slang;
  std::unordered_map<std::string, PosTag> pos;
  std::unordered_map<std::string, std::string> lemma_exceptions;

  static Lexicons load(const std::string& dir);
  // The files bundled with the toolkit (see DD_LEXICON_DIR).
  static const Lexicons& bundled();
};

struct TokenizedDoc {
  std::vector<std::string> tokens;
  std::string source_id;
};

// Applies, in order: retweet drop, URL removal, @mention removal,
// lowercasing, non-alphanumeric replacement (in-word apostrophes removed,
// everything else becomes a space), whitespace collapse. Idempotent.
std::string normalize(std::string_view text, const PipelineConfig& cfg);

TokenizedDoc tokenize(std::string_view text, std::string source_id = {});

TokenizedDoc expand_slang(const TokenizedDoc& doc, const Lexicons& lex);

TokenizedDoc remove_stopwords(const TokenizedDoc& doc, const Lexicons& lex);

// Porter's stemming algorithm, steps 1a through 5b as published.
// Input containing anything but lowercase a-z is returned unchanged.
std::string porter_stem(std::string_view word);

// Exception map first, then light suffix rules, else identity.
std::string lemmatize(const std::string& word, const Lexicons& lex);

// Keeps NOUN/ADJ/ADV/PRON tokens; drops VERB; words missing from the
// lexicon are kept.
TokenizedDoc pos_filter(const TokenizedDoc& doc, const Lexicons& lex);

// normalize -> tokenize -> expand_slang -> remove_stopwords -> pos_filter
// -> reducer, honoring the config flags.
TokenizedDoc preprocess(std::string_view text, const PipelineConfig& cfg,
                        const Lexicons& lex, std::string source_id = {});

}  // namespace dd
