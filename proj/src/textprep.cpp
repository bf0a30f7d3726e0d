#include "depdetect/textprep.hpp"

#include <cctype>
#include <fstream>
#include <functional>

#include "depdetect/error.hpp"

#ifndef DD_LEXICON_DIR
#define DD_LEXICON_DIR ""
#endif

namespace dd {

namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)); }

bool iequal_at(std::string_view text, std::size_t pos, std::string_view lit) {
  if (pos + lit.size() > text.size()) return false;
  for (std::size_t i = 0; i < lit.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(text[pos + i])) != lit[i])
      return false;
  }
  return true;
}

bool is_retweet(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && is_space(text[i])) ++i;
  if (!iequal_at(text, i, "rt")) return false;
  i += 2;
  if (i >= text.size() || !is_space(text[i])) return false;
  while (i < text.size() && is_space(text[i])) ++i;
  return i < text.size() && text[i] == '@';
}

bool url_starts_at(std::string_view text, std::size_t i) {
  return iequal_at(text, i, "http://") || iequal_at(text, i, "https://") ||
         iequal_at(text, i, "www.");
}

// Multi-byte right single quotation mark, treated like an ASCII apostrophe.
bool curly_apostrophe_at(std::string_view text, std::size_t i) {
  return i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xe2 &&
         static_cast<unsigned char>(text[i + 1]) == 0x80 &&
         static_cast<unsigned char>(text[i + 2]) == 0x99;
}

}  // namespace

std::string normalize(std::string_view text, const PipelineConfig& cfg) {
  if (cfg.drop_retweets && is_retweet(text)) return "";

  // Pass 1: URL and @mention removal, lowercasing.
  std::string s;
  s.reserve(text.size());
  bool at_token_start = true;
  std::size_t i = 0;
  while (i < text.size()) {
    if (cfg.strip_urls && at_token_start && url_starts_at(text, i)) {
      while (i < text.size() && !is_space(text[i])) ++i;
      continue;
    }
    if (cfg.strip_mentions && text[i] == '@' && i + 1 < text.size() &&
        is_word_char(text[i + 1])) {
      ++i;
      while (i < text.size() && is_word_char(text[i])) ++i;
      continue;
    }
    char c = text[i];
    at_token_start = is_space(c);
    s.push_back(cfg.lowercase
                    ? static_cast<char>(std::tolower(static_cast<unsigned char>(c)))
                    : c);
    ++i;
  }

  // Pass 2: non-alphanumeric handling and whitespace collapse.
  std::string out;
  out.reserve(s.size());
  auto is_kept = [&](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
  };
  for (std::size_t j = 0; j < s.size(); ++j) {
    char c = s[j];
    if (!cfg.strip_nonalnum) {
      if (is_space(c)) {
        if (!out.empty() && out.back() != ' ') out.push_back(' ');
      } else {
        out.push_back(c);
      }
      continue;
    }
    std::size_t apostrophe_len = 0;
    if (c == '\'')
      apostrophe_len = 1;
    else if (curly_apostrophe_at(s, j))
      apostrophe_len = 3;
    if (apostrophe_len) {
      const std::size_t after = j + apostrophe_len;
      const bool in_word = j > 0 && is_kept(s[j - 1]) && after < s.size() &&
                           is_kept(s[after]);
      j += apostrophe_len - 1;
      if (in_word) continue;  // drop without inserting a space
      c = ' ';
    }
    if (is_kept(c)) {
      out.push_back(c);
    } else if (!out.empty() && out.back() != ' ') {
      out.push_back(' ');
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

TokenizedDoc tokenize(std::string_view text, std::string source_id) {
  TokenizedDoc doc;
  doc.source_id = std::move(source_id);
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) doc.tokens.emplace_back(text.substr(start, i - start));
  }
  return doc;
}

TokenizedDoc expand_slang(const TokenizedDoc& doc, const Lexicons& lex) {
  TokenizedDoc out;
  out.source_id = doc.source_id;
  for (const auto& tok : doc.tokens) {
    auto it = lex.slang.find(tok);
    if (it == lex.slang.end()) {
      out.tokens.push_back(tok);
    } else {
      out.tokens.insert(out.tokens.end(), it->second.begin(),
                        it->second.end());
    }
  }
  return out;
}

TokenizedDoc remove_stopwords(const TokenizedDoc& doc, const Lexicons& lex) {
  TokenizedDoc out;
  out.source_id = doc.source_id;
  for (const auto& tok : doc.tokens) {
    if (lex.stopwords.count(tok) && !lex.pronoun_whitelist.count(tok)) continue;
    out.tokens.push_back(tok);
  }
  return out;
}

PosTag parse_pos_tag(std::string_view text) {
  if (text == "NOUN") return PosTag::Noun;
  if (text == "VERB") return PosTag::Verb;
  if (text == "ADJ") return PosTag::Adj;
  if (text == "ADV") return PosTag::Adv;
  if (text == "PRON") return PosTag::Pron;
  if (text == "OTHER") return PosTag::Other;
  fail(Errc::parse, "unknown POS tag '" + std::string(text) + "'");
}

TokenizedDoc pos_filter(const TokenizedDoc& doc, const Lexicons& lex) {
  TokenizedDoc out;
  out.source_id = doc.source_id;
  for (const auto& tok : doc.tokens) {
    auto it = lex.pos.find(tok);
    if (it != lex.pos.end() && it->second == PosTag::Verb) continue;
    out.tokens.push_back(tok);
  }
  return out;
}

std::string lemmatize(const std::string& word, const Lexicons& lex) {
  auto it = lex.lemma_exceptions.find(word);
  if (it != lex.lemma_exceptions.end()) return it->second;

  auto ends_with = [&](std::string_view suffix) {
    return word.size() >= suffix.size() &&
           word.compare(word.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  auto is_cons = [](char c) {
    return c != 'a' && c != 'e' && c != 'i' && c != 'o' && c != 'u';
  };
  // running -> run, but falling -> fall (l/s/z doubles stay).
  auto undouble = [&](std::string stem) {
    if (stem.size() >= 2 && stem.back() == stem[stem.size() - 2] &&
        is_cons(stem.back()) && stem.back() != 'l' && stem.back() != 's' &&
        stem.back() != 'z')
      stem.pop_back();
    return stem;
  };

  if (ends_with("ies") && word.size() > 4)
    return word.substr(0, word.size() - 3) + "y";
  if (ends_with("es") && word.size() > 3) {
    const std::string base = word.substr(0, word.size() - 2);
    if (base.size() >= 1) {
      const char last = base.back();
      const bool strip_es = last == 's' || last == 'x' || last == 'z' ||
                            (base.size() >= 2 &&
                             (base.compare(base.size() - 2, 2, "ch") == 0 ||
                              base.compare(base.size() - 2, 2, "sh") == 0));
      if (strip_es) return base;
    }
  }
  if (ends_with("s") && !ends_with("ss") && !ends_with("us") &&
      !ends_with("is") && word.size() > 2)
    return word.substr(0, word.size() - 1);
  if (ends_with("ing") && word.size() > 4)
    return undouble(word.substr(0, word.size() - 3));
  if (ends_with("ed") && word.size() > 3)
    return undouble(word.substr(0, word.size() - 2));
  return word;
}

TokenizedDoc preprocess(std::string_view text, const PipelineConfig& cfg,
                        const Lexicons& lex, std::string source_id) {
  TokenizedDoc doc = tokenize(normalize(text, cfg), std::move(source_id));
  if (cfg.expand_slang) doc = expand_slang(doc, lex);
  if (cfg.remove_stopwords) doc = remove_stopwords(doc, lex);
  if (cfg.pos_filter) doc = pos_filter(doc, lex);
  if (cfg.reducer == Reducer::Stem) {
    for (auto& tok : doc.tokens) tok = porter_stem(tok);
  } else if (cfg.reducer == Reducer::Lemma) {
    for (auto& tok : doc.tokens) tok = lemmatize(tok, lex);
  }
  return doc;
}

namespace {

void load_word_file(const std::string& path,
                    std::unordered_set<std::string>& out) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open lexicon file " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    out.insert(line);
  }
}

void load_pair_file(const std::string& path,
                    const std::function<void(std::string, std::string)>& sink) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open lexicon file " + path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      fail(Errc::parse,
           path + ":" + std::to_string(lineno) + ": expected key<TAB>value");
    sink(line.substr(0, tab), line.substr(tab + 1));
  }
}

}  // namespace

Lexicons Lexicons::load(const std::string& dir) {
  Lexicons lex;
  load_word_file(dir + "/stopwords.txt", lex.stopwords);
  load_word_file(dir + "/pronouns.txt", lex.pronoun_whitelist);

  // Slang expansions go through the same normalization as tweet text so the
  // spliced tokens match what the pipeline would produce.
  PipelineConfig canon;
  canon.drop_retweets = false;
  canon.strip_urls = false;
  canon.strip_mentions = false;
  load_pair_file(dir + "/slang.tsv", [&](std::string key, std::string value) {
    lex.slang[std::move(key)] = tokenize(normalize(value, canon)).tokens;
  });
  load_pair_file(dir + "/pos.tsv", [&](std::string key, std::string value) {
    lex.pos[std::move(key)] = parse_pos_tag(value);
  });
  load_pair_file(dir + "/lemma_exceptions.tsv",
                 [&](std::string key, std::string value) {
                   lex.lemma_exceptions[std::move(key)] = std::move(value);
                 });
  return lex;
}

const Lexicons& Lexicons::bundled() {
  static const Lexicons lex = Lexicons::load(DD_LEXICON_DIR);
  return lex;
}

}  // namespace dd
