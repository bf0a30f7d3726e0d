// Porter's stemming algorithm as published (steps 1a-5b, longest matching
// suffix per step). The common implementation departures (2-letter guard,
// bli/logi rules) are intentionally not applied.

#include <array>
#include <string>
#include <string_view>

#include "depdetect/textprep.hpp"

namespace dd {

namespace {

bool is_cons(const std::string& w, std::size_t i) {
  const char c = w[i];
  switch (c) {
    case 'a': case 'e': case 'i': case 'o': case 'u':
      return false;
    case 'y':
      return i == 0 ? true : !is_cons(w, i - 1);
    default:
      return true;
  }
}

// m of the prefix w[0, end): [C](VC){m}[V].
int measure(const std::string& w, std::size_t end) {
  std::size_t i = 0;
  while (i < end && is_cons(w, i)) ++i;
  int m = 0;
  while (i < end) {
    while (i < end && !is_cons(w, i)) ++i;
    if (i >= end) break;
    ++m;
    while (i < end && is_cons(w, i)) ++i;
  }
  return m;
}

bool has_vowel(const std::string& w, std::size_t end) {
  for (std::size_t i = 0; i < end; ++i)
    if (!is_cons(w, i)) return true;
  return false;
}

// Prefix ends with a doubled consonant.
bool ends_double_cons(const std::string& w, std::size_t end) {
  return end >= 2 && w[end - 1] == w[end - 2] && is_cons(w, end - 1);
}

// Prefix ends consonant-vowel-consonant where the final consonant is not
// w, x or y.
bool ends_cvc(const std::string& w, std::size_t end) {
  if (end < 3 || !is_cons(w, end - 1) || is_cons(w, end - 2) ||
      !is_cons(w, end - 3))
    return false;
  const char c = w[end - 1];
  return c != 'w' && c != 'x' && c != 'y';
}

bool ends_with(const std::string& w, std::string_view suffix) {
  return w.size() >= suffix.size() &&
         w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
};

// Longest matching suffix wins; its condition is then tested once — on
// failure no other rule of the step fires.
template <std::size_t N, typename Cond>
void apply_step(std::string& w, const std::array<Rule, N>& rules, Cond cond) {
  const Rule* best = nullptr;
  for (const Rule& r : rules) {
    if ((best == nullptr || r.suffix.size() > best->suffix.size()) &&
        ends_with(w, r.suffix))
      best = &r;
  }
  if (!best) return;
  const std::size_t stem = w.size() - best->suffix.size();
  if (!cond(stem)) return;
  w.resize(stem);
  w.append(best->replacement);
}

void step1a(std::string& w) {
  if (ends_with(w, "sses")) {
    w.resize(w.size() - 2);
  } else if (ends_with(w, "ies")) {
    w.resize(w.size() - 2);
  } else if (ends_with(w, "ss")) {
    // keep
  } else if (ends_with(w, "s")) {
    w.pop_back();
  }
}

void step1b(std::string& w) {
  if (ends_with(w, "eed")) {
    if (measure(w, w.size() - 3) > 0) w.pop_back();
    return;
  }
  bool stripped = false;
  if (ends_with(w, "ed") && has_vowel(w, w.size() - 2)) {
    w.resize(w.size() - 2);
    stripped = true;
  } else if (ends_with(w, "ing") && has_vowel(w, w.size() - 3)) {
    w.resize(w.size() - 3);
    stripped = true;
  }
  if (!stripped) return;

  if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
    w.push_back('e');
  } else if (ends_double_cons(w, w.size())) {
    const char c = w.back();
    if (c != 'l' && c != 's' && c != 'z') w.pop_back();
  } else if (measure(w, w.size()) == 1 && ends_cvc(w, w.size())) {
    w.push_back('e');
  }
}

void step1c(std::string& w) {
  if (ends_with(w, "y") && has_vowel(w, w.size() - 1)) w.back() = 'i';
}

void step2(std::string& w) {
  static constexpr std::array<Rule, 20> rules{{
      {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},
      {"anci", "ance"},   {"izer", "ize"},    {"abli", "able"},
      {"alli", "al"},     {"entli", "ent"},   {"eli", "e"},
      {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
      {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"},
      {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},
      {"iviti", "ive"},   {"biliti", "ble"},
  }};
  apply_step(w, rules, [&](std::size_t stem) { return measure(w, stem) > 0; });
}

void step3(std::string& w) {
  static constexpr std::array<Rule, 7> rules{{
      {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
      {"ical", "ic"},  {"ful", ""},   {"ness", ""},
  }};
  apply_step(w, rules, [&](std::size_t stem) { return measure(w, stem) > 0; });
}

void step4(std::string& w) {
  static constexpr std::array<Rule, 19> rules{{
      {"al", ""},    {"ance", ""}, {"ence", ""}, {"er", ""},   {"ic", ""},
      {"able", ""},  {"ible", ""}, {"ant", ""},  {"ement", ""},
      {"ment", ""},  {"ent", ""},  {"ion", ""},  {"ou", ""},   {"ism", ""},
      {"ate", ""},   {"iti", ""},  {"ous", ""},  {"ive", ""},  {"ize", ""},
  }};
  apply_step(w, rules, [&](std::size_t stem) {
    if (measure(w, stem) <= 1) return false;
    if (ends_with(w, "ion"))
      return stem > 0 && (w[stem - 1] == 's' || w[stem - 1] == 't');
    return true;
  });
}

void step5a(std::string& w) {
  if (!ends_with(w, "e")) return;
  const std::size_t stem = w.size() - 1;
  const int m = measure(w, stem);
  if (m > 1 || (m == 1 && !ends_cvc(w, stem))) w.pop_back();
}

void step5b(std::string& w) {
  if (ends_with(w, "l") && ends_double_cons(w, w.size()) &&
      measure(w, w.size()) > 1)
    w.pop_back();
}

}  // namespace

std::string porter_stem(std::string_view word) {
  for (char c : word)
    if (c < 'a' || c > 'z') return std::string(word);
  std::string w(word);
  step1a(w);
  step1b(w);
  step1c(w);
  step2(w);
  step3(w);
  step4(w);
  step5a(w);
  step5b(w);
  return w;
}

}  // namespace dd
