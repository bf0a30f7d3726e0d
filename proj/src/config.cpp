#include "depdetect/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "depdetect/error.hpp"

namespace dd {

const std::vector<RunConfig::KeySpec>& RunConfig::registry() {
  using T = Type;
  static const std::vector<KeySpec> keys = {
      {"seed", T::Int, "42", {}, "seed for every stochastic stage"},
      {"train_ratio", T::Real, "0.8", {}, "train fraction of the corpus split"},
      {"threshold", T::Real, "0.75", {}, "profile red-flag fraction (strictly above flags)"},
      {"model", T::Choice, "svm", {"mnb", "svm", "rf", "lstm"}, "classifier to train"},
      {"features", T::Choice, "auto", {"auto", "binary", "count", "tfidf", "w2v", "d2v", "seq"},
       "document representation; auto picks count (shallow) or seq (lstm)"},
      {"min_df", T::Int, "1", {}, "minimum document frequency for vocabulary terms"},
      {"max_features", T::Int, "0", {}, "vocabulary cap by descending df; 0 = unlimited"},

      {"pipeline.lowercase", T::Bool, "true", {}, "lowercase during normalization"},
      {"pipeline.strip_urls", T::Bool, "true", {}, "remove http/https/www runs"},
      {"pipeline.strip_mentions", T::Bool, "true", {}, "remove @mentions"},
      {"pipeline.strip_nonalnum", T::Bool, "true", {}, "replace non-alphanumerics with spaces"},
      {"pipeline.drop_retweets", T::Bool, "true", {}, "drop tweets starting with RT @"},
      {"pipeline.expand_slang", T::Bool, "true", {}, "expand slang/abbreviations"},
      {"pipeline.remove_stopwords", T::Bool, "true", {}, "drop stop words (pronouns exempt)"},
      {"pipeline.reducer", T::Choice, "stem", {"stem", "lemma", "none"}, "word reduction stage"},
      {"pipeline.pos_filter", T::Bool, "false", {}, "drop verbs via the POS lexicon"},
      {"pipeline.lexicon_dir", T::Text, "", {}, "lexicon directory; empty = bundled files"},

      {"mnb.alpha", T::Real, "1.0", {}, "additive smoothing"},

      {"svm.lambda", T::Real, "1e-4", {}, "hinge-loss regularization"},
      {"svm.epochs", T::Int, "50", {}, "SGD epochs"},

      {"rf.trees", T::Int, "40", {}, "number of trees"},
      {"rf.max_depth", T::Int, "0", {}, "tree depth cap; 0 = unlimited"},
      {"rf.features_per_split", T::Int, "0", {}, "features tried per node; 0 = ceil(sqrt(V))"},
      {"rf.bootstrap", T::Bool, "true", {}, "sample rows with replacement per tree"},
      {"rf.weighted", T::Bool, "false", {}, "weight votes by 1 - out-of-bag error"},

      {"w2v.mode", T::Choice, "cbow", {"cbow", "skipgram"}, "word2vec objective"},
      {"w2v.dim", T::Int, "50", {}, "embedding dimension"},
      {"w2v.window", T::Int, "4", {}, "context window"},
      {"w2v.negatives", T::Int, "5", {}, "negative samples per pair"},
      {"w2v.epochs", T::Int, "15", {}, "training epochs"},
      {"w2v.lr", T::Real, "0.025", {}, "initial learning rate (decays to 1%)"},

      {"d2v.dim", T::Int, "50", {}, "doc2vec dimension"},
      {"d2v.window", T::Int, "4", {}, "context window"},
      {"d2v.negatives", T::Int, "5", {}, "negative samples per pair"},
      {"d2v.epochs", T::Int, "15", {}, "training epochs"},
      {"d2v.lr", T::Real, "0.025", {}, "initial learning rate (decays to 1%)"},
      {"d2v.infer_steps", T::Int, "50", {}, "vector-inference passes for unseen documents"},

      {"lstm.hidden", T::Int, "64", {}, "memory units"},
      {"lstm.embed_dim", T::Int, "50", {}, "embedding dimension"},
      {"lstm.max_len", T::Int, "30", {}, "sequence length (left-padded)"},
      {"lstm.epochs", T::Int, "10", {}, "training epochs"},
      {"lstm.batch", T::Int, "32", {}, "mini-batch size"},
      {"lstm.lr", T::Real, "0.05", {}, "SGD learning rate"},
      {"lstm.dropout_in", T::Real, "0.2", {}, "input dropout rate"},
      {"lstm.dropout_rec", T::Real, "0.2", {}, "recurrent dropout rate"},
      {"lstm.init", T::Choice, "random", {"random", "w2v"},
       "embedding initialization; w2v trains word vectors first"},
  };
  return keys;
}

RunConfig::RunConfig() {
  for (const auto& spec : registry())
    values_[std::string(spec.name)] = std::string(spec.default_value);
}

const RunConfig::KeySpec& RunConfig::spec_for(const std::string& key) const {
  for (const auto& spec : registry())
    if (spec.name == key) return spec;
  fail(Errc::config, "unknown configuration key '" + key + "'");
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  const KeySpec& spec = spec_for(key);
  const std::string v = trim(value);
  switch (spec.type) {
    case Type::Bool:
      if (v != "true" && v != "false")
        fail(Errc::config, key + " must be true or false, got '" + v + "'");
      break;
    case Type::Int: {
      char* end = nullptr;
      (void)std::strtoll(v.c_str(), &end, 10);
      if (v.empty() || *end != '\0')
        fail(Errc::config, key + " must be an integer, got '" + v + "'");
      break;
    }
    case Type::Real: {
      char* end = nullptr;
      (void)std::strtod(v.c_str(), &end);
      if (v.empty() || *end != '\0')
        fail(Errc::config, key + " must be a number, got '" + v + "'");
      break;
    }
    case Type::Choice: {
      if (std::find(spec.choices.begin(), spec.choices.end(), v) ==
          spec.choices.end()) {
        std::string allowed;
        for (const auto& c : spec.choices) {
          if (!allowed.empty()) allowed += ", ";
          allowed += c;
        }
        fail(Errc::config,
             key + " must be one of {" + allowed + "}, got '" + v + "'");
      }
      break;
    }
    case Type::Text:
      break;
  }
  values_[key] = v;
}

RunConfig RunConfig::parse(std::string_view text) {
  RunConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      fail(Errc::config, "config line " + std::to_string(lineno) +
                             ": expected key = value");
    try {
      cfg.set(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
    } catch (const Error& e) {
      fail(Errc::config,
           "config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

bool RunConfig::get_bool(const std::string& key) const {
  (void)spec_for(key);
  return values_.at(key) == "true";
}

std::int64_t RunConfig::get_int(const std::string& key) const {
  (void)spec_for(key);
  return std::strtoll(values_.at(key).c_str(), nullptr, 10);
}

double RunConfig::get_real(const std::string& key) const {
  (void)spec_for(key);
  return std::strtod(values_.at(key).c_str(), nullptr);
}

const std::string& RunConfig::get_text(const std::string& key) const {
  (void)spec_for(key);
  return values_.at(key);
}

std::string RunConfig::render() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
  return out;
}

std::string RunConfig::describe_keys() {
  std::ostringstream out;
  for (const auto& spec : registry()) {
    out << spec.name << " (default " << spec.default_value;
    if (!spec.choices.empty()) {
      out << "; one of";
      for (const auto& c : spec.choices) out << ' ' << c;
    }
    out << ") - " << spec.help << '\n';
  }
  return out.str();
}

}  // namespace dd
