#include "depdetect/persist_models.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>

#include "depdetect/error.hpp"

namespace dd {

namespace {

std::string u64_str(std::uint64_t v) { return std::to_string(v); }

std::uint64_t parse_u64(const std::string& s, const char* what) {
  char* end = nullptr;
  const std::uint64_t v = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0')
    fail(Errc::format, std::string("bad integer for ") + what + ": '" + s + "'");
  return v;
}

NamedArray array1(std::string name, std::vector<double> data) {
  NamedArray a;
  a.name = std::move(name);
  a.shape = {data.size()};
  a.data = std::move(data);
  return a;
}

NamedArray array2(std::string name, std::uint64_t rows, std::uint64_t cols,
                  std::vector<double> data) {
  NamedArray a;
  a.name = std::move(name);
  a.shape = {rows, cols};
  a.data = std::move(data);
  return a;
}

const NamedArray& expect_shape(const NamedArray& a,
                               std::initializer_list<std::uint64_t> shape) {
  if (a.shape.size() != shape.size())
    fail(Errc::shape, "array '" + a.name + "' has unexpected rank");
  std::size_t i = 0;
  for (std::uint64_t d : shape) {
    if (a.shape[i] != d)
      fail(Errc::shape, "array '" + a.name + "' has unexpected shape");
    ++i;
  }
  return a;
}

std::vector<std::string> split_spaces(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string item;
  while (in >> item) out.push_back(item);
  return out;
}

std::string join_escaped(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out.push_back(' ');
    out += header_escape(items[i]);
  }
  return out;
}

std::vector<std::string> split_escaped(const std::string& s) {
  std::vector<std::string> out;
  for (auto& item : split_spaces(s)) out.push_back(header_unescape(item));
  return out;
}

}  // namespace

const char* feature_mode_name(FeatureMode mode) {
  switch (mode) {
    case FeatureMode::Binary: return "binary";
    case FeatureMode::Count: return "count";
    case FeatureMode::Tfidf: return "tfidf";
  }
  return "count";
}

FeatureMode parse_feature_mode(const std::string& name) {
  if (name == "binary") return FeatureMode::Binary;
  if (name == "count") return FeatureMode::Count;
  if (name == "tfidf") return FeatureMode::Tfidf;
  fail(Errc::format, "unknown vectorizer mode '" + name + "'");
}

void put_vocab(Artifact& artifact, const Vocabulary& vocab) {
  artifact.header.emplace_back("vocab.tokens", join_escaped(vocab.tokens()));
  artifact.header.emplace_back("vocab.n_docs", u64_str(vocab.n_docs()));
  std::vector<double> df(vocab.df().begin(), vocab.df().end());
  artifact.arrays.push_back(array1("vocab.df", std::move(df)));
}

Vocabulary get_vocab(const Artifact& artifact) {
  const auto tokens = split_escaped(artifact.header_at("vocab.tokens"));
  const auto& df = expect_shape(artifact.array_at("vocab.df"),
                                {tokens.size()});
  Vocabulary vocab;
  for (std::size_t i = 0; i < tokens.size(); ++i)
    vocab.add(tokens[i], static_cast<std::uint32_t>(df.data[i]));
  vocab.set_n_docs(parse_u64(artifact.header_at("vocab.n_docs"), "vocab.n_docs"));
  return vocab;
}

Artifact pack_mnb(const MNBModel& model) {
  Artifact a;
  a.kind = "mnb";
  a.arrays.push_back(array1("mnb.log_prior",
                            {model.log_prior[0], model.log_prior[1]}));
  std::vector<double> ll;
  ll.reserve(2 * model.n_features);
  ll.insert(ll.end(), model.log_likelihood[0].begin(),
            model.log_likelihood[0].end());
  ll.insert(ll.end(), model.log_likelihood[1].begin(),
            model.log_likelihood[1].end());
  a.arrays.push_back(array2("mnb.log_likelihood", 2, model.n_features,
                            std::move(ll)));
  a.arrays.push_back(array1("mnb.alpha", {model.alpha}));
  return a;
}

MNBModel unpack_mnb(const Artifact& artifact) {
  MNBModel model;
  const auto& prior = expect_shape(artifact.array_at("mnb.log_prior"), {2});
  model.log_prior = {prior.data[0], prior.data[1]};
  const auto& ll = artifact.array_at("mnb.log_likelihood");
  if (ll.shape.size() != 2 || ll.shape[0] != 2)
    fail(Errc::shape, "mnb.log_likelihood must be 2 x V");
  model.n_features = ll.shape[1];
  model.log_likelihood[0].assign(ll.data.begin(),
                                 ll.data.begin() + static_cast<long>(model.n_features));
  model.log_likelihood[1].assign(ll.data.begin() + static_cast<long>(model.n_features),
                                 ll.data.end());
  model.alpha = expect_shape(artifact.array_at("mnb.alpha"), {1}).data[0];
  return model;
}

Artifact pack_svm(const SVMModel& model) {
  Artifact a;
  a.kind = "svm";
  a.arrays.push_back(array1("svm.weights", model.weights));
  a.arrays.push_back(array1("svm.bias", {model.bias}));
  a.arrays.push_back(array1("svm.lambda", {model.lambda}));
  a.header.emplace_back("svm.epochs", std::to_string(model.epochs));
  a.header.emplace_back("svm.seed", u64_str(model.seed));
  return a;
}

SVMModel unpack_svm(const Artifact& artifact) {
  SVMModel model;
  model.weights = artifact.array_at("svm.weights").data;
  model.bias = expect_shape(artifact.array_at("svm.bias"), {1}).data[0];
  model.lambda = expect_shape(artifact.array_at("svm.lambda"), {1}).data[0];
  model.epochs =
      static_cast<int>(parse_u64(artifact.header_at("svm.epochs"), "svm.epochs"));
  model.seed = parse_u64(artifact.header_at("svm.seed"), "svm.seed");
  return model;
}

Artifact pack_rf(const RFModel& model) {
  Artifact a;
  a.kind = "rf";
  a.header.emplace_back("rf.trees", std::to_string(model.trees.size()));
  a.header.emplace_back("rf.n_features", u64_str(model.n_features));
  a.header.emplace_back("rf.max_depth", std::to_string(model.config.max_depth));
  a.header.emplace_back("rf.features_per_split",
                        std::to_string(model.config.features_per_split));
  a.header.emplace_back("rf.bootstrap",
                        model.config.bootstrap ? "true" : "false");
  a.header.emplace_back("rf.weighted",
                        model.config.weighted ? "true" : "false");
  a.header.emplace_back("rf.seed", u64_str(model.config.seed));
  a.arrays.push_back(array1("rf.tree_weights", model.tree_weights));
  for (std::size_t t = 0; t < model.trees.size(); ++t) {
    const auto& tree = model.trees[t];
    std::vector<double> rows;
    rows.reserve(tree.nodes.size() * 6);
    for (const auto& n : tree.nodes) {
      rows.push_back(static_cast<double>(n.feature));
      rows.push_back(n.threshold);
      rows.push_back(static_cast<double>(n.left));
      rows.push_back(static_cast<double>(n.right));
      rows.push_back(n.leaf_class == Label::Depressive ? 1.0 : 0.0);
      rows.push_back(n.leaf_fraction);
    }
    a.arrays.push_back(array2("rf.tree." + std::to_string(t),
                              tree.nodes.size(), 6, std::move(rows)));
  }
  return a;
}

RFModel unpack_rf(const Artifact& artifact) {
  RFModel model;
  const auto n_trees = parse_u64(artifact.header_at("rf.trees"), "rf.trees");
  model.n_features = parse_u64(artifact.header_at("rf.n_features"), "rf.n_features");
  model.config.n_estimators = static_cast<int>(n_trees);
  model.config.max_depth = static_cast<int>(
      parse_u64(artifact.header_at("rf.max_depth"), "rf.max_depth"));
  model.config.features_per_split = static_cast<int>(parse_u64(
      artifact.header_at("rf.features_per_split"), "rf.features_per_split"));
  model.config.bootstrap = artifact.header_at("rf.bootstrap") == "true";
  model.config.weighted = artifact.header_at("rf.weighted") == "true";
  model.config.seed = parse_u64(artifact.header_at("rf.seed"), "rf.seed");
  model.tree_weights = artifact.array_at("rf.tree_weights").data;
  if (model.tree_weights.size() != n_trees)
    fail(Errc::shape, "rf.tree_weights length does not match rf.trees");
  for (std::uint64_t t = 0; t < n_trees; ++t) {
    const auto& arr = artifact.array_at("rf.tree." + std::to_string(t));
    if (arr.shape.size() != 2 || arr.shape[1] != 6)
      fail(Errc::shape, "rf tree arrays must be n x 6");
    DecisionTree tree;
    tree.max_depth = model.config.max_depth;
    for (std::uint64_t r = 0; r < arr.shape[0]; ++r) {
      const double* row = arr.data.data() + r * 6;
      TreeNode node;
      node.feature = static_cast<std::int32_t>(row[0]);
      node.threshold = row[1];
      node.left = static_cast<std::int32_t>(row[2]);
      node.right = static_cast<std::int32_t>(row[3]);
      node.leaf_class = row[4] != 0.0 ? Label::Depressive : Label::NonDepressive;
      node.leaf_fraction = row[5];
      tree.nodes.push_back(node);
    }
    model.trees.push_back(std::move(tree));
  }
  return model;
}

Artifact pack_lstm(const LSTMModel& model) {
  Artifact a;
  a.kind = "lstm";
  a.header.emplace_back("lstm.vocab", u64_str(model.vocab));
  a.header.emplace_back("lstm.dim", u64_str(model.dim));
  a.header.emplace_back("lstm.hidden", u64_str(model.hidden));
  a.header.emplace_back("lstm.max_len", u64_str(model.max_len));
  a.arrays.push_back(array2("lstm.embed", model.vocab + 1, model.dim, model.embed));
  a.arrays.push_back(array2("lstm.w_i", model.dim, model.hidden, model.w_i));
  a.arrays.push_back(array2("lstm.w_f", model.dim, model.hidden, model.w_f));
  a.arrays.push_back(array2("lstm.w_o", model.dim, model.hidden, model.w_o));
  a.arrays.push_back(array2("lstm.w_c", model.dim, model.hidden, model.w_c));
  a.arrays.push_back(array2("lstm.u_i", model.hidden, model.hidden, model.u_i));
  a.arrays.push_back(array2("lstm.u_f", model.hidden, model.hidden, model.u_f));
  a.arrays.push_back(array2("lstm.u_o", model.hidden, model.hidden, model.u_o));
  a.arrays.push_back(array2("lstm.u_c", model.hidden, model.hidden, model.u_c));
  a.arrays.push_back(array1("lstm.b_i", model.b_i));
  a.arrays.push_back(array1("lstm.b_f", model.b_f));
  a.arrays.push_back(array1("lstm.b_o", model.b_o));
  a.arrays.push_back(array1("lstm.b_c", model.b_c));
  a.arrays.push_back(array1("lstm.w_out", model.w_out));
  a.arrays.push_back(array1("lstm.b_out", {model.b_out}));
  return a;
}

LSTMModel unpack_lstm(const Artifact& artifact) {
  LSTMModel m;
  m.vocab = parse_u64(artifact.header_at("lstm.vocab"), "lstm.vocab");
  m.dim = parse_u64(artifact.header_at("lstm.dim"), "lstm.dim");
  m.hidden = parse_u64(artifact.header_at("lstm.hidden"), "lstm.hidden");
  m.max_len = parse_u64(artifact.header_at("lstm.max_len"), "lstm.max_len");
  m.embed = expect_shape(artifact.array_at("lstm.embed"), {m.vocab + 1, m.dim}).data;
  m.w_i = expect_shape(artifact.array_at("lstm.w_i"), {m.dim, m.hidden}).data;
  m.w_f = expect_shape(artifact.array_at("lstm.w_f"), {m.dim, m.hidden}).data;
  m.w_o = expect_shape(artifact.array_at("lstm.w_o"), {m.dim, m.hidden}).data;
  m.w_c = expect_shape(artifact.array_at("lstm.w_c"), {m.dim, m.hidden}).data;
  m.u_i = expect_shape(artifact.array_at("lstm.u_i"), {m.hidden, m.hidden}).data;
  m.u_f = expect_shape(artifact.array_at("lstm.u_f"), {m.hidden, m.hidden}).data;
  m.u_o = expect_shape(artifact.array_at("lstm.u_o"), {m.hidden, m.hidden}).data;
  m.u_c = expect_shape(artifact.array_at("lstm.u_c"), {m.hidden, m.hidden}).data;
  m.b_i = expect_shape(artifact.array_at("lstm.b_i"), {m.hidden}).data;
  m.b_f = expect_shape(artifact.array_at("lstm.b_f"), {m.hidden}).data;
  m.b_o = expect_shape(artifact.array_at("lstm.b_o"), {m.hidden}).data;
  m.b_c = expect_shape(artifact.array_at("lstm.b_c"), {m.hidden}).data;
  m.w_out = expect_shape(artifact.array_at("lstm.w_out"), {m.hidden}).data;
  m.b_out = expect_shape(artifact.array_at("lstm.b_out"), {1}).data[0];
  return m;
}

Artifact pack_w2v(const EmbeddingMatrix& emb, const Vocabulary& vocab) {
  Artifact a;
  a.kind = "w2v";
  put_vocab(a, vocab);
  a.arrays.push_back(array2("w2v.w_in", emb.rows, emb.dim, emb.w_in));
  a.arrays.push_back(array2("w2v.w_out", emb.rows, emb.dim, emb.w_out));
  return a;
}

std::pair<EmbeddingMatrix, Vocabulary> unpack_w2v(const Artifact& artifact) {
  Vocabulary vocab = get_vocab(artifact);
  EmbeddingMatrix emb;
  const auto& w_in = artifact.array_at("w2v.w_in");
  if (w_in.shape.size() != 2 || w_in.shape[0] != vocab.size())
    fail(Errc::shape, "w2v.w_in must be V x dim");
  emb.rows = w_in.shape[0];
  emb.dim = w_in.shape[1];
  emb.w_in = w_in.data;
  emb.w_out = expect_shape(artifact.array_at("w2v.w_out"),
                           {emb.rows, emb.dim}).data;
  return {std::move(emb), std::move(vocab)};
}

Artifact pack_d2v(const D2VModel& model, const Vocabulary& vocab) {
  Artifact a;
  a.kind = "d2v";
  put_vocab(a, vocab);
  a.header.emplace_back("d2v.doc_ids", join_escaped(model.doc_ids));
  a.header.emplace_back("d2v.tags", join_escaped(model.tag_names));
  a.header.emplace_back("d2v.window", std::to_string(model.window));
  a.header.emplace_back("d2v.negatives", std::to_string(model.negatives));
  a.arrays.push_back(array2("d2v.w_in", model.words.rows, model.words.dim,
                            model.words.w_in));
  a.arrays.push_back(array2("d2v.w_out", model.words.rows, model.words.dim,
                            model.words.w_out));
  a.arrays.push_back(array2("d2v.doc_vectors", model.doc_ids.size(),
                            model.words.dim, model.doc_vectors));
  a.arrays.push_back(array2("d2v.tag_vectors", model.tag_names.size(),
                            model.words.dim, model.tag_vectors));
  a.arrays.push_back(array1("d2v.token_counts", model.token_counts));
  return a;
}

std::pair<D2VModel, Vocabulary> unpack_d2v(const Artifact& artifact) {
  Vocabulary vocab = get_vocab(artifact);
  D2VModel model;
  model.doc_ids = split_escaped(artifact.header_at("d2v.doc_ids"));
  model.tag_names = split_escaped(artifact.header_at("d2v.tags"));
  model.window = static_cast<int>(
      parse_u64(artifact.header_at("d2v.window"), "d2v.window"));
  model.negatives = static_cast<int>(
      parse_u64(artifact.header_at("d2v.negatives"), "d2v.negatives"));
  const auto& w_in = artifact.array_at("d2v.w_in");
  if (w_in.shape.size() != 2 || w_in.shape[0] != vocab.size())
    fail(Errc::shape, "d2v.w_in must be V x dim");
  model.words.rows = w_in.shape[0];
  model.words.dim = w_in.shape[1];
  model.words.w_in = w_in.data;
  model.words.w_out = expect_shape(artifact.array_at("d2v.w_out"),
                                   {model.words.rows, model.words.dim}).data;
  model.doc_vectors = expect_shape(artifact.array_at("d2v.doc_vectors"),
                                   {model.doc_ids.size(), model.words.dim}).data;
  model.tag_vectors = expect_shape(artifact.array_at("d2v.tag_vectors"),
                                   {model.tag_names.size(), model.words.dim}).data;
  model.token_counts = expect_shape(artifact.array_at("d2v.token_counts"),
                                    {vocab.size()}).data;
  return {std::move(model), std::move(vocab)};
}

Artifact pack_vectorizer(const VectorizerModel& model) {
  Artifact a;
  a.kind = "vectorizer";
  a.header.emplace_back("vectorizer.mode", feature_mode_name(model.mode));
  put_vocab(a, model.vocab);
  if (model.mode == FeatureMode::Tfidf)
    a.arrays.push_back(array1("vectorizer.idf", model.idf));
  return a;
}

VectorizerModel unpack_vectorizer(const Artifact& artifact) {
  VectorizerModel model;
  model.mode = parse_feature_mode(artifact.header_at("vectorizer.mode"));
  model.vocab = get_vocab(artifact);
  if (model.mode == FeatureMode::Tfidf) {
    model.idf = expect_shape(artifact.array_at("vectorizer.idf"),
                             {model.vocab.size()}).data;
  }
  return model;
}

}  // namespace dd
