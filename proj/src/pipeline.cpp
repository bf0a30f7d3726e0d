#include "depdetect/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "depdetect/error.hpp"
#include "depdetect/persist_models.hpp"
#include "depdetect/rng.hpp"

namespace dd {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

Reducer parse_reducer(const std::string& name) {
  if (name == "stem") return Reducer::Stem;
  if (name == "lemma") return Reducer::Lemma;
  return Reducer::None;
}

std::vector<SparseEntry> dense_to_entries(const std::vector<double>& dense) {
  std::vector<SparseEntry> entries;
  for (std::size_t i = 0; i < dense.size(); ++i)
    if (dense[i] != 0.0)
      entries.push_back({static_cast<std::uint32_t>(i), dense[i]});
  return entries;
}

W2VConfig w2v_config_from(const RunConfig& config, const char* prefix) {
  const std::string p(prefix);
  W2VConfig cfg;
  if (p == "w2v")
    cfg.mode = config.get_text("w2v.mode") == "skipgram"
                   ? W2VConfig::Mode::SkipGram
                   : W2VConfig::Mode::Cbow;
  cfg.dim = static_cast<int>(config.get_int(p + ".dim"));
  cfg.window = static_cast<int>(config.get_int(p + ".window"));
  cfg.negatives = static_cast<int>(config.get_int(p + ".negatives"));
  cfg.epochs = static_cast<int>(config.get_int(p + ".epochs"));
  cfg.lr = config.get_real(p + ".lr");
  cfg.seed = static_cast<std::uint64_t>(config.get_int("seed"));
  return cfg;
}

LSTMConfig lstm_config_from(const RunConfig& config) {
  LSTMConfig cfg;
  cfg.hidden = static_cast<int>(config.get_int("lstm.hidden"));
  cfg.embed_dim = static_cast<int>(config.get_int("lstm.embed_dim"));
  cfg.max_len = static_cast<int>(config.get_int("lstm.max_len"));
  cfg.epochs = static_cast<int>(config.get_int("lstm.epochs"));
  cfg.batch = static_cast<int>(config.get_int("lstm.batch"));
  cfg.lr = config.get_real("lstm.lr");
  cfg.dropout_in = config.get_real("lstm.dropout_in");
  cfg.dropout_rec = config.get_real("lstm.dropout_rec");
  cfg.seed = static_cast<std::uint64_t>(config.get_int("seed"));
  return cfg;
}

// Deterministic per-document seed for doc2vec inference at serving time.
std::uint64_t infer_seed(const ModelBundle& bundle, const TokenizedDoc& doc) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& tok : doc.tokens) {
    h = fnv1a64(tok.data(), tok.size(), h);
    h = fnv1a64("\x1f", 1, h);
  }
  return mix_seed(static_cast<std::uint64_t>(bundle.config.get_int("seed")), h);
}

SparseVector features_for(const ModelBundle& bundle, const TokenizedDoc& doc) {
  SparseVector v;
  if (bundle.vectorizer) {
    v = transform(doc, *bundle.vectorizer);
  } else if (bundle.w2v) {
    v.entries = dense_to_entries(doc_embedding_avg(doc, bundle.vocab,
                                                   *bundle.w2v));
  } else if (bundle.d2v) {
    const int steps =
        static_cast<int>(bundle.config.get_int("d2v.infer_steps"));
    v.entries = dense_to_entries(
        doc.tokens.empty()
            ? std::vector<double>(bundle.d2v->dim(), 0.0)
            : infer_doc_vector(doc, *bundle.d2v, bundle.vocab, steps,
                               infer_seed(bundle, doc)));
  } else {
    fail(Errc::internal, "bundle has no feature model");
  }
  return v;
}

std::pair<Label, double> predict_doc(const ModelBundle& bundle,
                                     const TokenizedDoc& doc) {
  if (bundle.lstm) {
    const auto ids = encode_sequence(
        doc, bundle.vocab, static_cast<int>(bundle.lstm->max_len));
    return lstm_predict(*bundle.lstm, ids);
  }
  const SparseVector x = features_for(bundle, doc);
  if (bundle.mnb) {
    const auto [label, posterior] = nb_predict(*bundle.mnb, x);
    return {label, std::exp(posterior[1])};
  }
  if (bundle.svm) return svm_predict(*bundle.svm, x);
  if (bundle.rf) {
    std::vector<double> row(bundle.rf->n_features, 0.0);
    for (const auto& e : x.entries)
      if (e.index < row.size()) row[e.index] = e.weight;
    return rf_predict(*bundle.rf, row);
  }
  fail(Errc::internal, "bundle has no classifier");
}

}  // namespace

PipelineConfig pipeline_from_config(const RunConfig& config) {
  PipelineConfig p;
  p.lowercase = config.get_bool("pipeline.lowercase");
  p.strip_urls = config.get_bool("pipeline.strip_urls");
  p.strip_mentions = config.get_bool("pipeline.strip_mentions");
  p.strip_nonalnum = config.get_bool("pipeline.strip_nonalnum");
  p.drop_retweets = config.get_bool("pipeline.drop_retweets");
  p.expand_slang = config.get_bool("pipeline.expand_slang");
  p.remove_stopwords = config.get_bool("pipeline.remove_stopwords");
  p.reducer = parse_reducer(config.get_text("pipeline.reducer"));
  p.pos_filter = config.get_bool("pipeline.pos_filter");
  return p;
}

std::shared_ptr<const Lexicons> lexicons_from_config(const RunConfig& config) {
  const std::string& dir = config.get_text("pipeline.lexicon_dir");
  if (dir.empty())
    return {&Lexicons::bundled(), [](const Lexicons*) {}};  // static storage
  return std::make_shared<const Lexicons>(Lexicons::load(dir));
}

std::string resolve_features(const RunConfig& config) {
  const std::string& model = config.get_text("model");
  std::string features = config.get_text("features");
  if (features == "auto") features = model == "lstm" ? "seq" : "count";
  if (model == "lstm" && features != "seq")
    fail(Errc::config,
         "the lstm consumes token-id sequences through its embedding layer; "
         "use features = seq (or auto)");
  if (model != "lstm" && features == "seq")
    fail(Errc::config, "features = seq is only valid with model = lstm");
  if (model == "mnb" && (features == "w2v" || features == "d2v"))
    fail(Errc::config,
         "multinomial naive Bayes needs nonnegative count-like features; "
         "embedding features (" + features + ") can be negative — use "
         "binary, count or tfidf");
  return features;
}

TrainOutput train_bundle(const Corpus& corpus, const RunConfig& config) {
  TrainOutput out;
  ModelBundle& bundle = out.bundle;
  bundle.config = config;
  bundle.pipeline = pipeline_from_config(config);
  bundle.lexicons = lexicons_from_config(config);
  bundle.model_kind = config.get_text("model");
  bundle.feature_kind = resolve_features(config);

  std::ostringstream log;
  const auto seed = static_cast<std::uint64_t>(config.get_int("seed"));
  const double ratio = config.get_real("train_ratio");

  log << "corpus: n=" << corpus.size()
      << " depressive=" << corpus.count(Label::Depressive)
      << " non_depressive=" << corpus.count(Label::NonDepressive) << '\n';

  SplitPair split = split_train_test(corpus, ratio, seed);
  log << "split: train=" << split.train.size() << " test=" << split.test.size()
      << " ratio=" << fmt("%g", ratio) << " seed=" << seed << '\n';

  const auto preprocess_corpus = [&](const Corpus& c) {
    std::vector<TokenizedDoc> docs;
    docs.reserve(c.size());
    for (const auto& item : c.items())
      docs.push_back(preprocess(item.text, bundle.pipeline, *bundle.lexicons,
                                item.id));
    return docs;
  };
  const std::vector<TokenizedDoc> train_docs = preprocess_corpus(split.train);

  std::vector<Label> train_y;
  train_y.reserve(split.train.size());
  for (const auto& item : split.train.items()) train_y.push_back(item.label);

  const auto min_df = static_cast<std::uint32_t>(config.get_int("min_df"));
  const auto max_features = config.get_int("max_features");
  bundle.vocab = fit_vocab(train_docs, min_df,
                           max_features > 0
                               ? std::optional<std::size_t>(
                                     static_cast<std::size_t>(max_features))
                               : std::nullopt);
  log << "features: " << bundle.feature_kind << " vocab=" << bundle.vocab.size()
      << " (min_df=" << min_df << ", max_features="
      << (max_features > 0 ? std::to_string(max_features) : "unlimited")
      << ")\n";

  // ---- feature models + shallow feature matrix
  std::vector<SparseVector> x;
  std::size_t n_features = 0;
  if (bundle.feature_kind == "binary" || bundle.feature_kind == "count" ||
      bundle.feature_kind == "tfidf") {
    if (bundle.feature_kind == "tfidf") {
      bundle.vectorizer = fit_tfidf(bundle.vocab);
    } else {
      bundle.vectorizer = VectorizerModel{
          bundle.vocab,
          bundle.feature_kind == "binary" ? FeatureMode::Binary
                                          : FeatureMode::Count,
          {}};
    }
    n_features = bundle.vocab.size();
    for (const auto& doc : train_docs)
      x.push_back(transform(doc, *bundle.vectorizer));
  } else if (bundle.feature_kind == "w2v") {
    TrainTrace trace;
    bundle.w2v = train_word2vec(train_docs, bundle.vocab,
                                w2v_config_from(config, "w2v"), &trace);
    for (std::size_t e = 0; e < trace.epoch_loss.size(); ++e)
      log << "w2v epoch " << e + 1 << ": loss="
          << fmt("%.6f", trace.epoch_loss[e]) << '\n';
    n_features = bundle.w2v->dim;
    for (const auto& doc : train_docs) {
      SparseVector v;
      v.entries = dense_to_entries(
          doc_embedding_avg(doc, bundle.vocab, *bundle.w2v));
      x.push_back(std::move(v));
    }
  } else if (bundle.feature_kind == "d2v") {
    std::vector<std::string> tags;
    tags.reserve(train_y.size());
    for (Label l : train_y) tags.emplace_back(label_name(l));
    TrainTrace trace;
    bundle.d2v = train_doc2vec(train_docs, tags, bundle.vocab,
                               w2v_config_from(config, "d2v"), &trace);
    for (std::size_t e = 0; e < trace.epoch_loss.size(); ++e)
      log << "d2v epoch " << e + 1 << ": loss="
          << fmt("%.6f", trace.epoch_loss[e]) << '\n';
    n_features = bundle.d2v->dim();
    for (std::size_t i = 0; i < train_docs.size(); ++i) {
      SparseVector v;
      const auto row = bundle.d2v->doc_vector(i);
      v.entries = dense_to_entries({row.begin(), row.end()});
      x.push_back(std::move(v));
    }
  }

  // ---- classifier
  if (bundle.model_kind == "mnb") {
    bundle.mnb = nb_fit(x, train_y, n_features, config.get_real("mnb.alpha"));
  } else if (bundle.model_kind == "svm") {
    SVMConfig cfg;
    cfg.lambda = config.get_real("svm.lambda");
    cfg.epochs = static_cast<int>(config.get_int("svm.epochs"));
    cfg.seed = seed;
    bundle.svm = svm_fit(x, train_y, n_features, cfg);
    for (std::size_t e = 0; e < bundle.svm->objective_trace.size(); ++e)
      log << "svm epoch " << e + 1 << ": objective="
          << fmt("%.6f", bundle.svm->objective_trace[e]) << '\n';
  } else if (bundle.model_kind == "rf") {
    RFConfig cfg;
    cfg.n_estimators = static_cast<int>(config.get_int("rf.trees"));
    cfg.max_depth = static_cast<int>(config.get_int("rf.max_depth"));
    cfg.features_per_split =
        static_cast<int>(config.get_int("rf.features_per_split"));
    cfg.bootstrap = config.get_bool("rf.bootstrap");
    cfg.weighted = config.get_bool("rf.weighted");
    cfg.seed = seed;
    bundle.rf = rf_fit(densify(x, n_features), train_y, cfg);
  } else if (bundle.model_kind == "lstm") {
    LSTMConfig cfg = lstm_config_from(config);
    LSTMModel model = lstm_init(bundle.vocab.size(), cfg);
    if (config.get_text("lstm.init") == "w2v") {
      W2VConfig wcfg = w2v_config_from(config, "w2v");
      wcfg.dim = cfg.embed_dim;
      const EmbeddingMatrix emb =
          train_word2vec(train_docs, bundle.vocab, wcfg, nullptr);
      for (std::size_t r = 0; r < emb.rows; ++r) {
        const auto src = emb.row_in(r);
        std::copy(src.begin(), src.end(),
                  model.embed.begin() +
                      static_cast<long>((r + 1) * model.dim));
      }
      log << "lstm: embedding initialized from word2vec\n";
    }
    std::vector<std::vector<std::uint32_t>> seqs;
    seqs.reserve(train_docs.size());
    for (const auto& doc : train_docs)
      seqs.push_back(encode_sequence(doc, bundle.vocab, cfg.max_len));
    const auto losses = lstm_train(model, seqs, train_y, cfg);
    for (std::size_t e = 0; e < losses.size(); ++e)
      log << "lstm epoch " << e + 1 << ": loss=" << fmt("%.6f", losses[e])
          << '\n';
    bundle.lstm = std::move(model);
  } else {
    fail(Errc::config, "unknown model '" + bundle.model_kind + "'");
  }

  if (!split.test.empty()) {
    const EvalOutput ev = evaluate_bundle(bundle, split.test);
    log << "heldout: accuracy=" << fmt("%.4f", ev.m.accuracy)
        << " precision=" << fmt("%.4f", ev.m.precision)
        << " recall=" << fmt("%.4f", ev.m.recall)
        << " f1=" << fmt("%.4f", ev.m.f1) << " (n=" << split.test.size()
        << ")\n";
  } else {
    log << "heldout: skipped (empty test split)\n";
  }
  out.log = log.str();
  return out;
}

std::pair<Label, double> predict_text(const ModelBundle& bundle,
                                      const std::string& text) {
  const TokenizedDoc doc = preprocess(text, bundle.pipeline, *bundle.lexicons);
  return predict_doc(bundle, doc);
}

EvalOutput evaluate_bundle(const ModelBundle& bundle, const Corpus& test) {
  if (test.empty()) fail(Errc::evaluation, "test corpus is empty");
  EvalOutput out;
  std::vector<Label> y_true, y_pred;
  std::size_t tokens = 0, oov = 0;
  for (const auto& item : test.items()) {
    const TokenizedDoc doc =
        preprocess(item.text, bundle.pipeline, *bundle.lexicons, item.id);
    for (const auto& tok : doc.tokens) {
      ++tokens;
      oov += bundle.vocab.index_of(tok) == Vocabulary::npos;
    }
    y_true.push_back(item.label);
    y_pred.push_back(predict_doc(bundle, doc).first);
  }
  out.cm = confusion(y_true, y_pred);
  out.m = metrics(out.cm);
  out.oov_rate = tokens == 0
                     ? 0.0
                     : static_cast<double>(oov) / static_cast<double>(tokens);
  return out;
}

ProfileResult profile_texts(const ModelBundle& bundle, std::string user_id,
                            const std::vector<std::string>& texts,
                            double threshold) {
  if (texts.empty()) fail(Errc::profile, "profile needs at least one tweet");
  std::vector<Label> predictions;
  predictions.reserve(texts.size());
  for (const auto& text : texts)
    predictions.push_back(predict_text(bundle, text).first);
  return profile_from_labels(std::move(user_id), predictions, threshold);
}

std::string classifier_display_name(const std::string& kind) {
  if (kind == "mnb") return "Multinomial NB";
  if (kind == "svm") return "SVM";
  if (kind == "rf") return "Random Forest";
  if (kind == "lstm") return "LSTM";
  return kind;
}

Artifact bundle_to_artifact(const ModelBundle& bundle) {
  Artifact a;
  if (bundle.mnb) a = pack_mnb(*bundle.mnb);
  else if (bundle.svm) a = pack_svm(*bundle.svm);
  else if (bundle.rf) a = pack_rf(*bundle.rf);
  else if (bundle.lstm) a = pack_lstm(*bundle.lstm);
  else fail(Errc::internal, "bundle has no classifier");

  a.header.emplace_back("feature_kind", bundle.feature_kind);
  a.header.emplace_back("creator", "depdetect 0.1.0");

  std::istringstream cfg_lines(bundle.config.render());
  std::string line;
  while (std::getline(cfg_lines, line)) {
    const std::size_t sep = line.find(" = ");
    if (sep == std::string::npos) continue;
    a.header.emplace_back("config." + line.substr(0, sep),
                          line.substr(sep + 3));
  }

  put_vocab(a, bundle.vocab);

  if (bundle.vectorizer && bundle.vectorizer->mode == FeatureMode::Tfidf) {
    NamedArray idf;
    idf.name = "vectorizer.idf";
    idf.shape = {bundle.vectorizer->idf.size()};
    idf.data = bundle.vectorizer->idf;
    a.arrays.push_back(std::move(idf));
  }
  if (bundle.w2v) {
    const auto& emb = *bundle.w2v;
    NamedArray w_in{"w2v.w_in", {emb.rows, emb.dim}, emb.w_in};
    NamedArray w_out{"w2v.w_out", {emb.rows, emb.dim}, emb.w_out};
    a.arrays.push_back(std::move(w_in));
    a.arrays.push_back(std::move(w_out));
  }
  if (bundle.d2v) {
    const Artifact d2v_part = pack_d2v(*bundle.d2v, bundle.vocab);
    for (const auto& [k, v] : d2v_part.header)
      if (k.rfind("d2v.", 0) == 0) a.header.emplace_back(k, v);
    for (const auto& arr : d2v_part.arrays)
      if (arr.name.rfind("d2v.", 0) == 0) a.arrays.push_back(arr);
  }
  return a;
}

ModelBundle bundle_from_artifact(const Artifact& artifact) {
  ModelBundle bundle;
  for (const auto& [k, v] : artifact.header) {
    if (k.rfind("config.", 0) == 0) bundle.config.set(k.substr(7), v);
  }
  bundle.pipeline = pipeline_from_config(bundle.config);
  bundle.lexicons = lexicons_from_config(bundle.config);
  bundle.model_kind = artifact.kind;
  bundle.feature_kind = artifact.header_at("feature_kind");
  bundle.vocab = get_vocab(artifact);

  if (bundle.feature_kind == "binary" || bundle.feature_kind == "count") {
    bundle.vectorizer = VectorizerModel{
        bundle.vocab,
        bundle.feature_kind == "binary" ? FeatureMode::Binary
                                        : FeatureMode::Count,
        {}};
  } else if (bundle.feature_kind == "tfidf") {
    VectorizerModel vm;
    vm.vocab = bundle.vocab;
    vm.mode = FeatureMode::Tfidf;
    vm.idf = artifact.array_at("vectorizer.idf").data;
    if (vm.idf.size() != bundle.vocab.size())
      fail(Errc::shape, "vectorizer.idf length does not match the vocabulary");
    bundle.vectorizer = std::move(vm);
  } else if (bundle.feature_kind == "w2v") {
    EmbeddingMatrix emb;
    const auto& w_in = artifact.array_at("w2v.w_in");
    if (w_in.shape.size() != 2 || w_in.shape[0] != bundle.vocab.size())
      fail(Errc::shape, "w2v.w_in must be V x dim");
    emb.rows = w_in.shape[0];
    emb.dim = w_in.shape[1];
    emb.w_in = w_in.data;
    emb.w_out = artifact.array_at("w2v.w_out").data;
    if (emb.w_out.size() != emb.w_in.size())
      fail(Errc::shape, "w2v.w_out size does not match w2v.w_in");
    bundle.w2v = std::move(emb);
  } else if (bundle.feature_kind == "d2v") {
    bundle.d2v = unpack_d2v(artifact).first;
  }

  if (artifact.kind == "mnb") bundle.mnb = unpack_mnb(artifact);
  else if (artifact.kind == "svm") bundle.svm = unpack_svm(artifact);
  else if (artifact.kind == "rf") bundle.rf = unpack_rf(artifact);
  else if (artifact.kind == "lstm") bundle.lstm = unpack_lstm(artifact);
  else fail(Errc::kind, "artifact kind '" + artifact.kind + "' is not a classifier");
  return bundle;
}

void save_bundle(const ModelBundle& bundle, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io, "cannot open " + path + " for writing");
  save_artifact(bundle_to_artifact(bundle), out);
}

ModelBundle load_bundle(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io, "cannot open " + path);
  return bundle_from_artifact(load_artifact(in));
}

}  // namespace dd
