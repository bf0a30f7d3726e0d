#include "depdetect.h"

#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "depdetect/config.hpp"
#include "depdetect/corpus.hpp"
#include "depdetect/csv.hpp"
#include "depdetect/error.hpp"
#include "depdetect/evalx.hpp"
#include "depdetect/pipeline.hpp"
#include "depdetect/profiler.hpp"

struct dd_corpus {
  dd::Corpus corpus;
};

struct dd_texts {
  std::vector<std::pair<std::string, std::string>> rows;
};

struct dd_model {
  dd::ModelBundle bundle;
  std::string config_echo;
};

struct dd_report {
  dd::Report report;
};

namespace {

thread_local std::string g_last_error;

dd_status to_status(dd::Errc code) { return static_cast<dd_status>(code); }

template <typename Fn>
dd_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return DD_OK;
  } catch (const dd::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DD_E_INTERNAL;
  }
}

dd_status invalid_arg(const char* what) {
  g_last_error = std::string("null argument: ") + what;
  return DD_E_PARAM;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

dd::Label from_c(dd_label l) {
  return l == DD_DEPRESSIVE ? dd::Label::Depressive
                            : dd::Label::NonDepressive;
}

dd_label to_c(dd::Label l) {
  return l == dd::Label::Depressive ? DD_DEPRESSIVE : DD_NON_DEPRESSIVE;
}

dd::Corpus load_corpus_file(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) dd::fail(dd::Errc::io, std::string("cannot open ") + path);
  return dd::load_csv(in);
}

}  // namespace

extern "C" {

const char* dd_version(void) { return "0.1.0"; }

const char* dd_last_error(void) { return g_last_error.c_str(); }

const char* dd_status_name(dd_status status) {
  return dd::errc_name(static_cast<dd::Errc>(status));
}

void dd_string_free(char* s) { delete[] s; }

/* -------------------------------------------------------------- corpus -- */

dd_status dd_corpus_load_csv(const char* path, dd_corpus** out) {
  if (!path || !out) return invalid_arg("path/out");
  return guarded([&] { *out = new dd_corpus{load_corpus_file(path)}; });
}

dd_status dd_corpus_write_csv(const dd_corpus* corpus, const char* path) {
  if (!corpus || !path) return invalid_arg("corpus/path");
  return guarded([&] {
    std::ofstream out(path, std::ios::binary);
    if (!out) dd::fail(dd::Errc::io, std::string("cannot open ") + path);
    dd::write_csv(corpus->corpus, out);
    out.flush();
    if (!out) dd::fail(dd::Errc::io, std::string("failed writing ") + path);
  });
}

dd_status dd_corpus_ingest(const char* tweets_csv,
                           const char* const annotation_csvs[3],
                           dd_corpus** out) {
  if (!tweets_csv || !annotation_csvs || !out)
    return invalid_arg("tweets_csv/annotation_csvs/out");
  return guarded([&] {
    // tweets: header id,text
    std::ifstream in(tweets_csv, std::ios::binary);
    if (!in) dd::fail(dd::Errc::io, std::string("cannot open ") + tweets_csv);
    dd::CsvReader reader(in);
    dd::CsvRecord rec;
    if (!reader.next(rec) || rec.fields.size() != 2 ||
        rec.fields[0] != "id" || rec.fields[1] != "text")
      dd::fail(dd::Errc::parse,
               std::string(tweets_csv) + ": expected header id,text");
    std::vector<std::pair<std::string, std::string>> tweets;
    while (reader.next(rec)) {
      if (rec.fields.size() == 1 && rec.fields[0].empty()) continue;
      if (rec.fields.size() != 2)
        dd::fail(dd::Errc::parse, std::string(tweets_csv) + " line " +
                                      std::to_string(rec.line) +
                                      ": expected 2 fields");
      tweets.emplace_back(rec.fields[0], rec.fields[1]);
    }

    // three id,label files
    std::vector<std::unordered_map<std::string, dd::Label>> votes(3);
    for (int a = 0; a < 3; ++a) {
      std::ifstream ain(annotation_csvs[a], std::ios::binary);
      if (!ain)
        dd::fail(dd::Errc::io,
                 std::string("cannot open ") + annotation_csvs[a]);
      dd::CsvReader areader(ain);
      if (!areader.next(rec) || rec.fields.size() != 2 ||
          rec.fields[0] != "id" || rec.fields[1] != "label")
        dd::fail(dd::Errc::parse, std::string(annotation_csvs[a]) +
                                      ": expected header id,label");
      while (areader.next(rec)) {
        if (rec.fields.size() == 1 && rec.fields[0].empty()) continue;
        if (rec.fields.size() != 2)
          dd::fail(dd::Errc::parse, std::string(annotation_csvs[a]) +
                                        " line " + std::to_string(rec.line) +
                                        ": expected 2 fields");
        votes[a][rec.fields[0]] = dd::parse_label(rec.fields[1]);
      }
      if (votes[a].size() != tweets.size())
        dd::fail(dd::Errc::ingest,
                 std::string(annotation_csvs[a]) +
                     ": annotation ids do not align with the tweet file");
    }

    dd::Corpus corpus;
    for (const auto& [id, text] : tweets) {
      dd::AnnotationSet ann;
      ann.id = id;
      for (int a = 0; a < 3; ++a) {
        const auto it = votes[a].find(id);
        if (it == votes[a].end())
          dd::fail(dd::Errc::ingest, "tweet id '" + id + "' is missing from " +
                                         annotation_csvs[a]);
        ann.votes.push_back(it->second);
      }
      corpus.add({id, text, dd::majority_vote(ann)});
    }
    *out = new dd_corpus{std::move(corpus)};
  });
}

dd_status dd_corpus_synth(size_t n, double noise, uint64_t seed,
                          dd_corpus** out) {
  if (!out) return invalid_arg("out");
  return guarded([&] { *out = new dd_corpus{dd::synth_corpus(n, noise, seed)}; });
}

dd_status dd_corpus_balance(const dd_corpus* corpus, uint64_t seed,
                            dd_corpus** out) {
  if (!corpus || !out) return invalid_arg("corpus/out");
  return guarded([&] { *out = new dd_corpus{dd::balance(corpus->corpus, seed)}; });
}

dd_status dd_corpus_split(const dd_corpus* corpus, double ratio, uint64_t seed,
                          dd_corpus** train, dd_corpus** test) {
  if (!corpus || !train || !test) return invalid_arg("corpus/train/test");
  return guarded([&] {
    dd::SplitPair pair = dd::split_train_test(corpus->corpus, ratio, seed);
    *train = new dd_corpus{std::move(pair.train)};
    *test = new dd_corpus{std::move(pair.test)};
  });
}

size_t dd_corpus_size(const dd_corpus* corpus) {
  return corpus ? corpus->corpus.size() : 0;
}

size_t dd_corpus_count(const dd_corpus* corpus, dd_label label) {
  return corpus ? corpus->corpus.count(from_c(label)) : 0;
}

void dd_corpus_free(dd_corpus* corpus) { delete corpus; }

/* --------------------------------------------------------------- texts -- */

dd_status dd_texts_load_csv(const char* path, dd_texts** out) {
  if (!path || !out) return invalid_arg("path/out");
  return guarded([&] {
    std::ifstream in(path, std::ios::binary);
    if (!in) dd::fail(dd::Errc::io, std::string("cannot open ") + path);
    dd::CsvReader reader(in);
    dd::CsvRecord rec;
    if (!reader.next(rec) || rec.fields.size() != 2 ||
        rec.fields[0] != "id" || rec.fields[1] != "text")
      dd::fail(dd::Errc::parse,
               std::string(path) + ": expected header id,text");
    auto texts = std::make_unique<dd_texts>();
    while (reader.next(rec)) {
      if (rec.fields.size() == 1 && rec.fields[0].empty()) continue;
      if (rec.fields.size() != 2)
        dd::fail(dd::Errc::parse, std::string(path) + " line " +
                                      std::to_string(rec.line) +
                                      ": expected 2 fields");
      texts->rows.emplace_back(rec.fields[0], rec.fields[1]);
    }
    *out = texts.release();
  });
}

size_t dd_texts_size(const dd_texts* texts) {
  return texts ? texts->rows.size() : 0;
}

dd_status dd_texts_get(const dd_texts* texts, size_t index, const char** id,
                       const char** text) {
  if (!texts || !id || !text) return invalid_arg("texts/id/text");
  if (index >= texts->rows.size()) {
    g_last_error = "texts index out of range";
    return DD_E_PARAM;
  }
  *id = texts->rows[index].first.c_str();
  *text = texts->rows[index].second.c_str();
  return DD_OK;
}

void dd_texts_free(dd_texts* texts) { delete texts; }

/* -------------------------------------------------------------- config -- */

dd_status dd_config_resolve(const char* text, char** resolved) {
  if (!resolved) return invalid_arg("resolved");
  return guarded([&] {
    const dd::RunConfig cfg = dd::RunConfig::parse(text ? text : "");
    *resolved = dup_string(cfg.render());
  });
}

dd_status dd_config_keys(char** out) {
  if (!out) return invalid_arg("out");
  return guarded([&] { *out = dup_string(dd::RunConfig::describe_keys()); });
}

/* ------------------------------------------------------ train / predict -- */

dd_status dd_train(const dd_corpus* corpus, const char* config_text,
                   dd_model** out, char** log) {
  if (!corpus || !out) return invalid_arg("corpus/out");
  return guarded([&] {
    const dd::RunConfig cfg = dd::RunConfig::parse(config_text ? config_text : "");
    dd::TrainOutput trained = dd::train_bundle(corpus->corpus, cfg);
    auto* model = new dd_model{std::move(trained.bundle), {}};
    model->config_echo = model->bundle.config.render();
    if (log) *log = dup_string(trained.log);
    *out = model;
  });
}

dd_status dd_model_save(const dd_model* model, const char* path) {
  if (!model || !path) return invalid_arg("model/path");
  return guarded([&] { dd::save_bundle(model->bundle, path); });
}

dd_status dd_model_load(const char* path, dd_model** out) {
  if (!path || !out) return invalid_arg("path/out");
  return guarded([&] {
    auto* model = new dd_model{dd::load_bundle(path), {}};
    model->config_echo = model->bundle.config.render();
    *out = model;
  });
}

const char* dd_model_kind(const dd_model* model) {
  return model ? model->bundle.model_kind.c_str() : "";
}

dd_status dd_model_config(const dd_model* model, char** out) {
  if (!model || !out) return invalid_arg("model/out");
  *out = dup_string(model->config_echo);
  return DD_OK;
}

dd_status dd_model_predict(const dd_model* model, const char* text,
                           dd_label* label, double* score) {
  if (!model || !text || !label || !score)
    return invalid_arg("model/text/label/score");
  return guarded([&] {
    const auto [l, s] = dd::predict_text(model->bundle, text);
    *label = to_c(l);
    *score = s;
  });
}

void dd_model_free(dd_model* model) { delete model; }

/* ------------------------------------------------------------ evaluate -- */

dd_status dd_evaluate(const dd_model* model, const dd_corpus* corpus,
                      dd_confusion* confusion, double* oov_rate) {
  if (!model || !corpus || !confusion) return invalid_arg("model/corpus/confusion");
  return guarded([&] {
    const dd::EvalOutput ev = dd::evaluate_bundle(model->bundle, corpus->corpus);
    confusion->tp = ev.cm.tp;
    confusion->fp = ev.cm.fp;
    confusion->fn = ev.cm.fn;
    confusion->tn = ev.cm.tn;
    if (oov_rate) *oov_rate = ev.oov_rate;
  });
}

dd_status dd_metrics_from_confusion(const dd_confusion* confusion,
                                    dd_metrics* out) {
  if (!confusion || !out) return invalid_arg("confusion/out");
  return guarded([&] {
    const dd::Metrics m = dd::metrics(
        dd::ConfusionMatrix{confusion->tp, confusion->fp, confusion->fn,
                            confusion->tn});
    out->precision = m.precision;
    out->recall = m.recall;
    out->f1 = m.f1;
    out->accuracy = m.accuracy;
  });
}

dd_status dd_confusion_render(const dd_confusion* confusion, char** out) {
  if (!confusion || !out) return invalid_arg("confusion/out");
  return guarded([&] {
    *out = dup_string(dd::render_confusion_text(
        dd::ConfusionMatrix{confusion->tp, confusion->fp, confusion->fn,
                            confusion->tn}));
  });
}

dd_status dd_report_new(dd_report** out) {
  if (!out) return invalid_arg("out");
  *out = new dd_report{};
  return DD_OK;
}

dd_status dd_report_add(dd_report* report, const char* name,
                        const dd_metrics* metrics) {
  if (!report || !name || !metrics) return invalid_arg("report/name/metrics");
  return guarded([&] {
    report->report.add(name, dd::Metrics{metrics->precision, metrics->recall,
                                         metrics->f1, metrics->accuracy});
  });
}

dd_status dd_report_render_text(const dd_report* report, char** out) {
  if (!report || !out) return invalid_arg("report/out");
  return guarded([&] { *out = dup_string(dd::render_report_text(report->report)); });
}

dd_status dd_report_render_csv(const dd_report* report, char** out) {
  if (!report || !out) return invalid_arg("report/out");
  return guarded([&] { *out = dup_string(dd::render_report_csv(report->report)); });
}

void dd_report_free(dd_report* report) { delete report; }

dd_status dd_classifier_display_name(const char* kind, char** out) {
  if (!kind || !out) return invalid_arg("kind/out");
  return guarded([&] { *out = dup_string(dd::classifier_display_name(kind)); });
}

/* ------------------------------------------------------------- profile -- */

dd_status dd_profile(const dd_model* model, const dd_texts* texts,
                     double threshold, dd_profile_result* out) {
  if (!model || !texts || !out) return invalid_arg("model/texts/out");
  return guarded([&] {
    std::vector<std::string> strings;
    strings.reserve(texts->rows.size());
    for (const auto& [id, text] : texts->rows) strings.push_back(text);
    const dd::ProfileResult r =
        dd::profile_texts(model->bundle, "user", strings, threshold);
    out->n_tweets = r.n_tweets;
    out->n_depressive = r.n_depressive;
    out->fraction = r.fraction;
    out->threshold = r.threshold;
    out->flagged = r.flagged ? 1 : 0;
  });
}

}  // extern "C"
