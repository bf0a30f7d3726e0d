/* depdetect — depressive-tweet classification toolkit, C interface.
 *
 * Every function returns DD_OK (0) or an error code; dd_last_error() gives
 * a message for the most recent failure on the calling thread. Handles are
 * opaque and released with their dd_*_free function. Strings returned
 * through char** are owned by the caller and released with dd_string_free.
 */
#ifndef DEPDETECT_H
#define DEPDETECT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define DD_API __declspec(dllexport)
#else
#define DD_API __attribute__((visibility("default")))
#endif

typedef enum dd_status {
  DD_OK = 0,
  DD_E_IO = 1,
  DD_E_PARSE = 2,
  DD_E_LABEL = 3,
  DD_E_DUPLICATE_ID = 4,
  DD_E_ARITY = 5,
  DD_E_BALANCE = 6,
  DD_E_SPLIT = 7,
  DD_E_PARAM = 8,
  DD_E_FIT = 9,
  DD_E_DOMAIN = 10,
  DD_E_TAG = 11,
  DD_E_SHAPE = 12,
  DD_E_FORMAT = 13,
  DD_E_VERSION = 14,
  DD_E_INTEGRITY = 15,
  DD_E_KIND = 16,
  DD_E_CONFIG = 17,
  DD_E_EVALUATION = 18,
  DD_E_PROFILE = 19,
  DD_E_INGEST = 20,
  DD_E_INTERNAL = 21
} dd_status;

typedef enum dd_label {
  DD_NON_DEPRESSIVE = 0,
  DD_DEPRESSIVE = 1
} dd_label;

typedef struct dd_corpus dd_corpus;  /* labeled tweets */
typedef struct dd_texts dd_texts;    /* unlabeled id,text rows */
typedef struct dd_model dd_model;    /* trained pipeline + classifier */
typedef struct dd_report dd_report;  /* classifier comparison table */

typedef struct dd_confusion {
  uint64_t tp, fp, fn, tn;
} dd_confusion;

typedef struct dd_metrics {
  double precision, recall, f1, accuracy;
} dd_metrics;

typedef struct dd_profile_result {
  size_t n_tweets;
  size_t n_depressive;
  double fraction;
  double threshold;
  int flagged;
} dd_profile_result;

DD_API const char* dd_version(void);

/* Message for the calling thread's most recent error; empty when none. */
DD_API const char* dd_last_error(void);
DD_API const char* dd_status_name(dd_status status);

DD_API void dd_string_free(char* s);

/* ------------------------------------------------------------- corpus -- */

/* CSV with header id,text,label (labels depressive / non_depressive). */
DD_API dd_status dd_corpus_load_csv(const char* path, dd_corpus** out);
DD_API dd_status dd_corpus_write_csv(const dd_corpus* corpus, const char* path);

/* Merge a header id,text file with three id,label annotation files by
 * majority vote. The id sets must match exactly. */
DD_API dd_status dd_corpus_ingest(const char* tweets_csv,
                                  const char* const annotation_csvs[3],
                                  dd_corpus** out);

DD_API dd_status dd_corpus_synth(size_t n, double noise, uint64_t seed,
                                 dd_corpus** out);
DD_API dd_status dd_corpus_balance(const dd_corpus* corpus, uint64_t seed,
                                   dd_corpus** out);
DD_API dd_status dd_corpus_split(const dd_corpus* corpus, double ratio,
                                 uint64_t seed, dd_corpus** train,
                                 dd_corpus** test);
DD_API size_t dd_corpus_size(const dd_corpus* corpus);
DD_API size_t dd_corpus_count(const dd_corpus* corpus, dd_label label);
DD_API void dd_corpus_free(dd_corpus* corpus);

/* -------------------------------------------------------------- texts -- */

/* CSV with header id,text (one user profile per file). */
DD_API dd_status dd_texts_load_csv(const char* path, dd_texts** out);
DD_API size_t dd_texts_size(const dd_texts* texts);
/* Borrowed pointers, valid while `texts` lives. */
DD_API dd_status dd_texts_get(const dd_texts* texts, size_t index,
                              const char** id, const char** text);
DD_API void dd_texts_free(dd_texts* texts);

/* ------------------------------------------------------------- config -- */

/* `key = value` lines; '#' comments. Unknown keys are rejected. The result
 * is the canonical resolved form with every key present. */
DD_API dd_status dd_config_resolve(const char* text, char** resolved);
/* Documentation of every key, its default and meaning. */
DD_API dd_status dd_config_keys(char** out);

/* ----------------------------------------------------- train / predict -- */

/* config_text may be NULL (defaults). The training log (per-epoch losses,
 * held-out metrics) lands in *log when non-NULL. */
DD_API dd_status dd_train(const dd_corpus* corpus, const char* config_text,
                          dd_model** out, char** log);

DD_API dd_status dd_model_save(const dd_model* model, const char* path);
DD_API dd_status dd_model_load(const char* path, dd_model** out);
/* "mnb", "svm", "rf" or "lstm". */
DD_API const char* dd_model_kind(const dd_model* model);
/* Resolved configuration stored in the artifact (training/serving parity). */
DD_API dd_status dd_model_config(const dd_model* model, char** out);

/* Score is the classifier's native confidence: depressive posterior (mnb),
 * decision value (svm), vote fraction (rf), probability (lstm). */
DD_API dd_status dd_model_predict(const dd_model* model, const char* text,
                                  dd_label* label, double* score);
DD_API void dd_model_free(dd_model* model);

/* ----------------------------------------------------------- evaluate -- */

DD_API dd_status dd_evaluate(const dd_model* model, const dd_corpus* corpus,
                             dd_confusion* confusion, double* oov_rate);
DD_API dd_status dd_metrics_from_confusion(const dd_confusion* confusion,
                                           dd_metrics* out);
DD_API dd_status dd_confusion_render(const dd_confusion* confusion,
                                     char** out);

DD_API dd_status dd_report_new(dd_report** out);
DD_API dd_status dd_report_add(dd_report* report, const char* name,
                               const dd_metrics* metrics);
DD_API dd_status dd_report_render_text(const dd_report* report, char** out);
DD_API dd_status dd_report_render_csv(const dd_report* report, char** out);
DD_API void dd_report_free(dd_report* report);

/* Table-1 display name for a model kind ("svm" -> "SVM", ...). */
DD_API dd_status dd_classifier_display_name(const char* kind, char** out);

/* ------------------------------------------------------------ profile -- */

DD_API dd_status dd_profile(const dd_model* model, const dd_texts* texts,
                            double threshold, dd_profile_result* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DEPDETECT_H */
