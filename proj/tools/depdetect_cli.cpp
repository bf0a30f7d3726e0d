// depdetect command-line front end. Links the C API only.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "depdetect.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitFlagged = 2;

[[noreturn]] void die(dd_status status) {
  std::cerr << "error (" << dd_status_name(status) << "): " << dd_last_error()
            << '\n';
  std::exit(kExitError);
}

void check(dd_status status) {
  if (status != DD_OK) die(status);
}

std::string take_string(char* s) {
  std::string out = s ? s : "";
  dd_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error (io_error): cannot open " << path << '\n';
    std::exit(kExitError);
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CorpusHandle {
  dd_corpus* ptr = nullptr;
  ~CorpusHandle() { dd_corpus_free(ptr); }
};

struct ModelHandle {
  dd_model* ptr = nullptr;
  ~ModelHandle() { dd_model_free(ptr); }
};

struct TextsHandle {
  dd_texts* ptr = nullptr;
  ~TextsHandle() { dd_texts_free(ptr); }
};

void print_counts(const dd_corpus* corpus) {
  std::cout << "corpus: n=" << dd_corpus_size(corpus)
            << " depressive=" << dd_corpus_count(corpus, DD_DEPRESSIVE)
            << " non_depressive="
            << dd_corpus_count(corpus, DD_NON_DEPRESSIVE) << '\n';
}

// Config text assembled from an optional file plus flag overrides; later
// lines win, so flags take precedence over the file.
std::string assemble_config(const std::string& config_path,
                            const std::vector<std::string>& sets) {
  std::string text;
  if (!config_path.empty()) text = read_file(config_path) + "\n";
  for (const auto& kv : sets) text += kv + "\n";
  return text;
}

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"depressive-tweet classification toolkit"};
  app.require_subcommand(1);

  // ---- ingest
  std::string in_tweets, in_out;
  std::vector<std::string> in_annotations;
  bool in_balance = false;
  std::uint64_t in_seed = 42;
  auto* ingest = app.add_subcommand(
      "ingest", "validate a labeled corpus or merge three annotator files");
  ingest->add_option("tweets", in_tweets,
                     "labeled corpus csv (id,text,label), or id,text when "
                     "--annotations is given")
      ->required();
  ingest->add_option("--annotations", in_annotations,
                     "three id,label files merged by majority vote")
      ->expected(3);
  ingest->add_option("--out", in_out, "write the merged corpus csv here");
  ingest->add_flag("--balance", in_balance,
                   "downsample the majority class before writing");
  ingest->add_option("--seed", in_seed, "seed for --balance");

  // ---- synth
  std::size_t sy_n = 2000;
  double sy_noise = 0.1;
  std::uint64_t sy_seed = 42;
  std::string sy_out;
  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  synth->add_option("--n", sy_n, "total documents (even)");
  synth->add_option("--noise", sy_noise, "shared-pool probability in [0,0.5)");
  synth->add_option("--seed", sy_seed, "generator seed");
  synth->add_option("--out", sy_out, "output corpus csv")->required();

  // ---- train
  std::string tr_corpus, tr_out, tr_config, tr_model, tr_features;
  std::vector<std::string> tr_sets;
  std::int64_t tr_seed = -1;
  auto* train = app.add_subcommand("train", "train a classifier bundle");
  train->add_option("corpus", tr_corpus, "labeled corpus csv")->required();
  train->add_option("--out", tr_out, "output model artifact (.ddm)")
      ->required();
  train->add_option("--config", tr_config, "key = value configuration file");
  train->add_option("--model", tr_model, "mnb | svm | rf | lstm");
  train->add_option("--features", tr_features,
                    "binary | count | tfidf | w2v | d2v | seq | auto");
  train->add_option("--seed", tr_seed, "override the configured seed");
  train->add_option("--set", tr_sets, "extra key=value overrides");

  // ---- evaluate
  std::vector<std::string> ev_models;
  std::string ev_data, ev_out;
  auto* evaluate =
      app.add_subcommand("evaluate", "evaluate model artifacts on a corpus");
  evaluate->add_option("models", ev_models, "model artifacts (.ddm)")
      ->required();
  evaluate->add_option("--data", ev_data, "labeled test corpus csv")
      ->required();
  evaluate->add_option("--out", ev_out, "also write the report as csv");

  // ---- predict
  std::string pr_model, pr_text, pr_input, pr_out;
  auto* predict = app.add_subcommand("predict", "classify texts");
  predict->add_option("model", pr_model, "model artifact (.ddm)")->required();
  predict->add_option("--text", pr_text, "classify one text");
  predict->add_option("--input", pr_input, "csv with header id,text");
  predict->add_option("--out", pr_out, "write id,label,score csv here");

  // ---- profile
  std::string pf_model, pf_csv, pf_user, pf_out;
  double pf_threshold = 0.75;
  auto* profile = app.add_subcommand(
      "profile", "red-flag a user profile from its tweets");
  profile->add_option("model", pf_model, "model artifact (.ddm)")->required();
  profile->add_option("tweets", pf_csv, "csv with header id,text")->required();
  profile->add_option("--threshold", pf_threshold,
                      "flag when the depressive fraction strictly exceeds "
                      "this (0.75 default; 0.80 per the stricter reading)");
  profile->add_option("--user", pf_user, "user id for the summary line");
  profile->add_option("--out", pf_out, "write per-tweet predictions here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  if (*ingest) {
    CorpusHandle corpus;
    if (!in_annotations.empty()) {
      const char* anns[3] = {in_annotations[0].c_str(),
                             in_annotations[1].c_str(),
                             in_annotations[2].c_str()};
      check(dd_corpus_ingest(in_tweets.c_str(), anns, &corpus.ptr));
    } else {
      check(dd_corpus_load_csv(in_tweets.c_str(), &corpus.ptr));
    }
    if (in_balance) {
      CorpusHandle balanced;
      check(dd_corpus_balance(corpus.ptr, in_seed, &balanced.ptr));
      std::swap(corpus.ptr, balanced.ptr);
    }
    print_counts(corpus.ptr);
    if (!in_out.empty())
      check(dd_corpus_write_csv(corpus.ptr, in_out.c_str()));
    return kExitOk;
  }

  if (*synth) {
    CorpusHandle corpus;
    check(dd_corpus_synth(sy_n, sy_noise, sy_seed, &corpus.ptr));
    print_counts(corpus.ptr);
    check(dd_corpus_write_csv(corpus.ptr, sy_out.c_str()));
    return kExitOk;
  }

  if (*train) {
    std::string config = assemble_config(tr_config, tr_sets);
    if (!tr_model.empty()) config += "model = " + tr_model + "\n";
    if (!tr_features.empty()) config += "features = " + tr_features + "\n";
    if (tr_seed >= 0) config += "seed = " + std::to_string(tr_seed) + "\n";

    CorpusHandle corpus;
    check(dd_corpus_load_csv(tr_corpus.c_str(), &corpus.ptr));
    ModelHandle model;
    char* log = nullptr;
    check(dd_train(corpus.ptr, config.c_str(), &model.ptr, &log));
    std::cout << take_string(log);
    check(dd_model_save(model.ptr, tr_out.c_str()));
    std::cout << "saved: " << tr_out << '\n';
    return kExitOk;
  }

  if (*evaluate) {
    CorpusHandle corpus;
    check(dd_corpus_load_csv(ev_data.c_str(), &corpus.ptr));
    dd_report* report = nullptr;
    check(dd_report_new(&report));
    std::string confusions;
    for (const auto& path : ev_models) {
      ModelHandle model;
      check(dd_model_load(path.c_str(), &model.ptr));
      dd_confusion cm{};
      double oov = 0.0;
      check(dd_evaluate(model.ptr, corpus.ptr, &cm, &oov));
      if (oov > 0.5)
        std::cerr << "warning: " << path << ": " << oov * 100.0
                  << "% of test tokens are outside the model vocabulary\n";
      dd_metrics m{};
      check(dd_metrics_from_confusion(&cm, &m));
      char* name = nullptr;
      check(dd_classifier_display_name(dd_model_kind(model.ptr), &name));
      const std::string display = take_string(name);
      check(dd_report_add(report, display.c_str(), &m));
      char* grid = nullptr;
      check(dd_confusion_render(&cm, &grid));
      confusions += display + "\n" + take_string(grid) + "\n";
    }
    char* text = nullptr;
    check(dd_report_render_text(report, &text));
    std::cout << take_string(text) << '\n' << confusions;
    if (!ev_out.empty()) {
      char* csv = nullptr;
      check(dd_report_render_csv(report, &csv));
      std::ofstream out(ev_out, std::ios::binary);
      out << take_string(csv);
      if (!out) {
        dd_report_free(report);
        std::cerr << "error (io_error): failed writing " << ev_out << '\n';
        return kExitError;
      }
    }
    dd_report_free(report);
    return kExitOk;
  }

  if (*predict) {
    if (pr_text.empty() == pr_input.empty()) {
      std::cerr << "error (parameter_error): pass exactly one of --text or "
                   "--input\n";
      return kExitError;
    }
    ModelHandle model;
    check(dd_model_load(pr_model.c_str(), &model.ptr));
    std::ostringstream rows;
    const auto emit = [&](const std::string& id, const std::string& text) {
      dd_label label = DD_NON_DEPRESSIVE;
      double score = 0.0;
      check(dd_model_predict(model.ptr, text.c_str(), &label, &score));
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.6f", score);
      rows << csv_quote(id) << ','
           << (label == DD_DEPRESSIVE ? "depressive" : "non_depressive") << ','
           << buf << '\n';
    };
    if (!pr_text.empty()) {
      emit("-", pr_text);
    } else {
      TextsHandle texts;
      check(dd_texts_load_csv(pr_input.c_str(), &texts.ptr));
      for (std::size_t i = 0; i < dd_texts_size(texts.ptr); ++i) {
        const char* id = nullptr;
        const char* text = nullptr;
        check(dd_texts_get(texts.ptr, i, &id, &text));
        emit(id, text);
      }
    }
    const std::string output = "id,label,score\n" + rows.str();
    std::cout << output;
    if (!pr_out.empty()) {
      std::ofstream out(pr_out, std::ios::binary);
      out << output;
      if (!out) {
        std::cerr << "error (io_error): failed writing " << pr_out << '\n';
        return kExitError;
      }
    }
    return kExitOk;
  }

  if (*profile) {
    ModelHandle model;
    check(dd_model_load(pf_model.c_str(), &model.ptr));
    TextsHandle texts;
    check(dd_texts_load_csv(pf_csv.c_str(), &texts.ptr));

    std::string user = pf_user;
    if (user.empty()) {
      // file stem as the user id
      user = pf_csv;
      const auto slash = user.find_last_of("/\\");
      if (slash != std::string::npos) user = user.substr(slash + 1);
      const auto dot = user.rfind('.');
      if (dot != std::string::npos && dot > 0) user = user.substr(0, dot);
    }

    if (!pf_out.empty()) {
      std::ostringstream rows;
      rows << "id,label,score\n";
      for (std::size_t i = 0; i < dd_texts_size(texts.ptr); ++i) {
        const char* id = nullptr;
        const char* text = nullptr;
        check(dd_texts_get(texts.ptr, i, &id, &text));
        dd_label label = DD_NON_DEPRESSIVE;
        double score = 0.0;
        check(dd_model_predict(model.ptr, text, &label, &score));
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6f", score);
        rows << csv_quote(id) << ','
             << (label == DD_DEPRESSIVE ? "depressive" : "non_depressive")
             << ',' << buf << '\n';
      }
      std::ofstream out(pf_out, std::ios::binary);
      out << rows.str();
      if (!out) {
        std::cerr << "error (io_error): failed writing " << pf_out << '\n';
        return kExitError;
      }
    }

    dd_profile_result result{};
    check(dd_profile(model.ptr, texts.ptr, pf_threshold, &result));
    char frac[64], thr[64];
    std::snprintf(frac, sizeof frac, "%.4f", result.fraction);
    std::snprintf(thr, sizeof thr, "%g", result.threshold);
    std::cout << csv_quote(user) << ',' << result.n_tweets << ',' << frac
              << ',' << thr << ',' << (result.flagged ? "true" : "false")
              << '\n';
    return result.flagged ? kExitFlagged : kExitOk;
  }

  return kExitError;
}
