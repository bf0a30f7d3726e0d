#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "depdetect/corpus.hpp"

namespace dd {

// Positive class is depressive throughout.
struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;
  std::uint64_t total() const { return tp + fp + fn + tn; }
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
};

struct Report {
  struct Row {
    std::string name;
    Metrics metrics;
  };
  std::vector<Row> rows;
  // Throws Error(evaluation) on a duplicate classifier name.
  void add(std::string name, const Metrics& metrics);
};

ConfusionMatrix confusion(const std::vector<Label>& y_true,
                          const std::vector<Label>& y_pred);

// P = tp/(tp+fp), R = tp/(tp+fn), F1 = 2PR/(P+R), Acc = (tp+tn)/total;
// 0/0 cases evaluate to 0.
Metrics metrics(const ConfusionMatrix& cm);

// Aligned table, columns Precision / Recall / F1 Score / Accuracy; metrics
// printed to 2 decimals and accuracy as a percentage.
std::string render_report_text(const Report& report);

// Header `classifier,precision,recall,f1,accuracy`, same number formats.
std::string render_report_csv(const Report& report);

// 2x2 labeled grid.
std::string render_confusion_text(const ConfusionMatrix& cm);

}  // namespace dd
