#include "depdetect/evalx.hpp"

#include <cstdio>
#include <sstream>

#include "depdetect/error.hpp"

namespace dd {

ConfusionMatrix confusion(const std::vector<Label>& y_true,
                          const std::vector<Label>& y_pred) {
  if (y_true.size() != y_pred.size())
    fail(Errc::evaluation, "label sequences differ in length");
  if (y_true.empty()) fail(Errc::evaluation, "nothing to evaluate");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const bool truth = y_true[i] == Label::Depressive;
    const bool pred = y_pred[i] == Label::Depressive;
    if (truth && pred) ++cm.tp;
    else if (!truth && pred) ++cm.fp;
    else if (truth && !pred) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

Metrics metrics(const ConfusionMatrix& cm) {
  const auto ratio = [](double num, double den) {
    return den == 0.0 ? 0.0 : num / den;
  };
  Metrics m;
  m.precision = ratio(static_cast<double>(cm.tp),
                      static_cast<double>(cm.tp + cm.fp));
  m.recall = ratio(static_cast<double>(cm.tp),
                   static_cast<double>(cm.tp + cm.fn));
  m.f1 = ratio(2.0 * m.precision * m.recall, m.precision + m.recall);
  m.accuracy = ratio(static_cast<double>(cm.tp + cm.tn),
                     static_cast<double>(cm.total()));
  return m;
}

void Report::add(std::string name, const Metrics& metrics) {
  for (const auto& row : rows)
    if (row.name == name)
      fail(Errc::evaluation, "duplicate classifier name '" + name + "'");
  rows.push_back({std::move(name), metrics});
}

namespace {

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string percent2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * v);
  return buf;
}

void check_nonempty(const Report& report) {
  if (report.rows.empty()) fail(Errc::evaluation, "report has no rows");
}

}  // namespace

std::string render_report_text(const Report& report) {
  check_nonempty(report);
  const std::vector<std::string> header = {"Classifier", "Precision", "Recall",
                                           "F1 Score", "Accuracy"};
  std::vector<std::vector<std::string>> cells;
  cells.push_back(header);
  for (const auto& row : report.rows)
    cells.push_back({row.name, fixed2(row.metrics.precision),
                     fixed2(row.metrics.recall), fixed2(row.metrics.f1),
                     percent2(row.metrics.accuracy)});

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : cells)
    for (std::size_t c = 0; c < row.size(); ++c)
      width[c] = std::max(width[c], row[c].size());

  std::ostringstream out;
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << "  ";
      out << row[c];
      if (c + 1 < row.size())
        out << std::string(width[c] - row[c].size(), ' ');
    }
    out << '\n';
  }
  return out.str();
}

std::string render_report_csv(const Report& report) {
  check_nonempty(report);
  std::ostringstream out;
  out << "classifier,precision,recall,f1,accuracy\n";
  for (const auto& row : report.rows)
    out << row.name << ',' << fixed2(row.metrics.precision) << ','
        << fixed2(row.metrics.recall) << ',' << fixed2(row.metrics.f1) << ','
        << percent2(row.metrics.accuracy) << '\n';
  return out.str();
}

std::string render_confusion_text(const ConfusionMatrix& cm) {
  const std::string rows[2] = {"true depressive", "true non_depressive"};
  const std::string cols[2] = {"pred depressive", "pred non_depressive"};
  std::ostringstream out;
  out << std::string(rows[1].size(), ' ') << "  " << cols[0] << "  " << cols[1]
      << '\n';
  const auto line = [&](const std::string& name, std::uint64_t a,
                        std::uint64_t b) {
    out << name << std::string(rows[1].size() - name.size(), ' ');
    std::string sa = std::to_string(a), sb = std::to_string(b);
    out << "  " << std::string(cols[0].size() - sa.size(), ' ') << sa;
    out << "  " << std::string(cols[1].size() - sb.size(), ' ') << sb << '\n';
  };
  line(rows[0], cm.tp, cm.fn);
  line(rows[1], cm.fp, cm.tn);
  return out.str();
}

}  // namespace dd
