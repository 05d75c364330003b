#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <span>
#include <sstream>
#include <string>

#include "vibrodiag/error.hpp"
#include "vibrodiag/types.hpp"

namespace vibrodiag {

// 3x3 prediction-versus-truth counts; rows are ground truth, columns are
// predictions, in state-label order.
struct ConfusionMatrix {
  std::array<std::array<std::int64_t, 3>, 3> counts{};

  std::int64_t total() const {
    std::int64_t t = 0;
    for (const auto& row : counts) {
      for (std::int64_t c : row) t += c;
    }
    return t;
  }

  std::int64_t row_sum(std::size_t i) const {
    return counts[i][0] + counts[i][1] + counts[i][2];
  }

  std::int64_t col_sum(std::size_t j) const {
    return counts[0][j] + counts[1][j] + counts[2][j];
  }

  std::int64_t trace() const { return counts[0][0] + counts[1][1] + counts[2][2]; }
};

inline ConfusionMatrix confusion_matrix(std::span<const StateLabel> truths,
                                        std::span<const StateLabel> predictions) {
  if (truths.size() != predictions.size()) {
    throw ShapeError("confusion_matrix: truth/prediction length mismatch");
  }
  if (truths.empty()) throw ShapeError("confusion_matrix: empty input");

  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    cm.counts[static_cast<std::size_t>(truths[i])][static_cast<std::size_t>(predictions[i])] += 1;
  }
  return cm;
}

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t support = 0;
  // Set when a zero denominator forced a metric to 0.
  bool degenerate = false;
};

inline ClassMetrics class_metrics(const ConfusionMatrix& cm, StateLabel cls) {
  const auto c = static_cast<std::size_t>(cls);
  const std::int64_t tp = cm.counts[c][c];
  const std::int64_t fp = cm.col_sum(c) - tp;
  const std::int64_t fn = cm.row_sum(c) - tp;

  ClassMetrics m;
  m.support = cm.row_sum(c);
  if (tp + fp > 0) {
    m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  } else {
    m.degenerate = true;
  }
  if (tp + fn > 0) {
    m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  } else {
    m.degenerate = true;
  }
  if (m.precision + m.recall > 0.0) {
    m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  } else {
    m.degenerate = true;
  }
  return m;
}

struct MetricRow {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t support = 0;
};

struct AveragedMetrics {
  MetricRow micro;
  MetricRow macro;
  MetricRow weighted;
  MetricRow samples;  // equals micro for single-label data
};

// Overall accuracy: trace/total, identical to the micro average.
inline double overall_accuracy(const ConfusionMatrix& cm) {
  const std::int64_t total = cm.total();
  if (total < 1) throw ParameterError("overall_accuracy: empty matrix");
  return static_cast<double>(cm.trace()) / static_cast<double>(total);
}

// One-vs-rest accuracy (TP+TN)/(TP+TN+FP+FN) with the given class positive.
inline double overall_accuracy(const ConfusionMatrix& cm, StateLabel positive) {
  const std::int64_t total = cm.total();
  if (total < 1) throw ParameterError("overall_accuracy: empty matrix");
  const auto c = static_cast<std::size_t>(positive);
  const std::int64_t tp = cm.counts[c][c];
  const std::int64_t fp = cm.col_sum(c) - tp;
  const std::int64_t fn = cm.row_sum(c) - tp;
  const std::int64_t tn = total - tp - fp - fn;
  return static_cast<double>(tp + tn) / static_cast<double>(total);
}

inline AveragedMetrics averaged_metrics(const ConfusionMatrix& cm) {
  const std::int64_t total = cm.total();
  if (total < 1) throw ParameterError("averaged_metrics: empty matrix");

  std::array<ClassMetrics, 3> per_class;
  std::int64_t pooled_tp = 0;
  std::int64_t pooled_fp = 0;
  std::int64_t pooled_fn = 0;
  for (std::size_t c = 0; c < 3; ++c) {
    per_class[c] = class_metrics(cm, state_from_index(static_cast<int>(c)));
    const std::int64_t tp = cm.counts[c][c];
    pooled_tp += tp;
    pooled_fp += cm.col_sum(c) - tp;
    pooled_fn += cm.row_sum(c) - tp;
  }

  AveragedMetrics avg;

  avg.micro.support = total;
  avg.micro.precision =
      pooled_tp + pooled_fp > 0
          ? static_cast<double>(pooled_tp) / static_cast<double>(pooled_tp + pooled_fp)
          : 0.0;
  avg.micro.recall =
      pooled_tp + pooled_fn > 0
          ? static_cast<double>(pooled_tp) / static_cast<double>(pooled_tp + pooled_fn)
          : 0.0;
  avg.micro.f1 = avg.micro.precision + avg.micro.recall > 0.0
                     ? 2.0 * avg.micro.precision * avg.micro.recall /
                           (avg.micro.precision + avg.micro.recall)
                     : 0.0;

  avg.macro.support = total;
  avg.weighted.support = total;
  for (std::size_t c = 0; c < 3; ++c) {
    const ClassMetrics& m = per_class[c];
    avg.macro.precision += m.precision / 3.0;
    avg.macro.recall += m.recall / 3.0;
    avg.macro.f1 += m.f1 / 3.0;
    const double w = static_cast<double>(m.support) / static_cast<double>(total);
    avg.weighted.precision += w * m.precision;
    avg.weighted.recall += w * m.recall;
    avg.weighted.f1 += w * m.f1;
  }

  avg.samples = avg.micro;
  return avg;
}

struct ClassificationReport {
  std::array<ClassMetrics, 3> per_class;
  AveragedMetrics averages;
  double accuracy = 0.0;
  std::int64_t total = 0;
};

inline ClassificationReport classification_report(const ConfusionMatrix& cm) {
  ClassificationReport r;
  for (std::size_t c = 0; c < 3; ++c) {
    r.per_class[c] = class_metrics(cm, state_from_index(static_cast<int>(c)));
  }
  r.averages = averaged_metrics(cm);
  r.accuracy = overall_accuracy(cm);
  r.total = cm.total();
  return r;
}

// Round half up at four decimals; report values are non-negative.
inline double round4(double v) { return std::floor(v * 10000.0 + 0.5) / 10000.0; }

namespace detail {

inline void report_row(std::ostream& out, const std::string& name, double precision,
                       double recall, double f1, std::int64_t support) {
  out << std::setw(12) << name << std::setw(11) << std::fixed << std::setprecision(4)
      << round4(precision) << std::setw(10) << round4(recall) << std::setw(10) << round4(f1)
      << std::setw(10) << support << '\n';
}

}  // namespace detail

// Fixed-width classification report: class rows, then micro / macro /
// weighted / samples averages, values rounded half-up to four decimals.
inline std::string render_report(const ClassificationReport& r) {
  std::ostringstream out;
  out << std::setw(12) << "" << std::setw(11) << "precision" << std::setw(10) << "recall"
      << std::setw(10) << "f1-score" << std::setw(10) << "support" << '\n'
      << '\n';
  for (std::size_t c = 0; c < 3; ++c) {
    const ClassMetrics& m = r.per_class[c];
    detail::report_row(out, to_string(state_from_index(static_cast<int>(c))), m.precision,
                       m.recall, m.f1, m.support);
  }
  out << '\n';
  detail::report_row(out, "micro avg", r.averages.micro.precision, r.averages.micro.recall,
                     r.averages.micro.f1, r.averages.micro.support);
  detail::report_row(out, "macro avg", r.averages.macro.precision, r.averages.macro.recall,
                     r.averages.macro.f1, r.averages.macro.support);
  detail::report_row(out, "weighted avg", r.averages.weighted.precision,
                     r.averages.weighted.recall, r.averages.weighted.f1,
                     r.averages.weighted.support);
  detail::report_row(out, "samples avg", r.averages.samples.precision, r.averages.samples.recall,
                     r.averages.samples.f1, r.averages.samples.support);
  out << '\n'
      << "overall accuracy: " << std::fixed << std::setprecision(4) << round4(r.accuracy) << '\n';
  return out.str();
}

}  // namespace vibrodiag
