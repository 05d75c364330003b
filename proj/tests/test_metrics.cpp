#include <catch_amalgamated.hpp>

#include <array>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "vibrodiag/metrics.hpp"
#include "vibrodiag/rng.hpp"

using namespace vibrodiag;
using Catch::Approx;

namespace {

// The published test-run outcome used as the reference fixture throughout:
// 410 nominal all correct; 1006+4 current; 15+40 defective.
ConfusionMatrix fixture_matrix() {
  ConfusionMatrix cm;
  cm.counts = {{{410, 0, 0}, {0, 1006, 4}, {0, 15, 40}}};
  return cm;
}

std::pair<std::vector<StateLabel>, std::vector<StateLabel>> fixture_streams() {
  std::array<std::array<long long, 3>, 3> counts = {{{410, 0, 0}, {0, 1006, 4}, {0, 15, 40}}};
  return oracles::matrix_to_streams(counts);
}

}  // namespace

TEST_CASE("confusion_matrix: perfect classifier is diagonal") {
  std::vector<StateLabel> labels;
  for (int i = 0; i < 10; ++i) labels.push_back(state_from_index(i % 3));
  const auto cm = confusion_matrix(labels, labels);
  CHECK(cm.trace() == 10);
  CHECK(cm.total() == 10);
  CHECK(cm.counts[0][1] == 0);
}

TEST_CASE("confusion_matrix: reproduces the fixture counts") {
  const auto [truths, preds] = fixture_streams();
  const auto cm = confusion_matrix(truths, preds);
  const auto expected = fixture_matrix();
  REQUIRE(cm.counts == expected.counts);
  CHECK(cm.total() == 1475);
  CHECK(cm.row_sum(1) == 1010);
  CHECK(cm.col_sum(2) == 44);
}

TEST_CASE("confusion_matrix: order independence and tally oracle") {
  Rng rng(3);
  std::vector<StateLabel> truths, preds;
  for (int i = 0; i < 500; ++i) {
    truths.push_back(state_from_index(static_cast<int>(rng.below(3))));
    preds.push_back(state_from_index(static_cast<int>(rng.below(3))));
  }
  const auto cm = confusion_matrix(truths, preds);

  for (int c = 0; c < 3; ++c) {
    const auto t = oracles::tally_class(truths, preds, state_from_index(c));
    const auto uc = static_cast<std::size_t>(c);
    REQUIRE(cm.counts[uc][uc] == t.tp);
    REQUIRE(cm.col_sum(uc) - cm.counts[uc][uc] == t.fp);
    REQUIRE(cm.row_sum(uc) - cm.counts[uc][uc] == t.fn);
  }

  // Permuting the pairs leaves the matrix unchanged.
  std::vector<std::size_t> order(truths.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  std::vector<StateLabel> t2, p2;
  for (std::size_t i : order) {
    t2.push_back(truths[i]);
    p2.push_back(preds[i]);
  }
  REQUIRE(confusion_matrix(t2, p2).counts == cm.counts);
}

TEST_CASE("confusion_matrix: validation") {
  std::vector<StateLabel> a = {StateLabel::nominal};
  std::vector<StateLabel> b = {StateLabel::nominal, StateLabel::current};
  CHECK_THROWS_AS(confusion_matrix(a, b), ShapeError);
  CHECK_THROWS_AS(confusion_matrix({}, {}), ShapeError);
}

TEST_CASE("class_metrics: fixture per-class rows") {
  const auto cm = fixture_matrix();

  const auto nominal = class_metrics(cm, StateLabel::nominal);
  CHECK(round4(nominal.precision) == 1.0000);
  CHECK(round4(nominal.recall) == 1.0000);
  CHECK(round4(nominal.f1) == 1.0000);
  CHECK(nominal.support == 410);

  const auto current = class_metrics(cm, StateLabel::current);
  CHECK(round4(current.precision) == 0.9853);
  CHECK(round4(current.recall) == 0.9960);
  CHECK(round4(current.f1) == 0.9906);
  CHECK(current.support == 1010);

  const auto defective = class_metrics(cm, StateLabel::defective);
  CHECK(round4(defective.precision) == 0.9091);
  CHECK(round4(defective.recall) == 0.7273);
  CHECK(round4(defective.f1) == 0.8081);
  CHECK(defective.support == 55);
}

TEST_CASE("class_metrics: zero-support class is degenerate") {
  ConfusionMatrix cm;
  cm.counts = {{{5, 0, 0}, {0, 5, 0}, {0, 0, 0}}};
  const auto m = class_metrics(cm, StateLabel::defective);
  CHECK(m.recall == 0.0);
  CHECK(m.support == 0);
  CHECK(m.degenerate);
}

TEST_CASE("averaged_metrics: fixture averages") {
  const auto avg = averaged_metrics(fixture_matrix());

  CHECK(round4(avg.macro.precision) == 0.9648);
  CHECK(round4(avg.macro.recall) == 0.9078);
  CHECK(round4(avg.macro.f1) == 0.9329);

  CHECK(round4(avg.weighted.precision) == 0.9866);
  CHECK(round4(avg.weighted.recall) == 0.9871);
  CHECK(round4(avg.weighted.f1) == 0.9864);

  CHECK(round4(avg.micro.precision) == 0.9871);
  CHECK(round4(avg.micro.recall) == 0.9871);
  CHECK(round4(avg.micro.f1) == 0.9871);

  CHECK(avg.samples.precision == avg.micro.precision);
  CHECK(avg.samples.f1 == avg.micro.f1);
}

TEST_CASE("overall_accuracy: fixture value both ways") {
  const auto cm = fixture_matrix();
  CHECK(overall_accuracy(cm) == Approx(1456.0 / 1475.0));
  CHECK(round4(overall_accuracy(cm)) == 0.9871);
  // One-vs-rest with the worn-out class positive: TP=40 TN=1416 FP=4 FN=15.
  CHECK(overall_accuracy(cm, StateLabel::defective) == Approx(1456.0 / 1475.0));
  CHECK(overall_accuracy(cm, StateLabel::nominal) == Approx(1.0));
}

TEST_CASE("overall_accuracy: diagonal matrix is perfect") {
  ConfusionMatrix cm;
  cm.counts = {{{7, 0, 0}, {0, 9, 0}, {0, 0, 4}}};
  CHECK(overall_accuracy(cm) == 1.0);
  for (StateLabel s : kAllStates) CHECK(overall_accuracy(cm, s) == 1.0);
}

TEST_CASE("metric identities hold for random matrices") {
  Rng rng(9);
  for (int rep = 0; rep < 200; ++rep) {
    ConfusionMatrix cm;
    std::int64_t total = 0;
    for (auto& row : cm.counts) {
      for (auto& cell : row) {
        cell = static_cast<std::int64_t>(rng.below(30));
        total += cell;
      }
    }
    if (total == 0) continue;
    const auto avg = averaged_metrics(cm);
    const double acc = overall_accuracy(cm);
    REQUIRE(avg.micro.precision == Approx(acc).margin(1e-15));
    REQUIRE(avg.micro.recall == Approx(acc).margin(1e-15));
    REQUIRE(avg.weighted.recall == Approx(acc).margin(1e-12));

    std::int64_t support_sum = 0;
    for (int c = 0; c < 3; ++c) {
      support_sum += class_metrics(cm, state_from_index(c)).support;
    }
    REQUIRE(support_sum == cm.total());
  }
}

TEST_CASE("metrics equal the enumeration oracle for every small matrix") {
  // Every 3x3 matrix with total <= 6 plus a random sweep up to 20.
  std::size_t checked = 0;
  std::size_t failures = 0;

  auto verify = [&](const std::array<std::array<long long, 3>, 3>& counts, long long total) {
    if (total == 0) return;
    ConfusionMatrix cm;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        cm.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      }
    }
    const auto [truths, preds] = oracles::matrix_to_streams(counts);
    for (int c = 0; c < 3; ++c) {
      const auto t = oracles::tally_class(truths, preds, state_from_index(c));
      const auto m = class_metrics(cm, state_from_index(c));
      const double precision =
          (t.tp + t.fp > 0) ? static_cast<double>(t.tp) / static_cast<double>(t.tp + t.fp) : 0.0;
      const double recall =
          (t.tp + t.fn > 0) ? static_cast<double>(t.tp) / static_cast<double>(t.tp + t.fn) : 0.0;
      const double f1 =
          (precision + recall > 0.0) ? 2.0 * precision * recall / (precision + recall) : 0.0;
      if (m.precision != precision || m.recall != recall || m.f1 != f1 ||
          m.support != t.tp + t.fn) {
        ++failures;
      }
      const double acc_cls = overall_accuracy(cm, state_from_index(c));
      const double acc_ref = static_cast<double>(t.tp + t.tn) /
                             static_cast<double>(t.tp + t.tn + t.fp + t.fn);
      if (acc_cls != acc_ref) ++failures;
    }
    ++checked;
  };

  // Exhaustive enumeration for small totals.
  std::array<std::array<long long, 3>, 3> counts{};
  auto* cells = &counts[0][0];
  const long long limit = 6;
  std::function<void(int, long long)> recurse = [&](int idx, long long used) {
    if (idx == 9) {
      verify(counts, used);
      return;
    }
    for (long long v = 0; v <= limit - used; ++v) {
      cells[idx] = v;
      recurse(idx + 1, used + v);
    }
    cells[idx] = 0;
  };
  recurse(0, 0);

  // Random matrices with totals up to 20.
  Rng rng(77);
  for (int rep = 0; rep < 2000; ++rep) {
    std::array<std::array<long long, 3>, 3> c{};
    long long total = 0;
    const long long budget = 20;
    for (int i = 0; i < 9 && total < budget; ++i) {
      const long long v = static_cast<long long>(rng.below(static_cast<std::uint64_t>(budget - total + 1)));
      c[static_cast<std::size_t>(i / 3)][static_cast<std::size_t>(i % 3)] = v;
      total += v;
    }
    verify(c, total);
  }

  INFO("verified " << checked << " matrices");
  REQUIRE(failures == 0);
  REQUIRE(checked > 5000);
}

TEST_CASE("render_report: fixture table at four decimals") {
  const auto report = classification_report(fixture_matrix());
  const std::string text = render_report(report);

  CHECK(text.find("precision") != std::string::npos);
  CHECK(text.find("nominal     1.0000    1.0000    1.0000       410") != std::string::npos);
  CHECK(text.find("current     0.9853    0.9960    0.9906      1010") != std::string::npos);
  CHECK(text.find("defective     0.9091    0.7273    0.8081        55") != std::string::npos);
  CHECK(text.find("micro avg     0.9871    0.9871    0.9871      1475") != std::string::npos);
  CHECK(text.find("macro avg     0.9648    0.9078    0.9329      1475") != std::string::npos);
  CHECK(text.find("weighted avg     0.9866    0.9871    0.9864      1475") != std::string::npos);
  CHECK(text.find("samples avg     0.9871    0.9871    0.9871      1475") != std::string::npos);
  CHECK(text.find("overall accuracy: 0.9871") != std::string::npos);
}

TEST_CASE("render_report: parse-back recovers the rounded values") {
  const auto report = classification_report(fixture_matrix());
  const std::string text = render_report(report);

  std::istringstream in(text);
  std::string line;
  std::vector<std::array<double, 3>> parsed;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
    if (tokens.size() < 4) continue;
    if (tokens[0] == "overall") continue;
    try {
      const double p = std::stod(tokens[tokens.size() - 4]);
      const double r = std::stod(tokens[tokens.size() - 3]);
      const double f = std::stod(tokens[tokens.size() - 2]);
      parsed.push_back({p, r, f});
    } catch (...) {
      continue;  // header line
    }
  }
  REQUIRE(parsed.size() == 7);
  CHECK(parsed[0][0] == round4(report.per_class[0].precision));
  CHECK(parsed[1][1] == round4(report.per_class[1].recall));
  CHECK(parsed[2][2] == round4(report.per_class[2].f1));
  CHECK(parsed[3][0] == round4(report.averages.micro.precision));
  CHECK(parsed[4][0] == round4(report.averages.macro.precision));
  CHECK(parsed[5][0] == round4(report.averages.weighted.precision));
  CHECK(parsed[6][0] == round4(report.averages.samples.precision));
}

TEST_CASE("render_report: degenerate single-class report") {
  ConfusionMatrix cm;
  cm.counts = {{{9, 0, 0}, {0, 0, 0}, {0, 0, 0}}};
  const auto report = classification_report(cm);
  const std::string text = render_report(report);
  CHECK(text.find("0.0000") != std::string::npos);
  CHECK(report.per_class[1].degenerate);
  CHECK(round4(report.accuracy) == 1.0);
}
