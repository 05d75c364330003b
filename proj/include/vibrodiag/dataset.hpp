#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "vibrodiag/error.hpp"
#include "vibrodiag/features.hpp"
#include "vibrodiag/numeric_io.hpp"
#include "vibrodiag/rng.hpp"
#include "vibrodiag/synth.hpp"
#include "vibrodiag/types.hpp"

namespace vibrodiag {

struct DataSplit {
  std::vector<LabeledExample> train;
  std::vector<LabeledExample> validation;
  std::vector<LabeledExample> test;
};

struct SplitRatios {
  double train = 0.70;
  double validation = 0.10;
  double test = 0.20;
};

// Stratified split: each class is shuffled deterministically by seed, then
// cut at cumulative floor boundaries. The train segment comes last, so the
// rounding remainder accrues to it; every segment stays within one example
// of its target fraction.
inline DataSplit split_dataset(const std::vector<LabeledExample>& examples,
                               SplitRatios ratios = {}, std::uint64_t seed = 0) {
  if (!(ratios.train > 0.0 && ratios.validation > 0.0 && ratios.test > 0.0)) {
    throw ParameterError("split: ratios must be positive");
  }
  if (std::abs(ratios.train + ratios.validation + ratios.test - 1.0) > 1e-9) {
    throw ParameterError("split: ratios must sum to 1");
  }

  std::array<std::vector<std::size_t>, 3> by_class;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    by_class[static_cast<std::size_t>(examples[i].label)].push_back(i);
  }

  Rng rng(seed);
  DataSplit split;
  for (auto& indices : by_class) {
    rng.shuffle(indices);
    const double n = static_cast<double>(indices.size());
    const auto b1 = static_cast<std::size_t>(std::floor(n * ratios.validation));
    const auto b2 = static_cast<std::size_t>(std::floor(n * (ratios.validation + ratios.test)));
    for (std::size_t i = 0; i < indices.size(); ++i) {
      auto& dest = (i < b1) ? split.validation : (i < b2) ? split.test : split.train;
      dest.push_back(examples[indices[i]]);
    }
  }
  return split;
}

// Feature extraction over a set of labeled frame pairs.
inline std::vector<LabeledExample> featurize(std::span<const FramePair> pairs) {
  std::vector<LabeledExample> out;
  out.reserve(pairs.size());
  for (const FramePair& pair : pairs) {
    if (!pair.label) throw DataError("featurize: unlabeled frame pair");
    out.push_back({extract_features(pair), *pair.label});
  }
  return out;
}

// Per-state frame counts for each of the three splits.
struct SplitCounts {
  std::array<std::size_t, 3> train = {1476, 3635, 198};
  std::array<std::size_t, 3> validation = {164, 404, 22};
  std::array<std::size_t, 3> test = {410, 1010, 55};
};

// The stock training corpus: 5309 train / 590 validation / 1475 test
// examples with the same class mix in every split.
inline SplitCounts default_split_counts() { return SplitCounts{}; }

// Generate and featurize the three splits directly from per-split counts.
// Each split uses its own seed derived from base.seed.
inline DataSplit make_synthetic_split(DatasetSpec base,
                                      const SplitCounts& counts = SplitCounts{}) {
  constexpr std::uint64_t kSeedStride = 0x9e3779b97f4a7c15ull;
  DataSplit split;
  const std::array<const std::array<std::size_t, 3>*, 3> per_split = {
      &counts.train, &counts.validation, &counts.test};
  std::array<std::vector<LabeledExample>*, 3> dest = {&split.train, &split.validation,
                                                      &split.test};
  for (std::size_t k = 0; k < 3; ++k) {
    DatasetSpec spec = base;
    spec.counts = *per_split[k];
    spec.seed = base.seed + kSeedStride * k;
    const auto pairs = synth_dataset(spec);
    *dest[k] = featurize(pairs);
  }
  return split;
}

inline constexpr const char* kDatasetCsvHeader =
    "f1,f2,f3,f4,f5,f6,f7,f8,f9,f10,f11,f12,label";

inline void write_dataset_csv(std::ostream& out, std::span<const LabeledExample> examples) {
  out << kDatasetCsvHeader << '\n';
  for (const LabeledExample& ex : examples) {
    for (double v : ex.features.values) out << format_double(v) << ',';
    out << to_string(ex.label) << '\n';
  }
}

inline void write_dataset_csv(const std::string& path,
                              std::span<const LabeledExample> examples) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path);
  write_dataset_csv(out, examples);
  out.flush();
  if (!out) throw DataError("write failed: " + path);
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

inline std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace detail

inline std::vector<LabeledExample> read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("dataset csv: empty file");
  if (detail::strip_cr(line) != kDatasetCsvHeader) {
    throw DataError("dataset csv: bad header, expected '" + std::string(kDatasetCsvHeader) + "'");
  }

  std::vector<LabeledExample> examples;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    line = detail::strip_cr(line);
    if (line.empty()) continue;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != 13) {
      throw DataError("dataset csv: row " + std::to_string(row) + ": expected 13 fields, got " +
                      std::to_string(fields.size()));
    }
    LabeledExample ex;
    try {
      for (std::size_t i = 0; i < 12; ++i) ex.features[i] = parse_double(fields[i]);
      ex.label = state_from_string(fields[12]);
    } catch (const DataError& e) {
      throw DataError("dataset csv: row " + std::to_string(row) + ": " + e.what());
    }
    if (!ex.features.all_finite()) {
      throw DataError("dataset csv: row " + std::to_string(row) + ": non-finite feature");
    }
    examples.push_back(ex);
  }
  return examples;
}

inline std::vector<LabeledExample> read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path);
  return read_dataset_csv(in);
}

}  // namespace vibrodiag
