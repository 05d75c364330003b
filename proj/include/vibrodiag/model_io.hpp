#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "vibrodiag/error.hpp"
#include "vibrodiag/network.hpp"
#include "vibrodiag/numeric_io.hpp"

namespace vibrodiag {

// Versioned textual model format. Layout:
//
//   vibrodiag-model 1
//   input_dim N
//   hidden N...            (may be an empty list)
//   output_dim N
//   activation relu
//   output_activation softmax
//   bn_positions input hidden
//   bn_epsilon <value>
//   bn_momentum <value>
//   <parameter arrays in architecture order>
//   param_count N
//
// Each array is introduced by "bn I NAME COUNT" or "dense I NAME COUNT"
// followed by COUNT whitespace-separated decimals. Values use the shortest
// round-trip representation, so save -> load reproduces every parameter
// bit for bit. The trailing param_count is validated on load.

inline constexpr int kModelFormatVersion = 1;
inline constexpr const char* kModelMagic = "vibrodiag-model";

namespace detail {

inline void write_array(std::ostream& out, const std::string& kind, std::size_t index,
                        const std::string& name, std::span<const double> values) {
  out << kind << ' ' << index << ' ' << name << ' ' << values.size() << '\n';
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << format_double(values[i]);
    out << (((i + 1) % 8 == 0 || i + 1 == values.size()) ? '\n' : ' ');
  }
}

class ModelReader {
 public:
  explicit ModelReader(std::istream& in) : in_(in) {}

  std::string token() {
    std::string t;
    if (!(in_ >> t)) throw LoadError(LoadError::Kind::malformed, "model file: unexpected end");
    return t;
  }

  void expect(const std::string& want) {
    const std::string got = token();
    if (got != want) {
      throw LoadError(LoadError::Kind::malformed,
                      "model file: expected '" + want + "', got '" + got + "'");
    }
  }

  long long integer() {
    try {
      return parse_int(token());
    } catch (const DataError& e) {
      throw LoadError(LoadError::Kind::malformed, e.what());
    }
  }

  double number() {
    try {
      return parse_double(token());
    } catch (const DataError& e) {
      throw LoadError(LoadError::Kind::malformed, e.what());
    }
  }

  std::vector<double> array(const std::string& kind, std::size_t index, const std::string& name,
                            std::size_t expected) {
    expect(kind);
    if (integer() != static_cast<long long>(index)) {
      throw LoadError(LoadError::Kind::malformed, "model file: array index mismatch for " + name);
    }
    expect(name);
    const long long count = integer();
    if (count != static_cast<long long>(expected)) {
      throw LoadError(LoadError::Kind::dimension_mismatch,
                      "model file: " + name + " has " + std::to_string(count) +
                          " values, architecture requires " + std::to_string(expected));
    }
    std::vector<double> values(expected);
    for (auto& v : values) {
      v = number();
      if (!std::isfinite(v)) {
        throw LoadError(LoadError::Kind::malformed, "model file: non-finite parameter");
      }
    }
    return values;
  }

 private:
  std::istream& in_;
};

}  // namespace detail

inline void save_model(const Model& m, std::ostream& out) {
  out << kModelMagic << ' ' << kModelFormatVersion << '\n';
  out << "input_dim " << m.arch.input_dim << '\n';
  out << "hidden";
  for (std::size_t h : m.arch.hidden) out << ' ' << h;
  out << '\n';
  out << "output_dim " << m.arch.output_dim << '\n';
  out << "activation relu\n";
  out << "output_activation softmax\n";
  out << "bn_positions input hidden\n";
  out << "bn_epsilon " << format_double(m.norms[0].epsilon) << '\n';
  out << "bn_momentum " << format_double(m.norms[0].momentum) << '\n';

  for (std::size_t i = 0; i < m.norms.size(); ++i) {
    const BatchNormLayer& bn = m.norms[i];
    detail::write_array(out, "bn", i, "gamma", bn.gamma);
    detail::write_array(out, "bn", i, "beta", bn.beta);
    detail::write_array(out, "bn", i, "moving_mean", bn.moving_mean);
    detail::write_array(out, "bn", i, "moving_var", bn.moving_var);
    if (i < m.dense.size()) {
      const DenseLayer& d = m.dense[i];
      detail::write_array(out, "dense", i, "weights", d.weights.data);
      detail::write_array(out, "dense", i, "bias", d.bias);
    }
  }

  out << "param_count " << param_counts(m).total << '\n';
}

inline void save_model(const Model& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path);
  save_model(m, out);
  out.flush();
  if (!out) throw DataError("write failed: " + path);
}

inline Model load_model(std::istream& in) {
  detail::ModelReader reader(in);

  if (reader.token() != kModelMagic) {
    throw LoadError(LoadError::Kind::malformed, "model file: bad magic");
  }
  const long long version = reader.integer();
  if (version != kModelFormatVersion) {
    throw LoadError(LoadError::Kind::version_mismatch,
                    "model file: format version " + std::to_string(version) +
                        " is not supported (expected " + std::to_string(kModelFormatVersion) + ")");
  }

  ModelArchitecture arch;
  reader.expect("input_dim");
  arch.input_dim = static_cast<std::size_t>(reader.integer());

  reader.expect("hidden");
  arch.hidden.clear();
  std::string tok = reader.token();
  while (tok != "output_dim") {
    long long width = 0;
    try {
      width = parse_int(tok);
    } catch (const DataError&) {
      throw LoadError(LoadError::Kind::malformed, "model file: bad hidden width '" + tok + "'");
    }
    if (width <= 0) {
      throw LoadError(LoadError::Kind::dimension_mismatch, "model file: non-positive hidden width");
    }
    arch.hidden.push_back(static_cast<std::size_t>(width));
    tok = reader.token();
  }
  arch.output_dim = static_cast<std::size_t>(reader.integer());
  if (arch.input_dim == 0 || arch.output_dim == 0) {
    throw LoadError(LoadError::Kind::dimension_mismatch, "model file: zero layer width");
  }

  reader.expect("activation");
  reader.expect("relu");
  reader.expect("output_activation");
  reader.expect("softmax");
  reader.expect("bn_positions");
  reader.expect("input");
  reader.expect("hidden");
  reader.expect("bn_epsilon");
  const double epsilon = reader.number();
  reader.expect("bn_momentum");
  const double momentum = reader.number();
  if (!(epsilon > 0.0) || !(momentum >= 0.0 && momentum < 1.0)) {
    throw LoadError(LoadError::Kind::malformed, "model file: bad batch-norm constants");
  }

  Model m;
  m.arch = arch;

  std::vector<std::size_t> dims = {arch.input_dim};
  dims.insert(dims.end(), arch.hidden.begin(), arch.hidden.end());
  dims.push_back(arch.output_dim);

  const auto norm_widths = arch.norm_widths();
  for (std::size_t i = 0; i < norm_widths.size(); ++i) {
    const std::size_t w = norm_widths[i];
    BatchNormLayer bn;
    bn.epsilon = epsilon;
    bn.momentum = momentum;
    bn.gamma = reader.array("bn", i, "gamma", w);
    bn.beta = reader.array("bn", i, "beta", w);
    bn.moving_mean = reader.array("bn", i, "moving_mean", w);
    bn.moving_var = reader.array("bn", i, "moving_var", w);
    for (double v : bn.moving_var) {
      if (v < 0.0) {
        throw LoadError(LoadError::Kind::malformed, "model file: negative moving variance");
      }
    }
    m.norms.push_back(std::move(bn));

    if (i + 1 < dims.size()) {
      DenseLayer d;
      d.weights = Matrix(dims[i + 1], dims[i]);
      d.weights.data = reader.array("dense", i, "weights", dims[i + 1] * dims[i]);
      d.bias = reader.array("dense", i, "bias", dims[i + 1]);
      m.dense.push_back(std::move(d));
    }
  }

  reader.expect("param_count");
  const long long declared = reader.integer();
  const ParamCounts actual = param_counts(m);
  if (declared != static_cast<long long>(actual.total)) {
    throw LoadError(LoadError::Kind::dimension_mismatch,
                    "model file: declared param count " + std::to_string(declared) +
                        " does not match architecture total " + std::to_string(actual.total));
  }
  return m;
}

inline Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path);
  return load_model(in);
}

}  // namespace vibrodiag
