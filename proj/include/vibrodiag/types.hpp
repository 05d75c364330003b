#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "vibrodiag/error.hpp"

namespace vibrodiag {

// Technical state of the monitored machine. The index mapping is fixed and
// used for one-hot encoding, network outputs and confusion-matrix layout.
enum class StateLabel : int { nominal = 0, current = 1, defective = 2 };

inline constexpr int kNumStates = 3;

inline constexpr std::array<StateLabel, kNumStates> kAllStates = {
    StateLabel::nominal, StateLabel::current, StateLabel::defective};

inline const char* to_string(StateLabel s) {
  switch (s) {
    case StateLabel::nominal:
      return "nominal";
    case StateLabel::current:
      return "current";
    case StateLabel::defective:
      return "defective";
  }
  throw ParameterError("invalid state label");
}

inline StateLabel state_from_index(int i) {
  if (i < 0 || i >= kNumStates) {
    throw ParameterError("state index out of range: " + std::to_string(i));
  }
  return static_cast<StateLabel>(i);
}

inline StateLabel state_from_string(const std::string& name) {
  for (StateLabel s : kAllStates) {
    if (name == to_string(s)) return s;
  }
  throw DataError("unknown state label: '" + name + "'");
}

inline std::array<double, 3> one_hot(StateLabel label) {
  std::array<double, 3> v{0.0, 0.0, 0.0};
  v[static_cast<std::size_t>(label)] = 1.0;
  return v;
}

enum class Channel : int { acoustic = 0, vibration = 1 };

inline const char* to_string(Channel c) {
  return c == Channel::acoustic ? "acoustic" : "vibration";
}

// Reference statistics of one channel in one machine state, volts.
struct ChannelStats {
  double mean = 0.0;
  double std = 0.0;
  double min = 0.0;
  double q25 = 0.0;
  double q50 = 0.0;
  double q75 = 0.0;
  double max = 0.0;

  void validate() const {
    for (double v : {mean, std, min, q25, q50, q75, max}) {
      if (!std::isfinite(v)) throw ParameterError("channel stats: non-finite value");
    }
    if (std < 0.0) throw ParameterError("channel stats: negative std");
    if (!(min <= q25 && q25 <= q50 && q50 <= q75 && q75 <= max)) {
      throw ParameterError("channel stats: quantiles out of order");
    }
  }
};

inline constexpr double kDefaultSampleRate = 44100.0;  // Hz

// One fixed-length window of voltage samples from one channel.
struct SignalFrame {
  Channel channel = Channel::acoustic;
  std::vector<double> samples;           // volts
  double sample_rate = kDefaultSampleRate;  // Hz
};

// The two-channel unit from which one feature sample is computed.
struct FramePair {
  SignalFrame acoustic;
  SignalFrame vibration;
  std::optional<StateLabel> label;

  void validate() const {
    if (acoustic.samples.size() != vibration.samples.size()) {
      throw ShapeError("frame pair: channel lengths differ");
    }
    if (acoustic.sample_rate != vibration.sample_rate) {
      throw ShapeError("frame pair: channel sample rates differ");
    }
  }
};

// The 12 network inputs.
// Layout: [0..4]  acoustic spectral peaks, descending, V/Hz
//         [5]     acoustic standard deviation, V
//         [6..10] vibration spectral peaks, descending, V/Hz
//         [11]    vibration standard deviation, V
struct FeatureVector {
  std::array<double, 12> values{};

  static constexpr std::size_t size() { return 12; }

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }

  bool all_finite() const {
    for (double v : values) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

struct LabeledExample {
  FeatureVector features;
  StateLabel label = StateLabel::nominal;
};

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace vibrodiag
