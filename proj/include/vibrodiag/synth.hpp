#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "vibrodiag/error.hpp"
#include "vibrodiag/rng.hpp"
#include "vibrodiag/types.hpp"

namespace vibrodiag {

// Rotor frequency of the monitored unit at its rated 4670 rpm.
inline constexpr double kDefaultFundamentalHz = 4670.0 / 60.0;

// Per-state calibration targets for the synthetic generator, volts.
// Indexed [state][channel]; acoustic first.
inline std::array<std::array<ChannelStats, 2>, 3> default_channel_stats() {
  //                    mean      std     min      q25      q50      q75     max
  ChannelStats na = {-0.0002, 0.0247, -0.0966, -0.0167, -0.0001, 0.0162, 0.094};
  ChannelStats nv = {-0.0002, 0.0202, -0.0704, -0.0135, 0.0002, 0.0138, 0.0594};
  ChannelStats ca = {-0.0006, 0.1601, -0.6952, -0.1051, 0.0031, 0.1087, 0.7219};
  ChannelStats cv = {-0.0015, 0.2209, -0.8825, -0.1523, -0.0007, 0.1505, 0.7928};
  ChannelStats da = {-0.0093, 0.303, -0.9822, -0.2073, -0.0077, 0.188, 2.2995};
  ChannelStats dv = {-0.0064, 0.5514, -1.6656, -0.3638, -0.0056, 0.3284, 8.4175};
  return {{{na, nv}, {ca, cv}, {da, dv}}};
}

// Tonal content added on top of the Gaussian noise floor: harmonic_count
// sinusoids at k * fundamental_hz, each of the given amplitude, with
// rng-drawn phases.
struct HarmonicSpec {
  double fundamental_hz = kDefaultFundamentalHz;
  int harmonic_count = 5;
  double amplitude_volts = 0.0;
};

// One frame of Gaussian noise at the target mean/std, optionally with
// harmonics. Min/max/quartile targets are reference values, not generator
// constraints; Gaussian tails are unbounded.
inline SignalFrame synth_frame(const ChannelStats& stats, Channel channel,
                               std::size_t frame_len, double sample_rate,
                               const std::optional<HarmonicSpec>& harmonics, Rng& rng) {
  if (frame_len < 2) throw ParameterError("synth_frame: frame_len must be >= 2");
  if (!(sample_rate > 0.0)) throw ParameterError("synth_frame: sample rate must be positive");
  stats.validate();
  if (harmonics) {
    if (harmonics->harmonic_count < 1) {
      throw ParameterError("synth_frame: harmonic count must be >= 1");
    }
    if (!(harmonics->amplitude_volts >= 0.0) || !std::isfinite(harmonics->amplitude_volts)) {
      throw ParameterError("synth_frame: harmonic amplitude must be finite and >= 0");
    }
    const double top = harmonics->fundamental_hz * harmonics->harmonic_count;
    if (!(harmonics->fundamental_hz > 0.0) || top >= sample_rate / 2.0) {
      throw ParameterError("synth_frame: harmonics must stay below the Nyquist frequency");
    }
  }

  SignalFrame frame;
  frame.channel = channel;
  frame.sample_rate = sample_rate;
  frame.samples.resize(frame_len);
  for (auto& s : frame.samples) s = rng.normal(stats.mean, stats.std);

  if (harmonics && harmonics->amplitude_volts > 0.0) {
    for (int k = 1; k <= harmonics->harmonic_count; ++k) {
      const double phase = rng.uniform() * 2.0 * std::numbers::pi;
      const double omega =
          2.0 * std::numbers::pi * harmonics->fundamental_hz * static_cast<double>(k) / sample_rate;
      for (std::size_t i = 0; i < frame_len; ++i) {
        frame.samples[i] +=
            harmonics->amplitude_volts * std::sin(omega * static_cast<double>(i) + phase);
      }
    }
  }
  return frame;
}

// Full description of a synthetic two-channel dataset.
struct DatasetSpec {
  std::size_t frame_len = 4096;
  double sample_rate = kDefaultSampleRate;
  std::array<std::size_t, 3> counts = {2050, 5049, 275};  // frames per state
  std::array<std::array<ChannelStats, 2>, 3> stats = default_channel_stats();
  bool harmonics = true;
  double fundamental_hz = kDefaultFundamentalHz;
  int harmonic_count = 5;
  // Tone amplitude per state and channel, volts. Zero entries fall back to
  // amplitude_scale * stats.std at generation time.
  std::array<std::array<double, 2>, 3> harmonic_amplitude = {};
  double amplitude_scale = 0.2;
  std::uint64_t seed = 1;

  void validate() const {
    if (frame_len < 2 || !is_power_of_two(frame_len)) {
      throw ParameterError("dataset spec: frame_len must be a power of two >= 2");
    }
    if (!(sample_rate > 0.0)) throw ParameterError("dataset spec: sample rate must be positive");
    if (!(fundamental_hz > 0.0) || fundamental_hz >= sample_rate / 2.0) {
      throw ParameterError("dataset spec: fundamental must be in (0, sample_rate/2)");
    }
    if (harmonic_count < 1) throw ParameterError("dataset spec: harmonic count must be >= 1");
    if (!(amplitude_scale >= 0.0)) throw ParameterError("dataset spec: negative amplitude scale");
    for (const auto& per_state : stats) {
      for (const auto& cs : per_state) cs.validate();
    }
    for (const auto& per_state : harmonic_amplitude) {
      for (double a : per_state) {
        if (!(a >= 0.0) || !std::isfinite(a)) {
          throw ParameterError("dataset spec: harmonic amplitudes must be finite and >= 0");
        }
      }
    }
  }

  double tone_amplitude(StateLabel state, Channel channel) const {
    const auto s = static_cast<std::size_t>(state);
    const auto c = static_cast<std::size_t>(channel);
    if (harmonic_amplitude[s][c] > 0.0) return harmonic_amplitude[s][c];
    return amplitude_scale * stats[s][c].std;
  }
};

inline DatasetSpec default_dataset_spec() { return DatasetSpec{}; }

// Labeled frame pairs, grouped by state in label order, deterministic in
// spec.seed. Channels are drawn independently.
inline std::vector<FramePair> synth_dataset(const DatasetSpec& spec) {
  spec.validate();

  Rng rng(spec.seed);
  std::vector<FramePair> pairs;
  std::size_t total = 0;
  for (std::size_t c : spec.counts) total += c;
  pairs.reserve(total);

  for (StateLabel state : kAllStates) {
    const auto s = static_cast<std::size_t>(state);
    std::optional<HarmonicSpec> acoustic_tones;
    std::optional<HarmonicSpec> vibration_tones;
    if (spec.harmonics) {
      acoustic_tones = HarmonicSpec{spec.fundamental_hz, spec.harmonic_count,
                                    spec.tone_amplitude(state, Channel::acoustic)};
      vibration_tones = HarmonicSpec{spec.fundamental_hz, spec.harmonic_count,
                                     spec.tone_amplitude(state, Channel::vibration)};
    }
    for (std::size_t i = 0; i < spec.counts[s]; ++i) {
      FramePair pair;
      pair.acoustic = synth_frame(spec.stats[s][0], Channel::acoustic, spec.frame_len,
                                  spec.sample_rate, acoustic_tones, rng);
      pair.vibration = synth_frame(spec.stats[s][1], Channel::vibration, spec.frame_len,
                                   spec.sample_rate, vibration_tones, rng);
      pair.label = state;
      pairs.push_back(std::move(pair));
    }
  }
  return pairs;
}

}  // namespace vibrodiag
