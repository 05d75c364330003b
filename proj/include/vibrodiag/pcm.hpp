#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "vibrodiag/error.hpp"
#include "vibrodiag/types.hpp"

namespace vibrodiag {

// Full-scale calibration of the capture chain: 32768 LSB corresponds to
// 1.736 V peak.
inline constexpr double kDefaultFullScaleVolts = 1.736;

namespace detail {

inline std::int16_t int16_le(std::uint8_t lo, std::uint8_t hi) {
  return static_cast<std::int16_t>(
      static_cast<std::uint16_t>(lo) | (static_cast<std::uint16_t>(hi) << 8));
}

inline double raw_to_volts(std::int16_t raw, double full_scale_volts) {
  return static_cast<double>(raw) * full_scale_volts / 32768.0;
}

inline std::int16_t volts_to_raw(double volts, double full_scale_volts) {
  const double scaled = std::round(volts * 32768.0 / full_scale_volts);
  if (scaled <= -32768.0) return -32768;
  if (scaled >= 32767.0) return 32767;
  return static_cast<std::int16_t>(scaled);
}

}  // namespace detail

// Decode a headerless mono stream of signed 16-bit little-endian samples.
inline SignalFrame ingest_pcm(std::span<const std::uint8_t> bytes, Channel channel,
                              double sample_rate = kDefaultSampleRate,
                              double full_scale_volts = kDefaultFullScaleVolts) {
  if (bytes.empty()) throw DataError("pcm: empty input");
  if (bytes.size() % 2 != 0) throw DataError("pcm: odd byte length");
  if (!(sample_rate > 0.0)) throw ParameterError("pcm: sample rate must be positive");
  if (!(full_scale_volts > 0.0)) throw ParameterError("pcm: full scale must be positive");

  SignalFrame frame;
  frame.channel = channel;
  frame.sample_rate = sample_rate;
  frame.samples.reserve(bytes.size() / 2);
  for (std::size_t i = 0; i < bytes.size(); i += 2) {
    frame.samples.push_back(
        detail::raw_to_volts(detail::int16_le(bytes[i], bytes[i + 1]), full_scale_volts));
  }
  return frame;
}

// Decode an interleaved two-channel stream, acoustic sample first.
inline std::pair<SignalFrame, SignalFrame> ingest_pcm_interleaved(
    std::span<const std::uint8_t> bytes, double sample_rate = kDefaultSampleRate,
    double full_scale_volts = kDefaultFullScaleVolts) {
  if (bytes.empty()) throw DataError("pcm: empty input");
  if (bytes.size() % 4 != 0) {
    throw DataError("pcm: interleaved stream length must be a multiple of 4 bytes");
  }
  if (!(sample_rate > 0.0)) throw ParameterError("pcm: sample rate must be positive");
  if (!(full_scale_volts > 0.0)) throw ParameterError("pcm: full scale must be positive");

  SignalFrame acoustic{Channel::acoustic, {}, sample_rate};
  SignalFrame vibration{Channel::vibration, {}, sample_rate};
  acoustic.samples.reserve(bytes.size() / 4);
  vibration.samples.reserve(bytes.size() / 4);
  for (std::size_t i = 0; i < bytes.size(); i += 4) {
    acoustic.samples.push_back(
        detail::raw_to_volts(detail::int16_le(bytes[i], bytes[i + 1]), full_scale_volts));
    vibration.samples.push_back(
        detail::raw_to_volts(detail::int16_le(bytes[i + 2], bytes[i + 3]), full_scale_volts));
  }
  return {std::move(acoustic), std::move(vibration)};
}

// Pack raw counts as little-endian bytes.
inline std::vector<std::uint8_t> encode_pcm(std::span<const std::int16_t> raw) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(raw.size() * 2);
  for (std::int16_t v : raw) {
    const auto u = static_cast<std::uint16_t>(v);
    bytes.push_back(static_cast<std::uint8_t>(u & 0xff));
    bytes.push_back(static_cast<std::uint8_t>(u >> 8));
  }
  return bytes;
}

// Quantize volts back to counts and pack; saturates at the int16 limits.
inline std::vector<std::uint8_t> encode_pcm(std::span<const double> volts,
                                            double full_scale_volts = kDefaultFullScaleVolts) {
  if (!(full_scale_volts > 0.0)) throw ParameterError("pcm: full scale must be positive");
  std::vector<std::int16_t> raw;
  raw.reserve(volts.size());
  for (double v : volts) raw.push_back(detail::volts_to_raw(v, full_scale_volts));
  return encode_pcm(raw);
}

}  // namespace vibrodiag
