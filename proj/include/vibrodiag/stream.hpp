#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vibrodiag/error.hpp"
#include "vibrodiag/features.hpp"
#include "vibrodiag/network.hpp"
#include "vibrodiag/pcm.hpp"
#include "vibrodiag/types.hpp"

namespace vibrodiag {

// Wire format of one monitoring frame:
//   magic "GPUF" | n: uint32 LE | n int16 LE acoustic | n int16 LE vibration
// Total message size is 8 + 4*n bytes.
inline constexpr std::array<std::uint8_t, 4> kFrameMagic = {'G', 'P', 'U', 'F'};

struct StreamLimits {
  std::size_t min_samples = 4096;
  std::size_t max_samples = 4096;
};

struct RawFramePair {
  std::vector<std::int16_t> acoustic;
  std::vector<std::int16_t> vibration;
};

inline std::vector<std::uint8_t> encode_frame_message(std::span<const std::int16_t> acoustic,
                                                      std::span<const std::int16_t> vibration) {
  if (acoustic.size() != vibration.size()) {
    throw ShapeError("frame message: channel lengths differ");
  }
  if (acoustic.size() > 0xffffffffull) {
    throw ParameterError("frame message: frame too long");
  }
  std::vector<std::uint8_t> out;
  out.reserve(8 + 4 * acoustic.size());
  out.insert(out.end(), kFrameMagic.begin(), kFrameMagic.end());
  const auto n = static_cast<std::uint32_t>(acoustic.size());
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<std::uint8_t>((n >> shift) & 0xff));
  }
  for (auto channel : {acoustic, vibration}) {
    for (std::int16_t v : channel) {
      const auto u = static_cast<std::uint16_t>(v);
      out.push_back(static_cast<std::uint8_t>(u & 0xff));
      out.push_back(static_cast<std::uint8_t>(u >> 8));
    }
  }
  return out;
}

// Incremental frame decoder over a pull-based byte source. A malformed
// message yields exactly one error event; the decoder then resynchronizes
// on the next magic marker and the stream continues. Reads never pull more
// bytes than the current message needs, so live sources are not stalled.
class FrameDecoder {
 public:
  // Returns the number of bytes read, 0 on end of stream. May return short.
  using ReadFn = std::function<std::size_t(std::uint8_t*, std::size_t)>;

  struct Event {
    enum class Type { frame, error, end };
    Type type = Type::end;
    RawFramePair frame;
    std::string message;
    std::uint64_t byte_offset = 0;  // where the malformed message started
  };

  FrameDecoder(ReadFn read, StreamLimits limits = {})
      : read_(std::move(read)), limits_(limits) {}

  Event next() {
    fill(8);
    if (buf_.empty()) return Event{Event::Type::end, {}, "", base_};

    const std::uint64_t start = base_;

    if (buf_.size() < 4) {
      drop(buf_.size());
      return error_event("truncated frame header", start);
    }
    if (!magic_at(0)) {
      drop(1);
      seek_magic();
      return error_event("bad magic", start);
    }
    if (buf_.size() < 8) {
      drop(buf_.size());
      return error_event("truncated frame header", start);
    }

    const std::uint32_t n = static_cast<std::uint32_t>(buf_[4]) |
                            (static_cast<std::uint32_t>(buf_[5]) << 8) |
                            (static_cast<std::uint32_t>(buf_[6]) << 16) |
                            (static_cast<std::uint32_t>(buf_[7]) << 24);
    if (!is_power_of_two(n) || n < limits_.min_samples || n > limits_.max_samples) {
      drop(8);
      seek_magic();
      return error_event("invalid sample count " + std::to_string(n), start);
    }

    const std::size_t need = 8 + static_cast<std::size_t>(n) * 4;
    fill(need);
    if (buf_.size() < need) {
      drop(buf_.size());
      return error_event("truncated frame payload", start);
    }

    Event ev;
    ev.type = Event::Type::frame;
    ev.frame.acoustic.resize(n);
    ev.frame.vibration.resize(n);
    const std::uint8_t* payload = buf_.data() + 8;
    for (std::uint32_t i = 0; i < n; ++i) {
      ev.frame.acoustic[i] = decode_i16(payload + 2 * i);
      ev.frame.vibration[i] = decode_i16(payload + 2 * (static_cast<std::size_t>(n) + i));
    }
    drop(need);
    return ev;
  }

 private:
  static std::int16_t decode_i16(const std::uint8_t* p) {
    return static_cast<std::int16_t>(static_cast<std::uint16_t>(p[0]) |
                                     (static_cast<std::uint16_t>(p[1]) << 8));
  }

  static Event error_event(const std::string& what, std::uint64_t at) {
    Event ev;
    ev.type = Event::Type::error;
    ev.message = what;
    ev.byte_offset = at;
    return ev;
  }

  bool magic_at(std::size_t pos) const {
    return buf_.size() >= pos + 4 &&
           std::equal(kFrameMagic.begin(), kFrameMagic.end(), buf_.begin() + pos);
  }

  // Read from the source until the buffer holds `want` bytes or the stream
  // ends. Never requests more than the shortfall.
  void fill(std::size_t want) {
    while (buf_.size() < want && !eof_) {
      const std::size_t shortfall = want - buf_.size();
      const std::size_t old = buf_.size();
      buf_.resize(old + shortfall);
      const std::size_t got = read_(buf_.data() + old, shortfall);
      buf_.resize(old + got);
      if (got == 0) eof_ = true;
    }
  }

  void drop(std::size_t k) {
    buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(k));
    base_ += k;
  }

  // Advance until the buffer starts with the magic marker (or the stream
  // ends). One byte at a time; resynchronization is the rare path.
  void seek_magic() {
    while (true) {
      for (std::size_t i = 0; i + 4 <= buf_.size(); ++i) {
        if (magic_at(i)) {
          drop(i);
          return;
        }
      }
      if (eof_) {
        drop(buf_.size());
        return;
      }
      if (buf_.size() > 3) drop(buf_.size() - 3);
      fill(buf_.size() + 1);
    }
  }

  ReadFn read_;
  StreamLimits limits_;
  std::vector<std::uint8_t> buf_;
  std::uint64_t base_ = 0;  // stream offset of buf_[0]
  bool eof_ = false;
};

struct StreamResult {
  std::uint64_t frame_index = 0;
  Prediction prediction;
  std::int64_t latency_us = 0;  // featurize + predict time
};

// Shared classification step of the streaming path: convert counts to volts,
// extract features, predict. The model is read-only and safely shareable.
class StreamClassifier {
 public:
  explicit StreamClassifier(const Model& model, double sample_rate = kDefaultSampleRate,
                            double full_scale_volts = kDefaultFullScaleVolts)
      : model_(model), sample_rate_(sample_rate), full_scale_(full_scale_volts) {
    if (model.arch.input_dim != FeatureVector::size()) {
      throw ShapeError("stream: model input width does not match the 12 stream features");
    }
  }

  StreamResult classify(const RawFramePair& raw) {
    const auto t0 = std::chrono::steady_clock::now();

    FramePair pair;
    pair.acoustic.channel = Channel::acoustic;
    pair.acoustic.sample_rate = sample_rate_;
    pair.vibration.channel = Channel::vibration;
    pair.vibration.sample_rate = sample_rate_;
    pair.acoustic.samples.resize(raw.acoustic.size());
    pair.vibration.samples.resize(raw.vibration.size());
    for (std::size_t i = 0; i < raw.acoustic.size(); ++i) {
      pair.acoustic.samples[i] = detail::raw_to_volts(raw.acoustic[i], full_scale_);
    }
    for (std::size_t i = 0; i < raw.vibration.size(); ++i) {
      pair.vibration.samples[i] = detail::raw_to_volts(raw.vibration[i], full_scale_);
    }

    StreamResult result;
    result.frame_index = next_index_++;
    result.prediction = predict(model_, extract_features(pair));
    result.latency_us = std::chrono::duration_cast<std::chrono::microseconds>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    return result;
  }

  // Error events also occupy one position in the output sequence.
  std::uint64_t consume_index() { return next_index_++; }

 private:
  const Model& model_;
  double sample_rate_;
  double full_scale_;
  std::uint64_t next_index_ = 0;
};

}  // namespace vibrodiag
