#pragma once

#include <cstddef>

#include "vibrodiag/fft.hpp"
#include "vibrodiag/stats.hpp"
#include "vibrodiag/types.hpp"

namespace vibrodiag {

// Assemble the 12 network inputs from one two-channel frame pair:
// five largest one-sided spectral magnitudes plus the standard deviation,
// per channel, acoustic block first.
inline FeatureVector extract_features(const FramePair& pair) {
  pair.validate();

  FeatureVector f;
  std::size_t out = 0;
  for (const SignalFrame* frame : {&pair.acoustic, &pair.vibration}) {
    const Spectrum spectrum = dft_spectrum(*frame);
    for (double peak : top_peaks(spectrum, 5)) f[out++] = peak;
    f[out++] = describe(frame->samples).std;
  }
  return f;
}

}  // namespace vibrodiag
