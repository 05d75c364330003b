#pragma once

// Umbrella header for the vibrodiag toolkit: synthetic signal generation,
// PCM ingestion, spectral/statistical feature extraction, a fully connected
// softmax classifier trained with Adam, evaluation metrics, and the
// streaming wire format.

#include "vibrodiag/dataset.hpp"
#include "vibrodiag/error.hpp"
#include "vibrodiag/features.hpp"
#include "vibrodiag/fft.hpp"
#include "vibrodiag/metrics.hpp"
#include "vibrodiag/model_io.hpp"
#include "vibrodiag/network.hpp"
#include "vibrodiag/normality.hpp"
#include "vibrodiag/numeric_io.hpp"
#include "vibrodiag/pcm.hpp"
#include "vibrodiag/rng.hpp"
#include "vibrodiag/stats.hpp"
#include "vibrodiag/stream.hpp"
#include "vibrodiag/synth.hpp"
#include "vibrodiag/types.hpp"
