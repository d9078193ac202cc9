// include/mcsv/simulator.h

// Copyright 2026 The mcsv Authors

// See COPYING at the top of the tree for clarification regarding multiple
// authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef MCSV_SIMULATOR_H_
#define MCSV_SIMULATOR_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "mcsv/array_geometry.h"
#include "mcsv/dsp_core.h"
#include "mcsv/feature_io.h"
#include "mcsv/signal.h"

namespace mcsv {

struct MixSpec {
  double snr_db = 6.0;
  std::optional<double> sir_db;
  double p_tar = 0.15;
  // Unset angles are drawn uniformly from (0, 180) by SimulateScene.
  std::optional<double> target_angle;
  std::optional<double> interference_angle;
  std::optional<double> noise_angle;
  std::uint64_t seed = 0;

  void Validate() const;
};

struct MixGains {
  double noise = 0.0;
  double interference = 0.0;
};

struct SimulationOutput {
  MultiChannelSignal mixture;
  std::vector<double> clean_reference;   // target at mic 0
  std::vector<std::uint8_t> vad_labels;  // one per STFT frame
  FeaturePlane enhancement_target;       // |STFT| of clean_reference
  bool interference_present = false;
  MixGains gains;
  MixSpec spec;

  // Manifest fields: angles, gains, seed, levels, interference flag.
  nlohmann::json ManifestFields() const;
  // "vad" (width 1) and "enh_target" (n_bins wide) planes.
  FeatureStack LabelStack() const;
};

// Plane-wave spatialization: channel m is `src` delayed by
// pos_m cos(angle) / c seconds relative to mic 0, so mic 0 equals `src`.
MultiChannelSignal Spatialize(std::span<const double> src, double angle_deg,
                              const ArrayGeometry &geom,
                              std::size_t filter_half_len = 32);

// Convolves `src` with one measured impulse response per channel; output is
// truncated to the source length.
MultiChannelSignal ApplyImpulseResponses(std::span<const double> src,
                                         const MultiChannelSignal &irs);

// Speech iff 10 log10(frame energy) > loudest frame dB - threshold_db.
std::vector<std::uint8_t> EnergyVadLabels(std::span<const double> clean,
                                          const StftConfig &cfg,
                                          double sample_rate,
                                          double threshold_db = 40.0);

// Samples covered by at least one active frame.
std::vector<std::uint8_t> ActiveSampleMask(std::span<const std::uint8_t> vad,
                                           std::size_t num_samples,
                                           const StftConfig &cfg,
                                           double sample_rate);

// First draw of the seed's stream compared against p_tar.
bool DrawInterference(std::uint64_t seed, double p_tar);

// Levels are set at mic 0 over VAD-active samples of the clean target:
// noise to snr_db, interference (when drawn) to sir_db. Noise is looped to
// the target length, interference truncated or zero padded. Either may be
// null. Throws kInvalidArgument when the target has no active power but a
// level has to be met.
SimulationOutput Mix(const MultiChannelSignal &target,
                     const MultiChannelSignal *interference,
                     const MultiChannelSignal *noise, const MixSpec &spec,
                     const StftConfig &cfg = {}, double vad_threshold_db = 40.0);

struct SceneSources {
  std::vector<double> target;
  std::optional<std::vector<double>> interference;
  std::optional<std::vector<double>> noise;
  double sample_rate = 16000.0;
};

// Resolves unset angles from the seed (draws 1..3 of its stream),
// spatializes each source and mixes.
SimulationOutput SimulateScene(const SceneSources &sources, MixSpec spec,
                               const ArrayGeometry &geom,
                               const StftConfig &cfg = {},
                               std::size_t filter_half_len = 32);

}  // namespace mcsv

#endif  // MCSV_SIMULATOR_H_
