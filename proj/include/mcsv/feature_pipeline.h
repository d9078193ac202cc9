// include/mcsv/feature_pipeline.h

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

#ifndef MCSV_FEATURE_PIPELINE_H_
#define MCSV_FEATURE_PIPELINE_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mcsv/array_geometry.h"
#include "mcsv/directional_features.h"
#include "mcsv/dsp_core.h"
#include "mcsv/feature_io.h"
#include "mcsv/sinc_features.h"

namespace mcsv {

enum class FeatureKind {
  kFbank,
  kLps,
  kCosIpd,
  kSinIpd,
  kPhase0,
  kDpr,
  kAf,
  kMultChanSinc,
};

// One entry of the feature list, e.g. "lps", "cosipd(v0)", "dpr(2)",
// "fbank80", "multchansinc".
struct FeatureRequest {
  FeatureKind kind = FeatureKind::kLps;
  std::string pair_set;         // cosipd / sinipd
  std::size_t sources = 1;      // dpr / af: 1 or 2
  std::size_t num_mels = 80;    // fbank

  static FeatureRequest Parse(std::string_view id);
  std::string Identifier() const;
};

struct PipelineConfig {
  std::vector<FeatureRequest> features;
  StftConfig stft;
  BeamGridOptions grid;
  SincBankOptions sinc;
  // Channels for multchansinc are those used by this pair set.
  std::string sinc_pairs = "v0";
  // Pairs summed by af(k).
  std::string af_pairs = "v0";
  LpsOptions lps;
  MelOptions mel;
  bool normalize = false;

  // Unique identifiers, at least one feature, and a single plane width.
  void Validate() const;
  static PipelineConfig FromJson(const nlohmann::json &doc);
  nlohmann::json ToJson() const;
};

// Source layout of one simulated utterance, read from its manifest entry.
struct SceneInfo {
  double target_deg = 90.0;
  std::optional<double> interference_deg;
  std::optional<double> noise_deg;
  bool interference_present = false;

  // The track used for dpr(2)/af(2): interference if present, else the
  // noise source. Throws kUndefinedOnClean when neither exists.
  double SecondaryAngle() const;
  SourceRole SecondaryRole() const;

  static SceneInfo FromManifest(const nlohmann::json &entry);
};

// Planes in config order. Counts: lps/fbank/phase0 -> 1, cos/sinipd -> one
// per pair, dpr(k)/af(k) -> k, multchansinc -> one per channel of
// `sinc_pairs`.
FeatureStack RunPipeline(const MultiChannelSignal &sig, const SceneInfo &scene,
                         const PipelineConfig &cfg, const ArrayGeometry &geom);

// Per plane and dimension, zero mean and unit variance over frames.
void NormalizePlanes(FeatureStack *stack);

// Sinc bank parameters as an MCFT stack: planes "sinc_raw_low",
// "sinc_raw_band" (one frame, num_filters wide) and "sinc_shape"
// (taps, sample_rate).
FeatureStack SincBankToStack(const SincFilterBank &bank);
SincFilterBank SincBankFromStack(const FeatureStack &stack);

}  // namespace mcsv

#endif  // MCSV_FEATURE_PIPELINE_H_
