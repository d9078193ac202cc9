// include/mcsv/spatial_features.h

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

#ifndef MCSV_SPATIAL_FEATURES_H_
#define MCSV_SPATIAL_FEATURES_H_

#include <cstddef>
#include <string_view>
#include <vector>

#include "mcsv/array_geometry.h"
#include "mcsv/dsp_core.h"
#include "mcsv/signal.h"

namespace mcsv {

enum class SourceRole { kTarget, kInterference, kNoise };
std::string_view SourceRoleName(SourceRole role);

// Per-frame azimuth of one source, degrees in (0, 180).
struct SourceAngleTrack {
  std::vector<double> degrees;
  SourceRole role = SourceRole::kTarget;

  static SourceAngleTrack Constant(std::size_t num_frames, double deg,
                                   SourceRole role = SourceRole::kTarget);
  // Throws kValidation for angles outside the open interval.
  void Validate() const;
};

enum class IpdKind { kRaw, kCos, kSin };

// One plane per pair (i, j): angle(Y_i conj(Y_j)) in (-pi, pi], or its
// cosine / sine. A bin where either channel is exactly zero yields raw 0.
FeatureMap Ipd(const MultiChannelSpectrogram &spec, const MicPairSet &pairs,
               IpdKind kind);

// angle(Y_0) per frame and bin.
FeaturePlane Phase0(const MultiChannelSpectrogram &spec);

// Plane-wave phase delay 2 pi f_Hz (pos_j - pos_i) cos(theta_t) / c for each
// pair, one plane per pair. The signed displacement keeps TPD aligned with
// the orientation of Ipd for reversed pairs.
FeatureMap Tpd(const ArrayGeometry &geom, const MicPairSet &pairs,
               const SourceAngleTrack &track, std::size_t dft_size);

// sum over pairs of cos(TPD - IPD); one plane, values in [-|pairs|, |pairs|].
FeaturePlane AngleFeature(const MultiChannelSpectrogram &spec,
                          const ArrayGeometry &geom, const MicPairSet &pairs,
                          const SourceAngleTrack &track);

}  // namespace mcsv

#endif  // MCSV_SPATIAL_FEATURES_H_
