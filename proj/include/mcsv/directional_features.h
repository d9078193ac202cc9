// include/mcsv/directional_features.h

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

#ifndef MCSV_DIRECTIONAL_FEATURES_H_
#define MCSV_DIRECTIONAL_FEATURES_H_

#include <cstddef>
#include <span>
#include <vector>

#include "json.hpp"
#include "mcsv/array_geometry.h"
#include "mcsv/dsp_core.h"
#include "mcsv/spatial_features.h"

namespace mcsv {

struct BeamGridOptions {
  std::size_t num_looks = 10;
  double span_begin_deg = 0.0;
  double span_end_deg = 180.0;

  static BeamGridOptions FromJson(const nlohmann::json &doc);
  nlohmann::json ToJson() const;
};

// Fixed multi-look beamformer bank. weights(p, f) is a length-M vector w
// with beam output w^H Y.
class BeamGrid {
 public:
  BeamGrid(std::vector<double> look_angles_deg, std::size_t num_bins,
           std::size_t num_mics);

  std::size_t num_looks() const { return look_angles_.size(); }
  std::size_t num_bins() const { return num_bins_; }
  std::size_t num_mics() const { return num_mics_; }
  const std::vector<double> &look_angles() const { return look_angles_; }

  std::span<Complex> Weights(std::size_t look, std::size_t bin) {
    return {weights_.data() + (look * num_bins_ + bin) * num_mics_, num_mics_};
  }
  std::span<const Complex> Weights(std::size_t look, std::size_t bin) const {
    return {weights_.data() + (look * num_bins_ + bin) * num_mics_, num_mics_};
  }

  // Index of the look closest to `deg`; ties go to the lower index.
  std::size_t NearestLook(double deg) const;
  // |w^H y|^2 for one look at one bin.
  double BeamPower(std::size_t look, std::size_t bin,
                   std::span<const Complex> y) const;

 private:
  std::vector<double> look_angles_;
  std::size_t num_bins_;
  std::size_t num_mics_;
  std::vector<Complex> weights_;
};

// Unit-magnitude plane-wave steering vector exp(-i 2 pi f tau_m(theta)),
// tau relative to mic 0.
std::vector<Complex> SteeringVector(const ArrayGeometry &geom, double freq_hz,
                                    double azimuth_deg);

// Delay-and-sum looks at span_begin + span * (p - 0.5) / P, weights
// d_f(theta_p) / M.
BeamGrid DelayAndSumGrid(const ArrayGeometry &geom, const StftConfig &cfg,
                         const BeamGridOptions &opts = {});

// DPR for every look: P planes, each bin normalized over looks. A bin where
// all beams are silent gets 1/P in every plane.
FeatureMap DprAllLooks(const MultiChannelSpectrogram &spec,
                       const BeamGrid &grid);

// One DPR plane following the track: per frame, the look nearest theta_t.
FeaturePlane Dpr(const MultiChannelSpectrogram &spec, const BeamGrid &grid,
                 const SourceAngleTrack &track);

}  // namespace mcsv

#endif  // MCSV_DIRECTIONAL_FEATURES_H_
