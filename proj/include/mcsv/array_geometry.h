// include/mcsv/array_geometry.h

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

#ifndef MCSV_ARRAY_GEOMETRY_H_
#define MCSV_ARRAY_GEOMETRY_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace mcsv {

// Linear microphone array. Positions are meters along the array axis,
// mic 0 is the phase reference. Azimuths are measured in (0, 180) degrees
// from the positive array axis.
class ArrayGeometry {
 public:
  static constexpr double kDefaultSoundSpeed = 343.0;
  static constexpr double kDefaultSampleRate = 16000.0;

  explicit ArrayGeometry(std::vector<double> positions,
                         double sound_speed = kDefaultSoundSpeed,
                         double sample_rate = kDefaultSampleRate);

  // Cumulative positions from inter-mic spacings given in centimeters.
  // Sums are taken in centimeters before scaling so symmetric layouts stay
  // symmetric to the last bit.
  static ArrayGeometry FromSpacingsCm(std::span<const double> spacings_cm,
                                      double sound_speed = kDefaultSoundSpeed,
                                      double sample_rate = kDefaultSampleRate);

  // {"spacings_cm":[...], "sound_speed":343.0, "sample_rate":16000}
  static ArrayGeometry FromJson(const nlohmann::json &doc);
  nlohmann::json ToJson() const;

  std::size_t NumMics() const { return positions_.size(); }
  const std::vector<double> &positions() const { return positions_; }
  double Position(std::size_t mic) const;
  double sound_speed() const { return sound_speed_; }
  double sample_rate() const { return sample_rate_; }
  double Aperture() const { return positions_.back() - positions_.front(); }

  // Plane-wave arrival delay (seconds) at `mic` relative to mic 0 for a
  // source at `azimuth_deg`.
  double RelativeDelay(std::size_t mic, double azimuth_deg) const;

  ArrayGeometry WithSampleRate(double sample_rate) const;

 private:
  std::vector<double> positions_;
  double sound_speed_;
  double sample_rate_;
};

// The 15-mic non-uniform array with spacings 7-6-5-4-3-2-1-1-2-3-4-5-6-7 cm.
ArrayGeometry BuildNonUniform15Array();

struct MicPair {
  std::size_t i = 0;
  std::size_t j = 0;
  bool operator==(const MicPair &) const = default;
};

struct MicPairSet {
  std::string name;
  std::vector<MicPair> pairs;

  std::size_t size() const { return pairs.size(); }
  // Throws kValidation on out-of-range index, i == j, or duplicate pairs.
  void Validate(std::size_t num_mics) const;
  // Unique channel indices appearing in the set, ascending.
  std::vector<std::size_t> Channels() const;
};

// "v0", "v1" or "v2"; pair orientation is kept exactly as listed.
MicPairSet BuiltinPairSet(std::string_view name);
std::vector<std::string> BuiltinPairSetNames();

// |pos_j - pos_i|. Throws kOutOfRange for bad indices and kInvalidArgument
// when i == j.
double PairDistance(const ArrayGeometry &geom, MicPair pair);

// pos_j - pos_i. The sign carries the pair orientation that phase
// differences depend on.
double PairDisplacement(const ArrayGeometry &geom, MicPair pair);

}  // namespace mcsv

#endif  // MCSV_ARRAY_GEOMETRY_H_
