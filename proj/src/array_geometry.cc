// src/array_geometry.cc

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

#include "mcsv/array_geometry.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <utility>

#include "mcsv/errors.h"

namespace mcsv {

ArrayGeometry::ArrayGeometry(std::vector<double> positions, double sound_speed,
                             double sample_rate)
    : positions_(std::move(positions)),
      sound_speed_(sound_speed),
      sample_rate_(sample_rate) {
  Require(positions_.size() >= 2, ErrorCode::kValidation,
          "array geometry needs at least 2 microphones");
  for (std::size_t m = 1; m < positions_.size(); ++m) {
    Require(std::isfinite(positions_[m]) && positions_[m] > positions_[m - 1],
            ErrorCode::kValidation,
            "microphone positions must be strictly increasing");
  }
  Require(std::isfinite(sound_speed_) && sound_speed_ > 0,
          ErrorCode::kValidation, "sound speed must be positive");
  Require(std::isfinite(sample_rate_) && sample_rate_ > 0,
          ErrorCode::kValidation, "sample rate must be positive");
}

ArrayGeometry ArrayGeometry::FromSpacingsCm(std::span<const double> spacings_cm,
                                            double sound_speed,
                                            double sample_rate) {
  std::vector<double> positions;
  positions.reserve(spacings_cm.size() + 1);
  double cumulative_cm = 0.0;
  positions.push_back(0.0);
  for (double s : spacings_cm) {
    Require(std::isfinite(s) && s > 0, ErrorCode::kValidation,
            "spacings must be positive");
    cumulative_cm += s;
    positions.push_back(cumulative_cm / 100.0);
  }
  return ArrayGeometry(std::move(positions), sound_speed, sample_rate);
}

ArrayGeometry ArrayGeometry::FromJson(const nlohmann::json &doc) {
  try {
    auto spacings = doc.at("spacings_cm").get<std::vector<double>>();
    double c = doc.value("sound_speed", kDefaultSoundSpeed);
    double fs = doc.value("sample_rate", kDefaultSampleRate);
    return FromSpacingsCm(spacings, c, fs);
  } catch (const nlohmann::json::exception &e) {
    Fail(ErrorCode::kParse, std::string("array geometry: ") + e.what());
  }
}

nlohmann::json ArrayGeometry::ToJson() const {
  std::vector<double> spacings_cm;
  for (std::size_t m = 1; m < positions_.size(); ++m)
    spacings_cm.push_back((positions_[m] - positions_[m - 1]) * 100.0);
  return {{"spacings_cm", spacings_cm},
          {"sound_speed", sound_speed_},
          {"sample_rate", sample_rate_}};
}

double ArrayGeometry::Position(std::size_t mic) const {
  Require(mic < positions_.size(), ErrorCode::kOutOfRange,
          "microphone index " + std::to_string(mic) + " out of range");
  return positions_[mic];
}

double ArrayGeometry::RelativeDelay(std::size_t mic, double azimuth_deg) const {
  double theta = azimuth_deg * std::numbers::pi / 180.0;
  return (Position(mic) - positions_[0]) * std::cos(theta) / sound_speed_;
}

ArrayGeometry ArrayGeometry::WithSampleRate(double sample_rate) const {
  return ArrayGeometry(positions_, sound_speed_, sample_rate);
}

ArrayGeometry BuildNonUniform15Array() {
  static constexpr double kSpacingsCm[] = {7, 6, 5, 4, 3, 2, 1,
                                           1, 2, 3, 4, 5, 6, 7};
  return ArrayGeometry::FromSpacingsCm(kSpacingsCm);
}

void MicPairSet::Validate(std::size_t num_mics) const {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const MicPair &p : pairs) {
    Require(p.i < num_mics && p.j < num_mics, ErrorCode::kValidation,
            "pair set '" + name + "' references a mic beyond " +
                std::to_string(num_mics));
    Require(p.i != p.j, ErrorCode::kValidation,
            "pair set '" + name + "' contains a self pair");
    Require(seen.emplace(p.i, p.j).second, ErrorCode::kValidation,
            "pair set '" + name + "' contains a duplicate pair");
  }
}

std::vector<std::size_t> MicPairSet::Channels() const {
  std::set<std::size_t> channels;
  for (const MicPair &p : pairs) {
    channels.insert(p.i);
    channels.insert(p.j);
  }
  return {channels.begin(), channels.end()};
}

MicPairSet BuiltinPairSet(std::string_view name) {
  if (name == "v0")
    return {"v0", {{0, 7}, {2, 7}, {3, 11}, {5, 9}, {11, 5}, {9, 3}}};
  if (name == "v1")
    return {"v1",
            {{0, 2}, {3, 5}, {6, 8}, {9, 11}, {12, 14}, {1, 4}, {5, 8},
             {9, 12}}};
  if (name == "v2")
    return {"v2",
            {{0, 1}, {3, 6}, {4, 8}, {10, 14}, {11, 13}, {0, 4}, {1, 3},
             {6, 10}, {8, 11}, {13, 14}}};
  Fail(ErrorCode::kLookup, "unknown pair set '" + std::string(name) + "'");
}

std::vector<std::string> BuiltinPairSetNames() { return {"v0", "v1", "v2"}; }

double PairDisplacement(const ArrayGeometry &geom, MicPair pair) {
  Require(pair.i != pair.j, ErrorCode::kInvalidArgument,
          "pair distance needs two distinct microphones");
  return geom.Position(pair.j) - geom.Position(pair.i);
}

double PairDistance(const ArrayGeometry &geom, MicPair pair) {
  return std::abs(PairDisplacement(geom, pair));
}

}  // namespace mcsv
