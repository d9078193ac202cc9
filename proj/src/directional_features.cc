// src/directional_features.cc

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

#include "mcsv/directional_features.h"

#include <cmath>
#include <numbers>
#include <string>

#include "mcsv/errors.h"

namespace mcsv {

BeamGridOptions BeamGridOptions::FromJson(const nlohmann::json &doc) {
  BeamGridOptions opts;
  try {
    opts.num_looks = doc.value("num_looks", opts.num_looks);
    if (doc.contains("span")) {
      auto span = doc.at("span").get<std::vector<double>>();
      Require(span.size() == 2, ErrorCode::kParse,
              "grid span must be [begin, end]");
      opts.span_begin_deg = span[0];
      opts.span_end_deg = span[1];
    }
    if (doc.contains("design")) {
      Require(doc.at("design").get<std::string>() == "delay_and_sum",
              ErrorCode::kParse, "only the delay_and_sum design is available");
    }
  } catch (const nlohmann::json::exception &e) {
    Fail(ErrorCode::kParse, std::string("grid config: ") + e.what());
  }
  return opts;
}

nlohmann::json BeamGridOptions::ToJson() const {
  return {{"num_looks", num_looks},
          {"span", {span_begin_deg, span_end_deg}},
          {"design", "delay_and_sum"}};
}

BeamGrid::BeamGrid(std::vector<double> look_angles_deg, std::size_t num_bins,
                   std::size_t num_mics)
    : look_angles_(std::move(look_angles_deg)),
      num_bins_(num_bins),
      num_mics_(num_mics),
      weights_(look_angles_.size() * num_bins * num_mics) {
  Require(look_angles_.size() >= 2, ErrorCode::kValidation,
          "beam grid needs at least 2 looks");
  for (std::size_t p = 0; p < look_angles_.size(); ++p) {
    Require(look_angles_[p] > 0.0 && look_angles_[p] < 180.0,
            ErrorCode::kValidation, "look angles must lie in (0, 180)");
    Require(p == 0 || look_angles_[p] > look_angles_[p - 1],
            ErrorCode::kValidation, "look angles must be strictly increasing");
  }
}

std::size_t BeamGrid::NearestLook(double deg) const {
  std::size_t best = 0;
  for (std::size_t p = 1; p < look_angles_.size(); ++p) {
    if (std::abs(look_angles_[p] - deg) < std::abs(look_angles_[best] - deg))
      best = p;
  }
  return best;
}

double BeamGrid::BeamPower(std::size_t look, std::size_t bin,
                           std::span<const Complex> y) const {
  auto w = Weights(look, bin);
  Complex acc = 0.0;
  for (std::size_t m = 0; m < num_mics_; ++m) acc += std::conj(w[m]) * y[m];
  return std::norm(acc);
}

std::vector<Complex> SteeringVector(const ArrayGeometry &geom, double freq_hz,
                                    double azimuth_deg) {
  std::vector<Complex> d(geom.NumMics());
  for (std::size_t m = 0; m < d.size(); ++m) {
    double phase =
        -2.0 * std::numbers::pi * freq_hz * geom.RelativeDelay(m, azimuth_deg);
    d[m] = std::polar(1.0, phase);
  }
  return d;
}

BeamGrid DelayAndSumGrid(const ArrayGeometry &geom, const StftConfig &cfg,
                         const BeamGridOptions &opts) {
  Require(opts.num_looks >= 2, ErrorCode::kValidation,
          "beam grid needs at least 2 looks");
  Require(opts.span_begin_deg >= 0 && opts.span_end_deg <= 180 &&
              opts.span_begin_deg < opts.span_end_deg,
          ErrorCode::kValidation, "grid span must lie within [0, 180]");
  const double span = opts.span_end_deg - opts.span_begin_deg;
  std::vector<double> looks(opts.num_looks);
  for (std::size_t p = 0; p < looks.size(); ++p) {
    looks[p] = opts.span_begin_deg +
               span * (static_cast<double>(p) + 0.5) /
                   static_cast<double>(opts.num_looks);
  }
  BeamGrid grid(looks, cfg.NumBins(), geom.NumMics());
  const double inv_m = 1.0 / static_cast<double>(geom.NumMics());
  for (std::size_t p = 0; p < looks.size(); ++p) {
    for (std::size_t f = 0; f < cfg.NumBins(); ++f) {
      double hz = static_cast<double>(f) * geom.sample_rate() /
                  static_cast<double>(cfg.dft_size);
      auto d = SteeringVector(geom, hz, looks[p]);
      auto w = grid.Weights(p, f);
      for (std::size_t m = 0; m < d.size(); ++m) w[m] = d[m] * inv_m;
    }
  }
  return grid;
}

namespace {

void CheckGrid(const MultiChannelSpectrogram &spec, const BeamGrid &grid) {
  Require(grid.num_bins() == spec.num_bins() &&
              grid.num_mics() == spec.num_channels(),
          ErrorCode::kSize, "beam grid does not match spectrogram dimensions");
}

// Powers of every look at (t, f), normalized in place; returns false when
// all beams are silent.
bool NormalizedPowers(const MultiChannelSpectrogram &spec, const BeamGrid &grid,
                      std::size_t t, std::size_t f, std::vector<Complex> *y,
                      std::vector<double> *power) {
  for (std::size_t m = 0; m < spec.num_channels(); ++m)
    (*y)[m] = spec.at(m, t, f);
  double total = 0.0;
  for (std::size_t p = 0; p < grid.num_looks(); ++p) {
    (*power)[p] = grid.BeamPower(p, f, *y);
    total += (*power)[p];
  }
  if (total == 0.0) {
    for (double &v : *power) v = 1.0 / static_cast<double>(grid.num_looks());
    return false;
  }
  for (double &v : *power) v /= total;
  return true;
}

}  // namespace

FeatureMap DprAllLooks(const MultiChannelSpectrogram &spec,
                       const BeamGrid &grid) {
  CheckGrid(spec, grid);
  FeatureMap out;
  for (std::size_t p = 0; p < grid.num_looks(); ++p) {
    out.emplace_back("dpr@" + std::to_string(grid.look_angles()[p]),
                     spec.num_frames(), spec.num_bins());
  }
  std::vector<Complex> y(spec.num_channels());
  std::vector<double> power(grid.num_looks());
  for (std::size_t t = 0; t < spec.num_frames(); ++t) {
    for (std::size_t f = 0; f < spec.num_bins(); ++f) {
      NormalizedPowers(spec, grid, t, f, &y, &power);
      for (std::size_t p = 0; p < grid.num_looks(); ++p) out[p](t, f) = power[p];
    }
  }
  return out;
}

FeaturePlane Dpr(const MultiChannelSpectrogram &spec, const BeamGrid &grid,
                 const SourceAngleTrack &track) {
  CheckGrid(spec, grid);
  track.Validate();
  Require(track.degrees.size() == spec.num_frames(), ErrorCode::kSize,
          "angle track length does not match the frame count");
  FeaturePlane out(std::string("dpr:") + std::string(SourceRoleName(track.role)),
                   spec.num_frames(), spec.num_bins());
  std::vector<Complex> y(spec.num_channels());
  std::vector<double> power(grid.num_looks());
  for (std::size_t t = 0; t < spec.num_frames(); ++t) {
    const std::size_t look = grid.NearestLook(track.degrees[t]);
    for (std::size_t f = 0; f < spec.num_bins(); ++f) {
      NormalizedPowers(spec, grid, t, f, &y, &power);
      out(t, f) = power[look];
    }
  }
  return out;
}

}  // namespace mcsv
