// src/spatial_features.cc

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

#include "mcsv/spatial_features.h"

#include <cmath>
#include <numbers>
#include <string>

#include "mcsv/errors.h"

namespace mcsv {
namespace {

double RawPhaseDifference(const Complex &yi, const Complex &yj) {
  if (yi == Complex(0.0) || yj == Complex(0.0)) return 0.0;
  Complex ratio = yi * std::conj(yj);
  double phase = std::atan2(ratio.imag(), ratio.real());
  return phase == -std::numbers::pi ? std::numbers::pi : phase;
}

std::string PairLabel(const MicPair &p) {
  return "[" + std::to_string(p.i) + "," + std::to_string(p.j) + "]";
}

void CheckTrackLength(const SourceAngleTrack &track, std::size_t frames) {
  track.Validate();
  Require(track.degrees.size() == frames, ErrorCode::kSize,
          "angle track has " + std::to_string(track.degrees.size()) +
              " frames, spectrogram has " + std::to_string(frames));
}

}  // namespace

std::string_view SourceRoleName(SourceRole role) {
  switch (role) {
    case SourceRole::kTarget: return "target";
    case SourceRole::kInterference: return "interference";
    case SourceRole::kNoise: return "noise";
  }
  return "unknown";
}

SourceAngleTrack SourceAngleTrack::Constant(std::size_t num_frames, double deg,
                                            SourceRole role) {
  SourceAngleTrack track{std::vector<double>(num_frames, deg), role};
  track.Validate();
  return track;
}

void SourceAngleTrack::Validate() const {
  for (double d : degrees) {
    Require(std::isfinite(d) && d > 0.0 && d < 180.0, ErrorCode::kValidation,
            "source angle " + std::to_string(d) + " outside (0, 180) degrees");
  }
}

FeatureMap Ipd(const MultiChannelSpectrogram &spec, const MicPairSet &pairs,
               IpdKind kind) {
  pairs.Validate(spec.num_channels());
  const char *prefix = kind == IpdKind::kRaw   ? "ipd"
                       : kind == IpdKind::kCos ? "cosipd"
                                               : "sinipd";
  FeatureMap out;
  out.reserve(pairs.size());
  for (const MicPair &p : pairs.pairs) {
    FeaturePlane plane(prefix + PairLabel(p), spec.num_frames(),
                       spec.num_bins());
    for (std::size_t t = 0; t < spec.num_frames(); ++t) {
      auto yi = spec.Frame(p.i, t), yj = spec.Frame(p.j, t);
      for (std::size_t f = 0; f < spec.num_bins(); ++f) {
        double raw = RawPhaseDifference(yi[f], yj[f]);
        plane(t, f) = kind == IpdKind::kRaw   ? raw
                      : kind == IpdKind::kCos ? std::cos(raw)
                                              : std::sin(raw);
      }
    }
    out.push_back(std::move(plane));
  }
  return out;
}

FeaturePlane Phase0(const MultiChannelSpectrogram &spec) {
  Require(spec.num_channels() >= 1, ErrorCode::kSize, "empty spectrogram");
  FeaturePlane out("phase0", spec.num_frames(), spec.num_bins());
  for (std::size_t t = 0; t < spec.num_frames(); ++t) {
    auto y = spec.Frame(0, t);
    for (std::size_t f = 0; f < spec.num_bins(); ++f)
      out(t, f) = std::atan2(y[f].imag(), y[f].real());
  }
  return out;
}

FeatureMap Tpd(const ArrayGeometry &geom, const MicPairSet &pairs,
               const SourceAngleTrack &track, std::size_t dft_size) {
  pairs.Validate(geom.NumMics());
  track.Validate();
  const std::size_t bins = dft_size / 2 + 1;
  const double bin_hz = geom.sample_rate() / static_cast<double>(dft_size);
  FeatureMap out;
  out.reserve(pairs.size());
  for (const MicPair &p : pairs.pairs) {
    const double displacement = PairDisplacement(geom, p);
    FeaturePlane plane("tpd" + PairLabel(p), track.degrees.size(), bins);
    for (std::size_t t = 0; t < track.degrees.size(); ++t) {
      const double cos_theta =
          std::cos(track.degrees[t] * std::numbers::pi / 180.0);
      // Per-bin slope; bin f gives f * step exactly up to one rounding.
      const double step = 2.0 * std::numbers::pi * bin_hz * displacement *
                          cos_theta / geom.sound_speed();
      for (std::size_t f = 0; f < bins; ++f)
        plane(t, f) = step * static_cast<double>(f);
    }
    out.push_back(std::move(plane));
  }
  return out;
}

FeaturePlane AngleFeature(const MultiChannelSpectrogram &spec,
                          const ArrayGeometry &geom, const MicPairSet &pairs,
                          const SourceAngleTrack &track) {
  CheckTrackLength(track, spec.num_frames());
  Require(geom.NumMics() == spec.num_channels(), ErrorCode::kSize,
          "geometry and spectrogram disagree on the channel count");
  const FeatureMap ipd = Ipd(spec, pairs, IpdKind::kRaw);
  const FeatureMap tpd = Tpd(geom, pairs, track, spec.dft_size());
  FeaturePlane out(std::string("af:") + std::string(SourceRoleName(track.role)),
                   spec.num_frames(), spec.num_bins());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    for (std::size_t t = 0; t < spec.num_frames(); ++t) {
      for (std::size_t f = 0; f < spec.num_bins(); ++f)
        out(t, f) += std::cos(tpd[k](t, f) - ipd[k](t, f));
    }
  }
  return out;
}

}  // namespace mcsv
