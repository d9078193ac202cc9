// src/simulator.cc

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

#include "mcsv/simulator.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mcsv/errors.h"
#include "mcsv/rng.h"

namespace mcsv {
namespace {

void CheckAngle(const std::optional<double> &deg, const char *what) {
  if (!deg) return;
  Require(std::isfinite(*deg) && *deg > 0.0 && *deg < 180.0,
          ErrorCode::kValidation,
          std::string(what) + " angle must lie in (0, 180) degrees");
}

double ActivePower(std::span<const double> x,
                   std::span<const std::uint8_t> mask) {
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    if (mask[n]) {
      acc += x[n] * x[n];
      ++count;
    }
  }
  return count ? acc / static_cast<double>(count) : 0.0;
}

// Loop (noise) or truncate / zero pad (interference) to `len` samples.
MultiChannelSignal FitLength(const MultiChannelSignal &sig, std::size_t len,
                             bool loop) {
  MultiChannelSignal out;
  out.sample_rate = sig.sample_rate;
  for (const auto &ch : sig.channels) {
    std::vector<double> y(len, 0.0);
    if (loop) {
      for (std::size_t n = 0; n < len; ++n) y[n] = ch[n % ch.size()];
    } else {
      std::copy_n(ch.begin(), std::min(len, ch.size()), y.begin());
    }
    out.channels.push_back(std::move(y));
  }
  return out;
}

double LevelGain(double target_power, double other_power, double ratio_db,
                 const char *what) {
  Require(target_power > 0.0, ErrorCode::kInvalidArgument,
          std::string("target has no active speech power; cannot satisfy ") +
              what);
  Require(other_power > 0.0, ErrorCode::kInvalidArgument,
          std::string(what) + " source is silent over the active region");
  return std::sqrt(target_power /
                   (other_power * std::pow(10.0, ratio_db / 10.0)));
}

}  // namespace

void MixSpec::Validate() const {
  Require(std::isfinite(snr_db), ErrorCode::kValidation, "snr_db must be finite");
  Require(!sir_db || std::isfinite(*sir_db), ErrorCode::kValidation,
          "sir_db must be finite");
  Require(p_tar >= 0.0 && p_tar <= 1.0, ErrorCode::kValidation,
          "p_tar must lie in [0, 1]");
  CheckAngle(target_angle, "target");
  CheckAngle(interference_angle, "interference");
  CheckAngle(noise_angle, "noise");
}

nlohmann::json SimulationOutput::ManifestFields() const {
  nlohmann::json angles = nlohmann::json::object();
  if (spec.target_angle) angles["target"] = *spec.target_angle;
  if (spec.interference_angle) angles["interference"] = *spec.interference_angle;
  if (spec.noise_angle) angles["noise"] = *spec.noise_angle;
  nlohmann::json gain_doc = {{"noise", gains.noise}};
  if (interference_present) gain_doc["interference"] = gains.interference;
  nlohmann::json doc = {{"snr_db", spec.snr_db},
                        {"p_tar", spec.p_tar},
                        {"angles", angles},
                        {"seed", spec.seed},
                        {"gains", gain_doc},
                        {"interference_present", interference_present}};
  if (spec.sir_db) doc["sir_db"] = *spec.sir_db;
  return doc;
}

FeatureStack SimulationOutput::LabelStack() const {
  FeatureStack stack(vad_labels.size());
  FeaturePlane vad("vad", vad_labels.size(), 1);
  for (std::size_t t = 0; t < vad_labels.size(); ++t) vad(t, 0) = vad_labels[t];
  stack.Append(vad);
  FeaturePlane enh = enhancement_target;
  enh.set_label("enh_target");
  stack.Append(enh);
  return stack;
}

MultiChannelSignal Spatialize(std::span<const double> src, double angle_deg,
                              const ArrayGeometry &geom,
                              std::size_t filter_half_len) {
  CheckAngle(angle_deg, "source");
  MultiChannelSignal out;
  out.sample_rate = geom.sample_rate();
  for (std::size_t m = 0; m < geom.NumMics(); ++m) {
    const double delay = geom.RelativeDelay(m, angle_deg) * geom.sample_rate();
    if (m == 0) {
      out.channels.emplace_back(src.begin(), src.end());
    } else {
      out.channels.push_back(FractionalDelay(src, delay, filter_half_len));
    }
  }
  return out;
}

MultiChannelSignal ApplyImpulseResponses(std::span<const double> src,
                                         const MultiChannelSignal &irs) {
  irs.Validate();
  MultiChannelSignal out;
  out.sample_rate = irs.sample_rate;
  for (const auto &h : irs.channels) {
    std::vector<double> y(src.size(), 0.0);
    for (std::size_t n = 0; n < src.size(); ++n) {
      double acc = 0.0;
      for (std::size_t k = 0; k < h.size() && k <= n; ++k) acc += h[k] * src[n - k];
      y[n] = acc;
    }
    out.channels.push_back(std::move(y));
  }
  return out;
}

std::vector<std::uint8_t> EnergyVadLabels(std::span<const double> clean,
                                          const StftConfig &cfg,
                                          double sample_rate,
                                          double threshold_db) {
  const std::size_t frames = NumFrames(clean.size(), cfg, sample_rate);
  const std::size_t win = cfg.WindowLength(sample_rate);
  const std::size_t hop = cfg.HopLength(sample_rate);
  std::vector<double> db(frames);
  double loudest = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < frames; ++t) {
    double energy = 0.0;
    for (std::size_t n = t * hop; n < t * hop + win; ++n)
      energy += clean[n] * clean[n];
    db[t] = energy > 0 ? 10.0 * std::log10(energy)
                       : -std::numeric_limits<double>::infinity();
    loudest = std::max(loudest, db[t]);
  }
  std::vector<std::uint8_t> labels(frames, 0);
  if (!std::isfinite(loudest)) return labels;
  for (std::size_t t = 0; t < frames; ++t)
    labels[t] = db[t] > loudest - threshold_db ? 1 : 0;
  return labels;
}

std::vector<std::uint8_t> ActiveSampleMask(std::span<const std::uint8_t> vad,
                                           std::size_t num_samples,
                                           const StftConfig &cfg,
                                           double sample_rate) {
  const std::size_t win = cfg.WindowLength(sample_rate);
  const std::size_t hop = cfg.HopLength(sample_rate);
  std::vector<std::uint8_t> mask(num_samples, 0);
  for (std::size_t t = 0; t < vad.size(); ++t) {
    if (!vad[t]) continue;
    for (std::size_t n = t * hop; n < std::min(num_samples, t * hop + win); ++n)
      mask[n] = 1;
  }
  return mask;
}

bool DrawInterference(std::uint64_t seed, double p_tar) {
  CounterRng rng(seed);
  return rng.Uniform() < p_tar;
}

SimulationOutput Mix(const MultiChannelSignal &target,
                     const MultiChannelSignal *interference,
                     const MultiChannelSignal *noise, const MixSpec &spec,
                     const StftConfig &cfg, double vad_threshold_db) {
  spec.Validate();
  target.Validate();
  Require(target.NumChannels() >= 1, ErrorCode::kInvalidArgument,
          "target has no channels");
  const std::size_t len = target.NumSamples();
  const double fs = target.sample_rate;
  for (const MultiChannelSignal *other : {interference, noise}) {
    if (!other) continue;
    other->Validate();
    Require(other->NumChannels() == target.NumChannels() &&
                other->sample_rate == fs && other->NumSamples() > 0,
            ErrorCode::kInvalidArgument,
            "mixture components must share channel count and sample rate");
  }

  SimulationOutput out;
  out.spec = spec;
  out.clean_reference = target.channels[0];
  out.vad_labels = EnergyVadLabels(out.clean_reference, cfg, fs, vad_threshold_db);
  const auto mask = ActiveSampleMask(out.vad_labels, len, cfg, fs);
  const double target_power = ActivePower(out.clean_reference, mask);
  out.mixture = target;

  out.interference_present =
      interference != nullptr && DrawInterference(spec.seed, spec.p_tar);
  if (out.interference_present) {
    Require(spec.sir_db.has_value(), ErrorCode::kValidation,
            "interference drawn but sir_db is not set");
    const MultiChannelSignal fitted = FitLength(*interference, len, false);
    out.gains.interference = LevelGain(
        target_power, ActivePower(fitted.channels[0], mask), *spec.sir_db, "SIR");
    for (std::size_t c = 0; c < target.NumChannels(); ++c)
      for (std::size_t n = 0; n < len; ++n)
        out.mixture.channels[c][n] += out.gains.interference * fitted.channels[c][n];
  }
  if (noise) {
    const MultiChannelSignal fitted = FitLength(*noise, len, true);
    out.gains.noise = LevelGain(target_power, ActivePower(fitted.channels[0], mask),
                                spec.snr_db, "SNR");
    for (std::size_t c = 0; c < target.NumChannels(); ++c)
      for (std::size_t n = 0; n < len; ++n)
        out.mixture.channels[c][n] += out.gains.noise * fitted.channels[c][n];
  }

  MultiChannelSignal clean;
  clean.sample_rate = fs;
  clean.channels.push_back(out.clean_reference);
  const MultiChannelSpectrogram spec_clean = Stft(clean, cfg);
  out.enhancement_target =
      FeaturePlane("enh_target", spec_clean.num_frames(), spec_clean.num_bins());
  for (std::size_t t = 0; t < spec_clean.num_frames(); ++t) {
    auto frame = spec_clean.Frame(0, t);
    for (std::size_t f = 0; f < spec_clean.num_bins(); ++f)
      out.enhancement_target(t, f) = std::abs(frame[f]);
  }
  return out;
}

SimulationOutput SimulateScene(const SceneSources &sources, MixSpec spec,
                               const ArrayGeometry &geom, const StftConfig &cfg,
                               std::size_t filter_half_len) {
  Require(sources.sample_rate == geom.sample_rate(), ErrorCode::kInvalidArgument,
          "source and array sample rates differ");
  CounterRng rng(spec.seed);
  rng.NextU64();  // draw 0 decides interference presence
  const double drawn[3] = {180.0 * rng.UniformOpen(), 180.0 * rng.UniformOpen(),
                           180.0 * rng.UniformOpen()};
  if (!spec.target_angle) spec.target_angle = drawn[0];
  if (sources.interference && !spec.interference_angle)
    spec.interference_angle = drawn[1];
  if (sources.noise && !spec.noise_angle) spec.noise_angle = drawn[2];
  if (!sources.interference) spec.interference_angle.reset();
  if (!sources.noise) spec.noise_angle.reset();
  spec.Validate();

  const MultiChannelSignal target =
      Spatialize(sources.target, *spec.target_angle, geom, filter_half_len);
  std::optional<MultiChannelSignal> interference, noise;
  if (sources.interference) {
    interference = Spatialize(*sources.interference, *spec.interference_angle,
                              geom, filter_half_len);
  }
  if (sources.noise) {
    noise = Spatialize(*sources.noise, *spec.noise_angle, geom, filter_half_len);
  }
  SimulationOutput out =
      Mix(target, interference ? &*interference : nullptr,
          noise ? &*noise : nullptr, spec, cfg);
  if (!out.interference_present) out.spec.interference_angle.reset();
  return out;
}

}  // namespace mcsv
