// include/mcsv/dsp_core.h

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

#ifndef MCSV_DSP_CORE_H_
#define MCSV_DSP_CORE_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mcsv/signal.h"

namespace mcsv {

enum class WindowKind { kHann, kHamming };

WindowKind ParseWindowKind(std::string_view name);
std::string_view WindowKindName(WindowKind kind);

// Periodic window of the given length.
std::vector<double> MakeWindow(WindowKind kind, std::size_t length);

struct StftConfig {
  std::size_t dft_size = 512;
  double window_ms = 25.0;
  double hop_ms = 10.0;
  WindowKind window = WindowKind::kHann;

  std::size_t WindowLength(double sample_rate) const;
  std::size_t HopLength(double sample_rate) const;
  std::size_t NumBins() const { return dft_size / 2 + 1; }
  // Window must fit the DFT and the hop must not exceed the window.
  void Validate(double sample_rate) const;

  static StftConfig FromJson(const nlohmann::json &doc);
  nlohmann::json ToJson() const;
};

// floor((num_samples - win) / hop) + 1; throws kSize when the signal is
// shorter than one window.
std::size_t NumFrames(std::size_t num_samples, const StftConfig &cfg,
                      double sample_rate);

// Complex one-sided STFT, indexed [channel][frame][bin].
class MultiChannelSpectrogram {
 public:
  MultiChannelSpectrogram() = default;
  MultiChannelSpectrogram(std::size_t num_channels, std::size_t num_frames,
                          std::size_t dft_size, double sample_rate);

  std::size_t num_channels() const { return num_channels_; }
  std::size_t num_frames() const { return num_frames_; }
  std::size_t num_bins() const { return num_bins_; }
  std::size_t dft_size() const { return dft_size_; }
  double sample_rate() const { return sample_rate_; }
  double BinFrequency(std::size_t bin) const {
    return static_cast<double>(bin) * sample_rate_ /
           static_cast<double>(dft_size_);
  }

  Complex &at(std::size_t c, std::size_t t, std::size_t f) {
    return bins_[(c * num_frames_ + t) * num_bins_ + f];
  }
  const Complex &at(std::size_t c, std::size_t t, std::size_t f) const {
    return bins_[(c * num_frames_ + t) * num_bins_ + f];
  }
  std::span<Complex> Frame(std::size_t c, std::size_t t) {
    return {bins_.data() + (c * num_frames_ + t) * num_bins_, num_bins_};
  }
  std::span<const Complex> Frame(std::size_t c, std::size_t t) const {
    return {bins_.data() + (c * num_frames_ + t) * num_bins_, num_bins_};
  }

  // Center time of each frame, seconds.
  std::vector<double> frame_times;

 private:
  std::size_t num_channels_ = 0;
  std::size_t num_frames_ = 0;
  std::size_t num_bins_ = 0;
  std::size_t dft_size_ = 0;
  double sample_rate_ = 0.0;
  std::vector<Complex> bins_;
};

MultiChannelSpectrogram Stft(const MultiChannelSignal &sig,
                             const StftConfig &cfg);

enum class LogBase { kNatural, kTen };

struct LpsOptions {
  double floor_eps = 1e-10;
  LogBase base = LogBase::kNatural;
};

// log(|Y_{c,tf}|^2 + eps), one plane of n_bins per frame.
FeaturePlane LogPowerSpectrum(const MultiChannelSpectrogram &spec,
                              std::size_t channel,
                              const LpsOptions &opts = {});

double HzToMel(double hz);
double MelToHz(double mel);

struct MelOptions {
  std::size_t num_mels = 80;
  double fmin = 20.0;
  double fmax = 7600.0;
  double floor_eps = 1e-10;
};

// Triangular filters equally spaced on the mel scale, evaluated on the
// exact bin frequencies.
class MelFilterbank {
 public:
  MelFilterbank(const MelOptions &opts, std::size_t dft_size,
                double sample_rate);

  std::size_t num_mels() const { return centers_hz_.size(); }
  std::size_t num_bins() const { return num_bins_; }
  const std::vector<double> &centers_hz() const { return centers_hz_; }
  std::span<const double> Weights(std::size_t mel) const {
    return {weights_.data() + mel * num_bins_, num_bins_};
  }
  void Apply(std::span<const double> power, std::span<double> out) const;

 private:
  std::size_t num_bins_;
  std::vector<double> centers_hz_;
  std::vector<double> weights_;
};

FeaturePlane LogMelFilterbank(const MultiChannelSpectrogram &spec,
                              std::size_t channel,
                              const MelOptions &opts = {});

// y[n] = x(n - delay) via Hann-windowed sinc interpolation over
// 2*half_len+1 taps. Integer delays are exact shifts. Output has the input
// length, zero outside the input support.
std::vector<double> FractionalDelay(std::span<const double> x, double delay,
                                    std::size_t half_len = 32);

}  // namespace mcsv

#endif  // MCSV_DSP_CORE_H_
