// src/dsp_core.cc

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

#include "mcsv/dsp_core.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mcsv/errors.h"
#include "mcsv/fft.h"

namespace mcsv {

WindowKind ParseWindowKind(std::string_view name) {
  if (name == "hann") return WindowKind::kHann;
  if (name == "hamming") return WindowKind::kHamming;
  Fail(ErrorCode::kParse, "unknown window '" + std::string(name) + "'");
}

std::string_view WindowKindName(WindowKind kind) {
  return kind == WindowKind::kHann ? "hann" : "hamming";
}

std::vector<double> MakeWindow(WindowKind kind, std::size_t length) {
  std::vector<double> w(length);
  const double a0 = kind == WindowKind::kHann ? 0.5 : 0.54;
  for (std::size_t n = 0; n < length; ++n) {
    w[n] = a0 - (1.0 - a0) * std::cos(2.0 * std::numbers::pi *
                                      static_cast<double>(n) /
                                      static_cast<double>(length));
  }
  return w;
}

std::size_t StftConfig::WindowLength(double sample_rate) const {
  return static_cast<std::size_t>(std::lround(window_ms * sample_rate / 1000.0));
}

std::size_t StftConfig::HopLength(double sample_rate) const {
  return static_cast<std::size_t>(std::lround(hop_ms * sample_rate / 1000.0));
}

void StftConfig::Validate(double sample_rate) const {
  std::size_t win = WindowLength(sample_rate), hop = HopLength(sample_rate);
  Require(dft_size >= 2 && dft_size % 2 == 0, ErrorCode::kValidation,
          "dft_size must be even and >= 2");
  Require(win >= 1 && win <= dft_size, ErrorCode::kValidation,
          "window length must be in [1, dft_size]");
  Require(hop >= 1 && hop <= win, ErrorCode::kValidation,
          "hop must be in [1, window length]");
}

StftConfig StftConfig::FromJson(const nlohmann::json &doc) {
  StftConfig cfg;
  try {
    cfg.dft_size = doc.value("dft_size", cfg.dft_size);
    cfg.window_ms = doc.value("window_ms", cfg.window_ms);
    cfg.hop_ms = doc.value("hop_ms", cfg.hop_ms);
    if (doc.contains("window"))
      cfg.window = ParseWindowKind(doc.at("window").get<std::string>());
  } catch (const nlohmann::json::exception &e) {
    Fail(ErrorCode::kParse, std::string("stft config: ") + e.what());
  }
  return cfg;
}

nlohmann::json StftConfig::ToJson() const {
  return {{"dft_size", dft_size},
          {"window_ms", window_ms},
          {"hop_ms", hop_ms},
          {"window", std::string(WindowKindName(window))}};
}

std::size_t NumFrames(std::size_t num_samples, const StftConfig &cfg,
                      double sample_rate) {
  std::size_t win = cfg.WindowLength(sample_rate);
  std::size_t hop = cfg.HopLength(sample_rate);
  Require(num_samples >= win, ErrorCode::kSize,
          "signal of " + std::to_string(num_samples) +
              " samples is shorter than one window (" + std::to_string(win) +
              ")");
  return (num_samples - win) / hop + 1;
}

MultiChannelSpectrogram::MultiChannelSpectrogram(std::size_t num_channels,
                                                 std::size_t num_frames,
                                                 std::size_t dft_size,
                                                 double sample_rate)
    : num_channels_(num_channels),
      num_frames_(num_frames),
      num_bins_(dft_size / 2 + 1),
      dft_size_(dft_size),
      sample_rate_(sample_rate),
      bins_(num_channels * num_frames * (dft_size / 2 + 1)) {}

MultiChannelSpectrogram Stft(const MultiChannelSignal &sig,
                             const StftConfig &cfg) {
  sig.Validate();
  const double fs = sig.sample_rate;
  cfg.Validate(fs);
  const std::size_t win = cfg.WindowLength(fs), hop = cfg.HopLength(fs);
  const std::size_t frames = NumFrames(sig.NumSamples(), cfg, fs);
  MultiChannelSpectrogram spec(sig.NumChannels(), frames, cfg.dft_size, fs);
  spec.frame_times.resize(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    spec.frame_times[t] =
        (static_cast<double>(t * hop) + 0.5 * static_cast<double>(win)) / fs;
  }

  const std::vector<double> window = MakeWindow(cfg.window, win);
  RealFft fft(cfg.dft_size);
  std::vector<double> frame(win);
  for (std::size_t c = 0; c < sig.NumChannels(); ++c) {
    const auto &x = sig.channels[c];
    for (std::size_t t = 0; t < frames; ++t) {
      for (std::size_t n = 0; n < win; ++n) frame[n] = x[t * hop + n] * window[n];
      fft.Forward(frame, spec.Frame(c, t));
    }
  }
  return spec;
}

FeaturePlane LogPowerSpectrum(const MultiChannelSpectrogram &spec,
                              std::size_t channel, const LpsOptions &opts) {
  Require(channel < spec.num_channels(), ErrorCode::kOutOfRange,
          "LPS channel " + std::to_string(channel) + " out of range");
  Require(opts.floor_eps >= 0, ErrorCode::kInvalidArgument,
          "LPS floor must be nonnegative");
  FeaturePlane out("lps", spec.num_frames(), spec.num_bins());
  for (std::size_t t = 0; t < spec.num_frames(); ++t) {
    auto frame = spec.Frame(channel, t);
    for (std::size_t f = 0; f < spec.num_bins(); ++f) {
      double v = std::norm(frame[f]) + opts.floor_eps;
      out(t, f) = opts.base == LogBase::kNatural ? std::log(v) : std::log10(v);
    }
  }
  return out;
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double MelToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

MelFilterbank::MelFilterbank(const MelOptions &opts, std::size_t dft_size,
                             double sample_rate)
    : num_bins_(dft_size / 2 + 1) {
  Require(opts.num_mels >= 1, ErrorCode::kInvalidArgument,
          "need at least one mel filter");
  Require(opts.fmin >= 0 && opts.fmin < opts.fmax &&
              opts.fmax <= sample_rate / 2,
          ErrorCode::kInvalidArgument,
          "mel band edges must satisfy 0 <= fmin < fmax <= fs/2");
  const std::size_t n = opts.num_mels;
  const double mel_lo = HzToMel(opts.fmin), mel_hi = HzToMel(opts.fmax);
  std::vector<double> edges(n + 2);
  for (std::size_t k = 0; k < n + 2; ++k) {
    edges[k] = MelToHz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(k) /
                                    static_cast<double>(n + 1));
  }
  centers_hz_.assign(edges.begin() + 1, edges.end() - 1);
  weights_.assign(n * num_bins_, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    const double left = edges[m], center = edges[m + 1], right = edges[m + 2];
    for (std::size_t f = 0; f < num_bins_; ++f) {
      const double hz = static_cast<double>(f) * sample_rate /
                        static_cast<double>(dft_size);
      double w = 0.0;
      if (hz > left && hz <= center) {
        w = (hz - left) / (center - left);
      } else if (hz > center && hz < right) {
        w = (right - hz) / (right - center);
      }
      weights_[m * num_bins_ + f] = w;
    }
  }
}

void MelFilterbank::Apply(std::span<const double> power,
                          std::span<double> out) const {
  Require(power.size() == num_bins_ && out.size() == num_mels(),
          ErrorCode::kSize, "mel filterbank dimension mismatch");
  for (std::size_t m = 0; m < num_mels(); ++m) {
    auto w = Weights(m);
    double acc = 0.0;
    for (std::size_t f = 0; f < num_bins_; ++f) acc += w[f] * power[f];
    out[m] = acc;
  }
}

FeaturePlane LogMelFilterbank(const MultiChannelSpectrogram &spec,
                              std::size_t channel, const MelOptions &opts) {
  Require(channel < spec.num_channels(), ErrorCode::kOutOfRange,
          "filterbank channel " + std::to_string(channel) + " out of range");
  MelFilterbank bank(opts, spec.dft_size(), spec.sample_rate());
  FeaturePlane out("fbank" + std::to_string(opts.num_mels), spec.num_frames(),
                   opts.num_mels);
  std::vector<double> power(spec.num_bins());
  for (std::size_t t = 0; t < spec.num_frames(); ++t) {
    auto frame = spec.Frame(channel, t);
    for (std::size_t f = 0; f < power.size(); ++f) power[f] = std::norm(frame[f]);
    auto row = out.Frame(t);
    bank.Apply(power, row);
    for (double &v : row) v = std::log(v + opts.floor_eps);
  }
  return out;
}

std::vector<double> FractionalDelay(std::span<const double> x, double delay,
                                    std::size_t half_len) {
  const auto len = static_cast<std::ptrdiff_t>(x.size());
  Require(std::isfinite(delay) && std::abs(delay) < static_cast<double>(len),
          ErrorCode::kInvalidArgument,
          "fractional delay must be smaller than the signal length");
  Require(half_len >= 8, ErrorCode::kInvalidArgument,
          "fractional delay filter needs half_len >= 8");
  std::vector<double> y(x.size(), 0.0);
  const double whole = std::floor(delay);
  const auto shift = static_cast<std::ptrdiff_t>(whole);
  const double frac = delay - whole;
  if (frac == 0.0) {
    for (std::ptrdiff_t n = 0; n < len; ++n) {
      std::ptrdiff_t k = n - shift;
      if (k >= 0 && k < len) y[n] = x[k];
    }
    return y;
  }
  // y[n] = sum_j h[j] x[n - shift - j], h[j] = wsinc(j - frac).
  const auto h_len = static_cast<std::ptrdiff_t>(half_len);
  std::vector<double> taps;
  std::vector<std::ptrdiff_t> offsets;
  for (std::ptrdiff_t j = -h_len + 1; j <= h_len; ++j) {
    double u = static_cast<double>(j) - frac;
    double sinc = std::sin(std::numbers::pi * u) / (std::numbers::pi * u);
    double window = 0.5 + 0.5 * std::cos(std::numbers::pi * u /
                                         static_cast<double>(h_len + 1));
    taps.push_back(sinc * window);
    offsets.push_back(j);
  }
  for (std::ptrdiff_t n = 0; n < len; ++n) {
    double acc = 0.0;
    for (std::size_t q = 0; q < taps.size(); ++q) {
      std::ptrdiff_t k = n - shift - offsets[q];
      if (k >= 0 && k < len) acc += taps[q] * x[k];
    }
    y[n] = acc;
  }
  return y;
}

}  // namespace mcsv
