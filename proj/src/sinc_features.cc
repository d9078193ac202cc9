// src/sinc_features.cc

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

#include "mcsv/sinc_features.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mcsv/errors.h"
#include "mcsv/fft.h"

namespace mcsv {
namespace {

double Sign(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

// Overlap-save "same"-mode convolution of one signal with many filters of
// odd length L, sharing the signal's block spectra.
class BlockConvolver {
 public:
  BlockConvolver(std::span<const double> x, std::size_t taps)
      : len_(x.size()),
        taps_(taps),
        fft_size_(std::max<std::size_t>(1024, NextPowerOfTwo(2 * taps))),
        step_(fft_size_ - taps + 1),
        fft_(fft_size_) {
    const std::size_t half = (taps - 1) / 2;
    std::vector<double> segment(fft_size_);
    // Full-convolution outputs n0 .. n0 + step - 1 need x[n0 - L + 1 ..].
    for (std::size_t n0 = half; n0 < half + len_; n0 += step_) {
      for (std::size_t k = 0; k < fft_size_; ++k) {
        auto idx = static_cast<std::ptrdiff_t>(n0 + k) -
                   static_cast<std::ptrdiff_t>(taps - 1);
        segment[k] = idx >= 0 && idx < static_cast<std::ptrdiff_t>(len_)
                         ? x[static_cast<std::size_t>(idx)]
                         : 0.0;
      }
      blocks_.emplace_back(fft_size_ / 2 + 1);
      fft_.Forward(segment, blocks_.back());
    }
  }

  // Writes the centered convolution with `filter` into `out` (length of x).
  void Apply(std::span<const double> filter, std::span<double> out) {
    std::vector<Complex> h(fft_size_ / 2 + 1), prod(fft_size_ / 2 + 1);
    std::vector<double> time(fft_size_);
    fft_.Forward(filter, h);
    const double scale = 1.0 / static_cast<double>(fft_size_);
    std::size_t written = 0;
    for (const auto &block : blocks_) {
      for (std::size_t k = 0; k < prod.size(); ++k) prod[k] = block[k] * h[k];
      fft_.Inverse(prod, time);
      for (std::size_t k = taps_ - 1; k < fft_size_ && written < len_; ++k)
        out[written++] = time[k] * scale;
    }
  }

 private:
  std::size_t len_;
  std::size_t taps_;
  std::size_t fft_size_;
  std::size_t step_;
  RealFft fft_;
  std::vector<std::vector<Complex>> blocks_;
};

}  // namespace

SincBankOptions SincBankOptions::FromJson(const nlohmann::json &doc) {
  SincBankOptions opts;
  try {
    opts.num_filters = doc.value("num_filters", opts.num_filters);
    opts.taps = doc.value("taps", opts.taps);
    opts.sample_rate = doc.value("sample_rate", opts.sample_rate);
    opts.min_hz = doc.value("min_hz", opts.min_hz);
    opts.max_hz = doc.value("max_hz", opts.max_hz);
  } catch (const nlohmann::json::exception &e) {
    Fail(ErrorCode::kParse, std::string("sinc config: ") + e.what());
  }
  return opts;
}

nlohmann::json SincBankOptions::ToJson() const {
  return {{"num_filters", num_filters}, {"taps", taps},
          {"sample_rate", sample_rate}, {"min_hz", min_hz},
          {"max_hz", max_hz}};
}

SincFilterBank::SincFilterBank(std::vector<double> raw_low,
                               std::vector<double> raw_band, std::size_t taps,
                               double sample_rate)
    : raw_low_(std::move(raw_low)),
      raw_band_(std::move(raw_band)),
      taps_(taps),
      sample_rate_(sample_rate),
      window_(taps) {
  Require(!raw_low_.empty() && raw_low_.size() == raw_band_.size(),
          ErrorCode::kValidation, "sinc bank needs matching parameter vectors");
  Require(taps_ >= 3 && taps_ % 2 == 1, ErrorCode::kValidation,
          "sinc filters need an odd tap count >= 3");
  Require(sample_rate_ > 0, ErrorCode::kValidation,
          "sinc bank sample rate must be positive");
  for (std::size_t i = 0; i < raw_low_.size(); ++i) {
    Require(std::isfinite(raw_low_[i]) && std::isfinite(raw_band_[i]),
            ErrorCode::kValidation, "sinc parameters must be finite");
  }
  const std::size_t center = (taps_ - 1) / 2;
  for (std::size_t k = 0; k <= center; ++k) {
    double w = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi *
                                      static_cast<double>(k) /
                                      static_cast<double>(taps_ - 1));
    window_[k] = w;
    window_[taps_ - 1 - k] = w;
  }
}

SincFilterBank SincFilterBank::Initialize(const SincBankOptions &opts) {
  Require(opts.num_filters >= 1, ErrorCode::kValidation,
          "sinc bank needs at least one filter");
  Require(opts.min_hz >= 0 && opts.min_hz < opts.max_hz &&
              opts.max_hz <= opts.sample_rate / 2,
          ErrorCode::kValidation, "sinc tiling range must fit in [0, fs/2]");
  const double n = static_cast<double>(opts.num_filters);
  const double band = 2.0 * (opts.max_hz - opts.min_hz) / (n + 1.0);
  std::vector<double> low(opts.num_filters), width(opts.num_filters, band);
  for (std::size_t i = 0; i < low.size(); ++i)
    low[i] = opts.min_hz + static_cast<double>(i) * band / 2.0;
  return SincFilterBank(std::move(low), std::move(width), opts.taps,
                        opts.sample_rate);
}

SincFilterBank SincFilterBank::FromCutoffs(std::span<const double> low_hz,
                                           std::span<const double> high_hz,
                                           std::size_t taps,
                                           double sample_rate) {
  Require(low_hz.size() == high_hz.size(), ErrorCode::kValidation,
          "cutoff vectors differ in length");
  std::vector<double> low(low_hz.begin(), low_hz.end()), band(low.size());
  for (std::size_t i = 0; i < low.size(); ++i) {
    Require(low_hz[i] >= 0 && low_hz[i] <= high_hz[i] &&
                high_hz[i] <= sample_rate / 2,
            ErrorCode::kValidation, "cutoffs must satisfy 0 <= low <= high <= fs/2");
    band[i] = high_hz[i] - low_hz[i];
  }
  return SincFilterBank(std::move(low), std::move(band), taps, sample_rate);
}

double SincFilterBank::LowCutoff(std::size_t i) const {
  return std::min(std::abs(raw_low_.at(i)), sample_rate_ / 2);
}

double SincFilterBank::HighCutoff(std::size_t i) const {
  return std::min(LowCutoff(i) + std::abs(raw_band_.at(i)), sample_rate_ / 2);
}

double SincFilterBank::TapTime(std::size_t k) const {
  return (static_cast<double>(k) - static_cast<double>((taps_ - 1) / 2)) /
         sample_rate_;
}

double SincBandTap(double f_low, double f_high, double t) {
  if (t == 0.0) return 2.0 * (f_low - f_high);
  // 2 f sinc(2 pi f t) == sin(2 pi f t) / (pi t)
  const double pi_t = std::numbers::pi * t;
  return (std::sin(2.0 * pi_t * f_low) - std::sin(2.0 * pi_t * f_high)) / pi_t;
}

Matrix MaterializeFilters(const SincFilterBank &bank) {
  const std::size_t taps = bank.taps(), center = (taps - 1) / 2;
  Matrix filters(bank.num_filters(), taps);
  for (std::size_t i = 0; i < bank.num_filters(); ++i) {
    const double lo = bank.LowCutoff(i), hi = bank.HighCutoff(i);
    for (std::size_t k = 0; k <= center; ++k) {
      double v = SincBandTap(lo, hi, bank.TapTime(k)) * bank.window()[k];
      filters(i, k) = v;
      filters(i, taps - 1 - k) = v;
    }
  }
  return filters;
}

SincGradients SincCutoffGradients(const SincFilterBank &bank,
                                  const Matrix &upstream) {
  Require(upstream.rows == bank.num_filters() && upstream.cols == bank.taps(),
          ErrorCode::kSize, "upstream gradient must match the filter matrix");
  SincGradients g{std::vector<double>(bank.num_filters(), 0.0),
                  std::vector<double>(bank.num_filters(), 0.0)};
  for (std::size_t i = 0; i < bank.num_filters(); ++i) {
    const double lo = bank.LowCutoff(i), hi = bank.HighCutoff(i);
    for (std::size_t k = 0; k < bank.taps(); ++k) {
      const double t = bank.TapTime(k), w = bank.window()[k];
      const double up = upstream(i, k);
      g.low[i] += up * 2.0 * std::cos(2.0 * std::numbers::pi * lo * t) * w;
      g.high[i] -= up * 2.0 * std::cos(2.0 * std::numbers::pi * hi * t) * w;
    }
  }
  return g;
}

SincGradients SincRawGradients(const SincFilterBank &bank,
                               const Matrix &upstream) {
  SincGradients cut = SincCutoffGradients(bank, upstream);
  SincGradients raw{std::vector<double>(bank.num_filters(), 0.0),
                    std::vector<double>(bank.num_filters(), 0.0)};
  const double nyquist = bank.sample_rate() / 2;
  for (std::size_t i = 0; i < bank.num_filters(); ++i) {
    const double a = bank.raw_low()[i], b = bank.raw_band()[i];
    const double dlow_da = std::abs(a) < nyquist ? Sign(a) : 0.0;
    const bool high_free = bank.LowCutoff(i) + std::abs(b) < nyquist;
    const double dhigh_da = high_free ? dlow_da : 0.0;
    const double dhigh_db = high_free ? Sign(b) : 0.0;
    raw.low[i] = cut.low[i] * dlow_da + cut.high[i] * dhigh_da;
    raw.high[i] = cut.high[i] * dhigh_db;
  }
  return raw;
}

FeatureMap MultChanSinc(const MultiChannelSignal &sig,
                        const SincFilterBank &bank,
                        std::span<const std::size_t> channels,
                        const StftConfig &cfg, double floor_eps) {
  sig.Validate();
  Require(sig.sample_rate == bank.sample_rate(), ErrorCode::kInvalidArgument,
          "sinc bank and signal sample rates differ");
  Require(sig.NumSamples() >= bank.taps(), ErrorCode::kSize,
          "signal shorter than the sinc filter length");
  const double fs = sig.sample_rate;
  const std::size_t frames = NumFrames(sig.NumSamples(), cfg, fs);
  const std::size_t win = cfg.WindowLength(fs), hop = cfg.HopLength(fs);
  const Matrix filters = MaterializeFilters(bank);

  FeatureMap out;
  std::vector<double> filtered(sig.NumSamples());
  for (std::size_t c : channels) {
    Require(c < sig.NumChannels(), ErrorCode::kOutOfRange,
            "sinc channel " + std::to_string(c) + " out of range");
    FeaturePlane plane("multchansinc[" + std::to_string(c) + "]", frames,
                       bank.num_filters());
    BlockConvolver conv(sig.channels[c], bank.taps());
    for (std::size_t i = 0; i < bank.num_filters(); ++i) {
      conv.Apply(filters.Row(i), filtered);
      for (std::size_t t = 0; t < frames; ++t) {
        double acc = 0.0;
        for (std::size_t n = t * hop; n < t * hop + win; ++n)
          acc += std::abs(filtered[n]);
        plane(t, i) = std::log(acc / static_cast<double>(win) + floor_eps);
      }
    }
    out.push_back(std::move(plane));
  }
  return out;
}

}  // namespace mcsv
