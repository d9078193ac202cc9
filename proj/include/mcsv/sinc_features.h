// include/mcsv/sinc_features.h

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

#ifndef MCSV_SINC_FEATURES_H_
#define MCSV_SINC_FEATURES_H_

#include <cstddef>
#include <span>
#include <vector>

#include "json.hpp"
#include "mcsv/dsp_core.h"
#include "mcsv/signal.h"

namespace mcsv {

struct SincBankOptions {
  std::size_t num_filters = 257;
  std::size_t taps = 251;
  double sample_rate = 16000.0;
  // Initial cutoffs tile [min_hz, max_hz] uniformly with 50% overlap.
  double min_hz = 30.0;
  double max_hz = 7600.0;

  static SincBankOptions FromJson(const nlohmann::json &doc);
  nlohmann::json ToJson() const;
};

// Parametric band filters
//   s_i(t) = 2 f_low sinc(2 pi f_low t) - 2 f_high sinc(2 pi f_high t)
// with t in seconds, Hamming windowed over an odd number of taps.
// Cutoffs come from unconstrained raw parameters (a, b):
//   f_low = min(|a|, fs/2), f_high = min(f_low + |b|, fs/2),
// which keeps 0 <= f_low <= f_high <= fs/2 for any raw values.
class SincFilterBank {
 public:
  SincFilterBank(std::vector<double> raw_low, std::vector<double> raw_band,
                 std::size_t taps, double sample_rate);

  static SincFilterBank Initialize(const SincBankOptions &opts);
  static SincFilterBank FromCutoffs(std::span<const double> low_hz,
                                    std::span<const double> high_hz,
                                    std::size_t taps, double sample_rate);

  std::size_t num_filters() const { return raw_low_.size(); }
  std::size_t taps() const { return taps_; }
  double sample_rate() const { return sample_rate_; }
  const std::vector<double> &raw_low() const { return raw_low_; }
  const std::vector<double> &raw_band() const { return raw_band_; }

  double LowCutoff(std::size_t i) const;
  double HighCutoff(std::size_t i) const;
  // Time of tap k in seconds, centered on the middle tap.
  double TapTime(std::size_t k) const;
  // Symmetric Hamming window over the taps.
  const std::vector<double> &window() const { return window_; }

 private:
  std::vector<double> raw_low_;
  std::vector<double> raw_band_;
  std::size_t taps_;
  double sample_rate_;
  std::vector<double> window_;
};

// Unwindowed filter value at time t (seconds).
double SincBandTap(double f_low, double f_high, double t);

// [num_filters x taps], windowed.
Matrix MaterializeFilters(const SincFilterBank &bank);

struct SincGradients {
  std::vector<double> low;
  std::vector<double> high;
};

// d/d(cutoffs) of sum_{i,k} upstream(i,k) * filter(i,k).
SincGradients SincCutoffGradients(const SincFilterBank &bank,
                                  const Matrix &upstream);
// The same chained through the constraint map to the raw (a, b) parameters.
SincGradients SincRawGradients(const SincFilterBank &bank,
                               const Matrix &upstream);

// Per selected channel: convolve with every filter, rectify, average over
// each STFT analysis window and take log(. + eps). One plane per channel,
// num_filters wide, STFT frame count.
FeatureMap MultChanSinc(const MultiChannelSignal &sig,
                        const SincFilterBank &bank,
                        std::span<const std::size_t> channels,
                        const StftConfig &cfg, double floor_eps = 1e-10);

}  // namespace mcsv

#endif  // MCSV_SINC_FEATURES_H_
