// include/mcsv/signal.h

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

#ifndef MCSV_SIGNAL_H_
#define MCSV_SIGNAL_H_

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mcsv {

using Complex = std::complex<double>;

// Time-domain samples for M channels at one sample rate.
struct MultiChannelSignal {
  std::vector<std::vector<double>> channels;
  double sample_rate = 16000.0;

  std::size_t NumChannels() const { return channels.size(); }
  std::size_t NumSamples() const {
    return channels.empty() ? 0 : channels.front().size();
  }
  // Throws kValidation when channels differ in length or the rate is not
  // positive.
  void Validate() const;

  static MultiChannelSignal Replicate(std::span<const double> samples,
                                      std::size_t num_channels,
                                      double sample_rate);
};

// One feature plane: frames x width values, frame-major.
class FeaturePlane {
 public:
  FeaturePlane() = default;
  FeaturePlane(std::string label, std::size_t num_frames, std::size_t width,
               double fill = 0.0)
      : label_(std::move(label)),
        num_frames_(num_frames),
        width_(width),
        data_(num_frames * width, fill) {}

  const std::string &label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }
  std::size_t num_frames() const { return num_frames_; }
  std::size_t width() const { return width_; }

  double &operator()(std::size_t t, std::size_t f) {
    return data_[t * width_ + f];
  }
  double operator()(std::size_t t, std::size_t f) const {
    return data_[t * width_ + f];
  }
  std::span<double> Frame(std::size_t t) {
    return {data_.data() + t * width_, width_};
  }
  std::span<const double> Frame(std::size_t t) const {
    return {data_.data() + t * width_, width_};
  }
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

 private:
  std::string label_;
  std::size_t num_frames_ = 0;
  std::size_t width_ = 0;
  std::vector<double> data_;
};

// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}
  double &operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data[r * cols + c];
  }
  std::span<double> Row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> Row(std::size_t r) const {
    return {data.data() + r * cols, cols};
  }
};

// The output of a feature operation: one or more planes sharing a frame
// count.
using FeatureMap = std::vector<FeaturePlane>;

}  // namespace mcsv

#endif  // MCSV_SIGNAL_H_
