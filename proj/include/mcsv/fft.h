// include/mcsv/fft.h

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

#ifndef MCSV_FFT_H_
#define MCSV_FFT_H_

#include <cstddef>
#include <memory>
#include <span>

#include "mcsv/signal.h"

namespace mcsv {

// Unnormalized real-input DFT of fixed size n, n/2+1 outputs.
// X[k] = sum_n x[n] exp(-2 pi i k n / N). Inverse is also unnormalized
// (returns N * x). An instance owns its scratch buffers, so share plans
// across threads only by giving each thread its own RealFft.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft &) = delete;
  RealFft &operator=(const RealFft &) = delete;

  std::size_t size() const { return n_; }
  // `in` may be shorter than n; the tail is zero-padded.
  void Forward(std::span<const double> in, std::span<Complex> out);
  void Inverse(std::span<const Complex> in, std::span<double> out);

 private:
  struct Plans;
  std::size_t n_;
  std::unique_ptr<Plans> plans_;
};

std::size_t NextPowerOfTwo(std::size_t n);

}  // namespace mcsv

#endif  // MCSV_FFT_H_
