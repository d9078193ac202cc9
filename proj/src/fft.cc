// src/fft.cc

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

#include "mcsv/fft.h"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>

#include "mcsv/errors.h"

namespace mcsv {
namespace {
// The FFTW planner is not re-entrant.
std::mutex &PlannerMutex() {
  static std::mutex mu;
  return mu;
}
}  // namespace

struct RealFft::Plans {
  double *real = nullptr;
  fftw_complex *spectrum = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

RealFft::RealFft(std::size_t n) : n_(n), plans_(std::make_unique<Plans>()) {
  Require(n >= 2, ErrorCode::kInvalidArgument, "FFT size must be >= 2");
  std::lock_guard<std::mutex> lock(PlannerMutex());
  plans_->real = fftw_alloc_real(n);
  plans_->spectrum = fftw_alloc_complex(n / 2 + 1);
  plans_->forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), plans_->real,
                                         plans_->spectrum, FFTW_ESTIMATE);
  plans_->inverse = fftw_plan_dft_c2r_1d(static_cast<int>(n), plans_->spectrum,
                                         plans_->real, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard<std::mutex> lock(PlannerMutex());
  fftw_destroy_plan(plans_->forward);
  fftw_destroy_plan(plans_->inverse);
  fftw_free(plans_->real);
  fftw_free(plans_->spectrum);
}

void RealFft::Forward(std::span<const double> in, std::span<Complex> out) {
  Require(in.size() <= n_ && out.size() == n_ / 2 + 1, ErrorCode::kSize,
          "FFT buffer size mismatch");
  std::copy(in.begin(), in.end(), plans_->real);
  std::fill(plans_->real + in.size(), plans_->real + n_, 0.0);
  fftw_execute(plans_->forward);
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = Complex(plans_->spectrum[k][0], plans_->spectrum[k][1]);
}

void RealFft::Inverse(std::span<const Complex> in, std::span<double> out) {
  Require(in.size() == n_ / 2 + 1 && out.size() == n_, ErrorCode::kSize,
          "inverse FFT buffer size mismatch");
  for (std::size_t k = 0; k < in.size(); ++k) {
    plans_->spectrum[k][0] = in[k].real();
    plans_->spectrum[k][1] = in[k].imag();
  }
  // c2r destroys its input; the spectrum buffer is scratch here.
  fftw_execute(plans_->inverse);
  std::copy(plans_->real, plans_->real + n_, out.begin());
}

std::size_t NextPowerOfTwo(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace mcsv
