// include/mcsv/rng.h

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

#ifndef MCSV_RNG_H_
#define MCSV_RNG_H_

#include <cstddef>
#include <cstdint>

namespace mcsv {

// SplitMix64 finalizer.
std::uint64_t Mix64(std::uint64_t x);

// Independent per-item seed, so results do not depend on processing order.
std::uint64_t DeriveSeed(std::uint64_t global_seed, std::uint64_t index);

// Counter-based generator: draw k is Mix64(seed + (k + 1) * golden), so the
// stream is a pure function of (seed, k) on every platform.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t NextU64();
  // [0, 1), 53-bit resolution.
  double Uniform();
  // (0, 1), never touches either end.
  double UniformOpen();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Standard normal via Box-Muller.
  double Normal();
  // Uniform integer in [0, n), unbiased.
  std::uint64_t Below(std::uint64_t n);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace mcsv

#endif  // MCSV_RNG_H_
