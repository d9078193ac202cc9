// src/signal.cc

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

#include "mcsv/signal.h"

#include <cmath>

#include "mcsv/errors.h"

namespace mcsv {

void MultiChannelSignal::Validate() const {
  Require(std::isfinite(sample_rate) && sample_rate > 0,
          ErrorCode::kValidation, "sample rate must be positive");
  for (const auto &ch : channels) {
    Require(ch.size() == channels.front().size(), ErrorCode::kValidation,
            "all channels must have equal length");
  }
}

MultiChannelSignal MultiChannelSignal::Replicate(
    std::span<const double> samples, std::size_t num_channels,
    double sample_rate) {
  MultiChannelSignal sig;
  sig.sample_rate = sample_rate;
  sig.channels.assign(num_channels,
                      std::vector<double>(samples.begin(), samples.end()));
  return sig;
}

}  // namespace mcsv
