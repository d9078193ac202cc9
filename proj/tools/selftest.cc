// tools/selftest.cc

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

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "cli.h"
#include "mcsv/array_geometry.h"
#include "mcsv/dsp_core.h"
#include "mcsv/evaluation.h"
#include "mcsv/objectives.h"
#include "mcsv/sinc_features.h"
#include "mcsv/spatial_features.h"

namespace mcsv::cli {
namespace {

struct Check {
  std::string name;
  double value;
  double expected;
  double tol;
};

std::vector<double> Tone(double hz, std::size_t n, double fs) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = std::sin(2.0 * std::numbers::pi * hz * static_cast<double>(i) / fs);
  return x;
}

}  // namespace

bool RunSelfTest(std::ostream &out) {
  const double fs = 16000.0, pi = std::numbers::pi;
  std::vector<Check> checks;

  // bin 32 of a 512 point DFT is 1000 Hz
  {
    auto sig = MultiChannelSignal::Replicate(Tone(1000.0, 4000, fs), 1, fs);
    auto spec = Stft(sig, StftConfig{});
    std::size_t peak = 0;
    for (std::size_t f = 1; f < spec.num_bins(); ++f)
      if (std::abs(spec.at(0, 5, f)) > std::abs(spec.at(0, 5, peak))) peak = f;
    checks.push_back({"stft_peak_bin", static_cast<double>(peak), 32.0, 0.0});
  }
  {
    auto x = Tone(1000.0, 4000, fs);
    MultiChannelSignal sig;
    sig.sample_rate = fs;
    sig.channels = {x, FractionalDelay(x, 2.0)};
    auto spec = Stft(sig, StftConfig{});
    auto ipd = Ipd(spec, MicPairSet{"t", {{0, 1}}}, IpdKind::kRaw);
    checks.push_back({"ipd_two_sample_delay", ipd[0](10, 32), pi / 4.0, 1e-3});
  }
  checks.push_back({"mel_1000hz", HzToMel(1000.0), 1000.0, 0.5});
  checks.push_back({"mel_roundtrip", MelToHz(HzToMel(4321.0)), 4321.0, 1e-9});
  checks.push_back({"sinc_center_tap", SincBandTap(100.0, 500.0, 0.0),
                    2.0 * (100.0 - 500.0), 1e-12});
  checks.push_back({"softplus_zero", Softplus(0.0), std::log(2.0), 1e-15});
  {
    std::vector<double> scores = {0.9, 0.8, 0.1, 0.2};
    std::vector<std::uint8_t> labels = {1, 1, 0, 0};
    checks.push_back({"eer_separable", Eer(scores, labels), 0.0, 1e-12});
    scores = {0.1, 0.2, 0.9, 0.8};
    checks.push_back({"eer_inverted", Eer(scores, labels), 1.0, 1e-12});
  }
  {
    ArrayGeometry geom = BuildNonUniform15Array();
    checks.push_back({"array_aperture_m", geom.Aperture(), 0.56, 1e-12});
  }

  bool ok = true;
  for (const auto &c : checks) {
    const bool pass = std::abs(c.value - c.expected) <= c.tol;
    ok = ok && pass;
    out << (pass ? "PASS " : "FAIL ") << c.name << " value=" << c.value
        << " expected=" << c.expected << " tol=" << c.tol << "\n";
  }
  return ok;
}

}  // namespace mcsv::cli
