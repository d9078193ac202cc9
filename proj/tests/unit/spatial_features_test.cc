// tests/unit/spatial_features_test.cc

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
#include <random>

#include "doctest.h"
#include "mcsv/array_geometry.h"
#include "mcsv/dsp_core.h"
#include "mcsv/errors.h"
#include "mcsv/spatial_features.h"
#include "oracles.h"

namespace mcsv {
namespace {

MultiChannelSpectrogram Spec(std::vector<std::vector<double>> ch) {
  MultiChannelSignal s;
  s.channels = std::move(ch);
  return Stft(s, StftConfig{});
}

}  // namespace

TEST_CASE("ipd of identical channels") {
  auto x = oracle::Tone(440.0, 3000);
  auto spec = Spec({x, x, x});
  MicPairSet pairs{"t", {{0, 1}, {2, 0}}};
  auto raw = Ipd(spec, pairs, IpdKind::kRaw);
  auto cos = Ipd(spec, pairs, IpdKind::kCos);
  auto sin = Ipd(spec, pairs, IpdKind::kSin);
  REQUIRE(raw.size() == 2);
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t i = 0; i < raw[k].data().size(); ++i) {
      CHECK(raw[k].data()[i] == 0.0);
      CHECK(cos[k].data()[i] == 1.0);
      CHECK(sin[k].data()[i] == 0.0);
    }
  CHECK(cos[0].label() == "cosipd[0,1]");
}

TEST_CASE("ipd of a delayed tone") {
  auto x = oracle::Tone(1000.0, 4000);
  auto y = oracle::Tone(1000.0, 4000, 16000, 2.0);
  auto spec = Spec({x, y});
  auto ij = Ipd(spec, MicPairSet{"t", {{0, 1}}}, IpdKind::kRaw)[0];
  auto ji = Ipd(spec, MicPairSet{"t", {{1, 0}}}, IpdKind::kRaw)[0];
  for (std::size_t t = 0; t < ij.num_frames(); ++t) {
    CHECK(std::abs(ij(t, 32) - oracle::kPi / 4) < 0.02);
    for (std::size_t f = 0; f < 257; ++f) {
      double a = ij(t, f), b = ji(t, f);
      // antisymmetric except on the branch cut
      if (std::abs(a) < oracle::kPi - 1e-9) CHECK(a == -b);
      CHECK(a > -oracle::kPi);
      CHECK(a <= oracle::kPi);
    }
  }
  auto c = Ipd(spec, MicPairSet{"t", {{0, 1}}}, IpdKind::kCos)[0];
  auto s = Ipd(spec, MicPairSet{"t", {{0, 1}}}, IpdKind::kSin)[0];
  auto s2 = Ipd(spec, MicPairSet{"t", {{1, 0}}}, IpdKind::kSin)[0];
  for (std::size_t i = 0; i < c.data().size(); ++i) {
    CHECK(std::abs(c.data()[i] * c.data()[i] + s.data()[i] * s.data()[i] - 1) < 1e-9);
    CHECK(s.data()[i] == doctest::Approx(-s2.data()[i]).epsilon(1e-12));
  }
}

TEST_CASE("ipd scale invariance and zero bins") {
  std::mt19937_64 gen(4);
  std::normal_distribution<double> nd;
  std::vector<double> a(2000), b(2000);
  for (auto &v : a) v = nd(gen);
  for (auto &v : b) v = nd(gen);
  std::vector<double> a3(a), b3(b);
  for (auto &v : a3) v *= 3.7;
  for (auto &v : b3) v *= 3.7;
  auto p1 = Ipd(Spec({a, b}), MicPairSet{"t", {{0, 1}}}, IpdKind::kRaw)[0];
  auto p2 = Ipd(Spec({a3, b3}), MicPairSet{"t", {{0, 1}}}, IpdKind::kRaw)[0];
  for (std::size_t i = 0; i < p1.data().size(); ++i)
    CHECK(std::abs(p1.data()[i] - p2.data()[i]) < 1e-12);
  auto z = Ipd(Spec({a, std::vector<double>(2000, 0.0)}), MicPairSet{"t", {{0, 1}}},
               IpdKind::kRaw)[0];
  for (double v : z.data()) CHECK(v == 0.0);
  CHECK_THROWS_AS(Ipd(Spec({a, b}), MicPairSet{"t", {{0, 2}}}, IpdKind::kRaw), Error);
}

TEST_CASE("phase0") {
  auto spec = Spec({std::vector<double>(1000, 2.0)});
  auto p = Phase0(spec);
  CHECK(p(0, 0) == 0.0);
  auto neg = Phase0(Spec({std::vector<double>(1000, -2.0)}));
  CHECK(neg(0, 0) == doctest::Approx(oracle::kPi));
  std::mt19937_64 gen(8);
  std::normal_distribution<double> nd;
  std::vector<double> x(1500);
  for (auto &v : x) v = nd(gen);
  auto sx = Spec({x});
  auto px = Phase0(sx);
  for (std::size_t t = 0; t < sx.num_frames(); ++t)
    for (std::size_t f = 0; f < 257; ++f)
      CHECK(px(t, f) == std::atan2(sx.at(0, t, f).imag(), sx.at(0, t, f).real()));
}

TEST_CASE("tpd closed form") {
  ArrayGeometry g = BuildNonUniform15Array();
  MicPairSet v0 = BuiltinPairSet("v0");
  auto flat = Tpd(g, v0, SourceAngleTrack::Constant(3, 90.0), 512);
  for (const auto &p : flat)
    for (double v : p.data()) CHECK(std::abs(v) < 1e-12);
  // 0.07 m at endfire: use 1000 Hz = bin 32; the track must stay inside
  // (0, 180) so take the limit analytically at 1e-9 degrees.
  auto near = Tpd(g, MicPairSet{"t", {{0, 1}}}, SourceAngleTrack::Constant(1, 1e-9), 512)[0];
  CHECK(near(0, 32) == doctest::Approx(2 * oracle::kPi * 1000 * 0.07 / 343).epsilon(1e-9));
  CHECK(near(0, 32) == doctest::Approx(1.2823).epsilon(1e-4));
  CHECK(near(0, 0) == 0.0);
  auto t60 = Tpd(g, v0, SourceAngleTrack::Constant(2, 60.0), 512);
  for (const auto &p : t60)
    for (std::size_t k = 1; k <= 128; ++k) CHECK(p(1, 2 * k) == 2 * p(1, k));
  CHECK_THROWS_AS(Tpd(g, v0, SourceAngleTrack::Constant(2, 180.0), 512), Error);
  CHECK_THROWS_AS(Tpd(g, v0, SourceAngleTrack::Constant(2, 0.0), 512), Error);
}

TEST_CASE("angle feature") {
  ArrayGeometry g = BuildNonUniform15Array();
  MicPairSet v0 = BuiltinPairSet("v0");
  for (double deg : {30.0, 60.0, 120.0}) {
    MultiChannelSignal s;
    s.channels = oracle::PlaneWaveTone(g.positions(), deg, 1000.0, 6400);
    auto spec = Stft(s, StftConfig{});
    auto track = SourceAngleTrack::Constant(spec.num_frames(), deg);
    auto af = AngleFeature(spec, g, v0, track);
    CHECK(af.label() == "af:target");
    for (std::size_t t = 0; t < af.num_frames(); ++t) {
      CHECK(af(t, 32) >= 0.95 * 6);
      for (std::size_t f = 0; f < 257; ++f) {
        CHECK(af(t, f) <= 6.0 + 1e-12);
        CHECK(af(t, f) >= -6.0 - 1e-12);
      }
    }
  }
}

TEST_CASE("angle feature extremes") {
  // Y_m = sign_m exp(-i 2 pi f tau_m) gives IPD == TPD (+ pi where the signs
  // of a pair differ).
  ArrayGeometry g = BuildNonUniform15Array();
  MicPairSet v0 = BuiltinPairSet("v0");
  const double deg = 75.0;
  auto build = [&](const std::vector<double> &sign) {
    MultiChannelSpectrogram spec(15, 3, 512, 16000);
    for (std::size_t m = 0; m < 15; ++m)
      for (std::size_t t = 0; t < 3; ++t)
        for (std::size_t f = 0; f < 257; ++f) {
          double tau = g.RelativeDelay(m, deg);
          spec.at(m, t, f) = sign[m] * std::polar(1.0, -2 * oracle::kPi * spec.BinFrequency(f) * tau);
        }
    return spec;
  };
  auto track = SourceAngleTrack::Constant(3, deg);
  std::vector<double> same(15, 1.0), flip(15, 1.0);
  for (std::size_t m : {7, 11, 9}) flip[m] = -1.0;
  auto aligned = AngleFeature(build(same), g, v0, track);
  auto opposed = AngleFeature(build(flip), g, v0, track);
  for (std::size_t t = 0; t < 3; ++t)
    for (std::size_t f = 1; f < 257; ++f) {
      CHECK(aligned(t, f) == doctest::Approx(6.0).epsilon(1e-12));
      CHECK(opposed(t, f) == doctest::Approx(-6.0).epsilon(1e-12));
    }
}

}  // namespace mcsv
