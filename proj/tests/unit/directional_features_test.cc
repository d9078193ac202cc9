// tests/unit/directional_features_test.cc

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
#include "mcsv/directional_features.h"
#include "mcsv/errors.h"
#include "oracles.h"

namespace mcsv {
namespace {

double Gain(std::span<const Complex> w, std::span<const Complex> d) {
  Complex acc = 0;
  for (std::size_t m = 0; m < w.size(); ++m) acc += std::conj(w[m]) * d[m];
  return std::abs(acc);
}

}  // namespace

TEST_CASE("delay and sum grid layout") {
  ArrayGeometry g = BuildNonUniform15Array();
  BeamGrid grid = DelayAndSumGrid(g, StftConfig{});
  REQUIRE(grid.num_looks() == 10);
  for (std::size_t p = 0; p < 10; ++p)
    CHECK(grid.look_angles()[p] == doctest::Approx(9.0 + 18.0 * p).epsilon(1e-12));
  for (std::size_t p = 0; p < 10; ++p)
    for (Complex w : grid.Weights(p, 0)) CHECK(std::abs(w - Complex(1.0 / 15)) < 1e-15);
  BeamGridOptions odd;
  odd.num_looks = 9;
  BeamGrid g9 = DelayAndSumGrid(g, StftConfig{}, odd);
  CHECK(g9.look_angles()[4] == 90.0);
  for (std::size_t f = 0; f < 257; ++f)
    for (Complex w : g9.Weights(4, f)) {
      CHECK(std::abs(w.imag()) < 1e-15);
      CHECK(w.real() == doctest::Approx(1.0 / 15));
    }
  odd.num_looks = 1;
  CHECK_THROWS_AS(DelayAndSumGrid(g, StftConfig{}, odd), Error);
}

TEST_CASE("unit gain toward the look and no more elsewhere") {
  ArrayGeometry g = BuildNonUniform15Array();
  BeamGrid grid = DelayAndSumGrid(g, StftConfig{});
  std::mt19937 gen(1);
  for (std::size_t p = 0; p < 10; ++p)
    for (std::size_t f = 0; f < 257; ++f) {
      double hz = f * 16000.0 / 512;
      auto d = SteeringVector(g, hz, grid.look_angles()[p]);
      CHECK(Gain(grid.Weights(p, f), d) == doctest::Approx(1.0).epsilon(1e-9));
      std::size_t q = gen() % 10;
      auto dq = SteeringVector(g, hz, grid.look_angles()[q]);
      CHECK(Gain(grid.Weights(p, f), dq) <= 1.0 + 1e-12);
    }
}

TEST_CASE("nearest look") {
  BeamGrid grid = DelayAndSumGrid(BuildNonUniform15Array(), StftConfig{});
  CHECK(grid.NearestLook(1.0) == 0);
  CHECK(grid.NearestLook(90.0) == 4);
  CHECK(grid.NearestLook(100.0) == 5);
  CHECK(grid.NearestLook(179.0) == 9);
}

TEST_CASE("dpr normalization, range and scale invariance") {
  ArrayGeometry g = BuildNonUniform15Array();
  BeamGrid grid = DelayAndSumGrid(g, StftConfig{});
  std::mt19937_64 gen(12);
  std::normal_distribution<double> nd;
  MultiChannelSignal s, s2;
  for (int m = 0; m < 15; ++m) {
    std::vector<double> x(2400);
    for (auto &v : x) v = nd(gen);
    s.channels.push_back(x);
    for (auto &v : x) v *= 0.3;
    s2.channels.push_back(x);
  }
  auto spec = Stft(s, StftConfig{});
  auto all = DprAllLooks(spec, grid);
  auto all2 = DprAllLooks(Stft(s2, StftConfig{}), grid);
  REQUIRE(all.size() == 10);
  for (std::size_t t = 0; t < spec.num_frames(); ++t)
    for (std::size_t f = 0; f < 257; ++f) {
      double sum = 0;
      for (std::size_t p = 0; p < 10; ++p) {
        CHECK(all[p](t, f) >= 0.0);
        CHECK(all[p](t, f) <= 1.0);
        CHECK(std::abs(all[p](t, f) - all2[p](t, f)) < 1e-9);
        sum += all[p](t, f);
      }
      CHECK(std::abs(sum - 1.0) < 1e-9);
    }
  MultiChannelSignal zero;
  zero.channels.assign(15, std::vector<double>(800, 0.0));
  for (const auto &plane : DprAllLooks(Stft(zero, StftConfig{}), grid))
    for (double v : plane.data()) CHECK(v == 0.1);
}

TEST_CASE("dpr selects the source look") {
  ArrayGeometry g = BuildNonUniform15Array();
  BeamGrid grid = DelayAndSumGrid(g, StftConfig{});
  for (std::size_t p = 0; p < 10; ++p) {
    MultiChannelSignal s;
    s.channels = oracle::PlaneWaveTone(g.positions(), grid.look_angles()[p], 1000.0, 4000);
    auto spec = Stft(s, StftConfig{});
    auto all = DprAllLooks(spec, grid);
    for (std::size_t t = 0; t < spec.num_frames(); ++t) {
      std::size_t best = 0;
      for (std::size_t q = 0; q < 10; ++q)
        if (all[q](t, 32) > all[best](t, 32)) best = q;
      CHECK(best == p);
    }
    auto plane = Dpr(spec, grid, SourceAngleTrack::Constant(spec.num_frames(), grid.look_angles()[p] + 2));
    CHECK(plane.label() == "dpr:target");
    CHECK(plane(1, 32) == all[p](1, 32));
  }
  // identical channels: broadside, the two looks flanking 90 tie
  MultiChannelSignal s;
  s.channels.assign(15, oracle::Tone(1000.0, 4000));
  auto all = DprAllLooks(Stft(s, StftConfig{}), grid);
  for (std::size_t q = 0; q < 10; ++q) CHECK(all[q](3, 32) <= all[4](3, 32) + 1e-12);
  CHECK(all[4](3, 32) == doctest::Approx(all[5](3, 32)).epsilon(1e-9));
}

TEST_CASE("dpr dimension checks") {
  ArrayGeometry g = BuildNonUniform15Array();
  BeamGrid grid = DelayAndSumGrid(g, StftConfig{});
  MultiChannelSignal s;
  s.channels.assign(3, std::vector<double>(800, 1.0));
  CHECK_THROWS_AS(DprAllLooks(Stft(s, StftConfig{}), grid), Error);
  CHECK_THROWS_AS(BeamGridOptions::FromJson(nlohmann::json::parse(R"({"design":"mvdr"})")), Error);
  BeamGridOptions back = BeamGridOptions::FromJson(BeamGridOptions{}.ToJson());
  CHECK(back.num_looks == 10);
}

}  // namespace mcsv
