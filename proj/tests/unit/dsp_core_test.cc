// tests/unit/dsp_core_test.cc

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
#include "mcsv/dsp_core.h"
#include "mcsv/errors.h"
#include "oracles.h"

namespace mcsv {
namespace {

MultiChannelSignal Mono(std::vector<double> x) {
  MultiChannelSignal s;
  s.channels.push_back(std::move(x));
  return s;
}

std::vector<double> Noise(std::size_t n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> d;
  std::vector<double> x(n);
  for (auto &v : x) v = d(gen);
  return x;
}

}  // namespace

TEST_CASE("stft dimensions and frame count") {
  StftConfig cfg;
  CHECK(cfg.NumBins() == 257);
  CHECK(cfg.WindowLength(16000) == 400);
  CHECK(cfg.HopLength(16000) == 160);
  std::mt19937 gen(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t len = 400 + gen() % 20000;
    CHECK(NumFrames(len, cfg, 16000) == (len - 400) / 160 + 1);
  }
  CHECK_THROWS_AS(NumFrames(399, cfg, 16000), Error);
  try {
    Stft(Mono(std::vector<double>(100, 1.0)), cfg);
    FAIL("expected size error");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kSize);
  }
  auto spec = Stft(Mono(std::vector<double>(16000, 0.0)), cfg);
  CHECK(spec.num_frames() == 98);
  CHECK(spec.frame_times.size() == 98);
  CHECK(spec.frame_times[0] == doctest::Approx(200.0 / 16000));
}

TEST_CASE("stft config validation") {
  StftConfig cfg;
  cfg.dft_size = 256;
  CHECK_THROWS_AS(cfg.Validate(16000), Error);
  cfg = StftConfig{};
  cfg.hop_ms = 30;
  CHECK_THROWS_AS(cfg.Validate(16000), Error);
  StftConfig back = StftConfig::FromJson(StftConfig{}.ToJson());
  CHECK(back.dft_size == 512);
  CHECK(back.window == WindowKind::kHann);
}

TEST_CASE("stft trivial inputs") {
  auto spec = Stft(Mono(std::vector<double>(4000, 1.0)), StftConfig{});
  std::vector<double> win = oracle::PeriodicHann(400);
  auto ref = oracle::Dft(win, 512);
  for (std::size_t t = 0; t < spec.num_frames(); ++t)
    for (std::size_t f = 0; f < spec.num_bins(); ++f)
      CHECK(std::abs(spec.at(0, t, f) - ref[f]) < 1e-9);
  auto zero = Stft(Mono(std::vector<double>(4000, 0.0)), StftConfig{});
  for (std::size_t t = 0; t < zero.num_frames(); ++t)
    for (std::size_t f = 0; f < zero.num_bins(); ++f) CHECK(zero.at(0, t, f) == Complex{});
}

TEST_CASE("stft matches brute force dft") {
  auto x = Noise(3000, 11);
  auto spec = Stft(Mono(x), StftConfig{});
  for (std::size_t t : {0u, 5u, 12u}) {
    auto ref = oracle::Dft(oracle::Frame(x, t), 512);
    for (std::size_t f = 0; f < 257; ++f) CHECK(std::abs(spec.at(0, t, f) - ref[f]) < 1e-9);
  }
  auto tone = oracle::Tone(1000.0, 4000);
  auto ts = Stft(Mono(tone), StftConfig{});
  for (std::size_t t = 0; t < ts.num_frames(); ++t) {
    std::size_t best = 0;
    for (std::size_t f = 0; f < 257; ++f)
      if (std::abs(ts.at(0, t, f)) > std::abs(ts.at(0, t, best))) best = f;
    CHECK(best == 32);
  }
}

TEST_CASE("stft parseval and linearity") {
  auto x = Noise(4000, 5), y = Noise(4000, 6);
  auto sx = Stft(Mono(x), StftConfig{});
  for (std::size_t t = 0; t < sx.num_frames(); ++t) {
    auto fr = oracle::Frame(x, t);
    double time = 0;
    for (double v : fr) time += v * v;
    double freq = std::norm(sx.at(0, t, 0)) + std::norm(sx.at(0, t, 256));
    for (std::size_t f = 1; f < 256; ++f) freq += 2 * std::norm(sx.at(0, t, f));
    CHECK(std::abs(time - freq / 512) <= 1e-6 * time);
  }
  std::vector<double> z(4000);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = 2.5 * x[i] - 0.75 * y[i];
  auto sy = Stft(Mono(y), StftConfig{}), sz = Stft(Mono(z), StftConfig{});
  for (std::size_t t = 0; t < sz.num_frames(); ++t)
    for (std::size_t f = 0; f < 257; ++f)
      CHECK(std::abs(sz.at(0, t, f) - (2.5 * sx.at(0, t, f) - 0.75 * sy.at(0, t, f))) < 1e-9);
}

TEST_CASE("log power spectrum") {
  auto zero = Stft(Mono(std::vector<double>(2000, 0.0)), StftConfig{});
  auto lps = LogPowerSpectrum(zero, 0);
  CHECK(lps.width() == 257);
  CHECK(lps.label() == "lps");
  for (double v : lps.data()) CHECK(v == doctest::Approx(std::log(1e-10)).epsilon(1e-12));
  auto x = Noise(2000, 9);
  auto spec = Stft(Mono(x), StftConfig{});
  auto l2 = LogPowerSpectrum(spec, 0);
  auto ref = oracle::Dft(oracle::Frame(x, 3), 512);
  for (std::size_t f = 0; f < 257; ++f)
    CHECK(std::abs(l2(3, f) - std::log(std::norm(ref[f]) + 1e-10)) < 1e-9);
  CHECK_THROWS_AS(LogPowerSpectrum(spec, 1), Error);
  LpsOptions ten;
  ten.base = LogBase::kTen;
  auto l10 = LogPowerSpectrum(spec, 0, ten);
  CHECK(l10(3, 7) == doctest::Approx(l2(3, 7) / std::log(10.0)).epsilon(1e-12));
}

TEST_CASE("mel scale and filterbank") {
  CHECK(HzToMel(700.0) == doctest::Approx(2595.0 * std::log10(2.0)).epsilon(1e-12));
  CHECK(HzToMel(700.0) == doctest::Approx(781.17).epsilon(1e-4));
  CHECK(MelToHz(HzToMel(1234.5)) == doctest::Approx(1234.5).epsilon(1e-12));
  MelFilterbank fb(MelOptions{}, 512, 16000);
  REQUIRE(fb.num_mels() == 80);
  for (std::size_t m = 0; m < 80; ++m) {
    auto w = fb.Weights(m);
    std::size_t peak = 0;
    for (std::size_t f = 0; f < w.size(); ++f) {
      CHECK(w[f] >= 0.0);
      if (w[f] > w[peak]) peak = f;
    }
    CHECK(w[peak] > 0.0);
    for (std::size_t f = 1; f <= peak; ++f) CHECK(w[f] >= w[f - 1]);
    for (std::size_t f = peak + 1; f < w.size(); ++f) CHECK(w[f] <= w[f - 1]);
    // below ~500 Hz the bands are narrower than one bin
    const double step = (HzToMel(7600.0) - HzToMel(20.0)) / 81;
    if (m + 1 < 80 && MelToHz(HzToMel(20.0) + (m + 1) * step) > 500.0) {
      auto next = fb.Weights(m + 1);
      bool overlap = false;
      for (std::size_t f = 0; f < w.size(); ++f) overlap |= w[f] > 0 && next[f] > 0;
      CHECK(overlap);
    }
  }
  auto tone = oracle::Tone(1000.0, 4000);
  auto fbank = LogMelFilterbank(Stft(Mono(tone), StftConfig{}), 0);
  CHECK(fbank.width() == 80);
  CHECK(fbank.label() == "fbank80");
  std::size_t nearest = 0;
  for (std::size_t m = 0; m < 80; ++m)
    if (std::abs(fb.centers_hz()[m] - 1000) < std::abs(fb.centers_hz()[nearest] - 1000))
      nearest = m;
  for (std::size_t t = 0; t < fbank.num_frames(); ++t) {
    std::size_t best = 0;
    for (std::size_t m = 0; m < 80; ++m)
      if (fbank(t, m) > fbank(t, best)) best = m;
    CHECK(best == nearest);
  }
  auto zero = LogMelFilterbank(Stft(Mono(std::vector<double>(1000, 0.0)), StftConfig{}), 0);
  for (double v : zero.data()) CHECK(v == doctest::Approx(std::log(1e-10)));
  MelOptions bad;
  bad.fmax = 9000;
  CHECK_THROWS_AS(MelFilterbank(bad, 512, 16000), Error);
}

TEST_CASE("fractional delay") {
  std::vector<double> imp(64, 0.0);
  imp[0] = 1.0;
  auto d3 = FractionalDelay(imp, 3.0);
  for (std::size_t n = 0; n < 64; ++n) CHECK(std::abs(d3[n] - (n == 3 ? 1.0 : 0.0)) < 1e-6);
  auto x = Noise(500, 2);
  auto d0 = FractionalDelay(x, 0.0);
  for (std::size_t n = 40; n < 460; ++n) CHECK(std::abs(d0[n] - x[n]) < 1e-9);
  auto tone = oracle::Tone(1000.0, 4000);
  auto half = FractionalDelay(tone, 0.5);
  CHECK(oracle::CorrelationLag(tone, half, 4, 100, 3900) == doctest::Approx(0.5).epsilon(0.02));
  // against the analytic delayed tone
  auto exact = oracle::Tone(1000.0, 4000, 16000, 2.37);
  auto frac = FractionalDelay(tone, 2.37);
  double err = 0;
  for (std::size_t n = 200; n < 3800; ++n) err = std::max(err, std::abs(frac[n] - exact[n]));
  CHECK(err < 1e-3);
  CHECK_THROWS_AS(FractionalDelay(x, 600.0), Error);
  CHECK_THROWS_AS(FractionalDelay(x, 1.5, 4), Error);
}

TEST_CASE("window shapes") {
  auto hann = MakeWindow(WindowKind::kHann, 400);
  auto ref = oracle::PeriodicHann(400);
  for (std::size_t i = 0; i < 400; ++i) CHECK(std::abs(hann[i] - ref[i]) < 1e-15);
  CHECK(ParseWindowKind("hamming") == WindowKind::kHamming);
  CHECK_THROWS_AS(ParseWindowKind("kaiser"), Error);
}

}  // namespace mcsv
