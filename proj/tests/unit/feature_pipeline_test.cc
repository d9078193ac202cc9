// tests/unit/feature_pipeline_test.cc

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
#include <cstring>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "mcsv/errors.h"
#include "mcsv/feature_io.h"
#include "mcsv/feature_pipeline.h"
#include "oracles.h"

namespace mcsv {
namespace {

MultiChannelSignal PlaneWave(double deg, std::size_t n = 4800) {
  MultiChannelSignal s;
  s.channels = oracle::PlaneWaveTone(BuildNonUniform15Array().positions(), deg, 1000.0, n);
  std::mt19937_64 gen(3);
  std::normal_distribution<double> nd(0.0, 0.01);
  for (auto &ch : s.channels)
    for (auto &v : ch) v += nd(gen);
  return s;
}

PipelineConfig Config(std::vector<std::string> ids) {
  nlohmann::json doc = {{"features", ids}};
  return PipelineConfig::FromJson(doc);
}

ErrorCode CodeOf(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kInvalidArgument;
}

FeatureStack RandomStack(std::mt19937_64 &gen, std::size_t frames) {
  std::normal_distribution<double> nd;
  FeatureStack stack(frames);
  for (std::size_t p = 0; p < 3; ++p) {
    FeaturePlane plane("plane" + std::to_string(p), frames, 5 + p);
    for (auto &v : plane.data()) v = nd(gen);
    stack.Append(plane);
  }
  return stack;
}

}  // namespace

TEST_CASE("feature request parsing") {
  CHECK(FeatureRequest::Parse("cosipd(v0)").kind == FeatureKind::kCosIpd);
  CHECK(FeatureRequest::Parse("cosipd(v0)").pair_set == "v0");
  CHECK(FeatureRequest::Parse("dpr(2)").sources == 2);
  CHECK(FeatureRequest::Parse("fbank80").num_mels == 80);
  CHECK(FeatureRequest::Parse("sinipd(v2)").Identifier() == "sinipd(v2)");
  for (const char *bad : {"dpr(3)", "cosipd(v7)", "mfcc", "af()", "fbank"})
    CHECK_THROWS_AS(FeatureRequest::Parse(bad), Error);
}

TEST_CASE("config validation") {
  CHECK(CodeOf([] { Config({}); }) == ErrorCode::kValidation);
  CHECK(CodeOf([] { Config({"lps", "lps"}); }) == ErrorCode::kValidation);
  CHECK(CodeOf([] { Config({"fbank80", "lps"}); }) == ErrorCode::kValidation);
  CHECK_NOTHROW(Config({"fbank80"}));
  PipelineConfig cfg = Config({"lps", "cosipd(v0)", "dpr(1)", "af(1)"});
  PipelineConfig back = PipelineConfig::FromJson(cfg.ToJson());
  REQUIRE(back.features.size() == 4);
  CHECK(back.features[1].Identifier() == "cosipd(v0)");
}

TEST_CASE("table composition") {
  ArrayGeometry g = BuildNonUniform15Array();
  SceneInfo scene;
  scene.target_deg = 60.0;
  auto sig = PlaneWave(60.0);
  FeatureStack stack =
      RunPipeline(sig, scene, Config({"lps", "cosipd(v0)", "dpr(1)", "af(1)"}), g);
  REQUIRE(stack.num_planes() == 9);
  for (const auto &p : stack.planes()) CHECK(p.width == 257);
  CHECK(stack.plane(0).label == "lps");
  CHECK(stack.plane(1).label == "cosipd(v0):cosipd[0,7]");
  CHECK(stack.plane(7).label == "dpr(1):dpr:target");
  CHECK(stack.plane(8).label == "af(1):af:target");
  CHECK(stack.num_frames() == NumFrames(4800, StftConfig{}, 16000));

  // planes agree with the module functions
  auto spec = Stft(sig, StftConfig{});
  auto lps = LogPowerSpectrum(spec, 0);
  auto af = AngleFeature(spec, g, BuiltinPairSet("v0"),
                         SourceAngleTrack::Constant(spec.num_frames(), 60.0));
  for (std::size_t t = 0; t < stack.num_frames(); ++t)
    for (std::size_t f = 0; f < 257; f += 16) {
      CHECK(stack.plane(0).values[t * 257 + f] == static_cast<float>(lps(t, f)));
      CHECK(stack.plane(8).values[t * 257 + f] == static_cast<float>(af(t, f)));
    }

  auto fb = RunPipeline(sig, scene, Config({"fbank80"}), g);
  REQUIRE(fb.num_planes() == 1);
  CHECK(fb.plane(0).width == 80);

  auto many = RunPipeline(sig, scene, Config({"multchansinc", "phase0", "sinipd(v2)"}), g);
  CHECK(many.num_planes() == 7 + 1 + 10);
}

TEST_CASE("secondary source planes") {
  ArrayGeometry g = BuildNonUniform15Array();
  auto sig = PlaneWave(45.0);
  SceneInfo clean;
  clean.target_deg = 45.0;
  try {
    RunPipeline(sig, clean, Config({"lps", "dpr(2)"}), g);
    FAIL("expected undefined-on-clean");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kUndefinedOnClean);
    CHECK(std::string(e.what()).find("undefined-on-clean") != std::string::npos);
  }
  SceneInfo noisy = clean;
  noisy.noise_deg = 120.0;
  auto s = RunPipeline(sig, noisy, Config({"dpr(2)", "af(2)"}), g);
  CHECK(s.num_planes() == 4);
  auto scene = SceneInfo::FromManifest(nlohmann::json::parse(
      R"({"angles":{"target":30,"interference":100,"noise":150},"interference_present":true})"));
  CHECK(scene.SecondaryAngle() == 100.0);
  CHECK(scene.SecondaryRole() == SourceRole::kInterference);
  scene.interference_present = false;
  CHECK(scene.SecondaryAngle() == 150.0);
}

TEST_CASE("pipeline determinism and normalization") {
  ArrayGeometry g = BuildNonUniform15Array();
  SceneInfo scene;
  scene.target_deg = 100.0;
  auto sig = PlaneWave(100.0);
  auto cfg = Config({"lps", "cosipd(v1)", "af(1)"});
  CHECK(EncodeFeatureStack(RunPipeline(sig, scene, cfg, g)) ==
        EncodeFeatureStack(RunPipeline(sig, scene, cfg, g)));
  cfg.normalize = true;
  auto norm = RunPipeline(sig, scene, cfg, g);
  const auto &p = norm.plane(0);
  for (std::size_t f : {10u, 32u, 200u}) {
    double mean = 0, var = 0;
    for (std::size_t t = 0; t < norm.num_frames(); ++t) mean += p.values[t * 257 + f];
    mean /= norm.num_frames();
    for (std::size_t t = 0; t < norm.num_frames(); ++t)
      var += std::pow(p.values[t * 257 + f] - mean, 2);
    CHECK(std::abs(mean) < 1e-5);
    CHECK(var / norm.num_frames() == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("mcft round trip") {
  std::mt19937_64 gen(9);
  FeatureStack stack = RandomStack(gen, 17);
  auto bytes = EncodeFeatureStack(stack);
  CHECK(std::memcmp(bytes.data(), "MCFT", 4) == 0);
  CHECK(bytes[4] == 1);
  CHECK(bytes[5] == 0);
  FeatureStack back = DecodeFeatureStack(bytes);
  CHECK(back == stack);
  CHECK(EncodeFeatureStack(back) == bytes);
  auto dir = std::filesystem::temp_directory_path() / "mcsv_mcft_test";
  std::filesystem::create_directories(dir);
  auto path = (dir / "x.mcft").string();
  WriteFeatureFile(stack, path);
  CHECK(ReadFeatureFile(path) == stack);
  CHECK(ReadBinaryFile(path) == bytes);
  CHECK(!std::filesystem::exists(path + ".tmp"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("mcft corrupt headers") {
  std::mt19937_64 gen(10);
  auto bytes = EncodeFeatureStack(RandomStack(gen, 4));
  auto magic = bytes;
  magic[0] = 'X';
  CHECK(CodeOf([&] { DecodeFeatureStack(magic); }) == ErrorCode::kBadMagic);
  auto version = bytes;
  version[4] = 2;
  CHECK(CodeOf([&] { DecodeFeatureStack(version); }) == ErrorCode::kUnsupportedVersion);
  auto frames = bytes;
  frames[8] = 200;  // frame count low byte
  CHECK(CodeOf([&] { DecodeFeatureStack(frames); }) == ErrorCode::kTruncated);
  auto cut = bytes;
  cut.resize(cut.size() - 1);
  CHECK(CodeOf([&] { DecodeFeatureStack(cut); }) == ErrorCode::kTruncated);
  auto header_cut = bytes;
  header_cut.resize(10);
  CHECK(CodeOf([&] { DecodeFeatureStack(header_cut); }) == ErrorCode::kTruncated);
  auto trailing = bytes;
  trailing.push_back(0);
  CHECK(CodeOf([&] { DecodeFeatureStack(trailing); }) == ErrorCode::kTrailingData);

  // 65535 planes of width 65535 over 2^32 - 1 frames cannot be addressed
  std::vector<unsigned char> huge = {'M', 'C', 'F', 'T', 1, 0, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff};
  for (int p = 0; p < 65535; ++p) {
    huge.push_back(1);
    huge.push_back('p');
    huge.push_back(0xff);
    huge.push_back(0xff);
  }
  CHECK(CodeOf([&] { DecodeFeatureStack(huge); }) == ErrorCode::kDimensionOverflow);
}

TEST_CASE("stack frame agreement") {
  FeatureStack stack(3);
  CHECK_THROWS_AS(stack.Append(FeaturePlane("x", 4, 2)), Error);
  CHECK_THROWS_AS(stack.Append(StackPlane{"y", 2, std::vector<float>(5)}), Error);
  CHECK_THROWS_AS(stack.Append(StackPlane{std::string(300, 'a'), 1, std::vector<float>(3)}),
                  Error);
}

TEST_CASE("sinc bank serialization") {
  auto bank = SincFilterBank::Initialize(SincBankOptions{});
  auto stack = SincBankToStack(bank);
  auto back = SincBankFromStack(DecodeFeatureStack(EncodeFeatureStack(stack)));
  CHECK(back.taps() == bank.taps());
  CHECK(back.num_filters() == bank.num_filters());
  for (std::size_t i = 0; i < bank.num_filters(); ++i) {
    CHECK(back.raw_low()[i] == static_cast<float>(bank.raw_low()[i]));
    CHECK(back.raw_band()[i] == static_cast<float>(bank.raw_band()[i]));
  }
  CHECK(EncodeFeatureStack(SincBankToStack(back)) == EncodeFeatureStack(stack));
}

}  // namespace mcsv
