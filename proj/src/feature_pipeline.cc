// src/feature_pipeline.cc

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

#include "mcsv/feature_pipeline.h"

#include <cmath>
#include <set>

#include "mcsv/errors.h"
#include "mcsv/spatial_features.h"

namespace mcsv {
namespace {

// "name(arg)" -> arg, or empty when `id` has no parenthesized argument.
std::optional<std::string> Argument(std::string_view id, std::string_view name) {
  if (id.size() < name.size() + 2 || id.substr(0, name.size()) != name ||
      id[name.size()] != '(' || id.back() != ')')
    return std::nullopt;
  return std::string(id.substr(name.size() + 1, id.size() - name.size() - 2));
}

std::size_t SourceCount(const std::string &arg, std::string_view id) {
  Require(arg == "1" || arg == "2", ErrorCode::kParse,
          "feature '" + std::string(id) + "' needs (1) or (2)");
  return arg == "1" ? 1 : 2;
}

std::size_t PlaneWidth(const FeatureRequest &req, const PipelineConfig &cfg) {
  switch (req.kind) {
    case FeatureKind::kFbank: return req.num_mels;
    case FeatureKind::kMultChanSinc: return cfg.sinc.num_filters;
    default: return cfg.stft.NumBins();
  }
}

}  // namespace

FeatureRequest FeatureRequest::Parse(std::string_view id) {
  FeatureRequest req;
  if (id == "lps") {
    req.kind = FeatureKind::kLps;
  } else if (id == "phase0") {
    req.kind = FeatureKind::kPhase0;
  } else if (id == "multchansinc") {
    req.kind = FeatureKind::kMultChanSinc;
  } else if (id.starts_with("fbank") && id.size() > 5 &&
             id.find_first_not_of("0123456789", 5) == std::string_view::npos) {
    req.kind = FeatureKind::kFbank;
    req.num_mels = std::stoul(std::string(id.substr(5)));
    Require(req.num_mels >= 1, ErrorCode::kParse, "fbank needs >= 1 mel band");
  } else if (auto a = Argument(id, "cosipd")) {
    req.kind = FeatureKind::kCosIpd;
    req.pair_set = *a;
  } else if (auto a = Argument(id, "sinipd")) {
    req.kind = FeatureKind::kSinIpd;
    req.pair_set = *a;
  } else if (auto a = Argument(id, "dpr")) {
    req.kind = FeatureKind::kDpr;
    req.sources = SourceCount(*a, id);
  } else if (auto a = Argument(id, "af")) {
    req.kind = FeatureKind::kAf;
    req.sources = SourceCount(*a, id);
  } else {
    Fail(ErrorCode::kParse, "unknown feature '" + std::string(id) + "'");
  }
  if (req.kind == FeatureKind::kCosIpd || req.kind == FeatureKind::kSinIpd)
    BuiltinPairSet(req.pair_set);
  return req;
}

std::string FeatureRequest::Identifier() const {
  switch (kind) {
    case FeatureKind::kFbank: return "fbank" + std::to_string(num_mels);
    case FeatureKind::kLps: return "lps";
    case FeatureKind::kCosIpd: return "cosipd(" + pair_set + ")";
    case FeatureKind::kSinIpd: return "sinipd(" + pair_set + ")";
    case FeatureKind::kPhase0: return "phase0";
    case FeatureKind::kDpr: return "dpr(" + std::to_string(sources) + ")";
    case FeatureKind::kAf: return "af(" + std::to_string(sources) + ")";
    case FeatureKind::kMultChanSinc: return "multchansinc";
  }
  return "";
}

void PipelineConfig::Validate() const {
  Require(!features.empty(), ErrorCode::kValidation,
          "pipeline feature list is empty");
  std::set<std::string> seen;
  for (const auto &req : features) {
    Require(seen.insert(req.Identifier()).second, ErrorCode::kValidation,
            "duplicate feature '" + req.Identifier() + "'");
  }
  const std::size_t width = PlaneWidth(features.front(), *this);
  for (const auto &req : features) {
    Require(PlaneWidth(req, *this) == width, ErrorCode::kValidation,
            "feature '" + req.Identifier() + "' is " +
                std::to_string(PlaneWidth(req, *this)) +
                " wide but the stack is " + std::to_string(width) +
                " wide; mixed widths are not concatenated");
  }
  BuiltinPairSet(sinc_pairs);
  BuiltinPairSet(af_pairs);
}

PipelineConfig PipelineConfig::FromJson(const nlohmann::json &doc) {
  PipelineConfig cfg;
  try {
    for (const auto &id : doc.at("features"))
      cfg.features.push_back(FeatureRequest::Parse(id.get<std::string>()));
    if (doc.contains("stft")) cfg.stft = StftConfig::FromJson(doc.at("stft"));
    if (doc.contains("grid")) cfg.grid = BeamGridOptions::FromJson(doc.at("grid"));
    if (doc.contains("sinc")) {
      const auto &s = doc.at("sinc");
      cfg.sinc = SincBankOptions::FromJson(s);
      cfg.sinc_pairs = s.value("pairs", cfg.sinc_pairs);
    }
    if (doc.contains("lps")) {
      const auto &l = doc.at("lps");
      cfg.lps.floor_eps = l.value("floor_eps", cfg.lps.floor_eps);
      std::string base = l.value("log", std::string("natural"));
      Require(base == "natural" || base == "log10", ErrorCode::kParse,
              "lps.log must be 'natural' or 'log10'");
      cfg.lps.base = base == "natural" ? LogBase::kNatural : LogBase::kTen;
    }
    if (doc.contains("mel")) {
      const auto &m = doc.at("mel");
      cfg.mel.fmin = m.value("fmin", cfg.mel.fmin);
      cfg.mel.fmax = m.value("fmax", cfg.mel.fmax);
      cfg.mel.floor_eps = m.value("floor_eps", cfg.mel.floor_eps);
    }
    cfg.af_pairs = doc.value("af_pairs", cfg.af_pairs);
    cfg.normalize = doc.value("normalize", false);
  } catch (const nlohmann::json::exception &e) {
    Fail(ErrorCode::kParse, std::string("pipeline config: ") + e.what());
  }
  cfg.Validate();
  return cfg;
}

nlohmann::json PipelineConfig::ToJson() const {
  nlohmann::json ids = nlohmann::json::array();
  for (const auto &req : features) ids.push_back(req.Identifier());
  nlohmann::json sinc_doc = sinc.ToJson();
  sinc_doc["pairs"] = sinc_pairs;
  return {{"features", ids},
          {"stft", stft.ToJson()},
          {"grid", grid.ToJson()},
          {"sinc", sinc_doc},
          {"lps",
           {{"floor_eps", lps.floor_eps},
            {"log", lps.base == LogBase::kNatural ? "natural" : "log10"}}},
          {"mel",
           {{"fmin", mel.fmin}, {"fmax", mel.fmax}, {"floor_eps", mel.floor_eps}}},
          {"af_pairs", af_pairs},
          {"normalize", normalize}};
}

double SceneInfo::SecondaryAngle() const {
  if (interference_present && interference_deg) return *interference_deg;
  if (noise_deg) return *noise_deg;
  Fail(ErrorCode::kUndefinedOnClean,
       "undefined-on-clean: dpr(2)/af(2) need an interference or noise source");
}

SourceRole SceneInfo::SecondaryRole() const {
  SecondaryAngle();
  return interference_present && interference_deg ? SourceRole::kInterference
                                                  : SourceRole::kNoise;
}

SceneInfo SceneInfo::FromManifest(const nlohmann::json &entry) {
  SceneInfo scene;
  try {
    const auto &angles = entry.at("angles");
    scene.target_deg = angles.at("target").get<double>();
    if (angles.contains("interference") && !angles.at("interference").is_null())
      scene.interference_deg = angles.at("interference").get<double>();
    if (angles.contains("noise") && !angles.at("noise").is_null())
      scene.noise_deg = angles.at("noise").get<double>();
    scene.interference_present =
        entry.value("interference_present", scene.interference_deg.has_value());
  } catch (const nlohmann::json::exception &e) {
    Fail(ErrorCode::kParse, std::string("manifest entry: ") + e.what());
  }
  return scene;
}

FeatureStack RunPipeline(const MultiChannelSignal &sig, const SceneInfo &scene,
                         const PipelineConfig &cfg, const ArrayGeometry &geom) {
  cfg.Validate();
  sig.Validate();
  Require(sig.sample_rate == geom.sample_rate(), ErrorCode::kInvalidArgument,
          "signal and array sample rates differ");

  // dpr(2)/af(2) on a clean scene fails before any work is done.
  for (const auto &req : cfg.features) {
    if ((req.kind == FeatureKind::kDpr || req.kind == FeatureKind::kAf) &&
        req.sources == 2)
      scene.SecondaryAngle();
  }

  const MultiChannelSpectrogram spec = Stft(sig, cfg.stft);
  const std::size_t frames = spec.num_frames();
  auto tracks = [&](std::size_t sources) {
    std::vector<SourceAngleTrack> out{
        SourceAngleTrack::Constant(frames, scene.target_deg, SourceRole::kTarget)};
    if (sources == 2) {
      out.push_back(SourceAngleTrack::Constant(frames, scene.SecondaryAngle(),
                                               scene.SecondaryRole()));
    }
    return out;
  };
  auto spatial_check = [&] {
    Require(sig.NumChannels() == geom.NumMics(), ErrorCode::kSize,
            "signal has " + std::to_string(sig.NumChannels()) +
                " channels, array has " + std::to_string(geom.NumMics()));
  };

  FeatureStack stack(frames);
  std::optional<BeamGrid> grid;
  for (const auto &req : cfg.features) {
    const std::string id = req.Identifier();
    auto append_all = [&](FeatureMap planes) {
      for (auto &p : planes) {
        p.set_label(id + ":" + p.label());
        stack.Append(p);
      }
    };
    switch (req.kind) {
      case FeatureKind::kFbank: {
        MelOptions mel = cfg.mel;
        mel.num_mels = req.num_mels;
        FeaturePlane p = LogMelFilterbank(spec, 0, mel);
        p.set_label(id);
        stack.Append(p);
        break;
      }
      case FeatureKind::kLps: {
        FeaturePlane p = LogPowerSpectrum(spec, 0, cfg.lps);
        p.set_label(id);
        stack.Append(p);
        break;
      }
      case FeatureKind::kCosIpd:
      case FeatureKind::kSinIpd:
        append_all(Ipd(spec, BuiltinPairSet(req.pair_set),
                       req.kind == FeatureKind::kCosIpd ? IpdKind::kCos
                                                        : IpdKind::kSin));
        break;
      case FeatureKind::kPhase0: {
        FeaturePlane p = Phase0(spec);
        p.set_label(id);
        stack.Append(p);
        break;
      }
      case FeatureKind::kDpr: {
        spatial_check();
        if (!grid) grid = DelayAndSumGrid(geom, cfg.stft, cfg.grid);
        FeatureMap planes;
        for (const auto &track : tracks(req.sources))
          planes.push_back(Dpr(spec, *grid, track));
        append_all(std::move(planes));
        break;
      }
      case FeatureKind::kAf: {
        spatial_check();
        const MicPairSet pairs = BuiltinPairSet(cfg.af_pairs);
        FeatureMap planes;
        for (const auto &track : tracks(req.sources))
          planes.push_back(AngleFeature(spec, geom, pairs, track));
        append_all(std::move(planes));
        break;
      }
      case FeatureKind::kMultChanSinc: {
        SincBankOptions opts = cfg.sinc;
        opts.sample_rate = sig.sample_rate;
        const SincFilterBank bank = SincFilterBank::Initialize(opts);
        const auto channels = BuiltinPairSet(cfg.sinc_pairs).Channels();
        append_all(MultChanSinc(sig, bank, channels, cfg.stft, cfg.lps.floor_eps));
        break;
      }
    }
  }
  if (cfg.normalize) NormalizePlanes(&stack);
  return stack;
}

void NormalizePlanes(FeatureStack *stack) {
  FeatureStack out(stack->num_frames());
  const double frames = static_cast<double>(stack->num_frames());
  for (std::size_t k = 0; k < stack->num_planes(); ++k) {
    StackPlane p = stack->plane(k);
    for (std::size_t d = 0; d < p.width; ++d) {
      double mean = 0.0, sq = 0.0;
      for (std::size_t t = 0; t < stack->num_frames(); ++t)
        mean += p.values[t * p.width + d];
      mean /= frames;
      for (std::size_t t = 0; t < stack->num_frames(); ++t) {
        double v = p.values[t * p.width + d] - mean;
        sq += v * v;
      }
      const double stddev = std::sqrt(sq / frames);
      for (std::size_t t = 0; t < stack->num_frames(); ++t) {
        double v = p.values[t * p.width + d] - mean;
        p.values[t * p.width + d] =
            static_cast<float>(stddev > 0 ? v / stddev : 0.0);
      }
    }
    out.Append(std::move(p));
  }
  *stack = std::move(out);
}

FeatureStack SincBankToStack(const SincFilterBank &bank) {
  FeatureStack stack(1);
  auto to_float = [](const std::vector<double> &v) {
    return std::vector<float>(v.begin(), v.end());
  };
  stack.Append(StackPlane{"sinc_raw_low", bank.num_filters(),
                          to_float(bank.raw_low())});
  stack.Append(StackPlane{"sinc_raw_band", bank.num_filters(),
                          to_float(bank.raw_band())});
  stack.Append(StackPlane{"sinc_shape", 2,
                          {static_cast<float>(bank.taps()),
                           static_cast<float>(bank.sample_rate())}});
  return stack;
}

SincFilterBank SincBankFromStack(const FeatureStack &stack) {
  Require(stack.num_frames() == 1 && stack.num_planes() == 3 &&
              stack.plane(0).label == "sinc_raw_low" &&
              stack.plane(1).label == "sinc_raw_band" &&
              stack.plane(2).label == "sinc_shape" &&
              stack.plane(2).width == 2,
          ErrorCode::kValidation, "stack does not hold sinc bank parameters");
  const auto &lo = stack.plane(0).values, &band = stack.plane(1).values;
  return SincFilterBank(std::vector<double>(lo.begin(), lo.end()),
                        std::vector<double>(band.begin(), band.end()),
                        static_cast<std::size_t>(stack.plane(2).values[0]),
                        stack.plane(2).values[1]);
}

}  // namespace mcsv
