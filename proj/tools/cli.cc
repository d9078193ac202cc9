// tools/cli.cc

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

#include "cli.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <ostream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "mcsv/array_geometry.h"
#include "mcsv/embeddings.h"
#include "mcsv/errors.h"
#include "mcsv/evaluation.h"
#include "mcsv/feature_pipeline.h"
#include "mcsv/objectives.h"
#include "mcsv/rng.h"
#include "mcsv/simulator.h"
#include "mcsv/wav_io.h"

namespace mcsv::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kExpectedRate = 16000.0;

struct ManifestLine {
  std::size_t lineno = 0;
  json entry;
};

std::vector<ManifestLine> ReadManifest(const std::string &path) {
  std::ifstream in(path);
  Require(in.good(), ErrorCode::kIo, "cannot open '" + path + "'");
  std::vector<ManifestLine> lines;
  std::string text;
  for (std::size_t lineno = 1; std::getline(in, text); ++lineno) {
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      lines.push_back({lineno, json::parse(text)});
    } catch (const json::exception &e) {
      Fail(ErrorCode::kParse, path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return lines;
}

std::string ResolvePath(const fs::path &base, const std::string &p) {
  fs::path path(p);
  return path.is_absolute() ? path.string() : (base / path).string();
}

std::vector<double> LoadMono(const std::string &path, bool allow_any_rate,
                             double *rate) {
  MultiChannelSignal sig = ReadWav(path);
  Require(sig.NumChannels() >= 1 && sig.NumSamples() > 0, ErrorCode::kParse,
          "'" + path + "' holds no samples");
  Require(allow_any_rate || sig.sample_rate == kExpectedRate,
          ErrorCode::kValidation,
          "'" + path + "' is " + std::to_string(sig.sample_rate) +
              " Hz; 16000 Hz expected (pass --allow-resample-off to accept)");
  *rate = sig.sample_rate;
  return std::move(sig.channels[0]);
}

ArrayGeometry LoadGeometry(const std::string &path) {
  if (path.empty()) return BuildNonUniform15Array();
  std::ifstream in(path);
  Require(in.good(), ErrorCode::kIo, "cannot open '" + path + "'");
  try {
    return ArrayGeometry::FromJson(json::parse(in));
  } catch (const json::exception &e) {
    Fail(ErrorCode::kParse, path + ": " + e.what());
  }
}

void WriteWavAtomic(const std::string &path, const MultiChannelSignal &sig) {
  const std::string tmp = path + ".tmp";
  WriteWav(tmp, sig);
  std::error_code ec;
  fs::rename(tmp, path, ec);
  Require(!ec, ErrorCode::kIo, "cannot rename '" + tmp + "': " + ec.message());
}

void WriteTextAtomic(const std::string &path, const std::string &text) {
  WriteBinaryFileAtomic(
      path, std::span<const unsigned char>(
                reinterpret_cast<const unsigned char *>(text.data()), text.size()));
}

// job(i) for i in [0, n) on `jobs` threads; rethrows the lowest failing index.
void ParallelFor(std::size_t n, std::size_t jobs,
                 const std::function<void(std::size_t)> &job) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < std::max<std::size_t>(1, std::min(jobs, n)); ++w)
    pool.emplace_back(worker);
  worker();
  for (auto &t : pool) t.join();
  for (auto &e : errors)
    if (e) std::rethrow_exception(e);
}

template <typename Fn>
auto AtLine(const std::string &manifest, std::size_t lineno, Fn &&fn) {
  try {
    return fn();
  } catch (const Error &e) {
    throw Error(e.code(), manifest + ":" + std::to_string(lineno) + ": " + e.what());
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kParse,
                manifest + ":" + std::to_string(lineno) + ": " + e.what());
  }
}

std::optional<double> OptionalNumber(const json &doc, const char *key) {
  if (!doc.contains(key) || doc.at(key).is_null()) return std::nullopt;
  return doc.at(key).get<double>();
}

struct SimulateArgs {
  std::string manifest, out, array;
  std::uint64_t seed = 0;
  double p_tar = 0.15;
  std::size_t jobs = 1;
  std::size_t delay_half_len = 32;
  bool allow_any_rate = false;
};

int Simulate(const SimulateArgs &a, std::ostream &out) {
  const auto lines = ReadManifest(a.manifest);
  const fs::path base = fs::path(a.manifest).parent_path();
  const ArrayGeometry geom = LoadGeometry(a.array);
  fs::create_directories(a.out);
  std::vector<json> results(lines.size());

  ParallelFor(lines.size(), a.jobs, [&](std::size_t idx) {
    const auto &[lineno, entry] = lines[idx];
    results[idx] = AtLine(a.manifest, lineno, [&] {
      const std::string id = entry.at("id").get<std::string>();
      Require(!id.empty() && id.find('/') == std::string::npos,
              ErrorCode::kValidation, "id must be a nonempty file name");
      double rate = 0.0;
      SceneSources sources;
      sources.target = LoadMono(
          ResolvePath(base, entry.at("target_wav").get<std::string>()),
          a.allow_any_rate, &sources.sample_rate);
      for (auto [key, slot] :
           {std::pair{"interference_wav", &sources.interference},
            std::pair{"noise_wav", &sources.noise}}) {
        if (entry.contains(key) && !entry.at(key).is_null()) {
          *slot = LoadMono(ResolvePath(base, entry.at(key).get<std::string>()),
                           a.allow_any_rate, &rate);
          Require(rate == sources.sample_rate, ErrorCode::kValidation,
                  std::string(key) + " sample rate differs from the target");
        }
      }
      MixSpec spec;
      if (sources.noise) spec.snr_db = entry.at("snr_db").get<double>();
      spec.sir_db = OptionalNumber(entry, "sir_db");
      spec.p_tar = entry.value("p_tar", a.p_tar);
      if (entry.contains("angles")) {
        const json &angles = entry.at("angles");
        spec.target_angle = OptionalNumber(angles, "target");
        spec.interference_angle = OptionalNumber(angles, "interference");
        spec.noise_angle = OptionalNumber(angles, "noise");
      }
      spec.seed = entry.contains("seed") ? entry.at("seed").get<std::uint64_t>()
                                         : DeriveSeed(a.seed, idx);
      const ArrayGeometry scene_geom = geom.WithSampleRate(sources.sample_rate);
      SimulationOutput sim =
          SimulateScene(sources, spec, scene_geom, StftConfig{}, a.delay_half_len);

      const std::string wav_name = id + ".wav", label_name = id + ".labels.mcft";
      WriteWavAtomic((fs::path(a.out) / wav_name).string(), sim.mixture);
      WriteFeatureFile(sim.LabelStack(), (fs::path(a.out) / label_name).string());
      json record = entry;
      const json fields = sim.ManifestFields();
      for (auto &[key, value] : fields.items()) record[key] = value;
      record["mixture_wav"] = wav_name;
      record["labels"] = label_name;
      return record;
    });
  });

  std::string manifest_text;
  for (const json &r : results) manifest_text += r.dump() + "\n";
  const std::string manifest_out = (fs::path(a.out) / "manifest.jsonl").string();
  WriteTextAtomic(manifest_out, manifest_text);
  out << json{{"simulated", results.size()}, {"manifest", manifest_out}}.dump()
      << "\n";
  return kExitOk;
}

struct FeaturizeArgs {
  std::string config, manifest, out, array;
  std::size_t jobs = 1;
  bool allow_any_rate = false;
};

int Featurize(const FeaturizeArgs &a, std::ostream &out) {
  PipelineConfig cfg;
  {
    std::ifstream in(a.config);
    Require(in.good(), ErrorCode::kIo, "cannot open '" + a.config + "'");
    try {
      cfg = PipelineConfig::FromJson(json::parse(in));
    } catch (const json::exception &e) {
      Fail(ErrorCode::kParse, a.config + ": " + e.what());
    } catch (const Error &e) {
      throw Error(e.code(), a.config + ": " + e.what());
    }
  }
  const auto lines = ReadManifest(a.manifest);
  const fs::path base = fs::path(a.manifest).parent_path();
  const ArrayGeometry geom = LoadGeometry(a.array);
  fs::create_directories(a.out);
  std::vector<std::size_t> planes(lines.size());

  ParallelFor(lines.size(), a.jobs, [&](std::size_t idx) {
    const auto &[lineno, entry] = lines[idx];
    planes[idx] = AtLine(a.manifest, lineno, [&] {
      const std::string id = entry.at("id").get<std::string>();
      const std::string wav =
          ResolvePath(base, entry.at("mixture_wav").get<std::string>());
      MultiChannelSignal sig = ReadWav(wav);
      Require(a.allow_any_rate || sig.sample_rate == kExpectedRate,
              ErrorCode::kValidation,
              "'" + wav + "' is not 16000 Hz (pass --allow-resample-off)");
      const SceneInfo scene = SceneInfo::FromManifest(entry);
      FeatureStack stack =
          RunPipeline(sig, scene, cfg, geom.WithSampleRate(sig.sample_rate));
      WriteFeatureFile(stack, (fs::path(a.out) / (id + ".mcft")).string());
      return stack.num_planes();
    });
  });
  out << json{{"featurized", lines.size()},
              {"planes", lines.empty() ? 0 : planes.front()}}
             .dump()
      << "\n";
  return kExitOk;
}

struct MineArgs {
  std::string embeddings;
  double margin = 0.0, beta = 1.0;
  std::size_t k = 4, p = 60;
  std::uint64_t seed = 0;
  bool normalize = false;
};

int Mine(const MineArgs &a, std::ostream &out) {
  const EmbeddingSet pool = ReadEmbeddingFile(a.embeddings);
  TripletConfig cfg;
  cfg.margin = a.margin;
  cfg.beta = a.beta;
  cfg.k = a.k;
  cfg.p = a.p;
  cfg.normalize = a.normalize;
  cfg.Validate();
  const auto rows = PkSample(pool.speakers(), cfg.k, cfg.p, a.seed);
  const MiningResult mined = MineHardestBatch(pool, rows, cfg);
  for (const auto &t : mined.triplets) {
    out << json{{"anchor", pool.utterance(t.anchor)},
                {"positive", pool.utterance(t.positive)},
                {"negative", pool.utterance(t.negative)},
                {"anchor_row", t.anchor},
                {"positive_row", t.positive},
                {"negative_row", t.negative},
                {"loss", t.loss}}
               .dump()
        << "\n";
  }
  out << json{{"batch_loss", mined.loss}, {"triplets", mined.triplets.size()}}.dump()
      << "\n";
  return kExitOk;
}

int Trials(const std::string &embeddings, std::size_t n, std::uint64_t seed,
           const std::string &path, std::ostream &out) {
  const TrialList trials = GenerateTrials(ReadEmbeddingFile(embeddings), n, seed);
  WriteTrials(trials, path);
  out << json{{"trials", trials.size()}, {"targets", trials.NumTargets()}}.dump()
      << "\n";
  return kExitOk;
}

int Score(const std::string &trials_path, const std::string &embeddings,
          const std::string &path, std::ostream &out) {
  const TrialList trials = ReadTrials(trials_path);
  const auto scores = CosineScore(trials, ReadEmbeddingFile(embeddings));
  WriteScores(trials, scores, path);
  out << json{{"scored", scores.size()}}.dump() << "\n";
  return kExitOk;
}

int Evaluate(const std::string &trials_path, const std::string &scores_path,
             const DcfParams &params, std::ostream &out) {
  const TrialList trials = ReadTrials(trials_path);
  const auto raw = ReadScores(scores_path);
  std::vector<double> scores;
  try {
    scores = AlignScores(trials, raw);
  } catch (const Error &e) {
    throw Error(e.code(), scores_path + ": " + e.what());
  }
  const auto labels = trials.Labels();
  out << json{{"eer", Eer(scores, labels)},
              {"min_dcf", MinDcf(scores, labels, params)},
              {"p_target", params.p_target},
              {"trials", trials.size()}}
             .dump()
      << "\n";
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err) {
  CLI::App app{"Multi-channel speaker verification feature and scoring toolkit",
               args.empty() ? "mcsv" : args[0]};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto *simulate = app.add_subcommand("simulate", "Synthesize far-field mixtures");
  simulate->add_option("--manifest", sim.manifest, "Input JSON-lines manifest")
      ->required();
  simulate->add_option("--out", sim.out, "Output directory")->required();
  simulate->add_option("--seed", sim.seed, "Global seed")->required();
  simulate->add_option("--p-tar", sim.p_tar, "Interference probability");
  simulate->add_option("--array", sim.array, "Array geometry JSON");
  simulate->add_option("--jobs", sim.jobs, "Parallel manifest entries");
  simulate->add_option("--delay-half-len", sim.delay_half_len,
                       "Fractional delay filter half length");
  simulate->add_flag("--allow-resample-off", sim.allow_any_rate,
                     "Accept non-16 kHz input without resampling");

  FeaturizeArgs feat;
  auto *featurize = app.add_subcommand("featurize", "Compute feature stacks");
  featurize->add_option("--config", feat.config, "Pipeline config JSON")->required();
  featurize->add_option("--manifest", feat.manifest, "Simulation manifest")
      ->required();
  featurize->add_option("--out", feat.out, "Output directory")->required();
  featurize->add_option("--array", feat.array, "Array geometry JSON");
  featurize->add_option("--jobs", feat.jobs, "Parallel manifest entries");
  featurize->add_flag("--allow-resample-off", feat.allow_any_rate,
                      "Accept non-16 kHz input without resampling");

  MineArgs mine;
  auto *mine_cmd = app.add_subcommand("mine", "PK-sample a batch and mine triplets");
  mine_cmd->add_option("--embeddings", mine.embeddings, "MCEB file")->required();
  mine_cmd->add_option("--margin", mine.margin, "Triplet margin");
  mine_cmd->add_option("--beta", mine.beta, "Softplus sharpness");
  mine_cmd->add_option("--k", mine.k, "Utterances per speaker");
  mine_cmd->add_option("--p", mine.p, "Speakers per batch");
  mine_cmd->add_option("--seed", mine.seed, "Sampling seed")->required();
  mine_cmd->add_flag("--normalize", mine.normalize, "L2-normalize embeddings");

  std::string trials_emb, trials_out;
  std::size_t trials_n = 10000;
  std::uint64_t trials_seed = 0;
  auto *trials_cmd = app.add_subcommand("trials", "Generate a balanced trial list");
  trials_cmd->add_option("--embeddings", trials_emb, "MCEB file")->required();
  trials_cmd->add_option("--n", trials_n, "Number of trials");
  trials_cmd->add_option("--seed", trials_seed, "Sampling seed")->required();
  trials_cmd->add_option("--out", trials_out, "Trial list output")->required();

  std::string score_trials, score_emb, score_out;
  auto *score = app.add_subcommand("score", "Cosine-score a trial list");
  score->add_option("--trials", score_trials, "Trial list")->required();
  score->add_option("--embeddings", score_emb, "MCEB file")->required();
  score->add_option("--out", score_out, "Score output")->required();

  std::string eval_trials, eval_scores;
  DcfParams dcf;
  auto *evaluate = app.add_subcommand("evaluate", "EER and minDCF");
  evaluate->add_option("--trials", eval_trials, "Trial list")->required();
  evaluate->add_option("--scores", eval_scores, "Score file")->required();
  evaluate->add_option("--p-target", dcf.p_target, "Target prior");
  evaluate->add_option("--c-miss", dcf.c_miss, "Miss cost");
  evaluate->add_option("--c-fa", dcf.c_fa, "False-alarm cost");

  auto *selftest = app.add_subcommand("selftest", "Run analytic-oracle checks");

  std::vector<const char *> argv;
  for (const auto &a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError &e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*simulate) return Simulate(sim, out);
    if (*featurize) return Featurize(feat, out);
    if (*mine_cmd) return Mine(mine, out);
    if (*trials_cmd) return Trials(trials_emb, trials_n, trials_seed, trials_out, out);
    if (*score) return Score(score_trials, score_emb, score_out, out);
    if (*evaluate) return Evaluate(eval_trials, eval_scores, dcf, out);
    if (*selftest) return RunSelfTest(out) ? kExitOk : kExitData;
  } catch (const Error &e) {
    err << "error [" << ErrorCodeName(e.code()) << "]: " << e.what() << "\n";
    return kExitData;
  } catch (const std::filesystem::filesystem_error &e) {
    err << "error [io]: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception &e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace mcsv::cli
