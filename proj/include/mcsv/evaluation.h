// include/mcsv/evaluation.h

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

#ifndef MCSV_EVALUATION_H_
#define MCSV_EVALUATION_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mcsv/embeddings.h"

namespace mcsv {

struct Trial {
  std::string enroll;
  std::string test;
  bool target = false;

  bool operator==(const Trial &) const = default;
};

// Trials are ordered (enroll, test) pairs; (a, b) and (b, a) are distinct
// rows. Duplicated rows are rejected by Validate.
struct TrialList {
  std::vector<Trial> trials;

  std::size_t size() const { return trials.size(); }
  std::size_t NumTargets() const;
  void Validate() const;
  std::vector<std::uint8_t> Labels() const;
};

// n_trials / 2 same-speaker and n_trials / 2 cross-speaker ordered pairs of
// distinct utterances, sampled without replacement. Throws
// kInsufficientData when either class cannot supply enough pairs.
TrialList GenerateTrials(const EmbeddingSet &embeddings, std::size_t n_trials,
                         std::uint64_t seed);

// <x, y> / (|x| |y|) per trial. Throws kLookup for unknown ids and
// kInvalidArgument for zero-norm embeddings.
std::vector<double> CosineScore(const TrialList &trials,
                                const EmbeddingSet &embeddings);

// Operating points are taken at every distinct score and at +inf; a trial
// is accepted when score >= threshold. Both classes must be present
// (kInvalidArgument otherwise).
struct OperatingPoint {
  double threshold = 0.0;
  double far = 0.0;  // nontarget scores >= threshold
  double frr = 0.0;  // target scores < threshold
};
std::vector<OperatingPoint> OperatingPoints(std::span<const double> scores,
                                            std::span<const std::uint8_t> labels);

// FAR/FRR crossing, linearly interpolated between adjacent operating
// points.
double Eer(std::span<const double> scores, std::span<const std::uint8_t> labels);

struct DcfParams {
  double p_target = 0.05;
  double c_miss = 1.0;
  double c_fa = 1.0;
};

// min over operating points of p c_miss FRR + (1 - p) c_fa FAR, divided by
// min(p c_miss, (1 - p) c_fa).
double MinDcf(std::span<const double> scores, std::span<const std::uint8_t> labels,
              const DcfParams &params = {});

// Text formats: "enroll test {target|nontarget}" and "enroll test score".
// Parse errors name the file and 1-based line.
TrialList ReadTrials(const std::string &path);
void WriteTrials(const TrialList &trials, const std::string &path);

struct ScoredTrial {
  std::string enroll;
  std::string test;
  double score = 0.0;
};
std::vector<ScoredTrial> ReadScores(const std::string &path);
void WriteScores(const TrialList &trials, std::span<const double> scores,
                 const std::string &path);
// Scores reordered to match `trials`; kLookup names the first missing trial.
std::vector<double> AlignScores(const TrialList &trials,
                                std::span<const ScoredTrial> scores);

}  // namespace mcsv

#endif  // MCSV_EVALUATION_H_
