// include/mcsv/objectives.h

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

#ifndef MCSV_OBJECTIVES_H_
#define MCSV_OBJECTIVES_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mcsv/embeddings.h"
#include "mcsv/signal.h"

namespace mcsv {

// Scalar loss plus its gradient w.r.t. the prediction, same layout as the
// input.
struct LossResult {
  double loss = 0.0;
  std::vector<double> grad;
};

// Mean over rows of -log softmax(logits)[label].
LossResult CrossEntropy(const Matrix &logits, std::span<const std::size_t> labels);

// Frame-wise binary cross entropy; predictions are clamped to
// [eps, 1 - eps] and the gradient is zero where clamping is active.
LossResult FrameBce(std::span<const double> pred,
                    std::span<const std::uint8_t> labels, double eps = 1e-7);

// Mean absolute error over all T-F bins; subgradient 0 at exact ties.
LossResult SpectrogramMae(std::span<const double> pred,
                          std::span<const double> target);
LossResult SpectrogramMae(const FeaturePlane &pred, const FeaturePlane &target);

struct LossWeights {
  double lambda_vad = 0.1;
  double lambda_enh = 0.0005;
};

// emb + lambda_vad * vad (+ lambda_enh * enh when enhancement is enabled).
double ComposeLoss(double l_emb, double l_vad, double l_enh,
                   const LossWeights &w, bool enh_enabled);

// beta^-1 log(1 + exp(beta x)), stable for large |beta x|.
double Softplus(double x, double beta = 1.0);

struct TripletConfig {
  double margin = 0.0;
  double beta = 1.0;
  std::size_t k = 4;          // utterances per speaker
  std::size_t p = 60;         // speakers per batch
  bool normalize = false;     // L2-normalize rows before mining

  void Validate() const;
};

struct TripletResult {
  double loss = 0.0;
  double d_ap = 0.0;
  double d_an = 0.0;
  std::vector<double> grad_anchor;
  std::vector<double> grad_positive;
  std::vector<double> grad_negative;
};

// softplus_beta(d(a,p) - d(a,n) + margin) with Euclidean d. At d == 0 the
// distance gradient is taken as 0.
TripletResult TripletLoss(std::span<const double> anchor,
                          std::span<const double> positive,
                          std::span<const double> negative,
                          const TripletConfig &cfg);

double EuclideanDistance(std::span<const double> x, std::span<const double> y);

struct MinedTriplet {
  std::size_t anchor = 0;
  std::size_t positive = 0;
  std::size_t negative = 0;
  double loss = 0.0;

  bool operator==(const MinedTriplet &) const = default;
};

struct MiningResult {
  std::vector<MinedTriplet> triplets;
  double loss = 0.0;
};

// Every row is an anchor: farthest same-speaker row and nearest
// other-speaker row, ties to the lowest row index. Throws kMining if a
// speaker has one row or there is only one speaker.
MiningResult MineHardestBatch(const EmbeddingSet &batch, const TripletConfig &cfg);
// Mining over the given rows of `pool`; indices in the result refer to pool
// rows and ties go to the earlier position in `rows`.
MiningResult MineHardestBatch(const EmbeddingSet &pool,
                              std::span<const std::size_t> rows,
                              const TripletConfig &cfg);

// K rows for each of P distinct speakers, grouped by speaker. Speakers with
// fewer than K rows are sampled with replacement. Throws kInsufficientData
// when the pool has fewer than P speakers.
std::vector<std::size_t> PkSample(std::span<const std::string> speakers,
                                  std::size_t k, std::size_t p,
                                  std::uint64_t seed);

}  // namespace mcsv

#endif  // MCSV_OBJECTIVES_H_
