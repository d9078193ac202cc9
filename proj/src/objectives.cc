// src/objectives.cc

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

#include "mcsv/objectives.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "mcsv/errors.h"
#include "mcsv/rng.h"

namespace mcsv {

LossResult CrossEntropy(const Matrix &logits,
                        std::span<const std::size_t> labels) {
  Require(logits.rows == labels.size() && logits.rows > 0 && logits.cols > 0,
          ErrorCode::kSize, "cross entropy: logits and labels disagree");
  LossResult out{0.0, std::vector<double>(logits.data.size(), 0.0)};
  const double inv_rows = 1.0 / static_cast<double>(logits.rows);
  for (std::size_t r = 0; r < logits.rows; ++r) {
    Require(labels[r] < logits.cols, ErrorCode::kOutOfRange,
            "cross entropy: label " + std::to_string(labels[r]) +
                " >= class count");
    auto row = logits.Row(r);
    const double peak = *std::max_element(row.begin(), row.end());
    double sum = 0.0;
    for (double v : row) sum += std::exp(v - peak);
    const double log_norm = peak + std::log(sum);
    out.loss += (log_norm - row[labels[r]]) * inv_rows;
    for (std::size_t c = 0; c < logits.cols; ++c) {
      double prob = std::exp(row[c] - log_norm);
      out.grad[r * logits.cols + c] =
          (prob - (c == labels[r] ? 1.0 : 0.0)) * inv_rows;
    }
  }
  return out;
}

LossResult FrameBce(std::span<const double> pred,
                    std::span<const std::uint8_t> labels, double eps) {
  Require(pred.size() == labels.size() && !pred.empty(), ErrorCode::kSize,
          "frame BCE: predictions and labels differ in length");
  LossResult out{0.0, std::vector<double>(pred.size(), 0.0)};
  const double inv_n = 1.0 / static_cast<double>(pred.size());
  for (std::size_t t = 0; t < pred.size(); ++t) {
    const double p = std::clamp(pred[t], eps, 1.0 - eps);
    const double y = labels[t] ? 1.0 : 0.0;
    out.loss -= (y * std::log(p) + (1.0 - y) * std::log(1.0 - p)) * inv_n;
    if (pred[t] > eps && pred[t] < 1.0 - eps)
      out.grad[t] = (-y / p + (1.0 - y) / (1.0 - p)) * inv_n;
  }
  return out;
}

LossResult SpectrogramMae(std::span<const double> pred,
                          std::span<const double> target) {
  Require(pred.size() == target.size() && !pred.empty(), ErrorCode::kSize,
          "spectrogram MAE: dimension mismatch");
  LossResult out{0.0, std::vector<double>(pred.size(), 0.0)};
  const double inv_n = 1.0 / static_cast<double>(pred.size());
  for (std::size_t k = 0; k < pred.size(); ++k) {
    const double diff = pred[k] - target[k];
    out.loss += std::abs(diff);
    out.grad[k] = diff > 0 ? inv_n : (diff < 0 ? -inv_n : 0.0);
  }
  out.loss *= inv_n;
  return out;
}

LossResult SpectrogramMae(const FeaturePlane &pred, const FeaturePlane &target) {
  Require(pred.num_frames() == target.num_frames() &&
              pred.width() == target.width(),
          ErrorCode::kSize, "spectrogram MAE: dimension mismatch");
  return SpectrogramMae(pred.data(), target.data());
}

double ComposeLoss(double l_emb, double l_vad, double l_enh,
                   const LossWeights &w, bool enh_enabled) {
  Require(w.lambda_vad >= 0 && w.lambda_enh >= 0 && std::isfinite(w.lambda_vad) &&
              std::isfinite(w.lambda_enh),
          ErrorCode::kValidation, "loss weights must be finite and non-negative");
  const double base = l_emb + w.lambda_vad * l_vad;
  return enh_enabled ? base + w.lambda_enh * l_enh : base;
}

double Softplus(double x, double beta) {
  const double bx = beta * x;
  if (bx > 30.0) return x + std::log1p(std::exp(-bx)) / beta;
  return std::log1p(std::exp(bx)) / beta;
}

void TripletConfig::Validate() const {
  Require(beta > 0 && std::isfinite(beta), ErrorCode::kValidation,
          "triplet beta must be positive");
  Require(std::isfinite(margin), ErrorCode::kValidation,
          "triplet margin must be finite");
  Require(k >= 2 && p >= 2, ErrorCode::kValidation,
          "PK sampling needs K >= 2 and P >= 2");
}

double EuclideanDistance(std::span<const double> x, std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t d = 0; d < x.size(); ++d) {
    const double diff = x[d] - y[d];
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

TripletResult TripletLoss(std::span<const double> anchor,
                          std::span<const double> positive,
                          std::span<const double> negative,
                          const TripletConfig &cfg) {
  Require(anchor.size() == positive.size() && anchor.size() == negative.size(),
          ErrorCode::kSize, "triplet loss: embedding widths differ");
  Require(cfg.beta > 0, ErrorCode::kValidation, "triplet beta must be positive");
  TripletResult out;
  out.d_ap = EuclideanDistance(anchor, positive);
  out.d_an = EuclideanDistance(anchor, negative);
  const double x = out.d_ap - out.d_an + cfg.margin;
  out.loss = Softplus(x, cfg.beta);
  // d softplus / dx is the logistic function of beta x.
  const double slope = 1.0 / (1.0 + std::exp(-cfg.beta * x));
  const std::size_t width = anchor.size();
  out.grad_anchor.assign(width, 0.0);
  out.grad_positive.assign(width, 0.0);
  out.grad_negative.assign(width, 0.0);
  for (std::size_t d = 0; d < width; ++d) {
    const double u = out.d_ap > 0 ? (anchor[d] - positive[d]) / out.d_ap : 0.0;
    const double v = out.d_an > 0 ? (anchor[d] - negative[d]) / out.d_an : 0.0;
    out.grad_anchor[d] = slope * (u - v);
    out.grad_positive[d] = -slope * u;
    out.grad_negative[d] = slope * v;
  }
  return out;
}

namespace {

std::vector<double> PromotedRow(std::span<const float> row, bool normalize) {
  std::vector<double> v(row.begin(), row.end());
  if (normalize) {
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0)
      for (double &x : v) x /= norm;
  }
  return v;
}

}  // namespace

MiningResult MineHardestBatch(const EmbeddingSet &pool,
                              std::span<const std::size_t> rows,
                              const TripletConfig &cfg) {
  Require(cfg.beta > 0, ErrorCode::kValidation, "triplet beta must be positive");
  const std::size_t n = rows.size();
  std::vector<std::vector<double>> x;
  x.reserve(n);
  for (std::size_t r : rows) {
    Require(r < pool.size(), ErrorCode::kOutOfRange, "batch row out of range");
    x.push_back(PromotedRow(pool.Row(r), cfg.normalize));
  }

  MiningResult out;
  for (std::size_t a = 0; a < n; ++a) {
    const std::string &spk = pool.speaker(rows[a]);
    std::size_t pos = n, neg = n;
    double d_pos = -1.0, d_neg = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      if (b == a) continue;
      const double d = EuclideanDistance(x[a], x[b]);
      if (pool.speaker(rows[b]) == spk) {
        if (d > d_pos) {
          d_pos = d;
          pos = b;
        }
      } else if (neg == n || d < d_neg) {
        d_neg = d;
        neg = b;
      }
    }
    Require(pos != n, ErrorCode::kMining,
            "speaker '" + spk + "' has a single row in the batch");
    Require(neg != n, ErrorCode::kMining, "batch holds a single speaker");
    const double loss = Softplus(d_pos - d_neg + cfg.margin, cfg.beta);
    out.triplets.push_back({rows[a], rows[pos], rows[neg], loss});
    out.loss += loss;
  }
  if (n > 0) out.loss /= static_cast<double>(n);
  return out;
}

MiningResult MineHardestBatch(const EmbeddingSet &batch,
                              const TripletConfig &cfg) {
  std::vector<std::size_t> rows(batch.size());
  for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = r;
  return MineHardestBatch(batch, rows, cfg);
}

std::vector<std::size_t> PkSample(std::span<const std::string> speakers,
                                  std::size_t k, std::size_t p,
                                  std::uint64_t seed) {
  Require(k >= 1 && p >= 1, ErrorCode::kValidation,
          "PK sampling needs K >= 1 and P >= 1");
  std::map<std::string, std::vector<std::size_t>> by_speaker;
  for (std::size_t r = 0; r < speakers.size(); ++r)
    by_speaker[speakers[r]].push_back(r);
  Require(by_speaker.size() >= p, ErrorCode::kInsufficientData,
          "pool has " + std::to_string(by_speaker.size()) +
              " speakers, batch needs " + std::to_string(p));

  std::vector<const std::vector<std::size_t> *> groups;
  for (const auto &[id, rows] : by_speaker) groups.push_back(&rows);
  CounterRng rng(seed);
  for (std::size_t s = 0; s < p; ++s)
    std::swap(groups[s], groups[s + rng.Below(groups.size() - s)]);

  std::vector<std::size_t> batch;
  batch.reserve(k * p);
  for (std::size_t s = 0; s < p; ++s) {
    std::vector<std::size_t> rows = *groups[s];
    if (rows.size() >= k) {
      for (std::size_t q = 0; q < k; ++q) {
        std::swap(rows[q], rows[q + rng.Below(rows.size() - q)]);
        batch.push_back(rows[q]);
      }
    } else {
      for (std::size_t q = 0; q < k; ++q)
        batch.push_back(rows[rng.Below(rows.size())]);
    }
  }
  return batch;
}

}  // namespace mcsv
