// src/evaluation.cc

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

#include "mcsv/evaluation.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "mcsv/errors.h"
#include "mcsv/rng.h"

namespace mcsv {
namespace {

// k distinct indices from [0, space), in draw order.
std::vector<std::uint64_t> SampleDistinct(std::uint64_t space, std::uint64_t k,
                                          CounterRng *rng) {
  std::vector<std::uint64_t> out;
  if (2 * k > space) {
    std::vector<std::uint64_t> all(space);
    for (std::uint64_t q = 0; q < space; ++q) all[q] = q;
    for (std::uint64_t q = 0; q < k; ++q)
      std::swap(all[q], all[q + rng->Below(space - q)]);
    out.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
    return out;
  }
  std::unordered_set<std::uint64_t> seen;
  while (out.size() < k) {
    std::uint64_t q = rng->Below(space);
    if (seen.insert(q).second) out.push_back(q);
  }
  return out;
}

void CheckScores(std::span<const double> scores,
                 std::span<const std::uint8_t> labels) {
  Require(scores.size() == labels.size(), ErrorCode::kSize,
          "scores and labels differ in length");
  bool has_target = false, has_nontarget = false;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    Require(std::isfinite(scores[k]), ErrorCode::kInvalidArgument,
            "scores must be finite");
    (labels[k] ? has_target : has_nontarget) = true;
  }
  Require(has_target && has_nontarget, ErrorCode::kInvalidArgument,
          "metrics need both target and nontarget trials");
}

std::string FormatDouble(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

[[noreturn]] void ParseFail(const std::string &path, std::size_t line,
                            const std::string &why) {
  Fail(ErrorCode::kParse, path + ":" + std::to_string(line) + ": " + why);
}

}  // namespace

std::size_t TrialList::NumTargets() const {
  return static_cast<std::size_t>(
      std::count_if(trials.begin(), trials.end(),
                    [](const Trial &t) { return t.target; }));
}

void TrialList::Validate() const {
  std::set<std::pair<std::string, std::string>> seen;
  for (const Trial &t : trials) {
    Require(seen.emplace(t.enroll, t.test).second, ErrorCode::kValidation,
            "duplicate trial (" + t.enroll + ", " + t.test + ")");
  }
}

std::vector<std::uint8_t> TrialList::Labels() const {
  std::vector<std::uint8_t> labels;
  labels.reserve(trials.size());
  for (const Trial &t : trials) labels.push_back(t.target ? 1 : 0);
  return labels;
}

TrialList GenerateTrials(const EmbeddingSet &embeddings, std::size_t n_trials,
                         std::uint64_t seed) {
  Require(n_trials >= 2 && n_trials % 2 == 0, ErrorCode::kInvalidArgument,
          "trial count must be even and >= 2");
  const std::size_t n = embeddings.size();
  {
    std::unordered_set<std::string> ids(embeddings.utterances().begin(),
                                        embeddings.utterances().end());
    Require(ids.size() == n, ErrorCode::kValidation,
            "utterance ids must be unique");
  }
  // Rows grouped by speaker in order of first appearance.
  std::vector<std::string> speaker_order;
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t r = 0; r < n; ++r) {
    auto [it, fresh] = groups.try_emplace(embeddings.speaker(r));
    if (fresh) speaker_order.push_back(embeddings.speaker(r));
    it->second.push_back(r);
  }
  Require(groups.size() >= 2, ErrorCode::kInsufficientData,
          "trials need at least two speakers");
  std::vector<std::size_t> order, group_start(n), group_size(n);
  std::vector<std::uint64_t> target_offset;  // per speaker, cumulative
  std::uint64_t target_space = 0;
  for (const auto &spk : speaker_order) {
    const auto &rows = groups[spk];
    const std::size_t start = order.size();
    for (std::size_t r : rows) {
      group_start[r] = start;
      group_size[r] = rows.size();
      order.push_back(r);
    }
    target_offset.push_back(target_space);
    target_space += rows.size() * (rows.size() - 1);
  }
  std::vector<std::uint64_t> nontarget_offset(n + 1, 0);
  for (std::size_t q = 0; q < n; ++q) {
    const std::size_t r = order[q];
    nontarget_offset[q + 1] = nontarget_offset[q] + (n - group_size[r]);
  }
  const std::uint64_t nontarget_space = nontarget_offset[n];
  const std::size_t need = n_trials / 2;
  Require(target_space >= need, ErrorCode::kInsufficientData,
          "only " + std::to_string(target_space) +
              " same-speaker pairs available, need " + std::to_string(need));
  Require(nontarget_space >= need, ErrorCode::kInsufficientData,
          "only " + std::to_string(nontarget_space) +
              " cross-speaker pairs available, need " + std::to_string(need));

  CounterRng rng(seed);
  TrialList list;
  for (std::uint64_t q : SampleDistinct(target_space, need, &rng)) {
    auto s = static_cast<std::size_t>(
        std::upper_bound(target_offset.begin(), target_offset.end(), q) -
        target_offset.begin() - 1);
    const auto &rows = groups[speaker_order[s]];
    const std::uint64_t local = q - target_offset[s];
    const std::size_t i = local / (rows.size() - 1);
    std::size_t j = local % (rows.size() - 1);
    if (j >= i) ++j;
    list.trials.push_back({embeddings.utterance(rows[i]),
                           embeddings.utterance(rows[j]), true});
  }
  for (std::uint64_t q : SampleDistinct(nontarget_space, need, &rng)) {
    auto a = static_cast<std::size_t>(
        std::upper_bound(nontarget_offset.begin(), nontarget_offset.end(), q) -
        nontarget_offset.begin() - 1);
    const std::size_t row_a = order[a];
    std::size_t b = q - nontarget_offset[a];
    if (b >= group_start[row_a]) b += group_size[row_a];
    list.trials.push_back({embeddings.utterance(row_a),
                           embeddings.utterance(order[b]), false});
  }
  for (std::size_t q = list.trials.size(); q > 1; --q)
    std::swap(list.trials[q - 1], list.trials[rng.Below(q)]);
  return list;
}

std::vector<double> CosineScore(const TrialList &trials,
                                const EmbeddingSet &embeddings) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t r = 0; r < embeddings.size(); ++r)
    index.emplace(embeddings.utterance(r), r);
  auto lookup = [&](const std::string &id) {
    auto it = index.find(id);
    Require(it != index.end(), ErrorCode::kLookup,
            "utterance '" + id + "' not in the embedding set");
    return embeddings.Row(it->second);
  };
  std::vector<double> scores;
  scores.reserve(trials.size());
  for (const Trial &t : trials.trials) {
    auto x = lookup(t.enroll), y = lookup(t.test);
    double dot = 0.0, xx = 0.0, yy = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
      dot += static_cast<double>(x[d]) * y[d];
      xx += static_cast<double>(x[d]) * x[d];
      yy += static_cast<double>(y[d]) * y[d];
    }
    Require(xx > 0 && yy > 0, ErrorCode::kInvalidArgument,
            "zero-norm embedding in trial (" + t.enroll + ", " + t.test + ")");
    scores.push_back(dot / (std::sqrt(xx) * std::sqrt(yy)));
  }
  return scores;
}

std::vector<OperatingPoint> OperatingPoints(std::span<const double> scores,
                                            std::span<const std::uint8_t> labels) {
  CheckScores(scores, labels);
  std::vector<std::pair<double, bool>> sorted;
  sorted.reserve(scores.size());
  std::size_t n_tar = 0;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    sorted.emplace_back(scores[k], labels[k] != 0);
    n_tar += labels[k] ? 1 : 0;
  }
  const std::size_t n_non = scores.size() - n_tar;
  std::sort(sorted.begin(), sorted.end());
  std::vector<OperatingPoint> points;
  std::size_t tar_below = 0, non_below = 0;
  for (std::size_t k = 0; k < sorted.size();) {
    const double threshold = sorted[k].first;
    points.push_back({threshold,
                      static_cast<double>(n_non - non_below) / static_cast<double>(n_non),
                      static_cast<double>(tar_below) / static_cast<double>(n_tar)});
    for (; k < sorted.size() && sorted[k].first == threshold; ++k)
      (sorted[k].second ? tar_below : non_below) += 1;
  }
  points.push_back({std::numeric_limits<double>::infinity(), 0.0, 1.0});
  return points;
}

double Eer(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  const auto points = OperatingPoints(scores, labels);
  for (std::size_t k = 1; k < points.size(); ++k) {
    const double diff = points[k].far - points[k].frr;
    if (diff <= 0.0) {
      const double prev = points[k - 1].far - points[k - 1].frr;
      const double alpha = prev / (prev - diff);
      return points[k - 1].far + alpha * (points[k].far - points[k - 1].far);
    }
  }
  return points.back().far;  // unreachable: the +inf point has FAR 0, FRR 1
}

double MinDcf(std::span<const double> scores, std::span<const std::uint8_t> labels,
              const DcfParams &params) {
  Require(params.p_target > 0 && params.p_target < 1 && params.c_miss > 0 &&
              params.c_fa > 0,
          ErrorCode::kInvalidArgument, "DCF parameters out of range");
  const auto points = OperatingPoints(scores, labels);
  const double w_miss = params.p_target * params.c_miss;
  const double w_fa = (1.0 - params.p_target) * params.c_fa;
  double best = std::numeric_limits<double>::infinity();
  for (const auto &op : points) best = std::min(best, w_miss * op.frr + w_fa * op.far);
  return best / std::min(w_miss, w_fa);
}

TrialList ReadTrials(const std::string &path) {
  std::ifstream in(path);
  Require(in.good(), ErrorCode::kIo, "cannot open '" + path + "'");
  TrialList list;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    std::istringstream fields(line);
    std::string enroll, test, label, extra;
    if (!(fields >> enroll)) continue;
    if (!(fields >> test >> label) || (fields >> extra))
      ParseFail(path, lineno, "expected 'enroll test {target|nontarget}'");
    if (label != "target" && label != "nontarget")
      ParseFail(path, lineno, "label must be 'target' or 'nontarget'");
    list.trials.push_back({enroll, test, label == "target"});
  }
  try {
    list.Validate();
  } catch (const Error &e) {
    throw Error(e.code(), path + ": " + e.what());
  }
  return list;
}

void WriteTrials(const TrialList &trials, const std::string &path) {
  std::ofstream out(path, std::ios::trunc);
  Require(out.good(), ErrorCode::kIo, "cannot write '" + path + "'");
  for (const Trial &t : trials.trials)
    out << t.enroll << ' ' << t.test << ' ' << (t.target ? "target" : "nontarget")
        << '\n';
  Require(out.good(), ErrorCode::kIo, "write failed for '" + path + "'");
}

std::vector<ScoredTrial> ReadScores(const std::string &path) {
  std::ifstream in(path);
  Require(in.good(), ErrorCode::kIo, "cannot open '" + path + "'");
  std::vector<ScoredTrial> out;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    std::istringstream fields(line);
    std::string enroll, test, score_text, extra;
    if (!(fields >> enroll)) continue;
    if (!(fields >> test >> score_text) || (fields >> extra))
      ParseFail(path, lineno, "expected 'enroll test score'");
    double score = 0.0;
    auto res = std::from_chars(score_text.data(),
                               score_text.data() + score_text.size(), score);
    if (res.ec != std::errc() || res.ptr != score_text.data() + score_text.size() ||
        !std::isfinite(score))
      ParseFail(path, lineno, "score '" + score_text + "' is not a finite number");
    out.push_back({enroll, test, score});
  }
  return out;
}

void WriteScores(const TrialList &trials, std::span<const double> scores,
                 const std::string &path) {
  Require(trials.size() == scores.size(), ErrorCode::kSize,
          "scores and trials differ in length");
  std::ofstream out(path, std::ios::trunc);
  Require(out.good(), ErrorCode::kIo, "cannot write '" + path + "'");
  for (std::size_t k = 0; k < scores.size(); ++k) {
    out << trials.trials[k].enroll << ' ' << trials.trials[k].test << ' '
        << FormatDouble(scores[k]) << '\n';
  }
  Require(out.good(), ErrorCode::kIo, "write failed for '" + path + "'");
}

std::vector<double> AlignScores(const TrialList &trials,
                                std::span<const ScoredTrial> scores) {
  std::map<std::pair<std::string, std::string>, double> by_key;
  for (const auto &s : scores) by_key[{s.enroll, s.test}] = s.score;
  std::vector<double> out;
  out.reserve(trials.size());
  for (const Trial &t : trials.trials) {
    auto it = by_key.find({t.enroll, t.test});
    Require(it != by_key.end(), ErrorCode::kLookup,
            "no score for trial (" + t.enroll + ", " + t.test + ")");
    out.push_back(it->second);
  }
  return out;
}

}  // namespace mcsv
