// tests/unit/objectives_test.cc

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

#include <algorithm>
#include <cmath>
#include <random>
#include <map>
#include <numeric>
#include <set>

#include "doctest.h"
#include "mcsv/embeddings.h"
#include "mcsv/errors.h"
#include "mcsv/objectives.h"
#include "oracles.h"

namespace mcsv {
namespace {

std::vector<double> Gaussian(std::mt19937_64 &gen, std::size_t n, double s = 1.0) {
  std::normal_distribution<double> nd(0.0, s);
  std::vector<double> x(n);
  for (auto &v : x) v = nd(gen);
  return x;
}

}  // namespace

TEST_CASE("cross entropy") {
  Matrix uniform(3, 9550, 0.25);
  std::vector<std::size_t> labels{0, 17, 9549};
  CHECK(std::abs(CrossEntropy(uniform, labels).loss - std::log(9550.0)) < 1e-9);
  double prev = 1e9;
  for (double margin : {1.0, 5.0, 20.0, 100.0}) {
    Matrix m(1, 4, 0.0);
    m(0, 2) = margin;
    std::vector<std::size_t> l{2};
    double loss = CrossEntropy(m, l).loss;
    CHECK(loss < prev);
    prev = loss;
  }
  CHECK(prev < 1e-40);
  std::mt19937_64 gen(1);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix m(4, 6);
    m.data = Gaussian(gen, 24, 3.0);
    std::vector<std::size_t> l{1, 5, 0, 3};
    auto r = CrossEntropy(m, l);
    auto f = [&](const std::vector<double> &x) {
      Matrix mm(4, 6);
      mm.data = x;
      return CrossEntropy(mm, l).loss;
    };
    CHECK(oracle::RelativeError(r.grad, oracle::NumericGradient(f, m.data, 1e-4)) < 1e-5);
  }
  std::vector<std::size_t> bad{6, 0, 0, 0};
  CHECK_THROWS_AS(CrossEntropy(Matrix(4, 6), bad), Error);
  CHECK_THROWS_AS(CrossEntropy(Matrix(3, 6), bad), Error);
  Matrix huge(1, 2);
  huge(0, 0) = 1e308;
  std::vector<std::size_t> zero{1};
  CHECK(std::isfinite(CrossEntropy(huge, zero).loss));
}

TEST_CASE("frame bce") {
  std::vector<double> half(10, 0.5);
  std::vector<std::uint8_t> y{1, 0, 1, 1, 0, 0, 1, 0, 1, 0};
  CHECK(FrameBce(half, y).loss == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  std::vector<double> perfect(10);
  for (std::size_t i = 0; i < 10; ++i) perfect[i] = y[i];
  auto p = FrameBce(perfect, y);
  CHECK(p.loss == doctest::Approx(1e-7).epsilon(1e-3));
  for (double g : p.grad) CHECK(g == 0.0);
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> pred(10);
    for (auto &v : pred) v = u(gen);
    auto r = FrameBce(pred, y);
    auto f = [&](const std::vector<double> &x) { return FrameBce(x, y).loss; };
    CHECK(oracle::RelativeError(r.grad, oracle::NumericGradient(f, pred, 1e-6)) < 1e-5);
  }
  CHECK_THROWS_AS(FrameBce(std::vector<double>(3, 0.5), y), Error);
}

TEST_CASE("spectrogram mae") {
  std::mt19937_64 gen(3);
  auto a = Gaussian(gen, 50);
  CHECK(SpectrogramMae(a, a).loss == 0.0);
  for (double g : SpectrogramMae(a, a).grad) CHECK(g == 0.0);
  auto b = a;
  for (auto &v : b) v += 1.0;
  CHECK(SpectrogramMae(a, b).loss == doctest::Approx(1.0).epsilon(1e-15));
  auto c = Gaussian(gen, 50);
  double ref = 0;
  for (std::size_t i = 0; i < 50; ++i) ref += std::abs(a[i] - c[i]);
  CHECK(std::abs(SpectrogramMae(a, c).loss - ref / 50) < 1e-9);
  auto f = [&](const std::vector<double> &x) { return SpectrogramMae(x, c).loss; };
  CHECK(oracle::RelativeError(SpectrogramMae(a, c).grad, oracle::NumericGradient(f, a, 1e-7)) <
        1e-5);
  FeaturePlane p("p", 2, 3, 1.0), q("q", 2, 3, 3.0), r("r", 3, 2);
  CHECK(SpectrogramMae(p, q).loss == 2.0);
  CHECK_THROWS_AS(SpectrogramMae(p, r), Error);
}

TEST_CASE("compose loss") {
  LossWeights w;
  CHECK(ComposeLoss(1, 1, 1, w, true) == 1.1005);
  CHECK(ComposeLoss(1, 1, 1, w, false) == 1.1);
  w.lambda_vad = 0;
  CHECK(ComposeLoss(2.5, 9, 4, w, true) == 2.5 + 0.0005 * 4);
  LossWeights d;
  CHECK(ComposeLoss(2, 3, 4, d, true) ==
        doctest::Approx(2 * ComposeLoss(1, 1.5, 2, d, true)).epsilon(1e-15));
  w.lambda_vad = -1;
  CHECK_THROWS_AS(ComposeLoss(1, 1, 1, w, true), Error);
}

TEST_CASE("softplus") {
  CHECK(Softplus(0.0) == std::log(2.0));
  CHECK(Softplus(1000.0) == 1000.0);
  CHECK(Softplus(-1000.0) >= 0.0);
  CHECK(Softplus(40.0) == doctest::Approx(40.0 + std::exp(-40.0)).epsilon(1e-15));
  CHECK(Softplus(0.5, 2.0) == doctest::Approx(std::log1p(std::exp(1.0)) / 2).epsilon(1e-15));
  for (double x = -20; x <= 20; x += 0.5)
    CHECK(Softplus(x, 1.5) == doctest::Approx(std::log1p(std::exp(1.5 * x)) / 1.5).epsilon(1e-12));
}

TEST_CASE("triplet loss") {
  TripletConfig cfg;
  std::vector<double> a{0, 0}, p{1, 0}, n{0, 1};
  CHECK(std::abs(TripletLoss(a, p, n, cfg).loss - std::log(2.0)) < 1e-12);
  cfg.margin = 2.0;
  std::vector<double> n2{2, 0};
  CHECK(std::abs(TripletLoss(a, a, n2, cfg).loss - std::log(2.0)) < 1e-12);
  auto zero_d = TripletLoss(a, a, n2, cfg);
  CHECK(zero_d.grad_positive == std::vector<double>{0, 0});

  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> margin(0, 3), beta(0.2, 3);
  for (int trial = 0; trial < 50; ++trial) {
    TripletConfig c;
    c.margin = margin(gen);
    c.beta = beta(gen);
    auto x = Gaussian(gen, 24);
    auto split = [](const std::vector<double> &v, int k) {
      return std::vector<double>(v.begin() + 8 * k, v.begin() + 8 * (k + 1));
    };
    auto r = TripletLoss(split(x, 0), split(x, 1), split(x, 2), c);
    CHECK(r.loss > 0.0);
    std::vector<double> grad;
    for (auto *g : {&r.grad_anchor, &r.grad_positive, &r.grad_negative})
      grad.insert(grad.end(), g->begin(), g->end());
    auto f = [&](const std::vector<double> &v) {
      return TripletLoss(split(v, 0), split(v, 1), split(v, 2), c).loss;
    };
    CHECK(oracle::RelativeError(grad, oracle::NumericGradient(f, x, 1e-6)) < 1e-5);
    TripletConfig bigger = c;
    bigger.margin += 0.1;
    CHECK(TripletLoss(split(x, 0), split(x, 1), split(x, 2), bigger).loss > r.loss);
  }
  std::vector<double> three{1, 2, 3};
  CHECK_THROWS_AS(TripletLoss(a, p, three, cfg), Error);
  TripletConfig bad;
  bad.beta = 0;
  CHECK_THROWS_AS(bad.Validate(), Error);
  bad = TripletConfig{};
  bad.k = 1;
  CHECK_THROWS_AS(bad.Validate(), Error);
}

TEST_CASE("hardest mining against enumeration") {
  EmbeddingSet corners(2);
  corners.Add(std::vector<float>{0, 0}, "A", "a0");
  corners.Add(std::vector<float>{0, 1}, "A", "a1");
  corners.Add(std::vector<float>{10, 0}, "B", "b0");
  corners.Add(std::vector<float>{10, 1}, "B", "b1");
  auto res = MineHardestBatch(corners, TripletConfig{});
  std::vector<std::size_t> neg{2, 3, 0, 1}, pos{1, 0, 3, 2};
  for (std::size_t a = 0; a < 4; ++a) {
    CHECK(res.triplets[a].anchor == a);
    CHECK(res.triplets[a].positive == pos[a]);
    CHECK(res.triplets[a].negative == neg[a]);
  }

  EmbeddingSet same(3);
  for (int i = 0; i < 6; ++i)
    same.Add(std::vector<float>{1, 2, 3}, i < 3 ? "x" : "y", "u" + std::to_string(i));
  TripletConfig m;
  m.margin = 1.5;
  for (const auto &t : MineHardestBatch(same, m).triplets)
    CHECK(t.loss == doctest::Approx(Softplus(1.5)).epsilon(1e-12));
  // ties go to the lowest index
  CHECK(MineHardestBatch(same, m).triplets[0].positive == 1);
  CHECK(MineHardestBatch(same, m).triplets[0].negative == 3);

  std::mt19937_64 gen(6);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t spk = 2 + gen() % 5, per = 2 + gen() % 4, dim = 1 + gen() % 6;
    EmbeddingSet batch(dim);
    std::vector<std::vector<double>> rows;
    std::vector<std::string> ids;
    std::uniform_int_distribution<int> q(-2, 2);
    for (std::size_t r = 0; r < spk * per; ++r) {
      std::vector<float> v(dim);
      for (auto &e : v) e = static_cast<float>(q(gen));  // coarse values force ties
      std::string s = "s" + std::to_string(gen() % spk);
      batch.Add(v, s, "u" + std::to_string(r));
      rows.emplace_back(v.begin(), v.end());
      ids.push_back(s);
    }
    std::map<std::string, int> count;
    for (auto &s : ids) ++count[s];
    bool valid = count.size() >= 2;
    for (auto &[s, c] : count) valid &= c >= 2;
    if (!valid) {
      CHECK_THROWS_AS(MineHardestBatch(batch, TripletConfig{}), Error);
      continue;
    }
    auto mined = MineHardestBatch(batch, TripletConfig{});
    auto ref = oracle::MineExhaustive(rows, ids);
    double mean = 0;
    for (std::size_t a = 0; a < ref.size(); ++a) {
      CHECK(mined.triplets[a].positive == ref[a].p);
      CHECK(mined.triplets[a].negative == ref[a].n);
      mean += Softplus(oracle::Distance(rows[a], rows[ref[a].p]) -
                       oracle::Distance(rows[a], rows[ref[a].n]));
    }
    CHECK(mined.loss == doctest::Approx(mean / ref.size()).epsilon(1e-9));
  }
}

TEST_CASE("pk sampling") {
  std::vector<std::string> pool;
  for (int s = 0; s < 80; ++s)
    for (int u = 0; u < 3 + s % 5; ++u) pool.push_back("spk" + std::to_string(s));
  auto batch = PkSample(pool, 4, 60, 11);
  REQUIRE(batch.size() == 240);
  std::map<std::string, int> per;
  for (std::size_t r : batch) ++per[pool.at(r)];
  CHECK(per.size() == 60);
  for (auto &[s, c] : per) CHECK(c == 4);
  for (std::size_t k = 0; k < 240; k += 4)
    for (std::size_t j = 1; j < 4; ++j) CHECK(pool[batch[k + j]] == pool[batch[k]]);
  CHECK(PkSample(pool, 4, 60, 11) == batch);
  CHECK(PkSample(pool, 4, 60, 12) != batch);

  std::vector<std::string> exact;
  for (int s = 0; s < 5; ++s)
    for (int u = 0; u < 4; ++u) exact.push_back("s" + std::to_string(s));
  auto whole = PkSample(exact, 4, 5, 3);
  std::sort(whole.begin(), whole.end());
  for (std::size_t i = 0; i < 20; ++i) CHECK(whole[i] == i);
  CHECK_THROWS_AS(PkSample(exact, 4, 6, 3), Error);
}

TEST_CASE("batch loss is permutation invariant") {
  std::mt19937_64 gen(8);
  EmbeddingSet batch(4);
  for (int r = 0; r < 12; ++r) {
    auto v = Gaussian(gen, 4);
    batch.Add(std::vector<float>(v.begin(), v.end()), "s" + std::to_string(r % 3),
              "u" + std::to_string(r));
  }
  std::vector<std::size_t> order(12);
  std::iota(order.begin(), order.end(), 0);
  std::multiset<double> base;
  for (auto &t : MineHardestBatch(batch, TripletConfig{}).triplets) base.insert(t.loss);
  std::shuffle(order.begin(), order.end(), gen);
  std::multiset<double> shuffled;
  for (auto &t : MineHardestBatch(batch, order, TripletConfig{}).triplets)
    shuffled.insert(t.loss);
  CHECK(base == shuffled);
}

TEST_CASE("normalized mining") {
  EmbeddingSet batch(2);
  batch.Add(std::vector<float>{1, 0}, "a", "0");
  batch.Add(std::vector<float>{100, 1}, "a", "1");
  batch.Add(std::vector<float>{0, 1}, "b", "2");
  batch.Add(std::vector<float>{0, 5}, "b", "3");
  TripletConfig c;
  c.normalize = true;
  auto r = MineHardestBatch(batch, c);
  CHECK(r.triplets[2].positive == 3);
  CHECK(r.triplets[2].negative == 1);
}

}  // namespace mcsv
