#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "chordtension/embedding.h"
#include "chordtension/error.h"
#include "oracles.h"
#include "synthetic.h"

namespace ct = chordtension;

namespace {

ct::TrainConfig smallConfig() {
  ct::TrainConfig cfg;
  cfg.dim = 16;
  cfg.epochs = 2;
  return cfg;
}

ct::Vocabulary tokenVocab(std::size_t size) {
  ct::Vocabulary v;
  for (std::size_t i = 0; i < size; ++i) v.add(ct::HarmonicUnit{static_cast<int>(i % 12), 0}, 1);
  return v;
}

double maxGradientError(std::uint64_t seed) {
  constexpr std::size_t kV = 5, kD = 4;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 0.5);
  std::vector<double> input(kV * kD), output(kV * kD);
  for (auto& v : input) v = normal(rng);
  for (auto& v : output) v = normal(rng);
  const std::vector<int> context = {0, 1, 1, 3};
  const int target = 2;
  const std::vector<int> negatives = {4, 0, 4};

  // Analytic gradient recovered from a unit-lr step.
  auto in_after = input, out_after = output;
  std::vector<double> scratch(2 * kD);
  ct::cbowStep<double>(in_after, out_after, kD, context, target, negatives, 1.0, scratch);

  const double h = 1e-5;
  double worst = 0;
  auto check = [&](std::vector<double>& params, const std::vector<double>& after) {
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double analytic = params[i] - after[i];
      const double saved = params[i];
      params[i] = saved + h;
      const double up = ct::oracle::cbowLoss(input, output, kD, context, target, negatives);
      params[i] = saved - h;
      const double down = ct::oracle::cbowLoss(input, output, kD, context, target, negatives);
      params[i] = saved;
      const double numeric = (up - down) / (2 * h);
      const double scale = std::max({std::fabs(analytic), std::fabs(numeric), 1e-6});
      worst = std::max(worst, std::fabs(analytic - numeric) / scale);
    }
  };
  check(input, in_after);
  check(output, out_after);
  return worst;
}

}  // namespace

TEST(CbowStep, LossAtOriginIsClosedForm) {
  std::vector<double> input(3 * 2, 0.0), output(3 * 2, 0.0), scratch(4);
  const std::vector<int> ctx = {0, 1};
  const std::vector<int> negs = {1, 2, 0};
  const double loss = ct::cbowStep<double>(input, output, 2, ctx, 2, negs, 0.1, scratch);
  EXPECT_NEAR(loss, 4 * std::log(2.0), 1e-12);
}

TEST(CbowStep, GradientMatchesFiniteDifferences) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) EXPECT_LT(maxGradientError(seed), 1e-4) << "seed " << seed;
}

TEST(CbowStep, SmallStepReducesLoss) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal(0.0, 0.3);
  std::vector<double> input(6 * 3), output(6 * 3), scratch(6);
  for (auto& v : input) v = normal(rng);
  for (auto& v : output) v = normal(rng);
  const std::vector<int> ctx = {0, 1, 3};
  const std::vector<int> negs = {4, 5};
  const double before = ct::cbowStep<double>(input, output, 3, ctx, 2, negs, 0.05, scratch);
  EXPECT_LT(ct::oracle::cbowLoss(input, output, 3, ctx, 2, negs), before);
}

TEST(NegativeSampler, UniformCountsChiSquare) {
  const std::vector<std::uint64_t> counts(10, 7);
  ct::NegativeSampler sampler(counts);
  std::mt19937_64 rng(17);
  constexpr int kDraws = 100000;
  std::vector<int> hist(10, 0);
  for (int i = 0; i < kDraws; ++i) ++hist[static_cast<std::size_t>(sampler(rng))];
  const double expected = kDraws / 10.0;
  double chi2 = 0;
  for (int h : hist) {
    chi2 += (h - expected) * (h - expected) / expected;
    EXPECT_LT(std::fabs(h - expected), 3 * std::sqrt(expected * 0.9));
  }
  // 9 degrees of freedom, 0.999 quantile
  EXPECT_LT(chi2, 27.88);
}

TEST(NegativeSampler, PowerLawRatio) {
  const std::vector<std::uint64_t> counts = {1000, 1};
  ct::NegativeSampler sampler(counts);
  const double ratio = std::pow(1000.0, 0.75);
  EXPECT_NEAR(sampler.probability(0) / sampler.probability(1), ratio, 1e-6 * ratio);

  std::mt19937_64 rng(23);
  constexpr int kDraws = 400000;
  int rare = 0;
  for (int i = 0; i < kDraws; ++i) rare += sampler(rng) == 1;
  const double p = 1.0 / (1.0 + ratio);
  EXPECT_NEAR(static_cast<double>(rare) / kDraws, p, 4 * std::sqrt(p * (1 - p) / kDraws));
}

TEST(NegativeSampler, SingleId) {
  const std::vector<std::uint64_t> counts = {3};
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(ct::negativeSample<std::mt19937_64>(counts, rng), 0);
}

TEST(Cosine, Definition) {
  const std::vector<float> x = {1, 2, 3}, y = {-1, -2, -3}, z = {3, 0, -1}, zero = {0, 0, 0};
  EXPECT_NEAR(ct::cosine(x, x), 1.0, 1e-12);
  EXPECT_NEAR(ct::cosine(x, y), -1.0, 1e-12);
  EXPECT_NEAR(ct::cosine(x, z), 0.0, 1e-12);
  EXPECT_EQ(ct::cosine(x, zero), 0.0);
}

TEST(Train, ZeroEpochsEqualsInit) {
  auto cfg = smallConfig();
  cfg.epochs = 0;
  const auto g = ct::testing::makeContextGrammar(2000);
  ct::TrainReport report;
  const auto model = ct::train(g.sequences, g.vocab, cfg, &report);
  auto init = ct::initModel(g.vocab.size(), cfg);
  EXPECT_EQ(model.inputMatrix(), init.inputMatrix());
  EXPECT_EQ(model.outputMatrix(), init.outputMatrix());
  EXPECT_EQ(report.initial_probe_loss, report.final_probe_loss);
  EXPECT_EQ(report.examples, 0u);
}

TEST(Train, InitRanges) {
  ct::TrainConfig cfg;
  const auto model = ct::initModel(50, cfg);
  const float bound = 0.5f / 120;
  for (float v : model.inputMatrix()) EXPECT_LE(std::fabs(v), bound);
  for (float v : model.outputMatrix()) EXPECT_EQ(v, 0.0f);
}

TEST(Train, SingleTokenCorpus) {
  ct::Vocabulary vocab;
  vocab.add(ct::HarmonicUnit{0, 0}, 0);
  ct::PieceSequence seq{"solo", 0, {}, {}};
  for (int i = 0; i < 50; ++i) {
    seq.ids.push_back(0);
    seq.unit_onsets.push_back(ct::Time(i));
    vocab.add(ct::HarmonicUnit{0, 0});
  }
  const auto model = ct::train({seq}, vocab, smallConfig());
  EXPECT_TRUE(model.allFinite());
}

TEST(Train, SeededDeterminism) {
  const auto g = ct::testing::makeContextGrammar(5000);
  const auto a = ct::train(g.sequences, g.vocab, smallConfig());
  const auto b = ct::train(g.sequences, g.vocab, smallConfig());
  EXPECT_EQ(a, b);
  auto other = smallConfig();
  other.seed = 2;
  EXPECT_NE(ct::train(g.sequences, g.vocab, other).inputMatrix(), a.inputMatrix());
}

TEST(Train, ProbeLossDrops) {
  const auto g = ct::testing::makeContextGrammar(20000);
  ct::TrainReport report;
  const auto model = ct::train(g.sequences, g.vocab, smallConfig(), &report);
  EXPECT_TRUE(model.allFinite());
  EXPECT_EQ(report.probe_size, 256u);
  EXPECT_LT(report.final_probe_loss, 0.9 * report.initial_probe_loss);
}

TEST(Train, SharedContextsGiveSimilarVectors) {
  const auto g = ct::testing::makeContextGrammar(20000);
  const auto model = ct::train(g.sequences, g.vocab, smallConfig());
  const double same = ct::cosine(model, g.same_a, g.same_b);
  const double other = 0.5 * (ct::cosine(model, g.same_a, g.disjoint) + ct::cosine(model, g.same_b, g.disjoint));
  EXPECT_GT(same, other + 0.2);
}

TEST(Train, WindowStopsAtPieceBoundary) {
  // Token 2 only occurs as a one-unit piece. Input rows move only when the
  // token is context, so its row stays at its initial value unless a window
  // reaches across into the neighbouring piece.
  ct::Vocabulary vocab = tokenVocab(3);
  ct::PieceSequence a{"a", 0, {0, 1, 0, 1, 0, 1}, std::vector<ct::Time>(6)};
  ct::PieceSequence b{"b", 0, {2}, std::vector<ct::Time>(1)};
  const auto cfg = smallConfig();
  const auto model = ct::train({a, b}, vocab, cfg);
  const auto init = ct::initModel(3, cfg);
  const auto row = model.inputRow(2);
  const auto row0 = init.inputRow(2);
  EXPECT_TRUE(std::equal(row.begin(), row.end(), row0.begin()));
  EXPECT_FALSE(std::equal(model.inputRow(0).begin(), model.inputRow(0).end(), init.inputRow(0).begin()));
}

TEST(Train, ConfigValidation) {
  auto cfg = smallConfig();
  cfg.dim = 0;
  EXPECT_THROW(cfg.validate(), ct::Error);
  cfg = smallConfig();
  cfg.negatives = 0;
  EXPECT_THROW(cfg.validate(), ct::Error);
  const auto g = ct::testing::makeContextGrammar(100);
  EXPECT_THROW(ct::train(std::vector<ct::PieceSequence>{}, g.vocab, smallConfig()), ct::Error);
}

TEST(ModelFile, RoundTripAndDigest) {
  const auto g = ct::testing::makeContextGrammar(3000);
  const auto model = ct::train(g.sequences, g.vocab, smallConfig());
  const auto bytes = ct::serializeModel(model);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 8), "CTNMODEL");
  const auto back = ct::deserializeModel(bytes, &g.vocab);
  EXPECT_EQ(back, model);
  EXPECT_EQ(back.config.dim, 16);
  EXPECT_EQ(back.config.window, 6);

  ct::Vocabulary other = g.vocab;
  other.add(ct::HarmonicUnit{5, 1});
  try {
    ct::deserializeModel(bytes, &other);
    FAIL();
  } catch (const ct::Error& e) {
    EXPECT_EQ(e.code(), ct::ErrorCode::DigestMismatch);
  }
}

TEST(ModelFile, Truncated) {
  const auto g = ct::testing::makeContextGrammar(500);
  auto bytes = ct::serializeModel(ct::train(g.sequences, g.vocab, smallConfig()));
  bytes.pop_back();
  EXPECT_THROW(ct::deserializeModel(bytes), ct::Error);
  bytes[0] = 'X';
  EXPECT_THROW(ct::deserializeModel(bytes), ct::Error);
}
