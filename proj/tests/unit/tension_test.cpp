#include <gtest/gtest.h>

#include <random>

#include "chordtension/error.h"
#include "chordtension/tension.h"
#include "oracles.h"

namespace ct = chordtension;

namespace {

ct::EmbeddingModel randomModel(std::size_t vocab, int dim, std::uint64_t seed) {
  ct::EmbeddingModel model(vocab, dim);
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> normal(0.0f, 1.0f);
  for (float& v : model.inputMatrix()) v = normal(rng);
  for (float& v : model.outputMatrix()) v = normal(rng);
  return model;
}

ct::PieceSequence sequence(std::vector<int> ids) {
  ct::PieceSequence seq{"p", 0, std::move(ids), {}};
  for (std::size_t i = 0; i < seq.ids.size(); ++i) seq.unit_onsets.push_back(ct::Time(static_cast<std::int64_t>(i), 4));
  return seq;
}

double bruteForce(const ct::EmbeddingModel& model, const std::vector<int>& ids, std::size_t t, int n, bool partial) {
  double sum = 0, mass = 0;
  for (int i = 1; i <= n && static_cast<std::size_t>(i) <= t; ++i) {
    const double w = ct::oracle::decayWeight(i, n);
    sum += ct::oracle::cosine(model.inputRow(ids[t - static_cast<std::size_t>(i)]), model.inputRow(ids[t])) * w;
    mass += w;
  }
  return -sum / (partial ? mass : n);
}

}  // namespace

TEST(DecayWeight, Endpoints) {
  EXPECT_EQ(ct::decayWeight(1, 24), 1.0);
  EXPECT_EQ(ct::decayWeight(1, 1), 1.0);
  EXPECT_NEAR(ct::decayWeight(24, 24), 1.0 - std::exp(-1.0 / 23.0), 1e-12);
  EXPECT_NEAR(ct::decayWeight(24, 24), 0.04254663193161912, 1e-12);
  EXPECT_NEAR(ct::decayWeight(2, 24), 0.9999999998973812, 1e-12);
  EXPECT_NEAR(ct::decayWeight(4, 24), 0.9990881180344455, 1e-12);
}

TEST(DecayWeight, StrictlyDecreasing) {
  for (int n : {2, 5, 24}) {
    for (int i = 2; i <= n; ++i) EXPECT_LT(ct::decayWeight(i, n), ct::decayWeight(i - 1, n)) << i << "/" << n;
  }
  // 1 - e^-59 rounds to 1, so long memories are only non-increasing in double
  for (int i = 2; i <= 60; ++i) EXPECT_LE(ct::decayWeight(i, 60), ct::decayWeight(i - 1, 60));
}

TEST(DecayWeight, OutOfRange) {
  EXPECT_THROW(ct::decayWeight(0, 24), ct::Error);
  EXPECT_THROW(ct::decayWeight(25, 24), ct::Error);
}

TEST(TensionAt, ConstantSequenceIsMinusOne) {
  const auto model = randomModel(3, 8, 1);
  const std::vector<int> ids(40, 2);
  for (std::size_t t = 1; t < ids.size(); ++t) EXPECT_NEAR(ct::tensionAt(model, ids, t, {}), -1.0, 1e-9);
}

TEST(TensionAt, OrthogonalContextIsZero) {
  ct::EmbeddingModel model(2, 4);
  model.inputRow(0)[0] = 1.0f;
  model.inputRow(1)[1] = 2.5f;
  std::vector<int> ids(24, 1);
  ids.push_back(0);
  EXPECT_NEAR(ct::tensionAt(model, ids, 24, {}), 0.0, 1e-9);
}

TEST(TensionAt, MatchesBruteForce) {
  const auto model = randomModel(3, 5, 9);
  const std::vector<int> ids = {0, 1, 2};
  EXPECT_NEAR(ct::tensionAt(model, ids, 2, {}), bruteForce(model, ids, 2, 24, true), 1e-12);

  std::mt19937 rng(4);
  std::vector<int> long_ids(80);
  for (auto& id : long_ids) id = static_cast<int>(rng() % 3);
  for (bool partial : {true, false}) {
    ct::TensionConfig cfg;
    cfg.normalize_partial = partial;
    for (std::size_t t = 1; t < long_ids.size(); ++t) {
      EXPECT_NEAR(ct::tensionAt(model, long_ids, t, cfg), bruteForce(model, long_ids, t, 24, partial), 1e-12);
    }
  }
}

TEST(TensionAt, OutputVectors) {
  auto model = randomModel(2, 3, 2);
  ct::TensionConfig cfg;
  cfg.vectors = ct::VectorSource::Output;
  const std::vector<int> ids = {0, 1};
  EXPECT_NEAR(ct::tensionAt(model, ids, 1, cfg), -ct::cosine(model, 0, 1, ct::VectorSource::Output), 1e-12);
}

TEST(TensionAt, Errors) {
  const auto model = randomModel(2, 3, 2);
  const std::vector<int> ids = {0, 1};
  try {
    ct::tensionAt(model, ids, 0, {});
    FAIL();
  } catch (const ct::Error& e) {
    EXPECT_EQ(e.code(), ct::ErrorCode::NoPrecedingContext);
  }
  EXPECT_THROW(ct::tensionAt(model, ids, 2, {}), ct::Error);
  ct::TensionConfig bad;
  bad.memory = 0;
  EXPECT_THROW(bad.validate(), ct::Error);
}

TEST(TensionSeries, LengthTwo) {
  const auto model = randomModel(2, 3, 2);
  const auto series = ct::tensionSeries(model, sequence({0, 1}), {});
  ASSERT_EQ(series.values.size(), 2u);
  EXPECT_FALSE(series.values[0]);
  EXPECT_TRUE(series.values[1]);
  EXPECT_EQ(ct::tensionCsvRows(series), "p,0,1,1/4," + ct::formatReal(*series.values[1]) + "\n");
  EXPECT_THROW(ct::tensionSeries(model, sequence({0}), {}), ct::Error);
}

TEST(TensionSeries, ConstantSequenceIsStationary) {
  const auto model = randomModel(4, 6, 3);
  const auto series = ct::tensionSeries(model, sequence(std::vector<int>(30, 3)), {});
  for (std::size_t t = 2; t < series.values.size(); ++t) EXPECT_EQ(*series.values[t], *series.values[1]);
}

TEST(TensionSeries, MemoryOneIsPairwise) {
  const auto model = randomModel(5, 6, 8);
  const std::vector<int> ids = {0, 3, 1, 4, 4, 2, 0};
  ct::TensionConfig cfg;
  cfg.memory = 1;
  const auto series = ct::tensionSeries(model, sequence(ids), cfg);
  for (std::size_t t = 1; t < ids.size(); ++t) {
    EXPECT_NEAR(*series.values[t], -ct::oracle::cosine(model.inputRow(ids[t - 1]), model.inputRow(ids[t])), 1e-12);
  }
}

TEST(TensionSeries, RangeAndLiteralAgreement) {
  const auto model = randomModel(6, 4, 12);
  std::mt19937 rng(12);
  std::vector<int> ids(100);
  for (auto& id : ids) id = static_cast<int>(rng() % 6);
  ct::TensionConfig literal;
  literal.normalize_partial = false;
  const auto a = ct::tensionSeries(model, sequence(ids), {});
  const auto b = ct::tensionSeries(model, sequence(ids), literal);
  double mass = 0;
  for (int i = 1; i <= 24; ++i) mass += ct::oracle::decayWeight(i, 24);
  for (std::size_t t = 1; t < ids.size(); ++t) {
    EXPECT_GE(*a.values[t], -1.0);
    EXPECT_LE(*a.values[t], 1.0);
    if (t >= 24) {
      EXPECT_NEAR(*a.values[t] * mass / 24.0, *b.values[t], 1e-12);
    }
  }
}

TEST(TensionSeries, NonNegativeSimilaritiesStayBelowZero) {
  ct::EmbeddingModel model(5, 3);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<float> positive(0.1f, 1.0f);
  for (float& v : model.inputMatrix()) v = positive(rng);
  const auto series = ct::tensionSeries(model, sequence({0, 1, 2, 3, 4, 0, 2}), {});
  for (std::size_t t = 1; t < series.values.size(); ++t) {
    EXPECT_GE(*series.values[t], -1.0);
    EXPECT_LE(*series.values[t], 0.0);
  }
}

TEST(TensionSeries, ShiftEquivariance) {
  const auto model = randomModel(5, 4, 21);
  std::mt19937 rng(21);
  std::vector<int> ids(60);
  for (auto& id : ids) id = static_cast<int>(rng() % 5);
  constexpr std::size_t kPad = 7;
  std::vector<int> padded(kPad, 0);
  padded.insert(padded.end(), ids.begin(), ids.end());
  const auto a = ct::tensionSeries(model, sequence(ids), {});
  const auto b = ct::tensionSeries(model, sequence(padded), {});
  for (std::size_t t = 24; t < ids.size(); ++t) EXPECT_EQ(*a.values[t], *b.values[t + kPad]);
}

TEST(TensionAt, MonotoneInSimilarity) {
  // Raising the current unit's cosine to every context vector lowers tension.
  ct::EmbeddingModel model(3, 2);
  model.inputRow(0)[0] = 1.0f;                      // context
  model.inputRow(1)[0] = 1.0f, model.inputRow(1)[1] = 1.0f;  // 45 degrees
  model.inputRow(2)[0] = 1.0f, model.inputRow(2)[1] = 0.2f;  // closer
  const std::vector<int> far = {0, 0, 0, 1}, near = {0, 0, 0, 2};
  EXPECT_LT(ct::tensionAt(model, near, 3, {}), ct::tensionAt(model, far, 3, {}));
}
