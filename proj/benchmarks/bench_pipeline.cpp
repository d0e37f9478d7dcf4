#include <benchmark/benchmark.h>

#include <random>

#include "chordtension/embedding.h"
#include "chordtension/score_ingest.h"
#include "chordtension/stats.h"
#include "chordtension/tension.h"
#include "chordtension/vocab.h"

namespace ct = chordtension;

namespace {

std::vector<ct::NoteEvent> randomScore(std::size_t events, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> length(1, 8), pitch(36, 84), gap(0, 2);
  std::vector<ct::NoteEvent> out(events);
  std::int64_t onset = 0;
  for (auto& e : out) {
    onset += gap(rng);
    e.onset = ct::Time(onset, 8);
    e.duration = ct::Time(length(rng), 8);
    e.pitch = pitch(rng);
  }
  return out;
}

// Corpus of random block-chord pieces; small vocabulary so training cost is
// dominated by the sequence length.
ct::Corpus randomCorpus(int pieces, int units) {
  std::vector<ct::PieceSlices> slices;
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> root(0, 11), quality(0, 3);
  const int shapes[4][3] = {{0, 4, 7}, {0, 3, 7}, {0, 3, 6}, {0, 4, 8}};
  for (int p = 0; p < pieces; ++p) {
    ct::PieceSlices piece{"p" + std::to_string(p), {}};
    for (int u = 0; u < units; ++u) {
      const int r = root(rng), q = quality(rng);
      ct::Slice s;
      s.onset = ct::Time(u, 4);
      for (int iv : shapes[q]) s.pitches.push_back(48 + r + iv);
      s.bass = s.pitches.front();
      piece.slices.push_back(s);
    }
    slices.push_back(std::move(piece));
  }
  return ct::buildCorpus(slices);
}

}  // namespace

static void BM_FullExpansion(benchmark::State& state) {
  const auto events = randomScore(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(ct::fullExpansion(events));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FullExpansion)->Arg(1000)->Arg(10000);

static void BM_TrainEpoch(benchmark::State& state) {
  const auto corpus = randomCorpus(20, 200);
  ct::TrainConfig cfg;
  cfg.epochs = 1;
  cfg.dim = static_cast<int>(state.range(0));
  std::size_t tokens = 0;
  for (const auto& s : corpus.sequences) tokens += s.ids.size();
  for (auto _ : state) benchmark::DoNotOptimize(ct::train(corpus.sequences, corpus.vocab, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tokens));
}
BENCHMARK(BM_TrainEpoch)->Arg(16)->Arg(120)->Unit(benchmark::kMillisecond);

static void BM_TensionSeries(benchmark::State& state) {
  ct::EmbeddingModel model(200, 120);
  std::mt19937_64 rng(5);
  std::normal_distribution<float> normal;
  for (float& v : model.inputMatrix()) v = normal(rng);
  ct::PieceSequence seq{"bench", 0, {}, {}};
  for (int i = 0; i < state.range(0); ++i) {
    seq.ids.push_back(static_cast<int>(rng() % 200));
    seq.unit_onsets.push_back(ct::Time(i));
  }
  for (auto _ : state) benchmark::DoNotOptimize(ct::tensionSeries(model, seq, {}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TensionSeries)->Arg(1000);

static void BM_IncompleteBeta(benchmark::State& state) {
  double x = 0.001;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ct::stats::incompleteBeta(4.5, 600.0, x));
    x = x < 0.999 ? x + 0.001 : 0.001;
  }
}
BENCHMARK(BM_IncompleteBeta);

static void BM_Welch(benchmark::State& state) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal;
  std::vector<double> a(1200), b(1200);
  for (auto& v : a) v = normal(rng);
  for (auto& v : b) v = normal(rng) + 0.1;
  for (auto _ : state) benchmark::DoNotOptimize(ct::stats::welchT(a, b));
}
BENCHMARK(BM_Welch);

BENCHMARK_MAIN();
