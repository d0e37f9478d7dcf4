#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chordtension/embedding.h"
#include "chordtension/vocab.h"

namespace chordtension {

struct TensionConfig {
  int memory = 24;  // number of preceding units considered
  /// Divide by the weight mass actually used instead of by `memory`, so a
  /// constant sequence scores -1 at every position.
  bool normalize_partial = true;
  VectorSource vectors = VectorSource::Input;

  void validate() const;
  std::string canonical() const;
};

/// Memory-decay weight for the unit i steps back, 1 <= i <= n:
///   1 - exp(1 - n / (i - 1)), with the i = 1 value taken as its limit, 1.
double decayWeight(int i, int n);

/// Tension of unit t given its predecessors:
///   -(1/Z) * sum_{i=1..min(n,t)} cos(ids[t-i], ids[t]) * decayWeight(i, n)
/// with Z = n (literal mode) or the sum of the weights used (normalized mode).
/// Values near -1 are relaxed, 0 is maximal tension; strongly negative
/// cosines can push the value above 0.
double tensionAt(const EmbeddingModel& model, std::span<const int> ids, std::size_t t, const TensionConfig& cfg);

struct TensionSeries {
  std::string piece_id;
  int transposition = 0;
  std::vector<std::optional<double>> values;  // values[0] is always empty
  std::vector<Time> onsets;
  TensionConfig config;
};

TensionSeries tensionSeries(const EmbeddingModel& model, const PieceSequence& sequence, const TensionConfig& cfg);

/// Header line for the tension CSV: piece_id,transposition,unit_index,onset,tension
std::string tensionCsvHeader();
/// One row per defined value.
std::string tensionCsvRows(const TensionSeries& series);

/// Shortest round-trippable decimal rendering used in every CSV output.
std::string formatReal(double value);

}  // namespace chordtension
