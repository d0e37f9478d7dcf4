#include "chordtension/tension.h"

#include <charconv>
#include <cmath>
#include <sstream>

#include "chordtension/error.h"

namespace chordtension {

void TensionConfig::validate() const {
  if (memory < 1) throw Error(ErrorCode::InvalidConfig, "tension memory must be >= 1");
}

std::string TensionConfig::canonical() const {
  return "memory=" + std::to_string(memory) + ";normalize_partial=" + (normalize_partial ? "1" : "0") +
         ";vectors=" + (vectors == VectorSource::Input ? "input" : "output");
}

double decayWeight(int i, int n) {
  if (n < 1 || i < 1 || i > n) {
    throw Error(ErrorCode::IndexOutOfRange,
                "decay weight index " + std::to_string(i) + " outside 1.." + std::to_string(n));
  }
  if (i == 1) return 1.0;
  return 1.0 - std::exp(1.0 - static_cast<double>(n) / static_cast<double>(i - 1));
}

double tensionAt(const EmbeddingModel& model, std::span<const int> ids, std::size_t t, const TensionConfig& cfg) {
  cfg.validate();
  if (t == 0) throw Error(ErrorCode::NoPrecedingContext, "unit 0 has no preceding context");
  if (t >= ids.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "unit " + std::to_string(t) + " beyond sequence of " +
                                                std::to_string(ids.size()));
  }
  const std::size_t m = std::min(static_cast<std::size_t>(cfg.memory), t);
  const auto current = model.row(ids[t], cfg.vectors);
  double sum = 0;
  double mass = 0;
  for (std::size_t i = 1; i <= m; ++i) {
    const double w = decayWeight(static_cast<int>(i), cfg.memory);
    sum += cosine(model.row(ids[t - i], cfg.vectors), current) * w;
    mass += w;
  }
  const double z = cfg.normalize_partial ? mass : static_cast<double>(cfg.memory);
  return -sum / z;
}

TensionSeries tensionSeries(const EmbeddingModel& model, const PieceSequence& sequence, const TensionConfig& cfg) {
  if (sequence.ids.size() < 2) {
    throw Error(ErrorCode::SequenceTooShort, "piece '" + sequence.piece_id + "' has fewer than 2 units");
  }
  TensionSeries series;
  series.piece_id = sequence.piece_id;
  series.transposition = sequence.transposition;
  series.onsets = sequence.unit_onsets;
  series.config = cfg;
  series.values.resize(sequence.ids.size());
  for (std::size_t t = 1; t < sequence.ids.size(); ++t) {
    series.values[t] = tensionAt(model, sequence.ids, t, cfg);
  }
  return series;
}

std::string formatReal(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

std::string tensionCsvHeader() { return "piece_id,transposition,unit_index,onset,tension\n"; }

std::string tensionCsvRows(const TensionSeries& series) {
  std::ostringstream out;
  for (std::size_t t = 0; t < series.values.size(); ++t) {
    if (!series.values[t]) continue;
    out << series.piece_id << ',' << series.transposition << ',' << t << ','
        << (t < series.onsets.size() ? formatTime(series.onsets[t]) : std::string()) << ','
        << formatReal(*series.values[t]) << '\n';
  }
  return out.str();
}

}  // namespace chordtension
