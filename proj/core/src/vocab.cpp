#include "chordtension/vocab.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <sstream>

#include "chordtension/error.h"

namespace chordtension {

namespace {

int mod12(int x) { return ((x % 12) + 12) % 12; }

std::uint16_t rotateMask(std::uint16_t mask, int k) {
  std::uint16_t out = 0;
  for (int pc = 0; pc < 12; ++pc) {
    if (mask & (1u << pc)) out |= static_cast<std::uint16_t>(1u << mod12(pc + k));
  }
  return out;
}

HarmonicUnit canonicalPcSet(std::uint16_t pc_mask) {
  const int lowest = std::countr_zero(pc_mask);
  return HarmonicUnit{lowest, static_cast<std::uint16_t>(pc_mask & ~(1u << lowest))};
}

std::vector<std::string_view> splitOn(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

template <typename Int>
Int toInt(std::string_view s, std::size_t line) {
  Int value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(ErrorCode::MalformedRecord, line, "bad integer '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace

std::string_view reductionModeName(ReductionMode mode) {
  return mode == ReductionMode::BassTagged ? "bass-tagged" : "pcset";
}

ReductionMode parseReductionMode(std::string_view name) {
  if (name == "bass-tagged") return ReductionMode::BassTagged;
  if (name == "pcset") return ReductionMode::PitchClassSet;
  throw Error(ErrorCode::InvalidConfig, "unknown reduction mode '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// HarmonicUnit
// ---------------------------------------------------------------------------

HarmonicUnit HarmonicUnit::fromPcs(int bass_pc, const std::vector<int>& upper_pcs) {
  HarmonicUnit u;
  u.bass_pc = mod12(bass_pc);
  for (int pc : upper_pcs) u.upper_mask |= static_cast<std::uint16_t>(1u << mod12(pc));
  u.upper_mask &= static_cast<std::uint16_t>(~(1u << u.bass_pc));
  return u;
}

std::vector<int> HarmonicUnit::upperPcs() const {
  std::vector<int> pcs;
  for (int pc = 0; pc < 12; ++pc) {
    if (upper_mask & (1u << pc)) pcs.push_back(pc);
  }
  return pcs;
}

std::string HarmonicUnit::toString() const {
  std::string out = std::to_string(bass_pc) + ":";
  bool first = true;
  for (int pc : upperPcs()) {
    if (!first) out += ',';
    out += std::to_string(pc);
    first = false;
  }
  return out;
}

HarmonicUnit reduce(const Slice& slice, ReductionMode mode) {
  std::uint16_t mask = 0;
  for (int p : slice.pitches) mask |= static_cast<std::uint16_t>(1u << mod12(p));
  if (mode == ReductionMode::PitchClassSet) return canonicalPcSet(mask);
  const int bass_pc = mod12(slice.bass);
  return HarmonicUnit{bass_pc, static_cast<std::uint16_t>(mask & ~(1u << bass_pc))};
}

HarmonicUnit transpose(const HarmonicUnit& unit, int k, ReductionMode mode) {
  if (k < kMinTransposition || k > kMaxTransposition) {
    throw Error(ErrorCode::TranspositionOutOfRange,
                "transposition " + std::to_string(k) + " outside [-5, 6]");
  }
  if (mode == ReductionMode::PitchClassSet) return canonicalPcSet(rotateMask(unit.pcMask(), k));
  return HarmonicUnit{mod12(unit.bass_pc + k), rotateMask(unit.upper_mask, k)};
}

// ---------------------------------------------------------------------------
// Vocabulary
// ---------------------------------------------------------------------------

int Vocabulary::add(const HarmonicUnit& unit, std::uint64_t count) {
  auto [it, inserted] = index_.try_emplace(unit.key(), static_cast<int>(units_.size()));
  if (inserted) {
    units_.push_back(unit);
    counts_.push_back(0);
  }
  counts_[static_cast<std::size_t>(it->second)] += count;
  return it->second;
}

std::optional<int> Vocabulary::find(const HarmonicUnit& unit) const {
  auto it = index_.find(unit.key());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const HarmonicUnit& Vocabulary::unit(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= units_.size()) {
    throw Error(ErrorCode::IdOutOfRange, "vocabulary id " + std::to_string(id));
  }
  return units_[static_cast<std::size_t>(id)];
}

std::uint64_t Vocabulary::count(int id) const {
  unit(id);
  return counts_[static_cast<std::size_t>(id)];
}

std::string Vocabulary::serialize() const {
  std::ostringstream out;
  for (std::size_t id = 0; id < units_.size(); ++id) {
    const auto& u = units_[id];
    out << id << '\t' << u.bass_pc << '\t';
    const auto pcs = u.upperPcs();
    for (std::size_t i = 0; i < pcs.size(); ++i) out << (i ? "," : "") << pcs[i];
    out << '\t' << counts_[id] << '\n';
  }
  return out.str();
}

Vocabulary Vocabulary::parse(std::string_view text) {
  Vocabulary vocab;
  std::size_t line_no = 0;
  for (auto line : splitOn(text, '\n')) {
    ++line_no;
    if (line.empty() || line.starts_with("#")) continue;
    const auto fields = splitOn(line, '\t');
    if (fields.size() != 4) throw ParseError(ErrorCode::MalformedRecord, line_no, "vocabulary record needs 4 fields");
    const int id = toInt<int>(fields[0], line_no);
    const int bass = toInt<int>(fields[1], line_no);
    if (bass < 0 || bass > 11) throw ParseError(ErrorCode::MalformedRecord, line_no, "bass_pc outside 0..11");
    std::vector<int> upper;
    if (!fields[2].empty()) {
      for (auto pc : splitOn(fields[2], ',')) {
        const int v = toInt<int>(pc, line_no);
        if (v < 0 || v > 11 || v == bass) throw ParseError(ErrorCode::MalformedRecord, line_no, "bad upper pc");
        upper.push_back(v);
      }
    }
    const auto count = toInt<std::uint64_t>(fields[3], line_no);
    if (static_cast<std::size_t>(id) != vocab.size()) {
      throw ParseError(ErrorCode::MalformedRecord, line_no, "vocabulary ids must be dense and ordered");
    }
    const auto unit = HarmonicUnit::fromPcs(bass, upper);
    if (vocab.find(unit)) throw ParseError(ErrorCode::MalformedRecord, line_no, "duplicate unit " + unit.toString());
    vocab.add(unit, count);
  }
  return vocab;
}

Sha256 Vocabulary::digest() const { return sha256(serialize()); }

// ---------------------------------------------------------------------------
// Corpus
// ---------------------------------------------------------------------------

std::vector<std::string> Corpus::pieceIds() const {
  std::vector<std::string> ids;
  for (const auto& seq : sequences) {
    if (ids.empty() || ids.back() != seq.piece_id) ids.push_back(seq.piece_id);
  }
  return ids;
}

const PieceSequence* Corpus::find(std::string_view piece_id, int transposition) const {
  for (const auto& seq : sequences) {
    if (seq.piece_id == piece_id && seq.transposition == transposition) return &seq;
  }
  return nullptr;
}

Corpus buildCorpus(const std::vector<PieceSlices>& pieces, ReductionMode mode) {
  if (pieces.empty()) throw Error(ErrorCode::EmptyCorpus, "no pieces to build a corpus from");
  Corpus corpus;
  corpus.mode = mode;
  corpus.sequences.reserve(pieces.size() * kTranspositionCount);
  for (const auto& piece : pieces) {
    if (piece.slices.empty()) throw Error(ErrorCode::EmptyInput, "piece '" + piece.piece_id + "' has no slices");
    std::vector<HarmonicUnit> base;
    base.reserve(piece.slices.size());
    for (const auto& s : piece.slices) base.push_back(reduce(s, mode));
    for (int k = kMinTransposition; k <= kMaxTransposition; ++k) {
      PieceSequence seq;
      seq.piece_id = piece.piece_id;
      seq.transposition = k;
      seq.ids.reserve(base.size());
      seq.unit_onsets.reserve(base.size());
      for (std::size_t i = 0; i < base.size(); ++i) {
        seq.ids.push_back(corpus.vocab.add(transpose(base[i], k, mode)));
        seq.unit_onsets.push_back(piece.slices[i].onset);
      }
      corpus.sequences.push_back(std::move(seq));
    }
  }
  return corpus;
}

std::string serializeSequences(const std::vector<PieceSequence>& sequences) {
  std::ostringstream out;
  for (const auto& seq : sequences) {
    out << seq.piece_id << '\t' << seq.transposition << '\t';
    for (std::size_t i = 0; i < seq.ids.size(); ++i) out << (i ? " " : "") << seq.ids[i];
    out << '\t';
    for (std::size_t i = 0; i < seq.unit_onsets.size(); ++i) out << (i ? " " : "") << formatTime(seq.unit_onsets[i]);
    out << '\n';
  }
  return out.str();
}

std::vector<PieceSequence> parseSequences(std::string_view text) {
  std::vector<PieceSequence> out;
  std::size_t line_no = 0;
  for (auto line : splitOn(text, '\n')) {
    ++line_no;
    if (line.empty() || line.starts_with("#")) continue;
    const auto fields = splitOn(line, '\t');
    if (fields.size() != 4 || fields[0].empty()) {
      throw ParseError(ErrorCode::MalformedRecord, line_no, "sequence record needs 4 fields");
    }
    PieceSequence seq;
    seq.piece_id = std::string(fields[0]);
    seq.transposition = toInt<int>(fields[1], line_no);
    for (auto tok : splitOn(fields[2], ' ')) seq.ids.push_back(toInt<int>(tok, line_no));
    for (auto tok : splitOn(fields[3], ' ')) {
      try {
        seq.unit_onsets.push_back(parseTime(tok));
      } catch (const Error& e) {
        throw ParseError(ErrorCode::MalformedRecord, line_no, e.what());
      }
    }
    if (seq.ids.size() != seq.unit_onsets.size()) {
      throw ParseError(ErrorCode::MalformedRecord, line_no, "ids and onsets differ in length");
    }
    out.push_back(std::move(seq));
  }
  return out;
}

}  // namespace chordtension
