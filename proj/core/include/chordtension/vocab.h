#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "chordtension/digest.h"
#include "chordtension/score_ingest.h"

namespace chordtension {

/// How a slice is reduced to a vocabulary token.
///
/// BassTagged keeps the bass pitch class apart from the upper pitch classes,
/// so C/E and C are different tokens (inversions stay distinguishable).
/// PitchClassSet keeps only the deduplicated set; the lowest pitch class
/// number stands in as "bass" so the representation stays canonical.
enum class ReductionMode { BassTagged, PitchClassSet };

std::string_view reductionModeName(ReductionMode mode);
ReductionMode parseReductionMode(std::string_view name);

constexpr int kMinTransposition = -5;
constexpr int kMaxTransposition = 6;
constexpr int kTranspositionCount = kMaxTransposition - kMinTransposition + 1;

struct HarmonicUnit {
  int bass_pc = 0;
  std::uint16_t upper_mask = 0;  // bit p set <=> pitch class p above the bass; never has bass_pc

  static HarmonicUnit fromPcs(int bass_pc, const std::vector<int>& upper_pcs);

  std::vector<int> upperPcs() const;
  /// Bass and upper pitch classes together.
  std::uint16_t pcMask() const { return static_cast<std::uint16_t>(upper_mask | (1u << bass_pc)); }
  /// Dense packing used as a hash key: bass * 4096 + upper_mask.
  std::uint32_t key() const { return static_cast<std::uint32_t>(bass_pc) * 4096u + upper_mask; }
  /// "bass:pc,pc,..." e.g. "0:4,7".
  std::string toString() const;

  friend bool operator==(const HarmonicUnit&, const HarmonicUnit&) = default;
};

HarmonicUnit reduce(const Slice& slice, ReductionMode mode = ReductionMode::BassTagged);

/// Shifts every pitch class by k semitones, k in [-5, 6].
HarmonicUnit transpose(const HarmonicUnit& unit, int k, ReductionMode mode = ReductionMode::BassTagged);

class Vocabulary {
 public:
  /// Returns the id of unit, assigning the next dense id on first sight.
  int add(const HarmonicUnit& unit, std::uint64_t count = 1);
  std::optional<int> find(const HarmonicUnit& unit) const;

  const HarmonicUnit& unit(int id) const;
  std::uint64_t count(int id) const;
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::size_t size() const { return units_.size(); }
  bool empty() const { return units_.empty(); }

  /// `id<TAB>bass_pc<TAB>pc,pc,...<TAB>count` per line.
  std::string serialize() const;
  static Vocabulary parse(std::string_view text);
  /// SHA-256 of serialize(); binds models to the vocabulary they were trained on.
  Sha256 digest() const;

 private:
  std::vector<HarmonicUnit> units_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::uint32_t, int> index_;
};

struct PieceSequence {
  std::string piece_id;
  int transposition = 0;
  std::vector<int> ids;
  std::vector<Time> unit_onsets;  // parallel to ids
};

struct PieceSlices {
  std::string piece_id;
  std::vector<Slice> slices;
};

struct Corpus {
  Vocabulary vocab;
  std::vector<PieceSequence> sequences;  // 12 per piece, transpositions -5..6 in order
  ReductionMode mode = ReductionMode::BassTagged;

  std::vector<std::string> pieceIds() const;
  const PieceSequence* find(std::string_view piece_id, int transposition) const;
};

/// Reduces, transposes (-5..+6) and indexes every piece. Ids are assigned in
/// first-occurrence order over (piece, transposition, unit).
Corpus buildCorpus(const std::vector<PieceSlices>& pieces, ReductionMode mode = ReductionMode::BassTagged);

/// `piece_id<TAB>transposition<TAB>id id ...<TAB>onset onset ...` per line.
std::string serializeSequences(const std::vector<PieceSequence>& sequences);
std::vector<PieceSequence> parseSequences(std::string_view text);

}  // namespace chordtension
