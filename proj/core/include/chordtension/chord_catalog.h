#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chordtension/vocab.h"

namespace chordtension {

enum class ChordType { Triad, Seventh };

enum class ChordQuality {
  Major,
  Minor,
  Diminished,
  Augmented,
  Dominant7,
  Major7,
  Minor7,
  HalfDiminished7,
  Diminished7,
};

enum class Inversion { Root, First, Second, Third };

struct ChordClass {
  ChordType type = ChordType::Triad;
  ChordQuality quality = ChordQuality::Major;
  Inversion inversion = Inversion::Root;
  int root_pc = 0;

  /// Condition identity ignores the root.
  bool sameCondition(const ChordClass& other) const {
    return type == other.type && quality == other.quality && inversion == other.inversion;
  }
  friend bool operator==(const ChordClass&, const ChordClass&) = default;
};

std::string_view toString(ChordType type);
std::string_view toString(ChordQuality quality);
std::string_view toString(Inversion inversion);

/// Matches the unit's pitch-class content (bass plus upper) against the
/// triad and seventh templates under all twelve roots. Inversion comes from
/// the chord member in the bass. Augmented triads and diminished sevenths are
/// symmetric; for them the bass is taken as the root. Anything that is not
/// exactly one template (added or missing tones) is unclassified.
std::optional<ChordClass> classify(const HarmonicUnit& unit);

/// type x quality x inversion, with a stable total order for use as a map key.
struct Condition {
  ChordType type = ChordType::Triad;
  ChordQuality quality = ChordQuality::Major;
  Inversion inversion = Inversion::Root;

  static Condition of(const ChordClass& c) { return {c.type, c.quality, c.inversion}; }
  std::string label() const;  // e.g. "triad/major/first"

  friend auto operator<=>(const Condition&, const Condition&) = default;
};

struct UnitRef {
  std::string piece_id;
  std::size_t unit_index = 0;
  friend auto operator<=>(const UnitRef&, const UnitRef&) = default;
};

struct ClassifiedUnit {
  UnitRef ref;
  Condition condition;
};

struct ConditionSample {
  std::map<Condition, std::vector<std::size_t>> picks;  // indices into the classified list
  std::vector<std::string> warnings;                    // conditions with fewer than requested
};

/// Uniform sample without replacement of up to `per_condition` units per
/// condition. Picks keep the input order within a condition.
ConditionSample sampleConditions(const std::vector<ClassifiedUnit>& units, std::size_t per_condition,
                                 std::uint64_t seed);

/// Classification dump header: piece_id,unit_index,type,quality,inversion
std::string classificationCsvHeader();
std::string classificationCsvRow(const UnitRef& ref, const ChordClass& c);

}  // namespace chordtension
