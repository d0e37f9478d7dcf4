#include "chordtension/chord_catalog.h"

#include <algorithm>
#include <iterator>
#include <array>
#include <bit>
#include <random>

#include "chordtension/error.h"

namespace chordtension {

namespace {

struct Template {
  ChordType type;
  ChordQuality quality;
  std::array<int, 4> tones;  // root, third, fifth, seventh (-1 if absent)
  bool symmetric;
};

constexpr std::array<Template, 9> kTemplates = {{
    {ChordType::Triad, ChordQuality::Major, {0, 4, 7, -1}, false},
    {ChordType::Triad, ChordQuality::Minor, {0, 3, 7, -1}, false},
    {ChordType::Triad, ChordQuality::Diminished, {0, 3, 6, -1}, false},
    {ChordType::Triad, ChordQuality::Augmented, {0, 4, 8, -1}, true},
    {ChordType::Seventh, ChordQuality::Dominant7, {0, 4, 7, 10}, false},
    {ChordType::Seventh, ChordQuality::Major7, {0, 4, 7, 11}, false},
    {ChordType::Seventh, ChordQuality::Minor7, {0, 3, 7, 10}, false},
    {ChordType::Seventh, ChordQuality::HalfDiminished7, {0, 3, 6, 10}, false},
    {ChordType::Seventh, ChordQuality::Diminished7, {0, 3, 6, 9}, true},
}};

std::uint16_t templateMask(const Template& t, int root) {
  std::uint16_t mask = 0;
  for (int tone : t.tones) {
    if (tone >= 0) mask |= static_cast<std::uint16_t>(1u << ((root + tone) % 12));
  }
  return mask;
}

}  // namespace

std::string_view toString(ChordType type) { return type == ChordType::Triad ? "triad" : "seventh"; }

std::string_view toString(ChordQuality quality) {
  switch (quality) {
    case ChordQuality::Major:           return "major";
    case ChordQuality::Minor:           return "minor";
    case ChordQuality::Diminished:      return "diminished";
    case ChordQuality::Augmented:       return "augmented";
    case ChordQuality::Dominant7:       return "dominant7";
    case ChordQuality::Major7:          return "major7";
    case ChordQuality::Minor7:          return "minor7";
    case ChordQuality::HalfDiminished7: return "halfdim7";
    case ChordQuality::Diminished7:     return "dim7";
  }
  return "unknown";
}

std::string_view toString(Inversion inversion) {
  switch (inversion) {
    case Inversion::Root:   return "root";
    case Inversion::First:  return "first";
    case Inversion::Second: return "second";
    case Inversion::Third:  return "third";
  }
  return "unknown";
}

std::optional<ChordClass> classify(const HarmonicUnit& unit) {
  const std::uint16_t content = unit.pcMask();
  const int size = std::popcount(content);
  if (size != 3 && size != 4) return std::nullopt;

  for (const auto& t : kTemplates) {
    const int template_size = t.tones[3] < 0 ? 3 : 4;
    if (template_size != size) continue;
    if (t.symmetric) {
      if (templateMask(t, unit.bass_pc) == content) {
        return ChordClass{t.type, t.quality, Inversion::Root, unit.bass_pc};
      }
      continue;
    }
    for (int root = 0; root < 12; ++root) {
      if (templateMask(t, root) != content) continue;
      const int bass_interval = ((unit.bass_pc - root) % 12 + 12) % 12;
      for (std::size_t pos = 0; pos < t.tones.size(); ++pos) {
        if (t.tones[pos] == bass_interval) {
          return ChordClass{t.type, t.quality, static_cast<Inversion>(pos), root};
        }
      }
    }
  }
  return std::nullopt;
}

std::string Condition::label() const {
  return std::string(toString(type)) + "/" + std::string(toString(quality)) + "/" + std::string(toString(inversion));
}

ConditionSample sampleConditions(const std::vector<ClassifiedUnit>& units, std::size_t per_condition,
                                 std::uint64_t seed) {
  if (per_condition == 0) throw Error(ErrorCode::InvalidConfig, "per_condition must be >= 1");
  std::map<Condition, std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < units.size(); ++i) buckets[units[i].condition].push_back(i);

  ConditionSample out;
  std::mt19937_64 rng(seed);
  for (auto& [condition, members] : buckets) {
    if (members.size() <= per_condition) {
      if (members.size() < per_condition) {
        out.warnings.push_back(condition.label() + ": only " + std::to_string(members.size()) + " of " +
                               std::to_string(per_condition) + " requested units available");
      }
      out.picks[condition] = members;
      continue;
    }
    std::vector<std::size_t> chosen;
    chosen.reserve(per_condition);
    std::sample(members.begin(), members.end(), std::back_inserter(chosen), per_condition, rng);
    out.picks[condition] = std::move(chosen);
  }
  return out;
}

std::string classificationCsvHeader() { return "piece_id,unit_index,type,quality,inversion\n"; }

std::string classificationCsvRow(const UnitRef& ref, const ChordClass& c) {
  return ref.piece_id + "," + std::to_string(ref.unit_index) + "," + std::string(toString(c.type)) + "," +
         std::string(toString(c.quality)) + "," + std::string(toString(c.inversion)) + "\n";
}

}  // namespace chordtension
