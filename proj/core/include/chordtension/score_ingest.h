#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

namespace chordtension {

/// Score time in whole-note units. Exact, so "same onset" means equality.
using Time = boost::rational<std::int64_t>;

struct NoteEvent {
  Time onset;
  Time duration;
  int pitch = 0;  // MIDI semitone, 0..127
  int voice = 0;  // spine / part index

  Time end() const { return onset + duration; }
  bool soundsAt(Time t) const { return onset <= t && t < end(); }

  friend bool operator==(const NoteEvent&, const NoteEvent&) = default;
};

/// All pitches sounding at one unique onset after full expansion.
struct Slice {
  Time onset;
  std::vector<int> pitches;  // ascending, duplicates kept
  int bass = 0;              // == pitches.front()

  friend bool operator==(const Slice&, const Slice&) = default;
};

/// Result of a kern parse: the note events plus tandem interpretations
/// (key, meter, clef, ...) that were recognised but play no role in timing.
struct KernScore {
  std::vector<NoteEvent> events;
  std::vector<std::string> interpretations;
  int kern_spines = 0;
};

/// Parses the supported **kern subset (see docs/kern_subset.md). Events come
/// back sorted by (onset, voice, pitch). Throws ParseError on anything
/// outside the subset.
KernScore parseKernScore(std::string_view text);
std::vector<NoteEvent> parseKern(std::string_view text);

/// Parses the `onset,duration,pitch,voice` interchange format.
std::vector<NoteEvent> parseEvents(std::string_view text);

/// Inverse of parseEvents; one record per line, no header.
std::string formatEvents(const std::vector<NoteEvent>& events);

Time parseTime(std::string_view text);
std::string formatTime(Time t);

/// One slice per distinct onset. A slice at t holds every event with
/// onset <= t < onset + duration.
std::vector<Slice> fullExpansion(const std::vector<NoteEvent>& events);

void sortEvents(std::vector<NoteEvent>& events);

}  // namespace chordtension
