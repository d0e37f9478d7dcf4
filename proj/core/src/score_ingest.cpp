// Kern subset parser, note-event interchange format and full expansion.

#include "chordtension/score_ingest.h"

#include <algorithm>
#include <charconv>
#include <map>
#include <optional>
#include <sstream>

#include "chordtension/error.h"

namespace chordtension {

namespace {

std::vector<std::string_view> splitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == text.size()) break;
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<std::int64_t> parseInt(std::string_view s) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

// ---------------------------------------------------------------------------
// Kern token grammar
// ---------------------------------------------------------------------------

// Notational marks with no bearing on pitch or timing: beams, stems,
// articulations, slurs/phrases, ornaments, editorial and layout flags.
constexpr std::string_view kIgnoredMarks = "LJKk/\\'\"`~^;:,(){}&<>tTMmWwSsR$OoxXyuUvHhIiZz|";

struct KernNote {
  Time duration;
  std::optional<int> pitch;  // nullopt for rests
  bool tie_open = false;
  bool tie_middle = false;
  bool tie_close = false;
};

Time parseRecip(std::string_view digits, int dots, std::size_t line, std::string_view token) {
  auto bad = [&](const std::string& why) {
    return ParseError(ErrorCode::MalformedDuration, line,
                      "'" + std::string(token) + "': " + why);
  };
  Time base;
  if (auto pct = digits.find('%'); pct != std::string_view::npos) {
    auto num = parseInt(digits.substr(0, pct));
    auto den = parseInt(digits.substr(pct + 1));
    if (!num || !den || *num <= 0 || *den <= 0) throw bad("bad rational recip");
    base = Time(*den, *num);
  } else if (std::all_of(digits.begin(), digits.end(), [](char c) { return c == '0'; })) {
    // 0 = breve, 00 = long, 000 = maxima
    base = Time(std::int64_t{1} << digits.size());
  } else {
    auto n = parseInt(digits);
    if (!n || *n <= 0) throw bad("bad recip");
    base = Time(1, *n);
  }
  Time total = base;
  Time add = base;
  for (int i = 0; i < dots; ++i) {
    add /= 2;
    total += add;
  }
  return total;
}

KernNote parseKernSubtoken(std::string_view token, std::size_t line) {
  auto unsupported = [&](const std::string& why) {
    return ParseError(ErrorCode::UnsupportedToken, line, "'" + std::string(token) + "': " + why);
  };

  KernNote note;
  std::string digits;
  bool digits_closed = false;
  int dots = 0;
  char letter = 0;
  int letter_count = 0;
  bool rest = false;
  int accidental = 0;

  for (char c : token) {
    if ((c >= '0' && c <= '9') || c == '%') {
      if (digits_closed) throw ParseError(ErrorCode::MalformedDuration, line,
                                          "'" + std::string(token) + "': split duration");
      digits.push_back(c);
      continue;
    }
    if (!digits.empty()) digits_closed = true;
    if (c == '.') {
      if (digits.empty()) throw ParseError(ErrorCode::MalformedDuration, line,
                                           "'" + std::string(token) + "': dot without duration");
      ++dots;
    } else if ((c >= 'a' && c <= 'g') || (c >= 'A' && c <= 'G')) {
      if (letter != 0 && letter != c) throw unsupported("mixed pitch letters");
      letter = c;
      ++letter_count;
    } else if (c == 'r') {
      rest = true;
    } else if (c == '#') {
      ++accidental;
    } else if (c == '-') {
      --accidental;
    } else if (c == 'n') {
      // explicit natural
    } else if (c == '[') {
      note.tie_open = true;
    } else if (c == '_') {
      note.tie_middle = true;
    } else if (c == ']') {
      note.tie_close = true;
    } else if (c == 'q' || c == 'Q' || c == 'P' || c == 'p') {
      throw unsupported("grace notes and appoggiaturas are not supported");
    } else if (kIgnoredMarks.find(c) != std::string_view::npos) {
      // notation only
    } else {
      throw unsupported(std::string("unexpected character '") + c + "'");
    }
  }

  if (rest && letter != 0) throw unsupported("token is both a rest and a pitch");
  if (!rest && letter == 0) throw unsupported("token has no pitch or rest");
  if (digits.empty()) throw ParseError(ErrorCode::MalformedDuration, line,
                                       "'" + std::string(token) + "': missing duration");
  note.duration = parseRecip(digits, dots, line, token);

  if (!rest) {
    static constexpr int kLetterPc[7] = {9, 11, 0, 2, 4, 5, 7};  // a..g
    const bool lower = letter >= 'a';
    const int pc = kLetterPc[(lower ? letter - 'a' : letter - 'A')];
    // c = C4 = 60, cc = C5, C = C3, CC = C2
    const int octave = lower ? 3 + letter_count : 4 - letter_count;
    const int midi = 12 * (octave + 1) + pc + accidental;
    if (midi < 0 || midi > 127) {
      throw ParseError(ErrorCode::MalformedRecord, line,
                       "'" + std::string(token) + "': pitch outside MIDI range");
    }
    note.pitch = midi;
  }
  return note;
}

bool isSpineStructureChange(std::string_view field) {
  return field == "*^" || field == "*v" || field == "*+" || field == "*x";
}

}  // namespace

// ---------------------------------------------------------------------------
// Kern
// ---------------------------------------------------------------------------

KernScore parseKernScore(std::string_view text) {
  KernScore score;
  const auto lines = splitLines(text);

  std::vector<bool> is_kern;     // per spine
  std::vector<int> voice_of;     // per spine, -1 for non-kern
  std::vector<Time> cursor;      // per spine
  // open ties per kern voice: pitch -> index into score.events
  std::vector<std::map<int, std::size_t>> open_ties;
  bool header_seen = false;
  bool terminated = false;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    std::string_view line = lines[i];
    if (trim(line).empty()) continue;
    if (line.starts_with("!")) continue;  // global or local comment
    if (terminated) {
      throw ParseError(ErrorCode::UnsupportedToken, line_no, "data after spine terminator");
    }

    const auto fields = split(line, '\t');

    if (!header_seen) {
      if (!line.starts_with("**")) {
        throw ParseError(ErrorCode::NoKernSpine, line_no, "expected exclusive interpretation record");
      }
      int voices = 0;
      for (auto f : fields) {
        const bool kern = f == "**kern";
        is_kern.push_back(kern);
        voice_of.push_back(kern ? voices++ : -1);
      }
      if (voices == 0) throw ParseError(ErrorCode::NoKernSpine, line_no, "no **kern spine");
      score.kern_spines = voices;
      cursor.assign(fields.size(), Time(0));
      open_ties.assign(static_cast<std::size_t>(voices), {});
      header_seen = true;
      continue;
    }

    if (fields.size() != is_kern.size()) {
      throw ParseError(ErrorCode::MalformedRecord, line_no,
                       "expected " + std::to_string(is_kern.size()) + " fields, got " +
                           std::to_string(fields.size()));
    }

    if (line.starts_with("*")) {
      std::size_t ended = 0;
      for (std::size_t s = 0; s < fields.size(); ++s) {
        const auto f = fields[s];
        if (isSpineStructureChange(f)) {
          throw ParseError(ErrorCode::UnsupportedToken, line_no,
                           "spine manipulator '" + std::string(f) + "' is not supported");
        }
        if (f.starts_with("**")) {
          throw ParseError(ErrorCode::UnsupportedToken, line_no, "exclusive interpretation change");
        }
        if (f == "*-") {
          ++ended;
        } else if (f != "*" && is_kern[s]) {
          score.interpretations.emplace_back(f);
        }
      }
      if (ended == fields.size()) {
        terminated = true;
      } else if (ended != 0) {
        throw ParseError(ErrorCode::UnsupportedToken, line_no, "partial spine termination");
      }
      continue;
    }

    if (line.starts_with("=")) continue;  // barline

    for (std::size_t s = 0; s < fields.size(); ++s) {
      if (!is_kern[s]) continue;
      const auto field = fields[s];
      if (field == ".") continue;
      const int voice = voice_of[s];
      auto& ties = open_ties[static_cast<std::size_t>(voice)];

      std::optional<Time> advance;
      for (auto sub : split(field, ' ')) {
        if (sub.empty()) continue;
        const KernNote note = parseKernSubtoken(sub, line_no);
        advance = advance ? std::min(*advance, note.duration) : note.duration;
        if (!note.pitch) continue;

        const int pitch = *note.pitch;
        auto open = ties.find(pitch);
        if ((note.tie_middle || note.tie_close) && open != ties.end()) {
          score.events[open->second].duration += note.duration;
          if (note.tie_close) ties.erase(open);
          continue;
        }
        score.events.push_back(NoteEvent{cursor[s], note.duration, pitch, voice});
        if (note.tie_open || note.tie_middle) ties[pitch] = score.events.size() - 1;
      }
      if (advance) cursor[s] += *advance;
    }
  }

  if (!header_seen) throw ParseError(ErrorCode::NoKernSpine, lines.size(), "no **kern spine");
  sortEvents(score.events);
  return score;
}

std::vector<NoteEvent> parseKern(std::string_view text) { return parseKernScore(text).events; }

// ---------------------------------------------------------------------------
// Interchange format
// ---------------------------------------------------------------------------

Time parseTime(std::string_view text) {
  text = trim(text);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parseInt(text.substr(0, slash));
    auto den = parseInt(text.substr(slash + 1));
    if (!num || !den || *den <= 0) throw Error(ErrorCode::MalformedRecord, "bad rational '" + std::string(text) + "'");
    return Time(*num, *den);
  }
  auto whole = parseInt(text);
  if (!whole) throw Error(ErrorCode::MalformedRecord, "bad rational '" + std::string(text) + "'");
  return Time(*whole);
}

std::string formatTime(Time t) {
  if (t.denominator() == 1) return std::to_string(t.numerator());
  return std::to_string(t.numerator()) + "/" + std::to_string(t.denominator());
}

std::vector<NoteEvent> parseEvents(std::string_view text) {
  std::vector<NoteEvent> events;
  const auto lines = splitLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const auto line = trim(lines[i]);
    if (line.empty() || line.starts_with("#")) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 4) {
      throw ParseError(ErrorCode::MalformedRecord, line_no,
                       "expected 4 fields, got " + std::to_string(fields.size()));
    }
    NoteEvent e;
    try {
      e.onset = parseTime(fields[0]);
      e.duration = parseTime(fields[1]);
    } catch (const Error& err) {
      throw ParseError(ErrorCode::MalformedRecord, line_no, err.what());
    }
    auto pitch = parseInt(trim(fields[2]));
    auto voice = parseInt(trim(fields[3]));
    if (!pitch || !voice) throw ParseError(ErrorCode::MalformedRecord, line_no, "pitch/voice must be integers");
    if (*pitch < 0 || *pitch > 127) throw ParseError(ErrorCode::MalformedRecord, line_no, "pitch outside 0..127");
    if (*voice < 0) throw ParseError(ErrorCode::MalformedRecord, line_no, "negative voice");
    if (e.onset < 0) throw ParseError(ErrorCode::MalformedRecord, line_no, "negative onset");
    if (e.duration <= 0) throw ParseError(ErrorCode::NegativeDuration, line_no, "duration must be > 0");
    e.pitch = static_cast<int>(*pitch);
    e.voice = static_cast<int>(*voice);
    events.push_back(e);
  }
  sortEvents(events);
  return events;
}

std::string formatEvents(const std::vector<NoteEvent>& events) {
  std::ostringstream out;
  for (const auto& e : events) {
    out << formatTime(e.onset) << ',' << formatTime(e.duration) << ',' << e.pitch << ',' << e.voice << '\n';
  }
  return out.str();
}

void sortEvents(std::vector<NoteEvent>& events) {
  std::stable_sort(events.begin(), events.end(), [](const NoteEvent& a, const NoteEvent& b) {
    if (a.onset != b.onset) return a.onset < b.onset;
    if (a.voice != b.voice) return a.voice < b.voice;
    return a.pitch < b.pitch;
  });
}

// ---------------------------------------------------------------------------
// Full expansion
// ---------------------------------------------------------------------------

std::vector<Slice> fullExpansion(const std::vector<NoteEvent>& events) {
  if (events.empty()) throw Error(ErrorCode::EmptyInput, "full expansion of an empty event list");

  std::vector<NoteEvent> sorted = events;
  std::sort(sorted.begin(), sorted.end(),
            [](const NoteEvent& a, const NoteEvent& b) { return a.onset < b.onset; });

  std::vector<Slice> slices;
  std::vector<const NoteEvent*> active;
  std::size_t next = 0;
  while (next < sorted.size()) {
    const Time t = sorted[next].onset;
    std::erase_if(active, [t](const NoteEvent* e) { return e->end() <= t; });
    for (; next < sorted.size() && sorted[next].onset == t; ++next) active.push_back(&sorted[next]);

    Slice slice;
    slice.onset = t;
    slice.pitches.reserve(active.size());
    for (const NoteEvent* e : active) slice.pitches.push_back(e->pitch);
    std::sort(slice.pitches.begin(), slice.pitches.end());
    slice.bass = slice.pitches.front();
    slices.push_back(std::move(slice));
  }
  return slices;
}

}  // namespace chordtension
