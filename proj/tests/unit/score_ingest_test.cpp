#include <gtest/gtest.h>

#include "chordtension/error.h"
#include "chordtension/score_ingest.h"
#include "oracles.h"
#include "synthetic.h"

namespace ct = chordtension;
using ct::Time;

namespace {

ct::ErrorCode codeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ct::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ct::ErrorCode::Io;
}

}  // namespace

TEST(ParseKern, SingleSpineTwoNotes) {
  const auto events = ct::parseKern("**kern\n4c\n4d\n*-\n");
  ASSERT_EQ(events.size(), 2u);
  EXPECT_EQ(events[0], (ct::NoteEvent{Time(0), Time(1, 4), 60, 0}));
  EXPECT_EQ(events[1], (ct::NoteEvent{Time(1, 4), Time(1, 4), 62, 0}));
}

TEST(ParseKern, OctaveConvention) {
  const auto events = ct::parseKern("**kern\n4c\n4cc\n4C\n4CC\n4b-\n4f#\n*-\n");
  std::vector<int> pitches;
  for (const auto& e : events) pitches.push_back(e.pitch);
  EXPECT_EQ(pitches, (std::vector<int>{60, 72, 48, 36, 70, 66}));
}

TEST(ParseKern, ChordTokenSharesOnsetAndDuration) {
  const auto events = ct::parseKern("**kern\n4c 4e 4g\n*-\n");
  ASSERT_EQ(events.size(), 3u);
  for (const auto& e : events) {
    EXPECT_EQ(e.onset, Time(0));
    EXPECT_EQ(e.duration, Time(1, 4));
  }
}

TEST(ParseKern, DurationsDotsAndRationals) {
  const auto events = ct::parseKern("**kern\n4.c\n8..d\n3%2e\n0f\n2r\n16g\n*-\n");
  ASSERT_EQ(events.size(), 5u);
  EXPECT_EQ(events[0].duration, Time(3, 8));
  EXPECT_EQ(events[1].duration, Time(7, 32));
  EXPECT_EQ(events[2].duration, Time(2, 3));
  EXPECT_EQ(events[3].duration, Time(2));
  // the rest advances time without producing an event
  EXPECT_EQ(events[4].onset, Time(3, 8) + Time(7, 32) + Time(2, 3) + Time(2) + Time(1, 2));
}

TEST(ParseKern, TiesAcrossBarlineMerge) {
  const auto events = ct::parseKern("**kern\n*M4/4\n=1\n2[c\n=2\n4_c\n4c]\n4d\n*-\n");
  ASSERT_EQ(events.size(), 2u);
  EXPECT_EQ(events[0], (ct::NoteEvent{Time(0), Time(1), 60, 0}));
  EXPECT_EQ(events[1].onset, Time(1));
}

TEST(ParseKern, MultipleSpinesAndIgnoredSpines) {
  const auto score = ct::parseKernScore(
      "!! comment\n**kern\t**dynam\t**kern\n*k[b-]\t*\t*M3/4\n2C\tp\t4e\n.\t.\t4g\n4D\tf\t4a\n*-\t*-\t*-\n");
  EXPECT_EQ(score.kern_spines, 2);
  ASSERT_EQ(score.events.size(), 5u);
  EXPECT_EQ(score.events[0], (ct::NoteEvent{Time(0), Time(1, 2), 48, 0}));
  EXPECT_EQ(score.events[1], (ct::NoteEvent{Time(0), Time(1, 4), 64, 1}));
  EXPECT_EQ(score.events[2], (ct::NoteEvent{Time(1, 4), Time(1, 4), 67, 1}));
  EXPECT_EQ(score.events[3], (ct::NoteEvent{Time(1, 2), Time(1, 4), 50, 0}));
  EXPECT_EQ(score.interpretations, (std::vector<std::string>{"*k[b-]", "*M3/4"}));
}

TEST(ParseKern, NotationMarksIgnored) {
  const auto events = ct::parseKern("**kern\n(8cL\n8d'J)\n4e;\n*-\n");
  EXPECT_EQ(events.size(), 3u);
}

TEST(ParseKern, Errors) {
  EXPECT_EQ(codeOf([] { ct::parseKern(""); }), ct::ErrorCode::NoKernSpine);
  EXPECT_EQ(codeOf([] { ct::parseKern("**dynam\np\n*-\n"); }), ct::ErrorCode::NoKernSpine);
  EXPECT_EQ(codeOf([] { ct::parseKern("**kern\n8qc\n*-\n"); }), ct::ErrorCode::UnsupportedToken);
  EXPECT_EQ(codeOf([] { ct::parseKern("**kern\t**kern\n*^\t*\n*-\t*-\n"); }), ct::ErrorCode::UnsupportedToken);
  EXPECT_EQ(codeOf([] { ct::parseKern("**kern\ncc\n*-\n"); }), ct::ErrorCode::MalformedDuration);
  EXPECT_EQ(codeOf([] { ct::parseKern("**kern\n4c\t4d\n*-\n"); }), ct::ErrorCode::MalformedRecord);
  EXPECT_EQ(codeOf([] { ct::parseKern("**kern\n4c?\n*-\n"); }), ct::ErrorCode::UnsupportedToken);
}

TEST(ParseKern, ErrorsCarryLineNumbers) {
  try {
    ct::parseKern("**kern\n4c\n4c\n8qd\n*-\n");
    FAIL();
  } catch (const ct::ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
}

TEST(ParseEvents, SingleRecord) {
  const auto events = ct::parseEvents("# onset,duration,pitch,voice\n0,1/4,60,0\n");
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0], (ct::NoteEvent{Time(0), Time(1, 4), 60, 0}));
}

TEST(ParseEvents, ZeroDurationRejected) {
  EXPECT_EQ(codeOf([] { ct::parseEvents("0,0,60,0\n"); }), ct::ErrorCode::NegativeDuration);
  EXPECT_EQ(codeOf([] { ct::parseEvents("0,-1/4,60,0\n"); }), ct::ErrorCode::NegativeDuration);
  EXPECT_EQ(codeOf([] { ct::parseEvents("0,1/4,128,0\n"); }), ct::ErrorCode::MalformedRecord);
  EXPECT_EQ(codeOf([] { ct::parseEvents("-1,1/4,60,0\n"); }), ct::ErrorCode::MalformedRecord);
  EXPECT_EQ(codeOf([] { ct::parseEvents("0,1/4,60\n"); }), ct::ErrorCode::MalformedRecord);
}

TEST(ParseEvents, SortedByOnsetThenVoice) {
  const auto events = ct::parseEvents("0,1/4,64,1\n0,1/4,60,0\n");
  ASSERT_EQ(events.size(), 2u);
  EXPECT_EQ(events[0].voice, 0);
  EXPECT_EQ(events[1].voice, 1);
}

TEST(ParseEvents, RoundTrip) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto events = ct::testing::randomEvents(seed);
    ct::sortEvents(events);
    EXPECT_EQ(ct::parseEvents(ct::formatEvents(events)), events);
  }
}

TEST(FullExpansion, HeldNoteRepeats) {
  const std::vector<ct::NoteEvent> events = {{Time(0), Time(1, 2), 60, 0}, {Time(1, 4), Time(1, 4), 64, 1}};
  const auto slices = ct::fullExpansion(events);
  ASSERT_EQ(slices.size(), 2u);
  EXPECT_EQ(slices[0].pitches, std::vector<int>{60});
  EXPECT_EQ(slices[1].onset, Time(1, 4));
  EXPECT_EQ(slices[1].pitches, (std::vector<int>{60, 64}));
  EXPECT_EQ(slices[1].bass, 60);
}

TEST(FullExpansion, SingleEvent) {
  const auto slices = ct::fullExpansion({{Time(1, 2), Time(1), 55, 0}});
  ASSERT_EQ(slices.size(), 1u);
  EXPECT_EQ(slices[0].pitches, std::vector<int>{55});
}

TEST(FullExpansion, HalfOpenIntervals) {
  const auto slices = ct::fullExpansion({{Time(0), Time(1, 4), 60, 0}, {Time(1, 4), Time(1, 4), 62, 0}});
  ASSERT_EQ(slices.size(), 2u);
  EXPECT_EQ(slices[1].pitches, std::vector<int>{62});
}

TEST(FullExpansion, EmptyInput) {
  EXPECT_EQ(codeOf([] { ct::fullExpansion({}); }), ct::ErrorCode::EmptyInput);
}

TEST(FullExpansion, MatchesBruteForceScan) {
  for (std::uint64_t seed = 100; seed < 300; ++seed) {
    const auto events = ct::testing::randomEvents(seed, 100);
    const auto slices = ct::fullExpansion(events);
    const auto expected = ct::oracle::soundingAtOnsets(events);
    ASSERT_EQ(slices.size(), expected.size()) << "seed " << seed;
    std::size_t i = 0;
    for (const auto& [onset, pitches] : expected) {
      EXPECT_EQ(slices[i].onset, onset);
      EXPECT_EQ(slices[i].pitches, pitches);
      EXPECT_EQ(slices[i].bass, pitches.front());
      ++i;
    }
  }
}

TEST(FullExpansion, DeterministicFromKern) {
  const auto fixture = ct::testing::makeTonalFixture({.pieces = 2});
  EXPECT_EQ(ct::fullExpansion(ct::parseKern(fixture.kern[0])), ct::fullExpansion(ct::parseKern(fixture.kern[0])));
}
