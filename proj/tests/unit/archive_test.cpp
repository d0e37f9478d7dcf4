#include <gtest/gtest.h>

#include <filesystem>

#include "chordtension/archive.h"
#include "chordtension/error.h"
#include "chordtension/io.h"
#include "synthetic.h"

namespace ct = chordtension;
namespace fs = std::filesystem;

namespace {

fs::path freshDir(const char* name) {
  const auto dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Archive, RoundTrip) {
  const auto slices = ct::testing::fixtureSlices(ct::testing::makeTonalFixture({.pieces = 3}));
  const auto corpus = ct::buildCorpus(slices, ct::ReductionMode::PitchClassSet);
  const auto dir = freshDir("chordtension_archive_rt");
  ct::writeCorpusArchive(corpus, slices, dir.string());
  const auto back = ct::readCorpusArchive(dir.string());
  EXPECT_EQ(back.mode, ct::ReductionMode::PitchClassSet);
  EXPECT_EQ(back.vocab.serialize(), corpus.vocab.serialize());
  EXPECT_EQ(ct::serializeSequences(back.sequences), ct::serializeSequences(corpus.sequences));
  fs::remove_all(dir);
}

TEST(Archive, DetectsCorruption) {
  const auto slices = ct::testing::fixtureSlices(ct::testing::makeTonalFixture({.pieces = 2}));
  const auto dir = freshDir("chordtension_archive_bad");
  ct::writeCorpusArchive(ct::buildCorpus(slices), slices, dir.string());
  auto text = ct::readTextFile((dir / "sequences.tsv").string());
  text[text.size() / 2] = text[text.size() / 2] == '1' ? '2' : '1';
  ct::writeTextFile((dir / "sequences.tsv").string(), text);
  try {
    ct::readCorpusArchive(dir.string());
    FAIL();
  } catch (const ct::Error& e) {
    EXPECT_EQ(e.code(), ct::ErrorCode::ChecksumMismatch);
  }
  fs::remove(dir / "MANIFEST");
  EXPECT_THROW(ct::readCorpusArchive(dir.string()), ct::Error);
  fs::remove_all(dir);
}
