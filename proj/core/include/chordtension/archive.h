#pragma once

#include <string>
#include <vector>

#include "chordtension/vocab.h"

namespace chordtension {

struct ScoreLoad {
  std::vector<PieceSlices> pieces;
  std::vector<std::string> failures;  // "path: reason" for every skipped file
};

/// Parses score files into slices. Directories are searched recursively for
/// .krn, .kern and .events files in sorted order; the file stem is the piece
/// id. Unparseable files and duplicate ids are skipped and reported.
ScoreLoad loadScoreFiles(const std::vector<std::string>& inputs);

/// A corpus archive is a directory holding vocab.tsv, sequences.tsv,
/// slices.tsv and a MANIFEST with the reduction mode and the SHA-256 of each
/// file. slices.tsv is informational: `piece<TAB>onset<TAB>pitch pitch ...`.
void writeCorpusArchive(const Corpus& corpus, const std::vector<PieceSlices>& slices, const std::string& directory);

/// Throws ChecksumMismatch if any listed file does not match its MANIFEST entry and
/// MalformedRecord if the MANIFEST itself is unreadable.
Corpus readCorpusArchive(const std::string& directory);

}  // namespace chordtension
