#include "chordtension/archive.h"

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include "chordtension/digest.h"
#include "chordtension/error.h"
#include "chordtension/io.h"
#include "chordtension/score_ingest.h"

namespace chordtension {

namespace {

constexpr const char* kManifest = "MANIFEST";
constexpr const char* kVocabFile = "vocab.tsv";
constexpr const char* kSequencesFile = "sequences.tsv";
constexpr const char* kSlicesFile = "slices.tsv";
constexpr const char* kManifestTitle = "# chordtension corpus archive v1";

namespace fs = std::filesystem;

bool isEventFile(const fs::path& p) { return p.extension() == ".events"; }
bool isScoreFile(const fs::path& p) {
  const auto ext = p.extension();
  return ext == ".krn" || ext == ".kern" || ext == ".events";
}

std::vector<fs::path> expandInputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    const fs::path p(in);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::recursive_directory_iterator(p)) {
        if (entry.is_regular_file() && isScoreFile(entry.path())) found.push_back(entry.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(p);
    }
  }
  return files;
}

std::string pathIn(const std::string& directory, const char* file) {
  return (std::filesystem::path(directory) / file).string();
}

std::string serializeSlices(const std::vector<PieceSlices>& pieces) {
  std::ostringstream out;
  for (const auto& piece : pieces) {
    for (const auto& slice : piece.slices) {
      out << piece.piece_id << '\t' << formatTime(slice.onset) << '\t';
      for (std::size_t i = 0; i < slice.pitches.size(); ++i) out << (i ? " " : "") << slice.pitches[i];
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace

void writeCorpusArchive(const Corpus& corpus, const std::vector<PieceSlices>& slices, const std::string& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create '" + directory + "': " + ec.message());

  const std::string vocab = corpus.vocab.serialize();
  const std::string sequences = serializeSequences(corpus.sequences);
  writeTextFile(pathIn(directory, kVocabFile), vocab);
  const std::string slice_text = serializeSlices(slices);
  writeTextFile(pathIn(directory, kSequencesFile), sequences);
  writeTextFile(pathIn(directory, kSlicesFile), slice_text);

  std::ostringstream manifest;
  manifest << kManifestTitle << "\n"
           << "mode\t" << reductionModeName(corpus.mode) << "\n"
           << "sha256\t" << kVocabFile << "\t" << toHex(sha256(vocab)) << "\n"
           << "sha256\t" << kSequencesFile << "\t" << toHex(sha256(sequences)) << "\n"
           << "sha256\t" << kSlicesFile << "\t" << toHex(sha256(slice_text)) << "\n";
  writeTextFile(pathIn(directory, kManifest), manifest.str());
}

Corpus readCorpusArchive(const std::string& directory) {
  const std::string manifest = readTextFile(pathIn(directory, kManifest));
  std::map<std::string, std::string> checksums;
  std::string mode_name;
  std::istringstream in(manifest);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    std::string key, a, b;
    std::getline(fields, key, '\t');
    std::getline(fields, a, '\t');
    std::getline(fields, b, '\t');
    if (key == "mode" && !a.empty()) {
      mode_name = a;
    } else if (key == "sha256" && !a.empty() && b.size() == 64) {
      checksums[a] = b;
    } else {
      throw ParseError(ErrorCode::MalformedRecord, line_no, "bad MANIFEST entry '" + line + "'");
    }
  }
  if (mode_name.empty()) throw Error(ErrorCode::MalformedRecord, "MANIFEST has no mode entry");

  auto load = [&](const char* file) {
    auto it = checksums.find(file);
    if (it == checksums.end()) throw Error(ErrorCode::MalformedRecord, std::string("MANIFEST has no entry for ") + file);
    std::string content = readTextFile(pathIn(directory, file));
    if (toHex(sha256(content)) != it->second) {
      throw Error(ErrorCode::ChecksumMismatch, std::string(file) + " does not match its MANIFEST checksum");
    }
    return content;
  };

  Corpus corpus;
  corpus.mode = parseReductionMode(mode_name);
  corpus.vocab = Vocabulary::parse(load(kVocabFile));
  corpus.sequences = parseSequences(load(kSequencesFile));
  if (checksums.count(kSlicesFile)) load(kSlicesFile);
  for (const auto& seq : corpus.sequences) {
    for (int id : seq.ids) {
      if (id < 0 || static_cast<std::size_t>(id) >= corpus.vocab.size()) {
        throw Error(ErrorCode::IdOutOfRange, "sequence " + seq.piece_id + " references unknown id " + std::to_string(id));
      }
    }
  }
  return corpus;
}

ScoreLoad loadScoreFiles(const std::vector<std::string>& inputs) {
  ScoreLoad load;
  std::set<std::string> seen;
  for (const auto& file : expandInputs(inputs)) {
    const std::string id = file.stem().string();
    try {
      if (!seen.insert(id).second) throw Error(ErrorCode::MalformedRecord, "duplicate piece id '" + id + "'");
      const std::string text = readTextFile(file.string());
      const auto events = isEventFile(file) ? parseEvents(text) : parseKern(text);
      load.pieces.push_back({id, fullExpansion(events)});
    } catch (const Error& e) {
      load.failures.push_back(file.string() + ": " + e.what());
    }
  }
  return load;
}

}  // namespace chordtension
