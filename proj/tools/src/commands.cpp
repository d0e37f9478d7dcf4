#include "commands.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "chordtension/archive.h"
#include "chordtension/chord_catalog.h"
#include "chordtension/error.h"
#include "chordtension/io.h"

namespace chordtension::cli {

namespace fs = std::filesystem;

namespace {

// Vocabulary size of the full reference corpus, printed next to ours.
constexpr std::size_t kReferenceVocabularySize = 4753;

OutputHeader headerFor(const RunOptions& opts) { return makeOutputHeader(opts.experiment); }

void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
  } else {
    writeTextFile(path, content);
  }
}

}  // namespace

int runIngest(const IngestArgs& args, const RunOptions& opts) {
  const auto [pieces, failures] = loadScoreFiles(args.inputs);
  for (const auto& f : failures) std::cerr << "warning: skipped " << f << "\n";
  if (pieces.empty()) throw Error(ErrorCode::EmptyCorpus, "no input file could be parsed");

  const Corpus corpus = buildCorpus(pieces, opts.pcset ? ReductionMode::PitchClassSet : ReductionMode::BassTagged);
  writeCorpusArchive(corpus, pieces, args.output);

  std::size_t units = 0;
  for (const auto& p : pieces) units += p.slices.size();
  std::cout << "pieces " << pieces.size() << "\nsequences " << corpus.sequences.size() << "\nunits " << units
            << "\nvocabulary " << corpus.vocab.size() << "\nfailed " << failures.size() << "\n";
  return 0;
}

int runTrain(const TrainArgs& args, const RunOptions& opts) {
  const Corpus corpus = readCorpusArchive(args.archive);
  TrainReport report;
  const EmbeddingModel model = train(corpus.sequences, corpus.vocab, opts.experiment.train, &report);
  saveModel(model, args.output);
  std::cout << "vocabulary " << model.vocabSize() << "\ndim " << model.dim() << "\nexamples " << report.examples
            << "\nprobe_loss_initial " << formatReal(report.initial_probe_loss) << "\nprobe_loss_final "
            << formatReal(report.final_probe_loss) << "\n";
  return 0;
}

int runTension(const TensionArgs& args, const RunOptions& opts) {
  const Corpus corpus = readCorpusArchive(args.archive);
  const EmbeddingModel model = loadModel(args.model, &corpus.vocab);
  const auto pieces = args.pieces.empty() ? corpus.pieceIds() : args.pieces;

  std::string out = headerFor(opts).comment() + tensionCsvHeader();
  for (const auto& piece : pieces) {
    const PieceSequence* seq = corpus.find(piece, args.transposition);
    if (seq == nullptr) throw Error(ErrorCode::UnknownPiece, "piece '" + piece + "' not in archive");
    if (seq->ids.size() < 2) {
      std::cerr << "warning: " << piece << " has fewer than 2 units; no tension values\n";
      continue;
    }
    out += tensionCsvRows(tensionSeries(model, *seq, opts.experiment.tension));
  }
  emit(args.output, out);
  return 0;
}

int runClassify(const ClassifyArgs& args, const RunOptions& opts) {
  const Corpus corpus = readCorpusArchive(args.archive);
  std::string out = headerFor(opts).comment() + classificationCsvHeader();
  for (const auto& piece : corpus.pieceIds()) {
    const PieceSequence* seq = corpus.find(piece, 0);
    for (std::size_t t = 0; t < seq->ids.size(); ++t) {
      if (const auto cls = classify(corpus.vocab.unit(seq->ids[t]))) out += classificationCsvRow({piece, t}, *cls);
    }
  }
  emit(args.output, out);
  return 0;
}

namespace {

int finishExperiment(const ExperimentReport& report, const std::string& output, const RunOptions& opts) {
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& path : writeReport(report, output, headerFor(opts))) std::cout << "wrote " << path << "\n";
  for (const auto& h : report.hypotheses) {
    std::cout << h.id << ' ' << (h.supported ? "supported" : "not supported") << ": " << h.description << "\n";
  }
  return 0;
}

}  // namespace

int runExperiment1(const ExperimentArgs& args, const RunOptions& opts) {
  const Corpus corpus = readCorpusArchive(args.archive);
  return finishExperiment(chordtension::runExperiment1(corpus, opts.experiment), args.output, opts);
}

int runExperiment2(const ExperimentArgs& args, const RunOptions& opts) {
  const Corpus corpus = readCorpusArchive(args.archive);
  const auto annotations = parseAnnotations(readTextFile(args.annotations));
  return finishExperiment(chordtension::runExperiment2(corpus, annotations, opts.experiment), args.output, opts);
}

int runReport(const ReportArgs& args, const RunOptions&) {
  const Corpus corpus = readCorpusArchive(args.archive);
  const auto pieces = corpus.pieceIds();
  std::cout << "reduction " << reductionModeName(corpus.mode) << "\npieces " << pieces.size() << "\nsequences "
            << corpus.sequences.size() << "\nvocabulary " << corpus.vocab.size() << " (reference corpus: "
            << kReferenceVocabularySize << ")\n";

  std::map<std::string, std::size_t> conditions;
  std::size_t units = 0, unclassified = 0;
  for (const auto& piece : pieces) {
    for (int id : corpus.find(piece, 0)->ids) {
      ++units;
      if (const auto cls = classify(corpus.vocab.unit(id))) {
        ++conditions[Condition::of(*cls).label()];
      } else {
        ++unclassified;
      }
    }
  }
  std::cout << "units " << units << "\nunclassified " << unclassified << "\n";
  for (const auto& [label, n] : conditions) std::cout << "  " << label << ' ' << n << "\n";

  if (args.results.empty()) return 0;
  std::vector<fs::path> results;
  for (const auto& entry : fs::directory_iterator(args.results)) {
    const auto name = entry.path().filename().string();
    if (name.size() > 11 && name.ends_with("_tests.json")) results.push_back(entry.path());
  }
  std::sort(results.begin(), results.end());
  for (const auto& path : results) {
    const auto j = nlohmann::json::parse(readTextFile(path.string()));
    std::cout << j.at("experiment").get<std::string>() << " (" << j.at("config_digest").get<std::string>()
              << ", seed " << j.at("seed").get<std::uint64_t>() << ")\n";
    for (const auto& h : j.at("hypotheses")) {
      std::cout << "  " << h.at("id").get<std::string>() << ' '
                << (h.at("supported").get<bool>() ? "supported" : "not supported") << ": "
                << h.at("description").get<std::string>() << "\n";
      for (const auto& c : h.at("comparisons")) {
        std::ostringstream line;
        line << "    " << c.at("groups")[0].get<std::string>() << " < " << c.at("groups")[1].get<std::string>()
             << "  t=" << c.at("statistic") << " df=" << c.at("df") << " p=" << c.at("p");
        std::cout << line.str() << "\n";
      }
    }
  }
  return 0;
}

}  // namespace chordtension::cli
