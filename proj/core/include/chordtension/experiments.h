#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chordtension/chord_catalog.h"
#include "chordtension/embedding.h"
#include "chordtension/stats.h"
#include "chordtension/tension.h"
#include "chordtension/vocab.h"

namespace chordtension {

// ---------------------------------------------------------------------------
// Cross-validation folds
// ---------------------------------------------------------------------------

/// Partition of pieces into k folds. Transpositions share the piece id, so
/// every transposition of a piece lands in the same fold.
struct FoldPlan {
  int k = 0;
  std::map<std::string, int> assignments;

  /// Fold of the piece, or nullopt if the piece is not part of the plan.
  std::optional<int> foldOf(std::string_view piece_id) const;
  std::vector<std::string> piecesIn(int fold) const;
};

/// Seeded shuffle then round-robin, so fold sizes differ by at most one.
FoldPlan makeFolds(const std::vector<std::string>& piece_ids, int k, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Cadence annotations
// ---------------------------------------------------------------------------

enum class CadenceCategory { PAC, HC, DC };

std::string_view toString(CadenceCategory category);

struct CadenceAnnotation {
  std::string piece_id;
  std::size_t terminal_unit_index = 0;  // index into the untransposed sequence
  CadenceCategory category = CadenceCategory::PAC;
};

/// CSV `piece_id,terminal_unit_index,category`; a header row and `#`
/// comments are allowed.
std::vector<CadenceAnnotation> parseAnnotations(std::string_view text);

/// Throws UnknownPiece / IndexOutOfRange naming the offending annotation.
/// Index 0 is rejected because the first unit has no tension value.
void validateAnnotations(const Corpus& corpus, const std::vector<CadenceAnnotation>& annotations);

// ---------------------------------------------------------------------------
// Experiment configuration and results
// ---------------------------------------------------------------------------

struct ExperimentConfig {
  TrainConfig train;
  TensionConfig tension;
  int folds = 10;
  std::size_t per_condition = 1200;  // chords sampled per experiment-1 condition
  std::size_t baseline_size = 1200;  // random non-cadential chords in experiment 2
  std::uint64_t seed = 1;
  int workers = 1;            // folds evaluated concurrently
  bool single_model = false;  // one model on the whole corpus (smoke runs; leaks test data)
  double alpha = 0.05;

  void validate() const;
  std::string canonical() const;
  /// First 16 hex digits of SHA-256(canonical()).
  std::string digest() const;
};

struct GroupSummary {
  std::string group;
  double mean = 0;
  double se = 0;
  std::size_t count = 0;
};

struct ResultTable {
  std::string name;  // file stem, e.g. "triad_quality"
  std::vector<GroupSummary> rows;
};

struct Hypothesis {
  std::string id;           // "H1".."H4"
  std::string description;  // e.g. "major: first inversion > root, second"
  std::optional<stats::AnovaResult> omnibus;
  std::vector<stats::TestResult> comparisons;  // each ordered (predicted lower, predicted higher)
  /// Every planned comparison significant with a negative statistic.
  bool supported = false;
  std::string note;  // why tests were skipped, if they were
};

struct PerChordRow {
  std::string piece_id;
  std::size_t unit_index = 0;
  int fold = 0;
  std::string group;  // condition label or cadence category
  double tension = 0;
};

struct ExperimentReport {
  std::string name;  // "exp1" / "exp2"
  std::vector<ResultTable> tables;
  std::vector<Hypothesis> hypotheses;
  std::vector<PerChordRow> rows;
  std::vector<std::string> warnings;
  std::size_t planned_comparisons = 0;
  std::size_t vocabulary_size = 0;

  const ResultTable* table(std::string_view name) const;
  const Hypothesis* hypothesis(std::string_view id) const;
};

/// Held-out tension for every evaluated piece (untransposed sequence).
struct FoldEvaluation {
  std::map<std::string, TensionSeries> series;
  std::map<std::string, int> fold_of;
};

/// Trains one model per fold on every sequence whose piece is outside the
/// fold (pieces absent from the plan always train) and computes held-out
/// tension on the untransposed sequences of the fold's pieces.
FoldEvaluation evaluateFolds(const Corpus& corpus, const FoldPlan& plan, const ExperimentConfig& cfg);

/// Chord-category experiment: folds over all pieces, up to per_condition
/// chords per type/quality/inversion condition, eight planned comparisons.
ExperimentReport runExperiment1(const Corpus& corpus, const ExperimentConfig& cfg);

/// Cadence experiment: folds over annotated pieces, terminal-chord tension
/// per category against a random non-cadential baseline.
ExperimentReport runExperiment2(const Corpus& corpus, const std::vector<CadenceAnnotation>& annotations,
                                const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

struct OutputHeader {
  std::string tool_version;
  std::string config_digest;
  std::uint64_t seed = 0;

  /// "# tool ...\n# config_digest ...\n# seed ...\n"
  std::string comment() const;
};

OutputHeader makeOutputHeader(const ExperimentConfig& cfg);
std::string toolVersion();

std::string renderTableCsv(const ResultTable& table, const OutputHeader& header);
std::string renderPerChordCsv(const ExperimentReport& report, const OutputHeader& header);
std::string renderTestsJson(const ExperimentReport& report, const OutputHeader& header);

/// Writes <name>_per_chord.csv, <table>.csv for every table and
/// <name>_tests.json into `directory` (created if missing). Returns the
/// written paths.
std::vector<std::string> writeReport(const ExperimentReport& report, const std::string& directory,
                                     const OutputHeader& header);

}  // namespace chordtension
