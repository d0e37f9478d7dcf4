// chordtension command-line entry point.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "chordtension/error.h"
#include "commands.h"

namespace ct = chordtension;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitFailure = 1;

void addSharedOptions(CLI::App& app, ct::cli::RunOptions& opts) {
  auto& e = opts.experiment;
  auto& t = e.train;
  auto& ten = e.tension;

  app.add_option("--seed", e.seed, "Seed for folds, sampling and training")->capture_default_str();
  app.add_option("--dim", t.dim, "Embedding dimension")->capture_default_str();
  app.add_option("--window", t.window, "Context units on each side")->capture_default_str();
  app.add_option("--min-count", t.min_count, "Ignore units seen fewer times")->capture_default_str();
  app.add_option("--negatives", t.negatives, "Negative samples per example")->capture_default_str();
  app.add_option("--epochs", t.epochs, "Training epochs")->capture_default_str();
  app.add_option("--lr", t.initial_lr, "Initial learning rate")->capture_default_str();
  app.add_option("--subsample", t.subsample, "Frequent-unit subsampling threshold (0 = off)")->capture_default_str();
  app.add_option("--threads", t.threads, "Training threads per model")->capture_default_str();

  app.add_option("--memory", ten.memory, "Preceding units in the tension estimate")->capture_default_str();
  app.add_flag("!--literal-normalization", ten.normalize_partial,
               "Divide by the memory size instead of the weight mass used");
  const std::map<std::string, ct::VectorSource> sources = {{"input", ct::VectorSource::Input},
                                                           {"output", ct::VectorSource::Output}};
  app.add_option("--vectors", ten.vectors, "Embedding matrix used for cosines")
      ->transform(CLI::CheckedTransformer(sources, CLI::ignore_case))
      ->default_str("input");

  app.add_option("--folds", e.folds, "Cross-validation folds")->capture_default_str();
  app.add_option("--per-condition", e.per_condition, "Chords sampled per experiment-1 condition")
      ->capture_default_str();
  app.add_option("--baseline-size", e.baseline_size, "Random non-cadential chords in experiment 2")
      ->capture_default_str();
  app.add_option("--workers", e.workers, "Folds evaluated concurrently")->capture_default_str();
  app.add_option("--alpha", e.alpha, "Family-wise significance level")->capture_default_str();
  app.add_flag("--single-model", e.single_model, "Train once on the whole corpus (smoke runs only)");
  app.add_flag("--pcset", opts.pcset, "Reduce slices to plain pitch-class sets when ingesting");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harmonic tension from chord embeddings", "chordtension"};
  app.set_version_flag("--version", ct::toolVersion());
  app.set_config("--config", "", "TOML config file; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();

  ct::cli::RunOptions opts;
  addSharedOptions(app, opts);

  ct::cli::IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Parse kern or event files into a corpus archive");
  ingest_cmd->add_option("inputs", ingest.inputs, "Files or directories (.krn, .events)")->required();
  ingest_cmd->add_option("-o,--output", ingest.output, "Archive directory")->required();

  ct::cli::TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train one embedding model on a whole archive");
  train_cmd->add_option("-a,--archive", train.archive, "Corpus archive")->required();
  train_cmd->add_option("-o,--output", train.output, "Model file")->required();

  ct::cli::TensionArgs tension;
  auto* tension_cmd = app.add_subcommand("tension", "Write per-unit tension for archive pieces");
  tension_cmd->add_option("-a,--archive", tension.archive, "Corpus archive")->required();
  tension_cmd->add_option("-m,--model", tension.model, "Model file")->required();
  tension_cmd->add_option("-o,--output", tension.output, "CSV file (default: stdout)");
  tension_cmd->add_option("-p,--piece", tension.pieces, "Restrict to these pieces");
  tension_cmd->add_option("-k,--transposition", tension.transposition, "Transposition to evaluate")
      ->check(CLI::Range(ct::kMinTransposition, ct::kMaxTransposition))
      ->capture_default_str();

  ct::cli::ClassifyArgs classify;
  auto* classify_cmd = app.add_subcommand("classify", "Label every untransposed unit by chord category");
  classify_cmd->add_option("-a,--archive", classify.archive, "Corpus archive")->required();
  classify_cmd->add_option("-o,--output", classify.output, "CSV file (default: stdout)");

  ct::cli::ExperimentArgs exp1;
  auto* exp1_cmd = app.add_subcommand("exp1", "Chord-category experiment");
  exp1_cmd->add_option("-a,--archive", exp1.archive, "Corpus archive")->required();
  exp1_cmd->add_option("-o,--output", exp1.output, "Output directory")->required();

  ct::cli::ExperimentArgs exp2;
  auto* exp2_cmd = app.add_subcommand("exp2", "Cadence experiment");
  exp2_cmd->add_option("-a,--archive", exp2.archive, "Corpus archive")->required();
  exp2_cmd->add_option("--annotations", exp2.annotations, "Cadence annotation CSV")->required();
  exp2_cmd->add_option("-o,--output", exp2.output, "Output directory")->required();

  ct::cli::ReportArgs report;
  auto* report_cmd = app.add_subcommand("report", "Summarise an archive and experiment results");
  report_cmd->add_option("-a,--archive", report.archive, "Corpus archive")->required();
  report_cmd->add_option("-r,--results", report.results, "Directory written by exp1/exp2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    opts.experiment.train.seed = opts.experiment.seed;
    opts.experiment.validate();
    if (*ingest_cmd) return ct::cli::runIngest(ingest, opts);
    if (*train_cmd) return ct::cli::runTrain(train, opts);
    if (*tension_cmd) return ct::cli::runTension(tension, opts);
    if (*classify_cmd) return ct::cli::runClassify(classify, opts);
    if (*exp1_cmd) return ct::cli::runExperiment1(exp1, opts);
    if (*exp2_cmd) return ct::cli::runExperiment2(exp2, opts);
    if (*report_cmd) return ct::cli::runReport(report, opts);
  } catch (const ct::Error& e) {
    std::cerr << "error [" << ct::errorCodeName(e.code()) << "]: " << e.what() << "\n";
    return e.code() == ct::ErrorCode::InvalidConfig ? kExitUsage : kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
