#pragma once

#include <string>
#include <vector>

#include "chordtension/experiments.h"

namespace chordtension::cli {

/// Options shared by every subcommand; a config file can set any of them.
struct RunOptions {
  ExperimentConfig experiment;
  bool pcset = false;
};

struct IngestArgs {
  std::vector<std::string> inputs;
  std::string output;
};

struct TrainArgs {
  std::string archive;
  std::string output;
};

struct TensionArgs {
  std::string archive;
  std::string model;
  std::string output;  // empty: stdout
  std::vector<std::string> pieces;
  int transposition = 0;
};

struct ClassifyArgs {
  std::string archive;
  std::string output;
};

struct ExperimentArgs {
  std::string archive;
  std::string output;
  std::string annotations;
};

struct ReportArgs {
  std::string archive;
  std::string results;
};

int runIngest(const IngestArgs& args, const RunOptions& opts);
int runTrain(const TrainArgs& args, const RunOptions& opts);
int runTension(const TensionArgs& args, const RunOptions& opts);
int runClassify(const ClassifyArgs& args, const RunOptions& opts);
int runExperiment1(const ExperimentArgs& args, const RunOptions& opts);
int runExperiment2(const ExperimentArgs& args, const RunOptions& opts);
int runReport(const ReportArgs& args, const RunOptions& opts);

}  // namespace chordtension::cli
