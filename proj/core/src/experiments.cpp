// Cross-validated experiment drivers and their CSV/JSON output.

#include "chordtension/experiments.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <filesystem>
#include <iterator>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "chordtension/digest.h"
#include "chordtension/error.h"
#include "chordtension/io.h"

#ifndef CHORDTENSION_VERSION
#define CHORDTENSION_VERSION "dev"
#endif

namespace chordtension {

namespace {

// Salts keep the per-purpose random streams independent of each other.
constexpr std::uint64_t kSampleSalt = 0x5A4D'504C'4531ull;
constexpr std::uint64_t kBaselineSalt = 0xBA5E'11E0ull;
constexpr std::uint64_t kFoldTrainSalt = 0xF01D'0000ull;

constexpr std::size_t kExp1PlannedComparisons = 8;
constexpr std::size_t kExp2PlannedComparisons = 5;

std::uint64_t mixSeed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::vector<std::string_view> splitOn(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string annotationLabel(const CadenceAnnotation& a) {
  return a.piece_id + "@" + std::to_string(a.terminal_unit_index) + " (" + std::string(toString(a.category)) + ")";
}

// Collects values by group label and summarises the ones with n >= 2.
class GroupedValues {
 public:
  void add(const std::string& group, double v) { values_[group].push_back(v); }
  const std::vector<double>& get(const std::string& group) const {
    static const std::vector<double> kEmpty;
    auto it = values_.find(group);
    return it == values_.end() ? kEmpty : it->second;
  }

  ResultTable table(const std::string& name, const std::vector<std::string>& order,
                    std::vector<std::string>& warnings) const {
    ResultTable t{name, {}};
    for (const auto& g : order) {
      const auto& v = get(g);
      if (v.size() < 2) {
        warnings.push_back(name + ": group '" + g + "' omitted (" + std::to_string(v.size()) + " samples)");
        continue;
      }
      const auto ms = stats::meanSe(v);
      t.rows.push_back({g, ms.mean, ms.se, ms.n});
    }
    return t;
  }

 private:
  std::map<std::string, std::vector<double>> values_;
};

bool enough(std::initializer_list<const std::vector<double>*> groups) {
  return std::all_of(groups.begin(), groups.end(), [](const std::vector<double>* g) { return g->size() >= 2; });
}

stats::TestResult labelled(stats::TestResult r, std::string lower, std::string higher) {
  r.groups = {std::move(lower), std::move(higher)};
  return r;
}

bool allSupported(const std::vector<stats::TestResult>& tests) {
  return !tests.empty() && std::all_of(tests.begin(), tests.end(), [](const stats::TestResult& r) {
           return r.significant && r.statistic < 0;
         });
}

}  // namespace

// ---------------------------------------------------------------------------
// Folds
// ---------------------------------------------------------------------------

std::optional<int> FoldPlan::foldOf(std::string_view piece_id) const {
  auto it = assignments.find(std::string(piece_id));
  if (it == assignments.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> FoldPlan::piecesIn(int fold) const {
  std::vector<std::string> out;
  for (const auto& [piece, f] : assignments) {
    if (f == fold) out.push_back(piece);
  }
  return out;
}

FoldPlan makeFolds(const std::vector<std::string>& piece_ids, int k, std::uint64_t seed) {
  if (k < 1) throw Error(ErrorCode::InvalidConfig, "fold count must be >= 1");
  std::vector<std::string> unique;
  std::set<std::string> seen;
  for (const auto& p : piece_ids) {
    if (seen.insert(p).second) unique.push_back(p);
  }
  if (static_cast<std::size_t>(k) > unique.size()) {
    throw Error(ErrorCode::TooFewPieces,
                std::to_string(k) + " folds requested but only " + std::to_string(unique.size()) + " pieces");
  }
  std::mt19937_64 rng(seed);
  std::shuffle(unique.begin(), unique.end(), rng);
  FoldPlan plan;
  plan.k = k;
  for (std::size_t i = 0; i < unique.size(); ++i) plan.assignments[unique[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
  return plan;
}

// ---------------------------------------------------------------------------
// Annotations
// ---------------------------------------------------------------------------

std::string_view toString(CadenceCategory category) {
  switch (category) {
    case CadenceCategory::PAC: return "PAC";
    case CadenceCategory::HC:  return "HC";
    case CadenceCategory::DC:  return "DC";
  }
  return "unknown";
}

std::vector<CadenceAnnotation> parseAnnotations(std::string_view text) {
  std::vector<CadenceAnnotation> out;
  std::size_t line_no = 0;
  for (auto raw : splitOn(text, '\n')) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.starts_with("#")) continue;
    const auto fields = splitOn(line, ',');
    if (fields.size() != 3) throw ParseError(ErrorCode::MalformedRecord, line_no, "annotation needs 3 fields");
    if (trim(fields[0]) == "piece_id") continue;  // header

    CadenceAnnotation a;
    a.piece_id = std::string(trim(fields[0]));
    const auto idx = trim(fields[1]);
    std::size_t index = 0;
    auto [ptr, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), index);
    if (idx.empty() || ec != std::errc() || ptr != idx.data() + idx.size()) {
      throw ParseError(ErrorCode::MalformedRecord, line_no, "bad terminal_unit_index '" + std::string(idx) + "'");
    }
    a.terminal_unit_index = index;
    const auto cat = trim(fields[2]);
    if (cat == "PAC") {
      a.category = CadenceCategory::PAC;
    } else if (cat == "HC") {
      a.category = CadenceCategory::HC;
    } else if (cat == "DC") {
      a.category = CadenceCategory::DC;
    } else {
      throw ParseError(ErrorCode::MalformedRecord, line_no, "unknown cadence category '" + std::string(cat) + "'");
    }
    out.push_back(std::move(a));
  }
  return out;
}

void validateAnnotations(const Corpus& corpus, const std::vector<CadenceAnnotation>& annotations) {
  for (const auto& a : annotations) {
    const PieceSequence* seq = corpus.find(a.piece_id, 0);
    if (seq == nullptr) throw Error(ErrorCode::UnknownPiece, "annotation " + annotationLabel(a) + ": piece not in corpus");
    if (a.terminal_unit_index == 0 || a.terminal_unit_index >= seq->ids.size()) {
      throw Error(ErrorCode::IndexOutOfRange, "annotation " + annotationLabel(a) + ": index outside 1.." +
                                                  std::to_string(seq->ids.size() - 1));
    }
  }
}

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

void ExperimentConfig::validate() const {
  train.validate();
  tension.validate();
  if (folds < 1) throw Error(ErrorCode::InvalidConfig, "folds must be >= 1");
  if (per_condition < 1) throw Error(ErrorCode::InvalidConfig, "per_condition must be >= 1");
  if (baseline_size < 2) throw Error(ErrorCode::InvalidConfig, "baseline_size must be >= 2");
  if (workers < 1) throw Error(ErrorCode::InvalidConfig, "workers must be >= 1");
  if (!(alpha > 0 && alpha < 1)) throw Error(ErrorCode::InvalidConfig, "alpha must be in (0, 1)");
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream out;
  out.precision(17);
  // workers is left out: it does not change results when training is single-threaded.
  out << "train{" << train.canonical() << "};tension{" << tension.canonical() << "};folds=" << folds
      << ";per_condition=" << per_condition << ";baseline_size=" << baseline_size << ";seed=" << seed
      << ";single_model=" << (single_model ? 1 : 0) << ";alpha=" << alpha;
  return out.str();
}

std::string ExperimentConfig::digest() const {
  const auto h = sha256(canonical());
  return toHex(std::span<const std::uint8_t>(h.data(), 8));
}

// ---------------------------------------------------------------------------
// Fold evaluation
// ---------------------------------------------------------------------------

FoldEvaluation evaluateFolds(const Corpus& corpus, const FoldPlan& plan, const ExperimentConfig& cfg) {
  cfg.validate();
  const int jobs = cfg.single_model ? 1 : plan.k;
  std::vector<FoldEvaluation> partial(static_cast<std::size_t>(jobs));
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(jobs));

  auto runJob = [&](int job) {
    try {
      std::vector<const PieceSequence*> training;
      for (const auto& seq : corpus.sequences) {
        const auto fold = plan.foldOf(seq.piece_id);
        if (cfg.single_model || !fold || *fold != job) training.push_back(&seq);
      }
      TrainConfig tc = cfg.train;
      tc.seed = mixSeed(cfg.seed, kFoldTrainSalt + static_cast<std::uint64_t>(job));
      const EmbeddingModel model = train(std::span<const PieceSequence* const>(training), corpus.vocab, tc);

      auto& out = partial[static_cast<std::size_t>(job)];
      for (const auto& [piece, fold] : plan.assignments) {
        if (!cfg.single_model && fold != job) continue;
        const PieceSequence* seq = corpus.find(piece, 0);
        if (seq == nullptr || seq->ids.size() < 2) continue;
        out.series.emplace(piece, tensionSeries(model, *seq, cfg.tension));
        out.fold_of.emplace(piece, fold);
      }
    } catch (...) {
      failures[static_cast<std::size_t>(job)] = std::current_exception();
    }
  };

  const int threads = std::min(cfg.workers, jobs);
  if (threads <= 1) {
    for (int j = 0; j < jobs; ++j) runJob(j);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (int j = next++; j < jobs; j = next++) runJob(j);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  FoldEvaluation merged;
  for (auto& p : partial) {
    merged.series.merge(p.series);
    merged.fold_of.merge(p.fold_of);
  }
  return merged;
}

// ---------------------------------------------------------------------------
// Experiment 1
// ---------------------------------------------------------------------------

ExperimentReport runExperiment1(const Corpus& corpus, const ExperimentConfig& cfg) {
  cfg.validate();
  const auto pieces = corpus.pieceIds();
  const FoldPlan plan = makeFolds(pieces, cfg.folds, cfg.seed);
  const FoldEvaluation eval = evaluateFolds(corpus, plan, cfg);

  std::vector<ClassifiedUnit> units;
  std::vector<double> tension;
  std::vector<int> folds;
  for (const auto& piece : pieces) {
    auto it = eval.series.find(piece);
    if (it == eval.series.end()) continue;
    const PieceSequence* seq = corpus.find(piece, 0);
    const auto& values = it->second.values;
    for (std::size_t t = 1; t < values.size(); ++t) {
      const auto cls = classify(corpus.vocab.unit(seq->ids[t]));
      if (!cls || !values[t]) continue;
      units.push_back({UnitRef{piece, t}, Condition::of(*cls)});
      tension.push_back(*values[t]);
      folds.push_back(eval.fold_of.at(piece));
    }
  }

  ExperimentReport report;
  report.name = "exp1";
  report.vocabulary_size = corpus.vocab.size();
  report.planned_comparisons = kExp1PlannedComparisons;

  const ConditionSample sample = sampleConditions(units, cfg.per_condition, mixSeed(cfg.seed, kSampleSalt));
  report.warnings = sample.warnings;

  GroupedValues by_condition, major_inv, minor_inv, quality, type;
  for (const auto& [condition, picks] : sample.picks) {
    std::vector<std::size_t> ordered = picks;
    std::sort(ordered.begin(), ordered.end());
    for (std::size_t i : ordered) {
      const double v = tension[i];
      const auto& u = units[i];
      report.rows.push_back({u.ref.piece_id, u.ref.unit_index, folds[i], condition.label(), v});
      by_condition.add(condition.label(), v);
      type.add(std::string(toString(condition.type)), v);
      if (condition.type != ChordType::Triad) continue;
      quality.add(std::string(toString(condition.quality)), v);
      if (condition.quality == ChordQuality::Major) major_inv.add(std::string(toString(condition.inversion)), v);
      if (condition.quality == ChordQuality::Minor) minor_inv.add(std::string(toString(condition.inversion)), v);
    }
  }

  std::vector<std::string> condition_order;
  for (const auto& [condition, picks] : sample.picks) condition_order.push_back(condition.label());
  const std::vector<std::string> inversions = {"root", "first", "second"};
  const std::vector<std::string> qualities = {"major", "minor", "diminished", "augmented"};
  const std::vector<std::string> types = {"triad", "seventh"};

  report.tables.push_back(by_condition.table("exp1_conditions", condition_order, report.warnings));
  report.tables.push_back(major_inv.table("major_inversion", inversions, report.warnings));
  report.tables.push_back(minor_inv.table("minor_inversion", inversions, report.warnings));
  report.tables.push_back(quality.table("triad_quality", qualities, report.warnings));
  report.tables.push_back(type.table("triad_seventh", types, report.warnings));

  const double alpha_planned = stats::bonferroni(cfg.alpha, kExp1PlannedComparisons);
  const std::string skipped = "skipped: a group has fewer than 2 samples";

  {
    Hypothesis h{"H1", "major triads: first inversion more tense than root and second", {}, {}, false, {}};
    const auto &root = major_inv.get("root"), &first = major_inv.get("first"), &second = major_inv.get("second");
    if (enough({&root, &first, &second})) {
      h.omnibus = stats::onewayAnova({root, first, second}, cfg.alpha);
      h.omnibus->test.groups = {"major/root", "major/first", "major/second"};
      h.comparisons.push_back(labelled(stats::welchT(root, first, alpha_planned), "major/root", "major/first"));
      h.comparisons.push_back(labelled(stats::welchT(second, first, alpha_planned), "major/second", "major/first"));
      h.supported = allSupported(h.comparisons);
    } else {
      h.note = skipped;
    }
    report.hypotheses.push_back(std::move(h));
  }
  {
    Hypothesis h{"H2", "minor triads: root position less tense than first and second", {}, {}, false, {}};
    const auto &root = minor_inv.get("root"), &first = minor_inv.get("first"), &second = minor_inv.get("second");
    if (enough({&root, &first, &second})) {
      h.omnibus = stats::onewayAnova({root, first, second}, cfg.alpha);
      h.omnibus->test.groups = {"minor/root", "minor/first", "minor/second"};
      h.comparisons.push_back(labelled(stats::welchT(root, first, alpha_planned), "minor/root", "minor/first"));
      h.comparisons.push_back(labelled(stats::welchT(root, second, alpha_planned), "minor/root", "minor/second"));
      h.supported = allSupported(h.comparisons);
    } else {
      h.note = skipped;
    }
    report.hypotheses.push_back(std::move(h));
  }
  {
    Hypothesis h{"H3", "triad quality: major < minor < diminished < augmented", {}, {}, false, {}};
    std::vector<std::vector<double>> groups;
    for (const auto& q : qualities) groups.push_back(quality.get(q));
    if (std::all_of(groups.begin(), groups.end(), [](const auto& g) { return g.size() >= 2; })) {
      h.omnibus = stats::onewayAnova(groups, cfg.alpha);
      h.omnibus->test.groups = qualities;
      h.comparisons = stats::trendContrast(groups, cfg.alpha, kExp1PlannedComparisons);
      for (std::size_t i = 0; i < h.comparisons.size(); ++i) h.comparisons[i].groups = {qualities[i], qualities[i + 1]};
      h.supported = allSupported(h.comparisons);
    } else {
      h.note = skipped;
    }
    report.hypotheses.push_back(std::move(h));
  }
  {
    Hypothesis h{"H4", "triads less tense than seventh chords", {}, {}, false, {}};
    const auto &triad = type.get("triad"), &seventh = type.get("seventh");
    if (enough({&triad, &seventh})) {
      h.comparisons.push_back(labelled(stats::welchT(triad, seventh, alpha_planned), "triad", "seventh"));
      h.supported = allSupported(h.comparisons);
    } else {
      h.note = skipped;
    }
    report.hypotheses.push_back(std::move(h));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Experiment 2
// ---------------------------------------------------------------------------

ExperimentReport runExperiment2(const Corpus& corpus, const std::vector<CadenceAnnotation>& annotations,
                                const ExperimentConfig& cfg) {
  cfg.validate();
  validateAnnotations(corpus, annotations);
  if (annotations.empty()) throw Error(ErrorCode::EmptyInput, "no cadence annotations");

  std::set<std::string> annotated_set;
  for (const auto& a : annotations) annotated_set.insert(a.piece_id);
  std::vector<std::string> annotated;
  for (const auto& p : corpus.pieceIds()) {
    if (annotated_set.count(p)) annotated.push_back(p);
  }
  const FoldPlan plan = makeFolds(annotated, cfg.folds, cfg.seed);
  const FoldEvaluation eval = evaluateFolds(corpus, plan, cfg);

  ExperimentReport report;
  report.name = "exp2";
  report.vocabulary_size = corpus.vocab.size();
  report.planned_comparisons = kExp2PlannedComparisons;

  GroupedValues groups;
  std::set<UnitRef> terminals;
  for (const auto& a : annotations) {
    const auto& series = eval.series.at(a.piece_id);
    const double v = *series.values.at(a.terminal_unit_index);
    const std::string label(toString(a.category));
    report.rows.push_back({a.piece_id, a.terminal_unit_index, eval.fold_of.at(a.piece_id), label, v});
    groups.add(label, v);
    terminals.insert(UnitRef{a.piece_id, a.terminal_unit_index});
  }

  // Non-cadential baseline drawn from the same held-out predictions.
  std::vector<PerChordRow> pool;
  for (const auto& piece : annotated) {
    const auto& series = eval.series.at(piece);
    for (std::size_t t = 1; t < series.values.size(); ++t) {
      if (!series.values[t] || terminals.count(UnitRef{piece, t})) continue;
      pool.push_back({piece, t, eval.fold_of.at(piece), "non-cadential", *series.values[t]});
    }
  }
  std::vector<PerChordRow> baseline;
  std::mt19937_64 rng(mixSeed(cfg.seed, kBaselineSalt));
  std::sample(pool.begin(), pool.end(), std::back_inserter(baseline), cfg.baseline_size, rng);
  if (baseline.size() < cfg.baseline_size) {
    report.warnings.push_back("non-cadential baseline: only " + std::to_string(baseline.size()) + " of " +
                              std::to_string(cfg.baseline_size) + " requested chords available");
  }
  for (auto& row : baseline) {
    groups.add(row.group, row.tension);
    report.rows.push_back(std::move(row));
  }

  report.tables.push_back(groups.table("cadence_terminals", {"PAC", "HC", "DC", "non-cadential"}, report.warnings));

  const double alpha_planned = stats::bonferroni(cfg.alpha, kExp2PlannedComparisons);
  const auto &pac = groups.get("PAC"), &hc = groups.get("HC"), &dc = groups.get("DC"),
             &noncad = groups.get("non-cadential");
  const std::string skipped = "skipped: a group has fewer than 2 samples";

  auto pairwise = [&](const char* id, const char* description, const std::vector<double>& lower,
                      const char* lower_name, const std::vector<double>& higher, const char* higher_name) {
    Hypothesis h{id, description, {}, {}, false, {}};
    if (enough({&lower, &higher})) {
      h.comparisons.push_back(labelled(stats::welchT(lower, higher, alpha_planned), lower_name, higher_name));
      h.supported = allSupported(h.comparisons);
    } else {
      h.note = skipped;
    }
    report.hypotheses.push_back(std::move(h));
  };
  pairwise("H1", "PAC terminal chords less tense than non-cadential chords", pac, "PAC", noncad, "non-cadential");
  pairwise("H2", "PAC less tense than HC", pac, "PAC", hc, "HC");
  pairwise("H3", "PAC less tense than DC", pac, "PAC", dc, "DC");
  {
    Hypothesis h{"H4", "ascending trend PAC < HC < DC", {}, {}, false, {}};
    if (enough({&pac, &hc, &dc})) {
      h.omnibus = stats::onewayAnova({pac, hc, dc}, cfg.alpha);
      h.omnibus->test.groups = {"PAC", "HC", "DC"};
      h.comparisons = stats::trendContrast({pac, hc, dc}, cfg.alpha, kExp2PlannedComparisons);
      h.comparisons[0].groups = {"PAC", "HC"};
      h.comparisons[1].groups = {"HC", "DC"};
      h.supported = allSupported(h.comparisons);
    } else {
      h.note = skipped;
    }
    report.hypotheses.push_back(std::move(h));
  }
  return report;
}

const ResultTable* ExperimentReport::table(std::string_view table_name) const {
  for (const auto& t : tables) {
    if (t.name == table_name) return &t;
  }
  return nullptr;
}

const Hypothesis* ExperimentReport::hypothesis(std::string_view hypothesis_id) const {
  for (const auto& h : hypotheses) {
    if (h.id == hypothesis_id) return &h;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

std::string toolVersion() { return std::string("chordtension ") + CHORDTENSION_VERSION; }

std::string OutputHeader::comment() const {
  return "# tool " + tool_version + "\n# config_digest " + config_digest + "\n# seed " + std::to_string(seed) + "\n";
}

OutputHeader makeOutputHeader(const ExperimentConfig& cfg) { return {toolVersion(), cfg.digest(), cfg.seed}; }

std::string renderTableCsv(const ResultTable& table, const OutputHeader& header) {
  std::ostringstream out;
  out << header.comment() << "group,mean,se,count\n";
  for (const auto& r : table.rows) {
    out << r.group << ',' << formatReal(r.mean) << ',' << formatReal(r.se) << ',' << r.count << '\n';
  }
  return out.str();
}

std::string renderPerChordCsv(const ExperimentReport& report, const OutputHeader& header) {
  std::ostringstream out;
  out << header.comment() << "piece_id,unit_index,fold,group,tension\n";
  for (const auto& r : report.rows) {
    out << r.piece_id << ',' << r.unit_index << ',' << r.fold << ',' << r.group << ',' << formatReal(r.tension)
        << '\n';
  }
  return out.str();
}

std::string renderTestsJson(const ExperimentReport& report, const OutputHeader& header) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["tool"] = header.tool_version;
  j["config_digest"] = header.config_digest;
  j["seed"] = header.seed;
  j["experiment"] = report.name;
  j["vocabulary_size"] = report.vocabulary_size;
  j["planned_comparisons"] = report.planned_comparisons;
  j["hypotheses"] = ordered_json::array();
  for (const auto& h : report.hypotheses) {
    ordered_json hj;
    hj["id"] = h.id;
    hj["description"] = h.description;
    hj["supported"] = h.supported;
    if (!h.note.empty()) hj["note"] = h.note;
    if (h.omnibus) {
      auto omni = ordered_json::parse(stats::toJson(h.omnibus->test));
      omni["partial_eta_squared"] = h.omnibus->partial_eta_squared;
      hj["omnibus"] = std::move(omni);
    }
    hj["comparisons"] = ordered_json::array();
    for (const auto& c : h.comparisons) hj["comparisons"].push_back(ordered_json::parse(stats::toJson(c)));
    j["hypotheses"].push_back(std::move(hj));
  }
  j["warnings"] = report.warnings;
  return j.dump(2) + "\n";
}

std::vector<std::string> writeReport(const ExperimentReport& report, const std::string& directory,
                                     const OutputHeader& header) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create '" + directory + "': " + ec.message());

  std::vector<std::string> written;
  auto emit = [&](const std::string& file, const std::string& content) {
    const std::string path = (fs::path(directory) / file).string();
    writeTextFile(path, content);
    written.push_back(path);
  };
  emit(report.name + "_per_chord.csv", renderPerChordCsv(report, header));
  for (const auto& t : report.tables) emit(t.name + ".csv", renderTableCsv(t, header));
  emit(report.name + "_tests.json", renderTestsJson(report, header));
  return written;
}

}  // namespace chordtension
