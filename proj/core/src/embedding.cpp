#include "chordtension/embedding.h"

#include <atomic>
#include <bit>
#include <cstring>
#include <limits>
#include <sstream>
#include <thread>

#include "chordtension/error.h"
#include "chordtension/io.h"

namespace chordtension {

namespace {

constexpr char kModelMagic[8] = {'C', 'T', 'N', 'M', 'O', 'D', 'E', 'L'};
constexpr std::uint32_t kModelVersion = 1;
constexpr double kMinLrFraction = 1e-4;
constexpr std::size_t kProbeExamples = 256;

struct Example {
  std::vector<int> context;
  int target = 0;
  std::vector<int> negatives;
};

// Collects the context of position t: up to `window` kept tokens on each side.
void gatherContext(const std::vector<int>& tokens, std::size_t t, int window, std::vector<int>& context) {
  context.clear();
  const std::size_t w = static_cast<std::size_t>(window);
  const std::size_t lo = t >= w ? t - w : 0;
  const std::size_t hi = std::min(tokens.size(), t + w + 1);
  for (std::size_t j = lo; j < hi; ++j) {
    if (j != t) context.push_back(tokens[j]);
  }
}

template <typename Rng>
void drawNegatives(NegativeSampler& sampler, Rng& rng, int target, int count, std::vector<int>& out) {
  out.clear();
  for (int i = 0; i < count; ++i) {
    const int id = sampler(rng);
    // A draw equal to the target is dropped; with a single-token vocabulary
    // this leaves the example with no negatives at all.
    if (id != target) out.push_back(id);
  }
}

std::uint64_t mixSeed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double probeLoss(const EmbeddingModel& model, const std::vector<Example>& probe) {
  if (probe.empty()) return 0.0;
  double total = 0;
  for (const auto& ex : probe) {
    total += cbowLoss<float>(model.inputMatrix(), model.outputMatrix(), static_cast<std::size_t>(model.dim()),
                             ex.context, ex.target, ex.negatives);
  }
  return total / static_cast<double>(probe.size());
}

// --- little-endian encoding -------------------------------------------------

void putU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void putU64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void putF64(std::vector<std::uint8_t>& out, double v) { putU64(out, std::bit_cast<std::uint64_t>(v)); }
void putF32(std::vector<std::uint8_t>& out, float v) { putU32(out, std::bit_cast<std::uint32_t>(v)); }

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::span<const std::uint8_t> take(std::size_t n) {
    if (bytes_.size() - pos_ < n) throw Error(ErrorCode::MalformedModel, "model file truncated");
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint32_t u32() {
    auto s = take(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(s[static_cast<std::size_t>(i)]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    auto s = take(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(s[static_cast<std::size_t>(i)]) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  float f32() { return std::bit_cast<float>(u32()); }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

// ---------------------------------------------------------------------------
// TrainConfig
// ---------------------------------------------------------------------------

void TrainConfig::validate() const {
  auto bad = [](const std::string& what) { return Error(ErrorCode::InvalidConfig, what); };
  if (dim <= 0) throw bad("dim must be > 0");
  if (window < 1) throw bad("window must be >= 1");
  if (min_count < 1) throw bad("min_count must be >= 1");
  if (negatives < 1) throw bad("negatives must be >= 1");
  if (epochs < 0) throw bad("epochs must be >= 0");
  if (!(initial_lr > 0) || !std::isfinite(initial_lr)) throw bad("initial_lr must be > 0");
  if (subsample < 0) throw bad("subsample must be >= 0");
  if (threads < 1) throw bad("threads must be >= 1");
}

std::string TrainConfig::canonical() const {
  std::ostringstream out;
  out.precision(17);
  out << "dim=" << dim << ";window=" << window << ";min_count=" << min_count << ";negatives=" << negatives
      << ";epochs=" << epochs << ";initial_lr=" << initial_lr << ";seed=" << seed << ";subsample=" << subsample
      << ";threads=" << threads;
  return out.str();
}

// ---------------------------------------------------------------------------
// EmbeddingModel
// ---------------------------------------------------------------------------

EmbeddingModel::EmbeddingModel(std::size_t vocab_size, int dim)
    : vocab_size_(vocab_size),
      dim_(dim),
      input_(vocab_size * static_cast<std::size_t>(dim), 0.0f),
      output_(vocab_size * static_cast<std::size_t>(dim), 0.0f) {
  config.dim = dim;
}

void EmbeddingModel::checkId(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= vocab_size_) {
    throw Error(ErrorCode::IdOutOfRange,
                "id " + std::to_string(id) + " outside vocabulary of " + std::to_string(vocab_size_));
  }
}

std::span<float> EmbeddingModel::inputRow(int id) {
  checkId(id);
  return {input_.data() + static_cast<std::size_t>(id) * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
}

std::span<const float> EmbeddingModel::inputRow(int id) const {
  checkId(id);
  return {input_.data() + static_cast<std::size_t>(id) * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
}

std::span<float> EmbeddingModel::outputRow(int id) {
  checkId(id);
  return {output_.data() + static_cast<std::size_t>(id) * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
}

std::span<const float> EmbeddingModel::outputRow(int id) const {
  checkId(id);
  return {output_.data() + static_cast<std::size_t>(id) * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
}

std::span<const float> EmbeddingModel::row(int id, VectorSource source) const {
  return source == VectorSource::Input ? inputRow(id) : outputRow(id);
}

bool EmbeddingModel::allFinite() const {
  auto finite = [](float v) { return std::isfinite(v); };
  return std::all_of(input_.begin(), input_.end(), finite) && std::all_of(output_.begin(), output_.end(), finite);
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

namespace {
std::vector<double> powWeights(std::span<const std::uint64_t> counts, double power) {
  std::vector<double> w;
  w.reserve(counts.size());
  for (auto c : counts) w.push_back(std::pow(static_cast<double>(c), power));
  return w;
}
}  // namespace

NegativeSampler::NegativeSampler(std::span<const std::uint64_t> counts, double power) {
  if (counts.empty()) throw Error(ErrorCode::EmptyTrainingData, "negative sampler needs at least one count");
  auto w = powWeights(counts, power);
  if (std::all_of(w.begin(), w.end(), [](double x) { return x == 0; })) {
    throw Error(ErrorCode::EmptyTrainingData, "all sampling weights are zero");
  }
  dist_ = std::discrete_distribution<int>(w.begin(), w.end());
}

double NegativeSampler::probability(int id) const {
  const auto p = dist_.probabilities();
  if (id < 0 || static_cast<std::size_t>(id) >= p.size()) throw Error(ErrorCode::IdOutOfRange, "sampler id");
  return p[static_cast<std::size_t>(id)];
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

float cbowStep(EmbeddingModel& model, std::span<const int> context, int target, std::span<const int> negatives,
               float lr) {
  for (int c : context) model.inputRow(c);
  model.outputRow(target);
  for (int n : negatives) model.outputRow(n);
  if (context.empty()) return 0.0f;
  std::vector<float> scratch(2 * static_cast<std::size_t>(model.dim()));
  return cbowStep<float>(model.inputMatrix(), model.outputMatrix(), static_cast<std::size_t>(model.dim()), context,
                         target, negatives, lr, scratch);
}

EmbeddingModel initModel(std::size_t vocab_size, const TrainConfig& cfg) {
  cfg.validate();
  EmbeddingModel model(vocab_size, cfg.dim);
  model.config = cfg;
  std::mt19937_64 rng(cfg.seed);
  const float bound = 0.5f / static_cast<float>(cfg.dim);
  std::uniform_real_distribution<float> uniform(-bound, bound);
  for (float& v : model.inputMatrix()) v = uniform(rng);
  return model;
}

EmbeddingModel train(const std::vector<PieceSequence>& sequences, const Vocabulary& vocab, const TrainConfig& cfg,
                     TrainReport* report) {
  std::vector<const PieceSequence*> ptrs;
  ptrs.reserve(sequences.size());
  for (const auto& s : sequences) ptrs.push_back(&s);
  return train(std::span<const PieceSequence* const>(ptrs), vocab, cfg, report);
}

EmbeddingModel train(std::span<const PieceSequence* const> sequences, const Vocabulary& vocab,
                     const TrainConfig& cfg, TrainReport* report) {
  cfg.validate();
  const std::size_t vocab_size = vocab.size();
  if (sequences.empty() || vocab_size == 0) throw Error(ErrorCode::EmptyTrainingData, "no training sequences");

  std::vector<std::uint64_t> counts(vocab_size, 0);
  for (const auto* seq : sequences) {
    for (int id : seq->ids) {
      if (id < 0 || static_cast<std::size_t>(id) >= vocab_size) {
        throw Error(ErrorCode::IdOutOfRange, "id " + std::to_string(id) + " in piece '" + seq->piece_id +
                                                 "' outside vocabulary of " + std::to_string(vocab_size));
      }
      ++counts[static_cast<std::size_t>(id)];
    }
  }
  const auto min_count = static_cast<std::uint64_t>(cfg.min_count);
  for (auto& c : counts) {
    if (c < min_count) c = 0;
  }

  // Retained tokens per sequence (min_count filter only; subsampling is per epoch).
  std::vector<std::vector<int>> tokens;
  tokens.reserve(sequences.size());
  std::uint64_t total_tokens = 0;
  for (const auto* seq : sequences) {
    std::vector<int> kept;
    kept.reserve(seq->ids.size());
    for (int id : seq->ids) {
      if (counts[static_cast<std::size_t>(id)] > 0) kept.push_back(id);
    }
    total_tokens += kept.size();
    tokens.push_back(std::move(kept));
  }
  if (total_tokens == 0) throw Error(ErrorCode::EmptyTrainingData, "no tokens survive min_count");

  EmbeddingModel model = initModel(vocab_size, cfg);
  model.vocab_digest = vocab.digest();
  const std::size_t dim = static_cast<std::size_t>(cfg.dim);

  // Fixed probe batch for before/after loss.
  std::vector<Example> probe;
  {
    NegativeSampler sampler(counts);
    std::mt19937_64 rng(mixSeed(cfg.seed, 0xF00D));
    std::vector<int> ctx;
    for (std::size_t s = 0; s < tokens.size() && probe.size() < kProbeExamples; ++s) {
      for (std::size_t t = 0; t < tokens[s].size() && probe.size() < kProbeExamples; ++t) {
        gatherContext(tokens[s], t, cfg.window, ctx);
        if (ctx.empty()) continue;
        Example ex{ctx, tokens[s][t], {}};
        drawNegatives(sampler, rng, ex.target, cfg.negatives, ex.negatives);
        probe.push_back(std::move(ex));
      }
    }
  }
  const double initial_probe = probeLoss(model, probe);

  const double total_work = static_cast<double>(cfg.epochs) * static_cast<double>(total_tokens) + 1.0;
  std::atomic<std::uint64_t> processed{0};
  std::atomic<std::uint64_t> examples{0};

  auto worker = [&](int worker_id) {
    NegativeSampler sampler(counts);
    std::mt19937_64 rng(mixSeed(cfg.seed, static_cast<std::uint64_t>(worker_id) + 1));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<float> scratch(2 * dim);
    std::vector<int> ctx, negs, sentence;
    std::uint64_t local_examples = 0;
    const double sample_threshold = cfg.subsample * static_cast<double>(total_tokens);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
      for (std::size_t s = static_cast<std::size_t>(worker_id); s < tokens.size();
           s += static_cast<std::size_t>(cfg.threads)) {
        const std::vector<int>* seq = &tokens[s];
        if (cfg.subsample > 0) {
          sentence.clear();
          for (int id : *seq) {
            const double f = static_cast<double>(counts[static_cast<std::size_t>(id)]);
            const double keep = (std::sqrt(f / sample_threshold) + 1.0) * sample_threshold / f;
            if (keep >= 1.0 || unit(rng) < keep) sentence.push_back(id);
          }
          seq = &sentence;
        }
        for (std::size_t t = 0; t < seq->size(); ++t) {
          const std::uint64_t done = processed.fetch_add(1, std::memory_order_relaxed);
          const double frac = std::max(kMinLrFraction, 1.0 - static_cast<double>(done) / total_work);
          const float lr = static_cast<float>(cfg.initial_lr * frac);
          gatherContext(*seq, t, cfg.window, ctx);
          if (ctx.empty()) continue;
          const int target = (*seq)[t];
          drawNegatives(sampler, rng, target, cfg.negatives, negs);
          cbowStep<float>(model.inputMatrix(), model.outputMatrix(), dim, ctx, target, negs, lr, scratch);
          ++local_examples;
        }
        // subsampled tokens still count toward the lr schedule
        if (cfg.subsample > 0) processed.fetch_add(tokens[s].size() - seq->size(), std::memory_order_relaxed);
      }
    }
    examples.fetch_add(local_examples, std::memory_order_relaxed);
  };

  if (cfg.threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < cfg.threads; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }

  if (report != nullptr) {
    report->initial_probe_loss = initial_probe;
    report->final_probe_loss = probeLoss(model, probe);
    report->examples = examples.load();
    report->probe_size = probe.size();
  }
  return model;
}

// ---------------------------------------------------------------------------
// Similarity
// ---------------------------------------------------------------------------

double cosine(std::span<const float> a, std::span<const float> b) {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += static_cast<double>(a[i]) * b[i];
    aa += static_cast<double>(a[i]) * a[i];
    bb += static_cast<double>(b[i]) * b[i];
  }
  if (aa == 0 || bb == 0) return 0.0;
  return std::clamp(ab / std::sqrt(aa * bb), -1.0, 1.0);
}

double cosine(const EmbeddingModel& model, int a, int b, VectorSource source) {
  return cosine(model.row(a, source), model.row(b, source));
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

std::vector<std::uint8_t> serializeModel(const EmbeddingModel& model) {
  std::vector<std::uint8_t> out;
  out.reserve(128 + 8 * model.inputMatrix().size());
  for (char ch : kModelMagic) out.push_back(static_cast<std::uint8_t>(ch));
  putU32(out, kModelVersion);
  putU64(out, model.vocabSize());
  putU32(out, static_cast<std::uint32_t>(model.dim()));
  const auto& c = model.config;
  putU32(out, static_cast<std::uint32_t>(c.dim));
  putU32(out, static_cast<std::uint32_t>(c.window));
  putU32(out, static_cast<std::uint32_t>(c.min_count));
  putU32(out, static_cast<std::uint32_t>(c.negatives));
  putU32(out, static_cast<std::uint32_t>(c.epochs));
  putF64(out, c.initial_lr);
  putU64(out, c.seed);
  putF64(out, c.subsample);
  putU32(out, static_cast<std::uint32_t>(c.threads));
  out.insert(out.end(), model.vocab_digest.begin(), model.vocab_digest.end());
  for (float v : model.inputMatrix()) putF32(out, v);
  for (float v : model.outputMatrix()) putF32(out, v);
  return out;
}

EmbeddingModel deserializeModel(std::span<const std::uint8_t> bytes, const Vocabulary* vocab) {
  Reader in(bytes);
  auto magic = in.take(sizeof(kModelMagic));
  if (std::memcmp(magic.data(), kModelMagic, sizeof(kModelMagic)) != 0) {
    throw Error(ErrorCode::MalformedModel, "bad magic");
  }
  if (const auto version = in.u32(); version != kModelVersion) {
    throw Error(ErrorCode::MalformedModel, "unsupported model version " + std::to_string(version));
  }
  const std::uint64_t vocab_size = in.u64();
  const std::uint32_t dim = in.u32();
  TrainConfig cfg;
  cfg.dim = static_cast<int>(in.u32());
  cfg.window = static_cast<int>(in.u32());
  cfg.min_count = static_cast<int>(in.u32());
  cfg.negatives = static_cast<int>(in.u32());
  cfg.epochs = static_cast<int>(in.u32());
  cfg.initial_lr = in.f64();
  cfg.seed = in.u64();
  cfg.subsample = in.f64();
  cfg.threads = static_cast<int>(in.u32());
  Sha256 digest{};
  auto d = in.take(digest.size());
  std::copy(d.begin(), d.end(), digest.begin());

  if (dim == 0 || static_cast<std::uint32_t>(cfg.dim) != dim) throw Error(ErrorCode::MalformedModel, "dimension mismatch");
  const std::uint64_t cells = vocab_size * dim;
  if (vocab_size == 0 || cells / dim != vocab_size || in.remaining() != 2 * 4 * cells) {
    throw Error(ErrorCode::MalformedModel, "matrix payload does not match header shape");
  }
  if (vocab != nullptr) {
    if (vocab->size() != vocab_size || vocab->digest() != digest) {
      throw Error(ErrorCode::DigestMismatch, "model was trained against a different vocabulary");
    }
  }

  EmbeddingModel model(vocab_size, static_cast<int>(dim));
  model.config = cfg;
  model.vocab_digest = digest;
  for (float& v : model.inputMatrix()) v = in.f32();
  for (float& v : model.outputMatrix()) v = in.f32();
  return model;
}

void saveModel(const EmbeddingModel& model, const std::string& path) {
  writeBinaryFile(path, serializeModel(model));
}

EmbeddingModel loadModel(const std::string& path, const Vocabulary* vocab) {
  return deserializeModel(readBinaryFile(path), vocab);
}

}  // namespace chordtension
