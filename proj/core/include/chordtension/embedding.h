#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "chordtension/digest.h"
#include "chordtension/vocab.h"

namespace chordtension {

/// Hyper-parameters for CBOW training with negative sampling. Only dim,
/// window and min_count have fixed reference values (120 / 6 / 1); the rest
/// follow the usual word2vec defaults.
struct TrainConfig {
  int dim = 120;
  int window = 6;  // fixed, no random shrinking; never crosses piece boundaries
  int min_count = 1;
  int negatives = 5;
  int epochs = 5;
  double initial_lr = 0.025;  // decays linearly to initial_lr * 1e-4
  std::uint64_t seed = 1;
  double subsample = 0.0;  // 0 disables frequent-token subsampling
  int threads = 1;         // > 1 runs lock-free asynchronous updates (non-deterministic)

  void validate() const;
  /// Stable "key=value;..." rendering, used for digests and headers.
  std::string canonical() const;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

enum class VectorSource { Input, Output };

class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  EmbeddingModel(std::size_t vocab_size, int dim);

  std::size_t vocabSize() const { return vocab_size_; }
  int dim() const { return dim_; }

  std::span<float> inputRow(int id);
  std::span<const float> inputRow(int id) const;
  std::span<float> outputRow(int id);
  std::span<const float> outputRow(int id) const;
  std::span<const float> row(int id, VectorSource source) const;

  std::vector<float>& inputMatrix() { return input_; }
  const std::vector<float>& inputMatrix() const { return input_; }
  std::vector<float>& outputMatrix() { return output_; }
  const std::vector<float>& outputMatrix() const { return output_; }

  TrainConfig config;
  Sha256 vocab_digest{};

  bool allFinite() const;

  friend bool operator==(const EmbeddingModel&, const EmbeddingModel&) = default;

 private:
  void checkId(int id) const;

  std::size_t vocab_size_ = 0;
  int dim_ = 0;
  std::vector<float> input_;   // vocab_size x dim, row-major
  std::vector<float> output_;  // vocab_size x dim, row-major
};

/// Draws ids with probability proportional to count^0.75.
class NegativeSampler {
 public:
  explicit NegativeSampler(std::span<const std::uint64_t> counts, double power = 0.75);

  template <typename Rng>
  int operator()(Rng& rng) {
    return dist_(rng);
  }
  double probability(int id) const;

 private:
  std::discrete_distribution<int> dist_;
};

template <typename Rng>
int negativeSample(std::span<const std::uint64_t> counts, Rng& rng) {
  return NegativeSampler(counts)(rng);
}

// ---------------------------------------------------------------------------
// CBOW kernel
//
// h = mean of the context input rows. For the target (label 1) and each
// negative (label 0) with score s = out_j . h the loss is
//   -log sigma(s_target) - sum_n log sigma(-s_n).
// cbowStep applies the exact gradient of that loss scaled by lr: the output
// rows move by lr * g_j * h, and every context row moves by lr * dh / |ctx|.
// Gradients are accumulated against the pre-update parameters so repeated ids
// in the negative list are handled exactly.
// ---------------------------------------------------------------------------

namespace detail {

template <typename Real>
Real logSigmoid(Real x) {
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

template <typename Real>
Real sigmoid(Real x) {
  if (x >= 0) return Real(1) / (Real(1) + std::exp(-x));
  const Real e = std::exp(x);
  return e / (Real(1) + e);
}

template <typename Real>
void contextMean(const Real* input, std::size_t dim, std::span<const int> context, Real* h) {
  std::fill(h, h + dim, Real(0));
  for (int c : context) {
    const Real* row = input + static_cast<std::size_t>(c) * dim;
    for (std::size_t d = 0; d < dim; ++d) h[d] += row[d];
  }
  const Real inv = Real(1) / static_cast<Real>(context.size());
  for (std::size_t d = 0; d < dim; ++d) h[d] *= inv;
}

template <typename Real>
Real dot(const Real* a, const Real* b, std::size_t dim) {
  Real s = 0;
  for (std::size_t d = 0; d < dim; ++d) s += a[d] * b[d];
  return s;
}

}  // namespace detail

template <typename Real>
Real cbowLoss(std::span<const Real> input, std::span<const Real> output, std::size_t dim,
              std::span<const int> context, int target, std::span<const int> negatives) {
  std::vector<Real> h(dim);
  detail::contextMean(input.data(), dim, context, h.data());
  Real loss = -detail::logSigmoid(detail::dot(output.data() + static_cast<std::size_t>(target) * dim, h.data(), dim));
  for (int n : negatives) {
    loss -= detail::logSigmoid(-detail::dot(output.data() + static_cast<std::size_t>(n) * dim, h.data(), dim));
  }
  return loss;
}

/// One SGD step on a single (context, target, negatives) example. `scratch`
/// must hold at least 2 * dim values. Returns the loss before the update.
template <typename Real>
Real cbowStep(std::span<Real> input, std::span<Real> output, std::size_t dim, std::span<const int> context,
              int target, std::span<const int> negatives, Real lr, std::span<Real> scratch) {
  Real* h = scratch.data();
  Real* grad_h = scratch.data() + dim;  // accumulates -dL/dh
  detail::contextMean(input.data(), dim, context, h);
  std::fill(grad_h, grad_h + dim, Real(0));

  Real loss = 0;
  const std::size_t samples = 1 + negatives.size();
  // g_j = label_j - sigma(s_j) = -dL/ds_j
  Real g_small[16];
  std::vector<Real> g_large;
  Real* g = g_small;
  if (samples > 16) {
    g_large.resize(samples);
    g = g_large.data();
  }
  for (std::size_t j = 0; j < samples; ++j) {
    const int id = j == 0 ? target : negatives[j - 1];
    const Real* out = output.data() + static_cast<std::size_t>(id) * dim;
    const Real s = detail::dot(out, h, dim);
    const Real label = j == 0 ? Real(1) : Real(0);
    loss -= j == 0 ? detail::logSigmoid(s) : detail::logSigmoid(-s);
    g[j] = label - detail::sigmoid(s);
    for (std::size_t d = 0; d < dim; ++d) grad_h[d] += g[j] * out[d];
  }
  for (std::size_t j = 0; j < samples; ++j) {
    const int id = j == 0 ? target : negatives[j - 1];
    Real* out = output.data() + static_cast<std::size_t>(id) * dim;
    const Real scale = lr * g[j];
    for (std::size_t d = 0; d < dim; ++d) out[d] += scale * h[d];
  }
  const Real ctx_scale = lr / static_cast<Real>(context.size());
  for (int c : context) {
    Real* row = input.data() + static_cast<std::size_t>(c) * dim;
    for (std::size_t d = 0; d < dim; ++d) row[d] += ctx_scale * grad_h[d];
  }
  return loss;
}

/// Single-example convenience wrapper over an EmbeddingModel.
float cbowStep(EmbeddingModel& model, std::span<const int> context, int target, std::span<const int> negatives,
               float lr);

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

struct TrainReport {
  double initial_probe_loss = 0;  // mean loss per probe example
  double final_probe_loss = 0;
  std::uint64_t examples = 0;     // CBOW updates performed
  std::size_t probe_size = 0;
};

/// Input rows uniform in [-0.5/D, 0.5/D], output rows zero.
EmbeddingModel initModel(std::size_t vocab_size, const TrainConfig& cfg);

EmbeddingModel train(const std::vector<PieceSequence>& sequences, const Vocabulary& vocab, const TrainConfig& cfg,
                     TrainReport* report = nullptr);

/// Same as train() but over an explicit subset of sequences (used by the
/// cross-validation driver to avoid copying the corpus per fold).
EmbeddingModel train(std::span<const PieceSequence* const> sequences, const Vocabulary& vocab,
                     const TrainConfig& cfg, TrainReport* report = nullptr);

/// Cosine of two rows; 0 when either has zero norm. Clamped to [-1, 1].
double cosine(const EmbeddingModel& model, int a, int b, VectorSource source = VectorSource::Input);
double cosine(std::span<const float> a, std::span<const float> b);

// ---------------------------------------------------------------------------
// Model file: magic, version, V, D, config, vocabulary digest, then the input
// and output matrices as little-endian float32, row-major.
// ---------------------------------------------------------------------------

std::vector<std::uint8_t> serializeModel(const EmbeddingModel& model);
/// Validates magic, version, shape and length. When `vocab` is given its
/// digest must match the one recorded in the file.
EmbeddingModel deserializeModel(std::span<const std::uint8_t> bytes, const Vocabulary* vocab = nullptr);

void saveModel(const EmbeddingModel& model, const std::string& path);
EmbeddingModel loadModel(const std::string& path, const Vocabulary* vocab = nullptr);

}  // namespace chordtension
