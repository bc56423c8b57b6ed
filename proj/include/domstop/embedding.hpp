#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "domstop/corpus.hpp"

namespace domstop {

struct TrainConfig {
  std::uint32_t dim = 100;
  std::uint32_t window = 5;  // max context offset on either side
  std::uint32_t negatives = 5;
  std::uint32_t epochs = 5;
  double initial_lr = 0.025;
  std::uint64_t seed = 1;
  double subsample_threshold = 1e-3;  // 0 disables

  /// Throws ConfigError on out-of-range fields.
  void validate() const;
};

/// Row-major word vectors; row i belongs to word id i of the bound vocabulary.
struct EmbeddingModel {
  std::uint32_t dim = 0;
  std::uint64_t vocab_hash = 0;
  std::size_t rows = 0;
  std::vector<float> input;   // the word embeddings used downstream
  std::vector<float> output;  // context vectors, training only

  std::span<const float> input_row(WordId id) const {
    return {input.data() + static_cast<std::size_t>(id) * dim, dim};
  }
  std::span<const float> output_row(WordId id) const {
    return {output.data() + static_cast<std::size_t>(id) * dim, dim};
  }
};

struct TrainReport {
  std::vector<double> epoch_mean_loss;  // mean negative-sampling loss per positive pair
  std::vector<std::uint64_t> epoch_pairs;
  double seconds = 0.0;
};

/// Numerically stable log(sigmoid(x)).
template <std::floating_point T>
T log_sigmoid(T x) noexcept {
  return x >= T(0) ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

template <std::floating_point T>
T sigmoid(T x) noexcept {
  if (x >= T(0)) return T(1) / (T(1) + std::exp(-x));
  T e = std::exp(x);
  return e / (T(1) + e);
}

/// Negative-sampling loss for one (center, context) pair and its drawn negatives:
///
///   L = -log s(u_ctx . v) - sum_n log s(-u_n . v)
///
/// Writes dL/dv into grad_center, dL/du_ctx into grad_context and dL/du_n into
/// consecutive dim-sized blocks of grad_negatives. Returns L.
template <std::floating_point T>
T negative_sampling_gradient(std::span<const T> center, std::span<const T> context,
                             std::span<const std::span<const T>> negatives, std::span<T> grad_center,
                             std::span<T> grad_context, std::span<T> grad_negatives) noexcept {
  const std::size_t dim = center.size();
  // Eight fixed partial sums: vectorizes without reassociation, and stays deterministic.
  auto dot = [dim](const T* __restrict a, const T* __restrict b) {
    T acc[8] = {};
    std::size_t i = 0;
    for (; i + 8 <= dim; i += 8) {
      for (std::size_t l = 0; l < 8; ++l) acc[l] += a[i + l] * b[i + l];
    }
    T s = ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7]));
    for (; i < dim; ++i) s += a[i] * b[i];
    return s;
  };

  const T* __restrict v = center.data();
  const T* __restrict c = context.data();
  T* __restrict gv = grad_center.data();
  T* __restrict gc = grad_context.data();

  T score = dot(c, v);
  T loss = -log_sigmoid(score);
  T g = sigmoid(score) - T(1);
  for (std::size_t i = 0; i < dim; ++i) gv[i] = g * c[i];
  for (std::size_t i = 0; i < dim; ++i) gc[i] = g * v[i];
  for (std::size_t n = 0; n < negatives.size(); ++n) {
    const T* __restrict u = negatives[n].data();
    T s = dot(u, v);
    loss -= log_sigmoid(-s);
    T gn = sigmoid(s);
    T* __restrict out = grad_negatives.data() + n * dim;
    for (std::size_t i = 0; i < dim; ++i) gv[i] += gn * u[i];
    for (std::size_t i = 0; i < dim; ++i) out[i] = gn * v[i];
  }
  return loss;
}

/// Single-threaded skip-gram with negative sampling. Bit-reproducible for a given seed.
EmbeddingModel train_skipgram(const Corpus& corpus, const TrainConfig& config,
                              TrainReport* report = nullptr);

/// Throws LookupError for unknown words and HashMismatchError if the model was
/// trained on another vocabulary.
std::span<const float> embedding_of(const EmbeddingModel& model, const Vocabulary& vocab,
                                    std::string_view word);

double cosine_similarity(std::span<const float> a, std::span<const float> b) noexcept;

void save_model(const EmbeddingModel& model, const std::filesystem::path& path);
EmbeddingModel load_model(const std::filesystem::path& path);
/// Loads and refuses a model whose vocabulary hash differs from vocab.hash().
EmbeddingModel load_model(const std::filesystem::path& path, const Vocabulary& vocab);

}  // namespace domstop
