#include "domstop/embedding.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include "domstop/error.hpp"

namespace domstop {

namespace {

constexpr std::array<char, 8> kMagic{'D', 'O', 'M', 'S', 'T', 'O', 'P', '1'};
constexpr std::size_t kHeaderBytes = 32;

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void axpy(float a, const float* __restrict x, float* __restrict y, std::size_t n) noexcept {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

bool all_finite(std::span<const float> values) {
  return std::all_of(values.begin(), values.end(), [](float v) { return std::isfinite(v); });
}

template <class UInt>
void put_le(std::string& buf, UInt value) {
  for (std::size_t i = 0; i < sizeof(UInt); ++i) buf.push_back(static_cast<char>((value >> (8 * i)) & 0xff));
}

template <class UInt>
UInt get_le(const unsigned char* p) {
  UInt v = 0;
  for (std::size_t i = 0; i < sizeof(UInt); ++i) v |= static_cast<UInt>(p[i]) << (8 * i);
  return v;
}

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << "0x" << std::hex << v;
  return os.str();
}

}  // namespace

void TrainConfig::validate() const {
  if (dim < 1) throw ConfigError("embedding dim must be >= 1");
  if (window < 1) throw ConfigError("window must be >= 1");
  if (negatives < 1) throw ConfigError("negatives must be >= 1");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (!(initial_lr > 0.0) || !std::isfinite(initial_lr)) throw ConfigError("initial_lr must be > 0");
  if (!(subsample_threshold >= 0.0)) throw ConfigError("subsample_threshold must be >= 0");
}

EmbeddingModel train_skipgram(const Corpus& corpus, const TrainConfig& config, TrainReport* report) {
  config.validate();
  const Vocabulary& vocab = corpus.vocabulary;
  if (vocab.empty()) throw DataError("cannot train embeddings on an empty vocabulary");

  const auto start = std::chrono::steady_clock::now();
  const std::size_t dim = config.dim;
  const std::size_t rows = vocab.size();

  EmbeddingModel model;
  model.dim = config.dim;
  model.rows = rows;
  model.vocab_hash = vocab.hash();
  model.input.resize(rows * dim);
  model.output.assign(rows * dim, 0.0f);

  std::mt19937_64 rng(config.seed);
  const double half_range = 0.5 / static_cast<double>(dim);
  for (auto& x : model.input) x = static_cast<float>((uniform01(rng) * 2.0 - 1.0) * half_range);

  std::vector<double> noise_weights(rows);
  std::uint64_t total_tokens = 0;
  for (WordId id = 0; id < rows; ++id) {
    noise_weights[id] = std::pow(static_cast<double>(vocab.total_count(id)), 0.75);
    total_tokens += vocab.total_count(id);
  }
  std::discrete_distribution<WordId> noise(noise_weights.begin(), noise_weights.end());

  std::vector<double> keep_prob(rows, 1.0);
  if (config.subsample_threshold > 0.0) {
    for (WordId id = 0; id < rows; ++id) {
      double f = static_cast<double>(vocab.total_count(id)) / static_cast<double>(total_tokens);
      double t = config.subsample_threshold;
      keep_prob[id] = std::min(1.0, (std::sqrt(f / t) + 1.0) * t / f);
    }
  }

  const double scheduled = static_cast<double>(config.epochs) * static_cast<double>(total_tokens);
  const double min_lr = config.initial_lr * 1e-4;
  const std::size_t window = config.window;

  std::vector<float> grad_center(dim), grad_context(dim), grad_negatives(config.negatives * dim);
  std::vector<std::span<const float>> negative_rows;
  std::vector<WordId> negative_ids;
  negative_rows.reserve(config.negatives);
  negative_ids.reserve(config.negatives);
  std::vector<std::pair<WordId, std::size_t>> sentence;  // (word, original position)

  std::uint64_t processed_before_doc = 0;
  for (std::uint32_t epoch = 0; epoch < config.epochs; ++epoch) {
    double loss_sum = 0.0;
    std::uint64_t pairs = 0;
    for (const auto& doc : corpus.documents) {
      sentence.clear();
      for (std::size_t pos = 0; pos < doc.tokens.size(); ++pos) {
        WordId w = doc.tokens[pos];
        if (keep_prob[w] >= 1.0 || uniform01(rng) < keep_prob[w]) sentence.emplace_back(w, pos);
      }
      for (std::size_t i = 0; i < sentence.size(); ++i) {
        const double progress = static_cast<double>(processed_before_doc + sentence[i].second) / scheduled;
        const float lr = static_cast<float>(std::max(min_lr, config.initial_lr * (1.0 - progress)));
        const WordId center = sentence[i].first;
        float* v = model.input.data() + center * dim;

        const std::size_t lo = i >= window ? i - window : 0;
        const std::size_t hi = std::min(sentence.size() - 1, i + window);
        for (std::size_t j = lo; j <= hi; ++j) {
          if (j == i) continue;
          const WordId ctx = sentence[j].first;
          negative_rows.clear();
          negative_ids.clear();
          for (std::uint32_t n = 0; n < config.negatives; ++n) {
            WordId neg = noise(rng);
            if (neg == ctx) continue;
            negative_ids.push_back(neg);
            negative_rows.push_back(model.output_row(neg));
          }
          float* u = model.output.data() + ctx * dim;
          float loss = negative_sampling_gradient<float>(
              std::span<const float>(v, dim), std::span<const float>(u, dim), negative_rows, grad_center,
              grad_context, std::span<float>(grad_negatives.data(), negative_ids.size() * dim));
          axpy(-lr, grad_center.data(), v, dim);
          axpy(-lr, grad_context.data(), u, dim);
          for (std::size_t n = 0; n < negative_ids.size(); ++n) {
            axpy(-lr, grad_negatives.data() + n * dim, model.output.data() + negative_ids[n] * dim, dim);
          }
          loss_sum += loss;
          ++pairs;
        }
      }
      processed_before_doc += doc.tokens.size();
    }

    if (!std::isfinite(loss_sum) || !all_finite(model.input) || !all_finite(model.output)) {
      throw DivergenceError("skip-gram training diverged in epoch " + std::to_string(epoch + 1) +
                            "; try a smaller initial_lr");
    }
    if (report) {
      report->epoch_mean_loss.push_back(pairs ? loss_sum / static_cast<double>(pairs) : 0.0);
      report->epoch_pairs.push_back(pairs);
    }
  }

  if (report) {
    report->seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return model;
}

std::span<const float> embedding_of(const EmbeddingModel& model, const Vocabulary& vocab,
                                    std::string_view word) {
  if (model.vocab_hash != vocab.hash() || model.rows != vocab.size()) {
    throw HashMismatchError("embedding was trained on vocabulary " + hex(model.vocab_hash) +
                            ", not " + hex(vocab.hash()));
  }
  return model.input_row(vocab.id(word));
}

double cosine_similarity(std::span<const float> a, std::span<const float> b) noexcept {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    ab += static_cast<double>(a[i]) * b[i];
    aa += static_cast<double>(a[i]) * a[i];
    bb += static_cast<double>(b[i]) * b[i];
  }
  if (aa == 0.0 || bb == 0.0) return 0.0;
  return ab / std::sqrt(aa * bb);
}

void save_model(const EmbeddingModel& model, const std::filesystem::path& path) {
  const std::size_t cells = model.rows * model.dim;
  if (model.input.size() != cells || model.output.size() != cells) {
    throw DataError("embedding matrices do not match rows x dim");
  }
  std::string buf;
  buf.reserve(kHeaderBytes + 8 * cells);
  buf.append(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(buf, model.dim);
  put_le<std::uint32_t>(buf, 0);
  put_le<std::uint64_t>(buf, model.rows);
  put_le<std::uint64_t>(buf, model.vocab_hash);
  for (const auto* m : {&model.input, &model.output}) {
    for (float x : *m) put_le<std::uint32_t>(buf, std::bit_cast<std::uint32_t>(x));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write model file " + path.string());
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw DataError("failed writing model file " + path.string());
}

EmbeddingModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file " + path.string());
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < kHeaderBytes || std::memcmp(buf.data(), kMagic.data(), kMagic.size()) != 0) {
    throw ParseError("not an embedding model file: " + path.string());
  }
  const auto* p = reinterpret_cast<const unsigned char*>(buf.data());
  EmbeddingModel model;
  model.dim = get_le<std::uint32_t>(p + 8);
  model.rows = get_le<std::uint64_t>(p + 16);
  model.vocab_hash = get_le<std::uint64_t>(p + 24);
  if (model.dim == 0) throw ParseError("model file has dim 0: " + path.string());
  const std::size_t cells = model.rows * model.dim;
  if (buf.size() != kHeaderBytes + 8 * cells) {
    throw ParseError("model file is truncated or has trailing bytes: expected " +
                     std::to_string(kHeaderBytes + 8 * cells) + " bytes, got " + std::to_string(buf.size()));
  }
  model.input.resize(cells);
  model.output.resize(cells);
  const unsigned char* q = p + kHeaderBytes;
  for (auto* m : {&model.input, &model.output}) {
    for (auto& x : *m) {
      x = std::bit_cast<float>(get_le<std::uint32_t>(q));
      q += 4;
    }
  }
  return model;
}

EmbeddingModel load_model(const std::filesystem::path& path, const Vocabulary& vocab) {
  EmbeddingModel model = load_model(path);
  if (model.vocab_hash != vocab.hash() || model.rows != vocab.size()) {
    throw HashMismatchError("vocabulary hash mismatch: model " + hex(model.vocab_hash) + " (" +
                            std::to_string(model.rows) + " words), corpus " + hex(vocab.hash()) + " (" +
                            std::to_string(vocab.size()) + " words)");
  }
  return model;
}

}  // namespace domstop
