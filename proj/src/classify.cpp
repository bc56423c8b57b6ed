#include "domstop/classify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "domstop/embedding.hpp"
#include "domstop/error.hpp"

namespace domstop {

namespace {

std::array<std::size_t, 2> class_counts(const FeatureMatrix& x, std::span<const std::size_t> rows) {
  std::array<std::size_t, 2> n{0, 0};
  for (auto r : rows) ++n[index_of(x.labels.at(r))];
  return n;
}

void require_both_classes(const std::array<std::size_t, 2>& n) {
  if (n[0] == 0 || n[1] == 0) throw DataError("training data contains a single class");
}

double sparse_dot(const SparseRow& row, std::span<const double> w) noexcept {
  double s = 0.0;
  for (const auto& f : row) s += w[f.column] * f.count;
  return s;
}

// log(1 + exp(z)) - y z, the log-loss of P(B) = s(z).
double log_loss(double z, double y) noexcept { return -(y * log_sigmoid(z) + (1.0 - y) * log_sigmoid(-z)); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

FeatureMatrix build_features(const Corpus& corpus, const std::vector<bool>& keep) {
  const auto& vocab = corpus.vocabulary;
  if (keep.size() != vocab.size()) throw DataError("survivor mask does not match the vocabulary");
  FeatureMatrix x;
  std::vector<std::uint32_t> column_of(vocab.size(), UINT32_MAX);
  for (WordId id = 0; id < vocab.size(); ++id) {
    if (keep[id]) {
      column_of[id] = static_cast<std::uint32_t>(x.columns.size());
      x.columns.push_back(id);
    }
  }
  std::vector<std::uint32_t> counts(x.columns.size(), 0);
  std::vector<std::uint32_t> touched;
  x.rows.reserve(corpus.documents.size());
  x.labels.reserve(corpus.documents.size());
  for (const auto& doc : corpus.documents) {
    touched.clear();
    for (WordId id : doc.tokens) {
      auto c = column_of[id];
      if (c == UINT32_MAX) continue;
      if (counts[c]++ == 0) touched.push_back(c);
    }
    std::sort(touched.begin(), touched.end());
    SparseRow row;
    row.reserve(touched.size());
    for (auto c : touched) {
      row.push_back({c, counts[c]});
      counts[c] = 0;
    }
    x.rows.push_back(std::move(row));
    x.labels.push_back(doc.label);
  }
  return x;
}

FeatureMatrix dense_features(const std::vector<std::vector<std::uint32_t>>& counts, std::vector<Side> labels) {
  if (counts.size() != labels.size()) throw DataError("row and label counts differ");
  FeatureMatrix x;
  std::size_t cols = 0;
  for (const auto& r : counts) cols = std::max(cols, r.size());
  x.columns.resize(cols);
  std::iota(x.columns.begin(), x.columns.end(), WordId{0});
  for (const auto& r : counts) {
    SparseRow row;
    for (std::uint32_t c = 0; c < r.size(); ++c) {
      if (r[c] > 0) row.push_back({c, r[c]});
    }
    x.rows.push_back(std::move(row));
  }
  x.labels = std::move(labels);
  return x;
}

std::string_view to_string(ClassifierKind k) noexcept { return k == ClassifierKind::nb ? "nb" : "lr"; }

ClassifierKind parse_classifier(std::string_view name) {
  if (name == "nb") return ClassifierKind::nb;
  if (name == "lr") return ClassifierKind::lr;
  throw UsageError("unknown classifier '" + std::string(name) + "' (expected nb or lr)");
}

void NaiveBayes::fit(const FeatureMatrix& x, std::span<const std::size_t> rows) {
  const auto n = class_counts(x, rows);
  require_both_classes(n);
  const std::size_t cols = x.cols();
  std::array<std::vector<std::uint64_t>, 2> counts{std::vector<std::uint64_t>(cols, 0),
                                                   std::vector<std::uint64_t>(cols, 0)};
  std::array<std::uint64_t, 2> totals{0, 0};
  for (auto r : rows) {
    auto s = index_of(x.labels[r]);
    for (const auto& f : x.rows[r]) {
      counts[s][f.column] += f.count;
      totals[s] += f.count;
    }
  }
  const double docs = static_cast<double>(n[0] + n[1]);
  for (std::size_t s = 0; s < 2; ++s) {
    log_prior_[s] = std::log(static_cast<double>(n[s]) / docs);
    const double denom = std::log(static_cast<double>(totals[s] + cols));
    log_prob_[s].resize(cols);
    for (std::size_t c = 0; c < cols; ++c) {
      log_prob_[s][c] = std::log(static_cast<double>(counts[s][c] + 1)) - denom;
    }
  }
}

std::array<double, 2> NaiveBayes::log_joint(const SparseRow& row) const {
  std::array<double, 2> out = log_prior_;
  for (std::size_t s = 0; s < 2; ++s) {
    for (const auto& f : row) out[s] += f.count * log_prob_[s][f.column];
  }
  return out;
}

Side NaiveBayes::predict(const SparseRow& row) const {
  auto j = log_joint(row);
  return j[1] > j[0] ? Side::B : Side::A;
}

void LogisticRegression::fit(const FeatureMatrix& x, std::span<const std::size_t> rows) {
  require_both_classes(class_counts(x, rows));
  const std::size_t cols = x.cols();
  std::vector<double> v(cols, 0.0);
  double scale = 1.0;  // weights = scale * v, so the L2 shrink is O(1) per step
  bias_ = 0.0;
  epoch_losses_.clear();

  std::vector<std::size_t> order(rows.begin(), rows.end());
  std::mt19937_64 rng(config_.seed);
  const double lr = config_.lr;
  const double shrink = 1.0 / (1.0 + lr * config_.l2);

  for (std::uint32_t epoch = 0; epoch < config_.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss = 0.0;
    for (auto r : order) {
      const auto& row = x.rows[r];
      const double y = x.labels[r] == Side::B ? 1.0 : 0.0;
      const double z = scale * sparse_dot(row, v) + bias_;
      loss += log_loss(z, y);
      const double g = sigmoid(z) - y;
      const double step = lr * g / scale;
      for (const auto& f : row) v[f.column] -= step * f.count;
      bias_ -= lr * g;
      // Proximal L2 step after the gradient step; stays stable for any lambda.
      scale *= shrink;
      if (scale < 1e-9) {
        for (auto& vi : v) vi *= scale;
        scale = 1.0;
      }
    }
    loss /= static_cast<double>(order.size());
    if (!std::isfinite(loss) || !std::isfinite(bias_)) {
      throw DivergenceError("logistic regression diverged in epoch " + std::to_string(epoch + 1) +
                            "; try a smaller learning rate");
    }
    epoch_losses_.push_back(loss);
  }
  weights_.resize(cols);
  for (std::size_t c = 0; c < cols; ++c) weights_[c] = scale * v[c];
}

double LogisticRegression::probability_b(const SparseRow& row) const {
  return sigmoid(sparse_dot(row, weights_) + bias_);
}

Side LogisticRegression::predict(const SparseRow& row) const {
  return probability_b(row) > 0.5 ? Side::B : Side::A;
}

double logistic_objective(const FeatureMatrix& x, std::span<const std::size_t> rows, std::span<const double> w,
                          double b, double l2, std::span<double> grad_w, double& grad_b) {
  std::fill(grad_w.begin(), grad_w.end(), 0.0);
  grad_b = 0.0;
  double loss = 0.0;
  const double inv_n = 1.0 / static_cast<double>(rows.size());
  for (auto r : rows) {
    const auto& row = x.rows[r];
    const double y = x.labels[r] == Side::B ? 1.0 : 0.0;
    const double z = sparse_dot(row, w) + b;
    loss += log_loss(z, y);
    const double g = (sigmoid(z) - y) * inv_n;
    for (const auto& f : row) grad_w[f.column] += g * f.count;
    grad_b += g;
  }
  double penalty = 0.0;
  for (std::size_t c = 0; c < w.size(); ++c) {
    penalty += w[c] * w[c];
    grad_w[c] += l2 * w[c];
  }
  return loss * inv_n + 0.5 * l2 * penalty;
}

std::unique_ptr<Classifier> make_classifier(ClassifierKind kind, const LrConfig& lr) {
  if (kind == ClassifierKind::nb) return std::make_unique<NaiveBayes>();
  return std::make_unique<LogisticRegression>(lr);
}

double CvResult::train_time_s() const noexcept {
  return std::accumulate(train_seconds.begin(), train_seconds.end(), 0.0);
}

double CvResult::predict_time_s() const noexcept {
  return std::accumulate(predict_seconds.begin(), predict_seconds.end(), 0.0);
}

std::vector<std::uint32_t> stratified_folds(std::span<const Side> labels, std::uint32_t folds, std::uint64_t seed) {
  if (folds == 0) throw ConfigError("fold count must be positive");
  std::array<std::vector<std::size_t>, 2> members;
  for (std::size_t i = 0; i < labels.size(); ++i) members[index_of(labels[i])].push_back(i);
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> assignment(labels.size(), 0);
  std::size_t dealt = 0;  // continues across classes so fold sizes also stay within one
  for (auto& m : members) {
    std::shuffle(m.begin(), m.end(), rng);
    for (auto i : m) assignment[i] = static_cast<std::uint32_t>(dealt++ % folds);
  }
  return assignment;
}

CvResult cross_validate(const FeatureMatrix& x, ClassifierKind kind, const CvOptions& options) {
  if (x.rows.empty()) throw DataError("cannot cross-validate an empty corpus");
  if (options.folds < 2) throw ConfigError("cross-validation needs at least 2 folds");
  std::array<std::size_t, 2> per_class{0, 0};
  for (auto s : x.labels) ++per_class[index_of(s)];
  const std::size_t smallest = std::min(per_class[0], per_class[1]);
  if (smallest < 2) throw DataError("each class needs at least 2 documents for cross-validation");

  CvResult result;
  result.folds_requested = options.folds;
  result.vocab_size = x.cols();
  for (const auto& r : x.rows) result.empty_doc_count += r.empty();

  const auto folds = static_cast<std::uint32_t>(std::min<std::size_t>(options.folds, smallest));
  const auto assignment = stratified_folds(x.labels, folds, options.seed);

  std::vector<std::size_t> train, test;
  for (std::uint32_t k = 0; k < folds; ++k) {
    train.clear();
    test.clear();
    for (std::size_t i = 0; i < assignment.size(); ++i) (assignment[i] == k ? test : train).push_back(i);

    auto model = make_classifier(kind, options.lr);
    auto t0 = std::chrono::steady_clock::now();
    model->fit(x, train);
    result.train_seconds.push_back(seconds_since(t0));

    const auto n = class_counts(x, train);
    const Side prior = n[1] > n[0] ? Side::B : Side::A;
    std::size_t correct = 0;
    t0 = std::chrono::steady_clock::now();
    for (auto i : test) {
      const auto& row = x.rows[i];
      correct += (row.empty() ? prior : model->predict(row)) == x.labels[i];
    }
    result.predict_seconds.push_back(seconds_since(t0));
    result.fold_accuracies.push_back(static_cast<double>(correct) / static_cast<double>(test.size()));
  }
  result.mean_accuracy = std::accumulate(result.fold_accuracies.begin(), result.fold_accuracies.end(), 0.0) /
                         static_cast<double>(result.fold_accuracies.size());
  return result;
}

CvResult cross_validate(const Corpus& corpus, const std::vector<bool>& keep, ClassifierKind kind,
                        const CvOptions& options) {
  return cross_validate(build_features(corpus, keep), kind, options);
}

}  // namespace domstop
