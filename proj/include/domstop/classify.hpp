#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "domstop/corpus.hpp"

namespace domstop {

struct FeatureCount {
  std::uint32_t column = 0;
  std::uint32_t count = 0;
};

/// Term-frequency counts over the surviving words, sorted by column.
using SparseRow = std::vector<FeatureCount>;

struct FeatureMatrix {
  std::vector<WordId> columns;  // vocabulary id of each column
  std::vector<SparseRow> rows;
  std::vector<Side> labels;

  std::size_t cols() const noexcept { return columns.size(); }
};

/// Bag-of-words counts of each document restricted to words with keep[id] set.
FeatureMatrix build_features(const Corpus& corpus, const std::vector<bool>& keep);
/// From dense per-row counts; column j stands for word id j.
FeatureMatrix dense_features(const std::vector<std::vector<std::uint32_t>>& counts, std::vector<Side> labels);

enum class ClassifierKind { nb, lr };
std::string_view to_string(ClassifierKind k) noexcept;
ClassifierKind parse_classifier(std::string_view name);

class Classifier {
 public:
  virtual ~Classifier() = default;
  /// Trains on the listed rows. Throws DataError if only one class is present.
  virtual void fit(const FeatureMatrix& x, std::span<const std::size_t> rows) = 0;
  virtual Side predict(const SparseRow& row) const = 0;
};

/// Multinomial naive Bayes with add-one smoothing.
class NaiveBayes final : public Classifier {
 public:
  void fit(const FeatureMatrix& x, std::span<const std::size_t> rows) override;
  Side predict(const SparseRow& row) const override;

  /// log P(class) + sum count * log P(word | class), per side.
  std::array<double, 2> log_joint(const SparseRow& row) const;
  double log_prior(Side s) const { return log_prior_[index_of(s)]; }
  double log_likelihood(Side s, std::uint32_t column) const { return log_prob_[index_of(s)].at(column); }

 private:
  std::array<double, 2> log_prior_{};
  std::array<std::vector<double>, 2> log_prob_;
};

struct LrConfig {
  double l2 = 1e-4;
  double lr = 0.05;
  std::uint32_t epochs = 20;
  std::uint64_t seed = 1;
};

/// Binary logistic regression on raw counts, P(B | x) = s(w.x + b), trained by SGD.
class LogisticRegression final : public Classifier {
 public:
  explicit LogisticRegression(LrConfig config = {}) : config_(config) {}

  void fit(const FeatureMatrix& x, std::span<const std::size_t> rows) override;
  Side predict(const SparseRow& row) const override;

  double probability_b(const SparseRow& row) const;
  std::span<const double> weights() const noexcept { return weights_; }
  double bias() const noexcept { return bias_; }
  /// Mean training log-loss per epoch (without the penalty).
  std::span<const double> epoch_losses() const noexcept { return epoch_losses_; }

 private:
  LrConfig config_;
  std::vector<double> weights_;
  double bias_ = 0.0;
  std::vector<double> epoch_losses_;
};

/// Mean log-loss over rows plus l2/2 |w|^2, with its gradient.
double logistic_objective(const FeatureMatrix& x, std::span<const std::size_t> rows, std::span<const double> w,
                          double b, double l2, std::span<double> grad_w, double& grad_b);

std::unique_ptr<Classifier> make_classifier(ClassifierKind kind, const LrConfig& lr = {});

struct CvOptions {
  std::uint32_t folds = 10;
  std::uint64_t seed = 1;
  LrConfig lr;
};

struct CvResult {
  std::uint32_t folds_requested = 0;
  std::vector<double> fold_accuracies;
  double mean_accuracy = 0.0;
  std::vector<double> train_seconds;
  std::vector<double> predict_seconds;
  std::size_t vocab_size = 0;
  std::size_t empty_doc_count = 0;

  std::size_t folds() const noexcept { return fold_accuracies.size(); }
  bool folds_reduced() const noexcept { return folds() < folds_requested; }
  double train_time_s() const noexcept;
  double predict_time_s() const noexcept;
};

/// Fold index per row: each class shuffled with the seed, then dealt round-robin.
std::vector<std::uint32_t> stratified_folds(std::span<const Side> labels, std::uint32_t folds, std::uint64_t seed);

/// Stratified k-fold accuracy. Rows without features are predicted as the training prior's argmax.
CvResult cross_validate(const FeatureMatrix& x, ClassifierKind kind, const CvOptions& options = {});
CvResult cross_validate(const Corpus& corpus, const std::vector<bool>& keep, ClassifierKind kind,
                        const CvOptions& options = {});

}  // namespace domstop
