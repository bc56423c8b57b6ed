#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "domstop/classify.hpp"
#include "domstop/corpus.hpp"
#include "domstop/embedding.hpp"
#include "domstop/ranking.hpp"

namespace domstop {

/// Builds one ranking. Hyperplane methods need a model trained on corpus.vocabulary.
RankedWordList make_ranking(const Corpus& corpus, Method method, const EmbeddingModel* model, std::uint64_t seed);

struct TimedRanking {
  RankedWordList ranking;
  double seconds = 0.0;  // median wall time over the repetitions
};

TimedRanking timed_ranking(const Corpus& corpus, Method method, const EmbeddingModel* model, std::uint64_t seed,
                           int repetitions = 3);

struct ExperimentGrid {
  std::vector<Method> methods{all_methods().begin(), all_methods().end()};
  std::vector<double> percentages = default_percentages();
  std::vector<ClassifierKind> classifiers{ClassifierKind::nb, ClassifierKind::lr};
  std::uint64_t seed = 1;
  std::uint32_t folds = 10;
  LrConfig lr;
  TrainConfig embedding;
  std::string corpus_path;
  std::uint32_t min_count = 5;

  /// {0, 10, ..., 90, 99}
  static std::vector<double> default_percentages();
  bool custom_percentages() const;
  void validate() const;
};

nlohmann::ordered_json to_json(const ExperimentGrid& grid);
/// Missing keys keep the defaults of base.
ExperimentGrid grid_from_json(const nlohmann::json& j, ExperimentGrid base = {});

struct EvalCell {
  Method method{};
  double pct = 0.0;
  ClassifierKind classifier{};
  std::optional<CvResult> result;
  std::string error;
};

struct OverlapEntry {
  double pct = 0.0;
  Method x{};
  Method y{};
  double value = 0.0;
};

struct EvalReport {
  ExperimentGrid grid;
  std::size_t documents = 0;
  std::size_t vocab_size = 0;
  std::size_t empty_documents = 0;
  std::array<std::string, 2> labels;
  std::optional<double> embedding_train_seconds;
  std::map<Method, double> ranking_seconds;
  std::map<Method, std::string> ranking_errors;
  std::vector<EvalCell> cells;  // methods x percentages x classifiers, in grid order
  std::vector<OverlapEntry> overlaps;

  bool any_failed() const noexcept;
  const EvalCell* find(Method m, double pct, ClassifierKind k) const noexcept;
};

/// Evaluates every grid cell from precomputed rankings. jobs == 0 uses all hardware threads.
EvalReport run_grid(const Corpus& corpus, const ExperimentGrid& grid, const std::map<Method, TimedRanking>& rankings,
                    unsigned jobs = 1);

/// Ranks with every grid method (timed), then runs the grid.
EvalReport evaluate(const Corpus& corpus, const ExperimentGrid& grid, const EmbeddingModel* model, unsigned jobs = 1);

/// Timing fields are left out when include_timing is false, so reruns compare byte for byte.
nlohmann::ordered_json report_json(const EvalReport& report, bool include_timing = true);
void write_report_csv(std::ostream& out, const EvalReport& report);
void write_overlap_csv(std::ostream& out, const EvalReport& report);

struct ProjectionRow {
  std::string word;
  std::optional<std::array<double, 2>> coords;  // empty for out-of-vocabulary words
  std::optional<double> distance;
};

/// Shortest and longest words, both centroids, then the extra words, on shared principal axes.
std::vector<ProjectionRow> projection_rows(const EmbeddingModel& model, const Corpus& corpus, std::size_t n_shortest,
                                           std::size_t n_longest, std::span<const std::string> extra_words = {});
void write_projection_csv(std::ostream& out, std::span<const ProjectionRow> rows);

}  // namespace domstop
