#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "domstop/corpus.hpp"
#include "domstop/embedding.hpp"
#include "domstop/ranking.hpp"

namespace domstop {

using Vector = std::vector<double>;

/// Mean embedding of a class's unique words.
struct ClassCentroid {
  std::string label;
  Vector vector;
  std::size_t word_count = 0;
};

/// The plane w.x + b = 0 orthogonal to the centroid difference, through their midpoint.
struct Hyperplane {
  Vector normal;    // w = center_a - center_b
  double offset{};  // b = -w . midpoint
  Vector midpoint;  // x0 = (center_a + center_b) / 2
  double normal_norm{};

  std::size_t dim() const noexcept { return normal.size(); }
};

ClassCentroid compute_centroid(const EmbeddingModel& model, std::span<const WordId> class_words,
                               std::string label = {});
ClassCentroid compute_centroid(const EmbeddingModel& model, const Vocabulary& vocab,
                               std::span<const std::string> class_words, std::string label = {});

/// Throws DegenerateError when the centroids coincide.
Hyperplane build_hyperplane(const ClassCentroid& center_a, const ClassCentroid& center_b);

/// |w.x + b| / |w|. Throws DataError on dimension mismatch.
double distance(const Hyperplane& plane, std::span<const double> x);
double distance(const Hyperplane& plane, std::span<const float> x);

/// Every vocabulary word sorted by ascending distance (ties by word).
RankedWordList rank_by_distance(const EmbeddingModel& model, const Hyperplane& plane, const Vocabulary& vocab);

struct HyperplaneModel {
  ClassCentroid center_a;
  ClassCentroid center_b;
  Hyperplane plane;
};

/// Centroids over each class's unique words, then the separating plane.
HyperplaneModel fit_hyperplane(const EmbeddingModel& model, const Corpus& corpus);

/// Full hyperplane ranking from a trained embedding (training excluded).
RankedWordList rank_hyperplane(const EmbeddingModel& model, const Corpus& corpus);

struct Projection2d {
  std::vector<std::array<double, 2>> coords;
  std::array<Vector, 2> components;  // unit principal axes, sign fixed so the largest |entry| is positive
  std::array<double, 2> variances{};
  Vector mean;
};

/// Projects points onto the top two principal components of their covariance.
Projection2d pca_2d(std::span<const Vector> points);

struct ProjectedWord {
  std::string word;
  double pc1 = 0.0;
  double pc2 = 0.0;
  double distance = 0.0;
};

/// Throws DataError with fewer than two words.
std::vector<ProjectedWord> project_2d(const EmbeddingModel& model, const Hyperplane& plane,
                                      const Vocabulary& vocab, std::span<const std::string> words);

}  // namespace domstop
