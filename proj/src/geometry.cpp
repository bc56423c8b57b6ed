#include "domstop/geometry.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "domstop/error.hpp"

namespace domstop {

namespace {

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double signed_numerator(const Hyperplane& plane, std::span<const float> x) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += plane.normal[i] * static_cast<double>(x[i]);
  return s + plane.offset;
}

void check_dim(const Hyperplane& plane, std::size_t n) {
  if (n != plane.dim()) {
    throw DataError("point has dimension " + std::to_string(n) + ", hyperplane has " +
                    std::to_string(plane.dim()));
  }
}

}  // namespace

ClassCentroid compute_centroid(const EmbeddingModel& model, std::span<const WordId> class_words,
                               std::string label) {
  if (class_words.empty()) throw DataError("cannot compute a centroid of an empty word set");
  Vector sum(model.dim, 0.0);
  for (WordId id : class_words) {
    if (id >= model.rows) throw LookupError("word id " + std::to_string(id) + " outside the embedding");
    auto row = model.input_row(id);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += row[i];
  }
  const double m = static_cast<double>(class_words.size());
  for (auto& x : sum) x /= m;
  return {std::move(label), std::move(sum), class_words.size()};
}

ClassCentroid compute_centroid(const EmbeddingModel& model, const Vocabulary& vocab,
                               std::span<const std::string> class_words, std::string label) {
  std::vector<WordId> ids;
  ids.reserve(class_words.size());
  for (const auto& w : class_words) ids.push_back(vocab.id(w));
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return compute_centroid(model, ids, std::move(label));
}

Hyperplane build_hyperplane(const ClassCentroid& center_a, const ClassCentroid& center_b) {
  const auto& a = center_a.vector;
  const auto& b = center_b.vector;
  if (a.size() != b.size()) throw DataError("centroid dimensions differ");
  Hyperplane plane;
  plane.normal.resize(a.size());
  plane.midpoint.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    plane.normal[i] = a[i] - b[i];
    plane.midpoint[i] = (a[i] + b[i]) / 2.0;
  }
  plane.normal_norm = std::sqrt(dot(plane.normal, plane.normal));
  if (!(plane.normal_norm > 1e-12)) {
    throw DegenerateError("class centroids coincide; no separating hyperplane exists");
  }
  plane.offset = -dot(plane.normal, plane.midpoint);
  return plane;
}

double distance(const Hyperplane& plane, std::span<const double> x) {
  check_dim(plane, x.size());
  return std::abs(dot(plane.normal, x) + plane.offset) / plane.normal_norm;
}

double distance(const Hyperplane& plane, std::span<const float> x) {
  check_dim(plane, x.size());
  return std::abs(signed_numerator(plane, x)) / plane.normal_norm;
}

RankedWordList rank_by_distance(const EmbeddingModel& model, const Hyperplane& plane, const Vocabulary& vocab) {
  if (model.rows != vocab.size()) {
    throw HashMismatchError("embedding has " + std::to_string(model.rows) + " rows, vocabulary has " +
                            std::to_string(vocab.size()) + " words");
  }
  check_dim(plane, model.dim);
  std::vector<RankedEntry> entries;
  entries.reserve(vocab.size());
  for (WordId id = 0; id < vocab.size(); ++id) {
    entries.push_back({vocab.word(id), std::abs(signed_numerator(plane, model.input_row(id))) / plane.normal_norm});
  }
  return ranked_ascending(Method::hyperplane, std::move(entries));
}

HyperplaneModel fit_hyperplane(const EmbeddingModel& model, const Corpus& corpus) {
  const auto& vocab = corpus.vocabulary;
  if (model.vocab_hash != vocab.hash() || model.rows != vocab.size()) {
    throw HashMismatchError("embedding does not belong to this corpus vocabulary");
  }
  HyperplaneModel out;
  out.center_a = compute_centroid(model, vocab.class_words(Side::A), corpus.label(Side::A));
  out.center_b = compute_centroid(model, vocab.class_words(Side::B), corpus.label(Side::B));
  out.plane = build_hyperplane(out.center_a, out.center_b);
  return out;
}

RankedWordList rank_hyperplane(const EmbeddingModel& model, const Corpus& corpus) {
  auto fitted = fit_hyperplane(model, corpus);
  return rank_by_distance(model, fitted.plane, corpus.vocabulary);
}

Projection2d pca_2d(std::span<const Vector> points) {
  if (points.size() < 2) throw DataError("projection needs at least two points");
  const std::size_t k = points.front().size();
  if (k < 1) throw DataError("projection needs non-empty vectors");
  for (const auto& p : points) {
    if (p.size() != k) throw DataError("projection points differ in dimension");
  }

  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd x(n, static_cast<Eigen::Index>(k));
  for (Eigen::Index r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < k; ++c) x(r, static_cast<Eigen::Index>(c)) = points[r][c];
  }
  Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;
  Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw DataError("covariance eigendecomposition failed");

  Projection2d out;
  out.mean.assign(mean.data(), mean.data() + k);
  // Eigenvalues come back ascending.
  for (int pc = 0; pc < 2; ++pc) {
    const Eigen::Index col = static_cast<Eigen::Index>(k) - 1 - pc;
    Eigen::VectorXd axis = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
    double variance = 0.0;
    if (col >= 0) {
      axis = solver.eigenvectors().col(col);
      variance = std::max(0.0, solver.eigenvalues()(col));
      Eigen::Index arg = 0;
      axis.cwiseAbs().maxCoeff(&arg);
      if (axis(arg) < 0) axis = -axis;
    }
    out.components[pc].assign(axis.data(), axis.data() + k);
    out.variances[pc] = variance;
  }
  out.coords.resize(points.size());
  for (Eigen::Index r = 0; r < n; ++r) {
    for (int pc = 0; pc < 2; ++pc) {
      double s = 0.0;
      for (std::size_t c = 0; c < k; ++c) s += x(r, static_cast<Eigen::Index>(c)) * out.components[pc][c];
      out.coords[r][pc] = s;
    }
  }
  return out;
}

std::vector<ProjectedWord> project_2d(const EmbeddingModel& model, const Hyperplane& plane,
                                      const Vocabulary& vocab, std::span<const std::string> words) {
  if (words.size() < 2) throw DataError("projection needs at least two words");
  std::vector<Vector> points;
  std::vector<ProjectedWord> out;
  for (const auto& w : words) {
    auto row = model.input_row(vocab.id(w));
    points.emplace_back(row.begin(), row.end());
    out.push_back({w, 0.0, 0.0, distance(plane, row)});
  }
  auto proj = pca_2d(points);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].pc1 = proj.coords[i][0];
    out[i].pc2 = proj.coords[i][1];
  }
  return out;
}

}  // namespace domstop
