#include "domstop/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "domstop/error.hpp"
#include "domstop/geometry.hpp"
#include "domstop/selectors.hpp"

namespace domstop {

namespace {

std::string csv_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string pct_label(double pct) {
  std::ostringstream os;
  os << pct;
  return os.str();
}

nlohmann::ordered_json pct_json(double pct) {
  if (pct == std::floor(pct)) return static_cast<long long>(pct);
  return pct;
}

}  // namespace

RankedWordList make_ranking(const Corpus& corpus, Method method, const EmbeddingModel* model, std::uint64_t seed) {
  switch (method) {
    case Method::hyperplane:
    case Method::hyperplane_longest: {
      if (!model) {
        throw UsageError("method " + std::string(to_string(method)) +
                         " needs an embedding: pass --embedding <file> or --train");
      }
      auto ranking = rank_hyperplane(*model, corpus);
      return method == Method::hyperplane ? ranking : ranking.reversed(Method::hyperplane_longest);
    }
    case Method::chi2:
    case Method::mi: return rank_by_selector(corpus, method);
    case Method::random: return rank_random(corpus.vocabulary, seed);
  }
  throw UsageError("unknown method");
}

TimedRanking timed_ranking(const Corpus& corpus, Method method, const EmbeddingModel* model, std::uint64_t seed,
                           int repetitions) {
  if (repetitions < 1) repetitions = 1;
  TimedRanking out;
  std::vector<double> times;
  for (int r = 0; r < repetitions; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    out.ranking = make_ranking(corpus, method, model, seed);
    times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  std::sort(times.begin(), times.end());
  out.seconds = times[times.size() / 2];
  return out;
}

std::vector<double> ExperimentGrid::default_percentages() { return {0, 10, 20, 30, 40, 50, 60, 70, 80, 90, 99}; }

bool ExperimentGrid::custom_percentages() const {
  const auto defaults = default_percentages();
  return std::any_of(percentages.begin(), percentages.end(), [&](double p) {
    return std::find(defaults.begin(), defaults.end(), p) == defaults.end();
  });
}

void ExperimentGrid::validate() const {
  if (methods.empty()) throw ConfigError("grid needs at least one method");
  if (percentages.empty()) throw ConfigError("grid needs at least one percentage");
  if (classifiers.empty()) throw ConfigError("grid needs at least one classifier");
  for (double p : percentages) {
    if (!(p >= 0.0 && p < 100.0)) throw ConfigError("percentages must lie in [0, 100)");
  }
  if (folds < 2) throw ConfigError("folds must be >= 2");
  if (min_count < 1) throw ConfigError("min_count must be >= 1");
  if (!(lr.lr > 0.0) || !(lr.l2 >= 0.0) || lr.epochs < 1) throw ConfigError("invalid logistic regression settings");
  embedding.validate();
}

nlohmann::ordered_json to_json(const ExperimentGrid& grid) {
  nlohmann::ordered_json j;
  j["corpus"] = grid.corpus_path;
  j["min_count"] = grid.min_count;
  auto& methods = j["methods"] = nlohmann::ordered_json::array();
  for (auto m : grid.methods) methods.push_back(to_string(m));
  auto& pcts = j["percentages"] = nlohmann::ordered_json::array();
  for (auto p : grid.percentages) pcts.push_back(pct_json(p));
  auto& cls = j["classifiers"] = nlohmann::ordered_json::array();
  for (auto k : grid.classifiers) cls.push_back(to_string(k));
  j["seed"] = grid.seed;
  j["folds"] = grid.folds;
  j["lr"] = {{"l2", grid.lr.l2}, {"lr", grid.lr.lr}, {"epochs", grid.lr.epochs}};
  const auto& e = grid.embedding;
  j["embedding"] = {{"dim", e.dim},
                    {"window", e.window},
                    {"negatives", e.negatives},
                    {"epochs", e.epochs},
                    {"initial_lr", e.initial_lr},
                    {"seed", e.seed},
                    {"subsample_threshold", e.subsample_threshold}};
  return j;
}

ExperimentGrid grid_from_json(const nlohmann::json& j, ExperimentGrid g) {
  try {
    if (!j.is_object()) throw ConfigError("grid config must be a JSON object");
    if (j.contains("corpus")) g.corpus_path = j.at("corpus").get<std::string>();
    if (j.contains("min_count")) g.min_count = j.at("min_count").get<std::uint32_t>();
    if (j.contains("methods")) {
      g.methods.clear();
      for (const auto& m : j.at("methods")) g.methods.push_back(parse_method(m.get<std::string>()));
    }
    if (j.contains("percentages")) g.percentages = j.at("percentages").get<std::vector<double>>();
    if (j.contains("classifiers")) {
      g.classifiers.clear();
      for (const auto& c : j.at("classifiers")) g.classifiers.push_back(parse_classifier(c.get<std::string>()));
    }
    if (j.contains("seed")) g.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("folds")) g.folds = j.at("folds").get<std::uint32_t>();
    if (j.contains("lr")) {
      const auto& l = j.at("lr");
      g.lr.l2 = l.value("l2", g.lr.l2);
      g.lr.lr = l.value("lr", g.lr.lr);
      g.lr.epochs = l.value("epochs", g.lr.epochs);
    }
    if (j.contains("embedding")) {
      const auto& e = j.at("embedding");
      auto& t = g.embedding;
      t.dim = e.value("dim", t.dim);
      t.window = e.value("window", t.window);
      t.negatives = e.value("negatives", t.negatives);
      t.epochs = e.value("epochs", t.epochs);
      t.initial_lr = e.value("initial_lr", t.initial_lr);
      t.seed = e.value("seed", t.seed);
      t.subsample_threshold = e.value("subsample_threshold", t.subsample_threshold);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad grid config: ") + e.what());
  }
  return g;
}

bool EvalReport::any_failed() const noexcept {
  return std::any_of(cells.begin(), cells.end(), [](const EvalCell& c) { return !c.result; });
}

const EvalCell* EvalReport::find(Method m, double pct, ClassifierKind k) const noexcept {
  for (const auto& c : cells) {
    if (c.method == m && c.pct == pct && c.classifier == k) return &c;
  }
  return nullptr;
}

EvalReport run_grid(const Corpus& corpus, const ExperimentGrid& grid, const std::map<Method, TimedRanking>& rankings,
                    unsigned jobs) {
  grid.validate();
  EvalReport report;
  report.grid = grid;
  report.documents = corpus.documents.size();
  report.vocab_size = corpus.vocabulary.size();
  report.empty_documents = corpus.empty_document_ids.size();
  report.labels = corpus.labels;
  for (const auto& [m, r] : rankings) report.ranking_seconds[m] = r.seconds;

  for (auto m : grid.methods) {
    for (auto p : grid.percentages) {
      for (auto k : grid.classifiers) report.cells.push_back({m, p, k, std::nullopt, {}});
    }
  }

  CvOptions options;
  options.folds = grid.folds;
  options.seed = grid.seed;
  options.lr = grid.lr;
  options.lr.seed = grid.seed;

  auto run_cell = [&](EvalCell& cell) {
    try {
      auto it = rankings.find(cell.method);
      if (it == rankings.end()) throw DataError("no ranking available for method " + std::string(to_string(cell.method)));
      auto keep = survivor_mask(it->second.ranking, corpus.vocabulary, cell.pct);
      cell.result = cross_validate(corpus, keep, cell.classifier, options);
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  };

  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, report.cells.size()));
  if (jobs <= 1) {
    for (auto& c : report.cells) run_cell(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < report.cells.size(); i = next++) run_cell(report.cells[i]);
      });
    }
  }

  // Nothing is removed at 0%, so every method must agree there.
  for (auto k : grid.classifiers) {
    const EvalCell* reference = nullptr;
    for (const auto& c : report.cells) {
      if (c.pct != 0.0 || c.classifier != k || !c.result) continue;
      if (!reference) {
        reference = &c;
      } else if (c.result->fold_accuracies != reference->result->fold_accuracies) {
        throw std::logic_error("0% cells differ between methods " + std::string(to_string(reference->method)) +
                               " and " + std::string(to_string(c.method)));
      }
    }
  }

  for (auto p : grid.percentages) {
    for (std::size_t a = 0; a < grid.methods.size(); ++a) {
      for (std::size_t b = a + 1; b < grid.methods.size(); ++b) {
        auto ra = rankings.find(grid.methods[a]);
        auto rb = rankings.find(grid.methods[b]);
        if (ra == rankings.end() || rb == rankings.end()) continue;
        report.overlaps.push_back(
            {p, grid.methods[a], grid.methods[b], overlap(ra->second.ranking, rb->second.ranking, p)});
      }
    }
  }
  return report;
}

EvalReport evaluate(const Corpus& corpus, const ExperimentGrid& grid, const EmbeddingModel* model, unsigned jobs) {
  std::map<Method, TimedRanking> rankings;
  std::map<Method, std::string> errors;
  for (auto m : grid.methods) {
    try {
      rankings.emplace(m, timed_ranking(corpus, m, model, grid.seed));
    } catch (const std::exception& e) {
      errors[m] = e.what();
    }
  }
  auto report = run_grid(corpus, grid, rankings, jobs);
  report.ranking_errors = std::move(errors);
  for (auto& c : report.cells) {
    if (auto it = report.ranking_errors.find(c.method); it != report.ranking_errors.end()) c.error = it->second;
  }
  return report;
}

nlohmann::ordered_json report_json(const EvalReport& report, bool include_timing) {
  nlohmann::ordered_json j;
  j["grid"] = to_json(report.grid);
  j["custom_percentages"] = report.grid.custom_percentages();
  j["corpus"] = {{"documents", report.documents},
                 {"vocab_size", report.vocab_size},
                 {"labels", report.labels},
                 {"empty_documents", report.empty_documents}};
  if (include_timing) {
    nlohmann::ordered_json t;
    t["embedding_train_s"] = report.embedding_train_seconds ? nlohmann::ordered_json(*report.embedding_train_seconds)
                                                            : nlohmann::ordered_json(nullptr);
    auto& r = t["ranking_s"] = nlohmann::ordered_json::object();
    for (const auto& [m, s] : report.ranking_seconds) r[std::string(to_string(m))] = s;
    j["timing"] = std::move(t);
  }
  auto& cells = j["cells"] = nlohmann::ordered_json::array();
  for (const auto& c : report.cells) {
    nlohmann::ordered_json cell;
    cell["method"] = to_string(c.method);
    cell["elimination_pct"] = pct_json(c.pct);
    cell["classifier"] = to_string(c.classifier);
    if (c.result) {
      const auto& r = *c.result;
      cell["folds"] = r.fold_accuracies;
      cell["mean_accuracy"] = r.mean_accuracy;
      if (include_timing) {
        cell["train_time_s"] = r.train_time_s();
        cell["predict_time_s"] = r.predict_time_s();
      }
      cell["vocab_size"] = r.vocab_size;
      cell["empty_doc_count"] = r.empty_doc_count;
      cell["folds_reduced"] = r.folds_reduced();
    } else {
      cell["error"] = c.error;
    }
    cells.push_back(std::move(cell));
  }
  auto& ov = j["overlap"] = nlohmann::ordered_json::array();
  for (const auto& o : report.overlaps) {
    ov.push_back({{"elimination_pct", pct_json(o.pct)},
                  {"method_x", to_string(o.x)},
                  {"method_y", to_string(o.y)},
                  {"overlap", o.value}});
  }
  return j;
}

void write_report_csv(std::ostream& out, const EvalReport& report) {
  out << "method,elimination_pct,classifier,mean_accuracy,vocab_size,empty_doc_count,folds,train_time_s,"
         "predict_time_s,error\n";
  for (const auto& c : report.cells) {
    out << to_string(c.method) << ',' << pct_label(c.pct) << ',' << to_string(c.classifier) << ',';
    if (c.result) {
      const auto& r = *c.result;
      out << csv_number(r.mean_accuracy) << ',' << r.vocab_size << ',' << r.empty_doc_count << ',' << r.folds()
          << ',' << csv_number(r.train_time_s()) << ',' << csv_number(r.predict_time_s()) << ",\n";
    } else {
      std::string msg = c.error;
      std::replace(msg.begin(), msg.end(), '"', '\'');
      out << ",,,,,,\"" << msg << "\"\n";
    }
  }
}

void write_overlap_csv(std::ostream& out, const EvalReport& report) {
  out << "elimination_pct,method_x,method_y,overlap\n";
  for (const auto& o : report.overlaps) {
    out << pct_label(o.pct) << ',' << to_string(o.x) << ',' << to_string(o.y) << ',' << csv_number(o.value) << '\n';
  }
}

std::vector<ProjectionRow> projection_rows(const EmbeddingModel& model, const Corpus& corpus, std::size_t n_shortest,
                                           std::size_t n_longest, std::span<const std::string> extra_words) {
  const auto& vocab = corpus.vocabulary;
  auto fitted = fit_hyperplane(model, corpus);
  auto ranking = rank_by_distance(model, fitted.plane, vocab);
  n_shortest = std::min(n_shortest, ranking.size());
  n_longest = std::min(n_longest, ranking.size());

  std::vector<ProjectionRow> rows;
  std::vector<Vector> points;
  auto add_word = [&](const std::string& w) {
    auto id = vocab.find(w);
    if (!id) {
      rows.push_back({w, std::nullopt, std::nullopt});
      return;
    }
    auto v = model.input_row(*id);
    points.emplace_back(v.begin(), v.end());
    rows.push_back({w, std::array<double, 2>{}, distance(fitted.plane, v)});
  };
  for (std::size_t i = 0; i < n_shortest; ++i) add_word(ranking.entries[i].word);
  for (std::size_t i = 0; i < n_longest; ++i) add_word(ranking.entries[ranking.size() - 1 - i].word);
  for (const auto* c : {&fitted.center_a, &fitted.center_b}) {
    points.push_back(c->vector);
    rows.push_back({"__centroid_" + c->label + "__", std::array<double, 2>{}, distance(fitted.plane, std::span<const double>(c->vector))});
  }
  for (const auto& w : extra_words) add_word(w);

  auto proj = pca_2d(points);
  std::size_t p = 0;
  for (auto& r : rows) {
    if (r.coords) r.coords = proj.coords[p++];
  }
  return rows;
}

void write_projection_csv(std::ostream& out, std::span<const ProjectionRow> rows) {
  out << "word,pc1,pc2,distance\n";
  for (const auto& r : rows) {
    out << r.word << ',';
    if (r.coords) {
      out << csv_number((*r.coords)[0]) << ',' << csv_number((*r.coords)[1]) << ',' << csv_number(*r.distance) << '\n';
    } else {
      out << "NA,NA,NA\n";
    }
  }
}

}  // namespace domstop
