// Command-line front end: synth, vocab, rank, eval, overlap, project.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "domstop/corpus.hpp"
#include "domstop/embedding.hpp"
#include "domstop/error.hpp"
#include "domstop/pipeline.hpp"
#include "domstop/selectors.hpp"
#include "domstop/synthbench.hpp"

namespace fs = std::filesystem;
using namespace domstop;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitPartial = 3;

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + (dir / name).string());
  return out;
}

struct EmbeddingFlags {
  std::string model_path;
  bool train = false;
  TrainConfig config;
  std::vector<CLI::Option*> options;

  void add(CLI::App* cmd) {
    cmd->add_option("--embedding", model_path, "Trained embedding file");
    cmd->add_flag("--train", train, "Train the embedding instead of loading one");
    options = {
        cmd->add_option("--dim", config.dim, "Embedding dimension")->capture_default_str(),
        cmd->add_option("--window", config.window, "Context window")->capture_default_str(),
        cmd->add_option("--negatives", config.negatives, "Negative samples per pair")->capture_default_str(),
        cmd->add_option("--epochs", config.epochs, "Training epochs")->capture_default_str(),
        cmd->add_option("--initial-lr", config.initial_lr, "Starting learning rate")->capture_default_str(),
        cmd->add_option("--subsample", config.subsample_threshold, "Subsampling threshold (0 disables)")
            ->capture_default_str(),
        cmd->add_option("--embed-seed", config.seed, "Embedding RNG seed")->capture_default_str(),
    };
  }

  /// Config-file values for every option not given on the command line.
  void merge(const TrainConfig& file) {
    const bool given[] = {options[0]->count() > 0, options[1]->count() > 0, options[2]->count() > 0,
                          options[3]->count() > 0, options[4]->count() > 0, options[5]->count() > 0,
                          options[6]->count() > 0};
    if (!given[0]) config.dim = file.dim;
    if (!given[1]) config.window = file.window;
    if (!given[2]) config.negatives = file.negatives;
    if (!given[3]) config.epochs = file.epochs;
    if (!given[4]) config.initial_lr = file.initial_lr;
    if (!given[5]) config.subsample_threshold = file.subsample_threshold;
    if (!given[6]) config.seed = file.seed;
  }

  bool given() const { return train || !model_path.empty(); }

  /// Loads or trains; writes the trained model to out_dir/embedding.bin.
  std::optional<EmbeddingModel> obtain(const Corpus& corpus, const fs::path& out_dir, double& train_seconds) {
    if (!model_path.empty()) return load_model(model_path, corpus.vocabulary);
    if (!train) return std::nullopt;
    TrainReport report;
    auto model = train_skipgram(corpus, config, &report);
    train_seconds = report.seconds;
    fs::create_directories(out_dir);
    save_model(model, out_dir / "embedding.bin");
    std::cerr << "trained embedding in " << report.seconds << " s -> " << (out_dir / "embedding.bin").string() << '\n';
    return model;
  }
};

std::vector<double> parse_percentages(const std::vector<std::string>& items) {
  std::vector<double> out;
  for (const auto& s : items) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(s, &used));
      if (used != s.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
      throw UsageError("bad percentage '" + s + "'");
    }
  }
  return out;
}

Corpus read_corpus(const std::string& path, std::uint32_t min_count) {
  auto corpus = build_corpus(load_corpus(path), min_count);
  if (!corpus.empty_document_ids.empty()) {
    std::cerr << "warning: " << corpus.empty_document_ids.size()
              << " documents have no tokens after min_count filtering\n";
  }
  return corpus;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Domain-specific stop word extraction by hyperplane distance, with selector baselines"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out_dir = ".";
  app.add_option("--out-dir", out_dir, "Directory for output files")->capture_default_str();

  // synth
  auto* synth = app.add_subcommand("synth", "Generate the planted-word synthetic corpus");
  std::string profile = "desk";
  SynthConfig synth_overrides;
  std::optional<std::uint32_t> docs_per_class, doc_len, class_dict, common_dict, common_per_doc;
  std::uint64_t synth_seed = SynthConfig{}.seed;
  synth->add_option("--profile", profile, "desk or paper")->capture_default_str();
  synth->add_option("--seed", synth_seed, "Generator seed")->capture_default_str();
  synth->add_option("--docs-per-class", docs_per_class);
  synth->add_option("--doc-len", doc_len);
  synth->add_option("--class-dict-size", class_dict);
  synth->add_option("--common-dict-size", common_dict);
  synth->add_option("--common-per-doc", common_per_doc);

  // vocab
  auto* vocab = app.add_subcommand("vocab", "Dump the vocabulary with per-class document counts");
  std::string corpus_path;
  std::uint32_t min_count = 5;
  vocab->add_option("--corpus", corpus_path, "JSON-lines corpus")->required();
  vocab->add_option("--min-count", min_count, "Minimum corpus frequency")->capture_default_str();

  // rank
  auto* rank = app.add_subcommand("rank", "Rank the vocabulary for elimination");
  std::string method_name;
  std::uint64_t seed = 1;
  EmbeddingFlags rank_embed;
  rank->add_option("--corpus", corpus_path, "JSON-lines corpus")->required();
  rank->add_option("--method", method_name, "hyperplane|hyperplane_longest|chi2|mi|random")->required();
  rank->add_option("--min-count", min_count, "Minimum corpus frequency")->capture_default_str();
  rank->add_option("--seed", seed, "Seed for random ranking")->capture_default_str();
  rank_embed.add(rank);

  // eval
  auto* eval = app.add_subcommand("eval", "Run the elimination x classifier grid with cross-validation");
  std::string config_path;
  std::vector<std::string> methods, percentages, classifiers;
  std::optional<std::uint64_t> eval_seed;
  std::optional<std::uint32_t> folds, eval_min_count;
  std::optional<std::string> eval_corpus;
  unsigned jobs = 0;
  EmbeddingFlags eval_embed;
  eval->add_option("--config", config_path, "Grid config JSON");
  eval->add_option("--corpus", eval_corpus, "JSON-lines corpus");
  eval->add_option("--methods", methods, "Methods to compare")->delimiter(',');
  eval->add_option("--percentages", percentages, "Elimination percentages")->delimiter(',');
  eval->add_option("--classifiers", classifiers, "nb,lr")->delimiter(',');
  eval->add_option("--seed", eval_seed, "Seed for folds, random ranking and LR");
  eval->add_option("--folds", folds, "Cross-validation folds");
  eval->add_option("--min-count", eval_min_count, "Minimum corpus frequency");
  eval->add_option("--jobs", jobs, "Worker threads (0 = all cores, 1 = serial)")->capture_default_str();
  eval_embed.add(eval);

  // overlap
  auto* ovl = app.add_subcommand("overlap", "Survivor overlap between two ranking files");
  std::string ranking_x, ranking_y;
  std::vector<std::string> overlap_pcts;
  ovl->add_option("--x", ranking_x, "First ranking CSV")->required();
  ovl->add_option("--y", ranking_y, "Second ranking CSV")->required();
  ovl->add_option("--percentages", overlap_pcts, "Elimination percentages")->delimiter(',');

  // project
  auto* proj = app.add_subcommand("project", "2-D principal component coordinates for plotting");
  std::string model_path, words_path;
  std::size_t n_shortest = 300, n_longest = 300;
  proj->add_option("--corpus", corpus_path, "JSON-lines corpus")->required();
  proj->add_option("--embedding", model_path, "Trained embedding file")->required();
  proj->add_option("--min-count", min_count, "Minimum corpus frequency")->capture_default_str();
  proj->add_option("--n-shortest", n_shortest)->capture_default_str();
  proj->add_option("--n-longest", n_longest)->capture_default_str();
  proj->add_option("--words", words_path, "Extra words, one per line");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    const fs::path out(out_dir);

    if (*synth) {
      auto config = SynthConfig::profile(profile);
      config.seed = synth_seed;
      if (docs_per_class) config.docs_per_class = *docs_per_class;
      if (doc_len) config.doc_len = *doc_len;
      if (class_dict) config.class_dict_size = *class_dict;
      if (common_dict) config.common_dict_size = *common_dict;
      if (common_per_doc) config.common_per_doc = *common_per_doc;
      auto corpus = generate(config);
      auto c = open_out(out, "corpus.jsonl");
      write_corpus(c, corpus.documents);
      auto m = open_out(out, "manifest.json");
      write_manifest(m, corpus.manifest);
      std::cerr << "wrote " << corpus.documents.size() << " documents to " << (out / "corpus.jsonl").string() << '\n';
      return 0;
    }

    if (*vocab) {
      auto corpus = read_corpus(corpus_path, min_count);
      auto f = open_out(out, "vocabulary.csv");
      write_vocabulary_csv(f, corpus.vocabulary);
      std::cerr << corpus.vocabulary.size() << " words\n";
      return 0;
    }

    if (*rank) {
      const Method method = parse_method(method_name);
      auto corpus = read_corpus(corpus_path, min_count);
      const bool hyper = method == Method::hyperplane || method == Method::hyperplane_longest;
      if (hyper && !rank_embed.given()) {
        throw UsageError("method " + method_name + " needs an embedding: pass --embedding <file> or --train");
      }
      double train_seconds = 0.0;
      std::optional<EmbeddingModel> model;
      if (hyper) model = rank_embed.obtain(corpus, out, train_seconds);
      auto timed = timed_ranking(corpus, method, model ? &*model : nullptr, seed);
      auto f = open_out(out, "ranking_" + method_name + ".csv");
      write_ranking_csv(f, timed.ranking);
      nlohmann::ordered_json t{{"method", method_name},
                               {"vocab_size", corpus.vocabulary.size()},
                               {"ranking_s", timed.seconds},
                               {"embedding_train_s", hyper && rank_embed.train ? nlohmann::ordered_json(train_seconds)
                                                                               : nlohmann::ordered_json(nullptr)}};
      auto tf = open_out(out, "rank_timing_" + method_name + ".json");
      tf << t.dump(2) << '\n';
      std::cerr << "ranked " << timed.ranking.size() << " words in " << timed.seconds << " s\n";
      return 0;
    }

    if (*eval) {
      ExperimentGrid grid;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw UsageError("cannot open config " + config_path);
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
          throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        grid = grid_from_json(j);
        eval_embed.merge(grid.embedding);
      }
      if (eval_corpus) grid.corpus_path = *eval_corpus;
      if (!methods.empty()) {
        grid.methods.clear();
        for (const auto& m : methods) grid.methods.push_back(parse_method(m));
      }
      if (!percentages.empty()) grid.percentages = parse_percentages(percentages);
      if (!classifiers.empty()) {
        grid.classifiers.clear();
        for (const auto& c : classifiers) grid.classifiers.push_back(parse_classifier(c));
      }
      if (eval_seed) grid.seed = *eval_seed;
      if (folds) grid.folds = *folds;
      if (eval_min_count) grid.min_count = *eval_min_count;
      grid.embedding = eval_embed.config;
      grid.validate();
      if (grid.corpus_path.empty()) throw UsageError("eval needs --corpus or a config with \"corpus\"");
      const bool hyper = std::any_of(grid.methods.begin(), grid.methods.end(), [](Method m) {
        return m == Method::hyperplane || m == Method::hyperplane_longest;
      });
      if (hyper && !eval_embed.given()) {
        throw UsageError("hyperplane methods need an embedding: pass --embedding <file> or --train");
      }
      if (grid.custom_percentages()) std::cerr << "note: percentages outside the default 11-step grid\n";

      auto corpus = read_corpus(grid.corpus_path, grid.min_count);
      double train_seconds = 0.0;
      std::optional<EmbeddingModel> model;
      if (hyper) model = eval_embed.obtain(corpus, out, train_seconds);
      auto report = evaluate(corpus, grid, model ? &*model : nullptr, jobs);
      if (hyper && eval_embed.train) report.embedding_train_seconds = train_seconds;

      auto rj = open_out(out, "report.json");
      rj << report_json(report).dump(2) << '\n';
      auto rc = open_out(out, "report.csv");
      write_report_csv(rc, report);
      auto oc = open_out(out, "overlap.csv");
      write_overlap_csv(oc, report);
      std::size_t failed = 0;
      for (const auto& c : report.cells) {
        if (!c.result) {
          ++failed;
          std::cerr << "cell " << to_string(c.method) << " " << c.pct << "% " << to_string(c.classifier)
                    << " failed: " << c.error << '\n';
        }
      }
      std::cerr << report.cells.size() - failed << "/" << report.cells.size() << " cells evaluated\n";
      return failed ? kExitPartial : 0;
    }

    if (*ovl) {
      auto read = [](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw DataError("cannot open ranking " + path);
        return read_ranking_csv(in);
      };
      auto x = read(ranking_x);
      auto y = read(ranking_y);
      auto pcts = overlap_pcts.empty() ? ExperimentGrid::default_percentages() : parse_percentages(overlap_pcts);
      auto f = open_out(out, "overlap.csv");
      f << "elimination_pct,overlap\n";
      for (double p : pcts) f << p << ',' << std::setprecision(17) << overlap(x, y, p) << '\n';
      return 0;
    }

    if (*proj) {
      auto corpus = read_corpus(corpus_path, min_count);
      auto model = load_model(model_path, corpus.vocabulary);
      std::vector<std::string> extra;
      if (!words_path.empty()) {
        std::ifstream in(words_path);
        if (!in) throw DataError("cannot open word list " + words_path);
        for (std::string w; std::getline(in, w);) {
          if (!w.empty() && w.back() == '\r') w.pop_back();
          if (!w.empty()) extra.push_back(w);
        }
      }
      auto rows = projection_rows(model, corpus, n_shortest, n_longest, extra);
      auto f = open_out(out, "projection.csv");
      write_projection_csv(f, rows);
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
