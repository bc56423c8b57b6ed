#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "domstop/classify.hpp"
#include "domstop/corpus.hpp"
#include "domstop/embedding.hpp"
#include "domstop/error.hpp"
#include "domstop/geometry.hpp"
#include "domstop/pipeline.hpp"
#include "domstop/selectors.hpp"
#include "domstop/synthbench.hpp"

namespace py = pybind11;
using namespace domstop;

namespace {

std::vector<std::pair<std::string, double>> entries(const RankedWordList& list) {
  std::vector<std::pair<std::string, double>> out;
  out.reserve(list.size());
  for (const auto& e : list.entries) out.emplace_back(e.word, e.score);
  return out;
}

RankedWordList from_entries(Method m, const std::vector<std::pair<std::string, double>>& items) {
  RankedWordList list{m, {}};
  for (const auto& [w, s] : items) list.entries.push_back({w, s});
  return list;
}

std::vector<RawDocument> raw_docs(const py::iterable& docs) {
  std::vector<RawDocument> out;
  std::size_t n = 0;
  for (const auto& item : docs) {
    ++n;
    auto d = item.cast<py::dict>();
    RawDocument doc;
    doc.id = d.contains("id") ? py::str(d["id"]).cast<std::string>() : std::to_string(n);
    doc.text = d["text"].cast<std::string>();
    doc.label = d["label"].cast<std::string>();
    out.push_back(std::move(doc));
  }
  return out;
}

py::list py_docs(const std::vector<RawDocument>& docs) {
  py::list out;
  for (const auto& d : docs) out.append(py::dict(py::arg("id") = d.id, py::arg("text") = d.text, py::arg("label") = d.label));
  return out;
}

}  // namespace

PYBIND11_MODULE(_domstop, m) {
  m.doc() = "Domain-specific stop word extraction by hyperplane distance";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<UsageError>(m, "UsageError", base.ptr());
  py::register_exception<DataError>(m, "DataError", base.ptr());

  m.def("tokenize", &tokenize, py::arg("text"));

  py::class_<Vocabulary>(m, "Vocabulary")
      .def("__len__", &Vocabulary::size)
      .def_property_readonly("words", &Vocabulary::words)
      .def("id", &Vocabulary::id)
      .def("total_count", &Vocabulary::total_count)
      .def("doc_count", [](const Vocabulary& v, WordId id, const std::string& side) {
        return v.doc_count(id, side == "A" ? Side::A : Side::B);
      })
      .def_property_readonly("hash", &Vocabulary::hash);

  py::class_<Corpus>(m, "Corpus")
      .def_property_readonly("labels", [](const Corpus& c) { return c.labels; })
      .def_property_readonly("vocabulary", [](const Corpus& c) -> const Vocabulary& { return c.vocabulary; },
                             py::return_value_policy::reference_internal)
      .def_property_readonly("num_documents", [](const Corpus& c) { return c.documents.size(); })
      .def_property_readonly("empty_document_ids", [](const Corpus& c) { return c.empty_document_ids; })
      .def("tokens", [](const Corpus& c, std::size_t i) { return c.token_strings(c.documents.at(i)); });

  m.def("build_corpus", [](const py::iterable& docs, std::uint32_t min_count) {
    return build_corpus(raw_docs(docs), min_count);
  }, py::arg("documents"), py::arg("min_count") = 1);
  m.def("load_corpus", [](const std::string& path) { return py_docs(load_corpus(path)); }, py::arg("path"));

  py::class_<SynthConfig>(m, "SynthConfig")
      .def(py::init<>())
      .def_static("desk", &SynthConfig::desk)
      .def_static("paper", &SynthConfig::paper)
      .def_readwrite("docs_per_class", &SynthConfig::docs_per_class)
      .def_readwrite("doc_len", &SynthConfig::doc_len)
      .def_readwrite("class_dict_size", &SynthConfig::class_dict_size)
      .def_readwrite("common_dict_size", &SynthConfig::common_dict_size)
      .def_readwrite("common_per_doc", &SynthConfig::common_per_doc)
      .def_readwrite("seed", &SynthConfig::seed);

  m.def("generate", [](const SynthConfig& config) {
    auto s = generate(config);
    py::dict manifest(py::arg("dict_a") = s.manifest.dict_a, py::arg("dict_b") = s.manifest.dict_b,
                      py::arg("common") = s.manifest.common, py::arg("final_doc_len") = s.manifest.final_doc_len);
    return py::make_tuple(py_docs(s.documents), manifest);
  }, py::arg("config"));

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("dim", &TrainConfig::dim)
      .def_readwrite("window", &TrainConfig::window)
      .def_readwrite("negatives", &TrainConfig::negatives)
      .def_readwrite("epochs", &TrainConfig::epochs)
      .def_readwrite("initial_lr", &TrainConfig::initial_lr)
      .def_readwrite("seed", &TrainConfig::seed)
      .def_readwrite("subsample_threshold", &TrainConfig::subsample_threshold);

  py::class_<EmbeddingModel>(m, "EmbeddingModel")
      .def_readonly("dim", &EmbeddingModel::dim)
      .def_readonly("rows", &EmbeddingModel::rows)
      .def_readonly("vocab_hash", &EmbeddingModel::vocab_hash);

  m.def("train_skipgram", [](const Corpus& corpus, const TrainConfig& config) {
    TrainReport report;
    EmbeddingModel model;
    {
      py::gil_scoped_release release;
      model = train_skipgram(corpus, config, &report);
    }
    return py::make_tuple(std::move(model), report.epoch_mean_loss);
  }, py::arg("corpus"), py::arg("config") = TrainConfig{});
  m.def("embedding_of", [](const EmbeddingModel& model, const Corpus& corpus, const std::string& word) {
    auto row = embedding_of(model, corpus.vocabulary, word);
    return std::vector<float>(row.begin(), row.end());
  });
  m.def("save_model", [](const EmbeddingModel& model, const std::string& path) { save_model(model, path); });
  m.def("load_model", [](const std::string& path, const Corpus& corpus) { return load_model(path, corpus.vocabulary); });

  m.def("rank", [](const Corpus& corpus, const std::string& method, const EmbeddingModel* model, std::uint64_t seed) {
    return entries(make_ranking(corpus, parse_method(method), model, seed));
  }, py::arg("corpus"), py::arg("method"), py::arg("model") = nullptr, py::arg("seed") = 1);

  m.def("chi2_score", [](std::uint64_t n11, std::uint64_t n10, std::uint64_t n01, std::uint64_t n00) {
    return chi2_score({n11, n10, n01, n00});
  });
  m.def("mi_score", [](std::uint64_t n11, std::uint64_t n10, std::uint64_t n01, std::uint64_t n00) {
    return mi_score({n11, n10, n01, n00});
  });
  m.def("overlap", [](const std::vector<std::pair<std::string, double>>& x,
                      const std::vector<std::pair<std::string, double>>& y, double pct) {
    return overlap(from_entries(Method::random, x), from_entries(Method::random, y), pct);
  }, py::arg("x"), py::arg("y"), py::arg("elimination_pct"));

  m.def("cross_validate", [](const Corpus& corpus, const std::vector<std::pair<std::string, double>>& ranking,
                             double pct, const std::string& classifier, std::uint32_t folds, std::uint64_t seed) {
    auto keep = survivor_mask(from_entries(Method::random, ranking), corpus.vocabulary, pct);
    CvOptions options;
    options.folds = folds;
    options.seed = seed;
    options.lr.seed = seed;
    auto r = cross_validate(corpus, keep, parse_classifier(classifier), options);
    return py::dict(py::arg("folds") = r.fold_accuracies, py::arg("mean_accuracy") = r.mean_accuracy,
                    py::arg("vocab_size") = r.vocab_size, py::arg("empty_doc_count") = r.empty_doc_count);
  }, py::arg("corpus"), py::arg("ranking"), py::arg("elimination_pct"), py::arg("classifier") = "nb",
     py::arg("folds") = 10, py::arg("seed") = 1);

  m.def("evaluate_json", [](const Corpus& corpus, const std::string& grid_json, const EmbeddingModel* model,
                            unsigned jobs, bool include_timing) {
    auto grid = grid_from_json(nlohmann::json::parse(grid_json));
    EvalReport report;
    {
      py::gil_scoped_release release;
      report = evaluate(corpus, grid, model, jobs);
    }
    return report_json(report, include_timing).dump();
  }, py::arg("corpus"), py::arg("grid_json"), py::arg("model") = nullptr, py::arg("jobs") = 1,
     py::arg("include_timing") = true);
}
