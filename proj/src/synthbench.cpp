#include "domstop/synthbench.hpp"

#include <ostream>

#include <json.hpp>

#include "domstop/error.hpp"

namespace domstop {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// splitmix64 stream; small and fully specified so corpora match across standard libraries.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() noexcept { return splitmix64(state_++ * 0x2545f4914f6cdd1dULL); }
  std::size_t below(std::size_t n) noexcept { return static_cast<std::size_t>(next() % n); }

 private:
  std::uint64_t state_;
};

std::vector<std::string> dictionary(std::string_view prefix, std::uint32_t size) {
  std::vector<std::string> out;
  out.reserve(size);
  for (std::uint32_t i = 1; i <= size; ++i) out.push_back(std::string(prefix) + std::to_string(i));
  return out;
}

}  // namespace

void SynthConfig::validate() const {
  if (docs_per_class == 0 || doc_len == 0 || class_dict_size == 0) {
    throw ConfigError("docs_per_class, doc_len and class_dict_size must be positive");
  }
  if (common_per_doc > 0 && common_dict_size == 0) throw ConfigError("common_dict_size must be positive");
  if (common_per_doc > doc_len) throw ConfigError("common_per_doc must not exceed doc_len");
}

SynthConfig SynthConfig::desk() { return {}; }

SynthConfig SynthConfig::paper() {
  SynthConfig c;
  c.docs_per_class = 20000;
  c.doc_len = 300;
  c.class_dict_size = 2000;
  c.common_dict_size = 300;
  c.common_per_doc = 10;
  return c;
}

SynthConfig SynthConfig::profile(std::string_view name) {
  if (name == "desk") return desk();
  if (name == "paper") return paper();
  throw UsageError("unknown synthetic profile '" + std::string(name) + "' (expected desk or paper)");
}

SynthCorpus generate(const SynthConfig& config) {
  config.validate();
  SynthCorpus out;
  auto& m = out.manifest;
  m.config = config;
  m.dict_a = dictionary("wa", config.class_dict_size);
  m.dict_b = dictionary("wb", config.class_dict_size);
  m.common = dictionary("m", config.common_per_doc > 0 ? config.common_dict_size : 0);
  m.final_doc_len = config.doc_len + config.common_per_doc;

  const std::size_t total = 2 * static_cast<std::size_t>(config.docs_per_class);
  const int width = static_cast<int>(std::to_string(total).size());
  out.documents.reserve(total);
  std::vector<const std::string*> tokens;
  for (std::size_t j = 0; j < total; ++j) {
    const bool is_a = j % 2 == 0;
    const auto& dict = is_a ? m.dict_a : m.dict_b;
    Stream rng(splitmix64(config.seed ^ splitmix64(j + 1)));

    tokens.clear();
    for (std::uint32_t t = 0; t < config.doc_len; ++t) tokens.push_back(&dict[rng.below(dict.size())]);
    for (std::uint32_t t = 0; t < config.common_per_doc; ++t) {
      const auto* word = &m.common[rng.below(m.common.size())];
      tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(rng.below(tokens.size() + 1)), word);
    }

    RawDocument doc;
    std::string id = std::to_string(j + 1);
    doc.id = "doc" + std::string(static_cast<std::size_t>(width) - id.size(), '0') + id;
    doc.label = is_a ? m.label_a : m.label_b;
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      if (t) doc.text.push_back(' ');
      doc.text += *tokens[t];
    }
    out.documents.push_back(std::move(doc));
  }
  return out;
}

void write_manifest(std::ostream& out, const SynthManifest& manifest) {
  const auto& c = manifest.config;
  nlohmann::ordered_json j;
  j["config"] = {{"docs_per_class", c.docs_per_class}, {"doc_len", c.doc_len},
                 {"class_dict_size", c.class_dict_size}, {"common_dict_size", c.common_dict_size},
                 {"common_per_doc", c.common_per_doc},   {"seed", c.seed}};
  j["final_doc_len"] = manifest.final_doc_len;
  j["labels"] = {manifest.label_a, manifest.label_b};
  j["dict_a"] = manifest.dict_a;
  j["dict_b"] = manifest.dict_b;
  j["common"] = manifest.common;
  out << j.dump(2) << '\n';
}

}  // namespace domstop
