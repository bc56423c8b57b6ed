#include "domstop/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include <json.hpp>

#include "domstop/error.hpp"

namespace domstop {

namespace {

bool is_token_char(unsigned char c) noexcept {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

char lower(unsigned char c) noexcept {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
}

std::uint64_t fnv1a(std::span<const std::string> words) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  for (const auto& w : words) {
    for (unsigned char c : w) mix(c);
    mix('\n');
  }
  return h;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (is_token_char(c)) {
      current.push_back(lower(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::optional<WordId> Vocabulary::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

WordId Vocabulary::id(std::string_view word) const {
  if (auto found = find(word)) return *found;
  throw LookupError("word not in vocabulary: '" + std::string(word) + "'");
}

std::vector<WordId> Vocabulary::class_words(Side side) const {
  std::vector<WordId> out;
  const auto& counts = doc_count_[index_of(side)];
  for (WordId id = 0; id < counts.size(); ++id) {
    if (counts[id] > 0) out.push_back(id);
  }
  return out;
}

class VocabularyBuilder {
 public:
  static Vocabulary build(std::vector<std::string> words, std::vector<std::uint64_t> totals,
                          std::array<std::vector<std::uint32_t>, 2> doc_counts,
                          std::array<std::uint32_t, 2> class_docs) {
    Vocabulary v;
    v.index_.reserve(words.size());
    for (WordId id = 0; id < words.size(); ++id) v.index_.emplace(words[id], id);
    v.hash_ = fnv1a(words);
    v.words_ = std::move(words);
    v.total_count_ = std::move(totals);
    v.doc_count_ = std::move(doc_counts);
    v.class_docs_ = class_docs;
    return v;
  }
};

std::size_t Corpus::token_count() const noexcept {
  std::size_t n = 0;
  for (const auto& d : documents) n += d.tokens.size();
  return n;
}

std::vector<std::string> Corpus::token_strings(const Document& doc) const {
  std::vector<std::string> out;
  out.reserve(doc.tokens.size());
  for (WordId id : doc.tokens) out.push_back(vocabulary.word(id));
  return out;
}

Corpus build_corpus(std::span<const RawDocument> docs, std::uint32_t min_count) {
  if (min_count == 0) throw ConfigError("min_count must be positive");

  std::set<std::string> labels;
  for (const auto& d : docs) labels.insert(d.label);
  if (labels.size() != 2) {
    std::string names;
    for (const auto& l : labels) names += (names.empty() ? "'" : ", '") + l + "'";
    throw IngestError("corpus must have exactly two labels, found " + std::to_string(labels.size()) +
                      (names.empty() ? "" : ": " + names));
  }

  Corpus corpus;
  corpus.labels = {*labels.begin(), *std::next(labels.begin())};

  std::set<std::string_view> seen_ids;
  std::vector<std::vector<std::string>> tokenized;
  tokenized.reserve(docs.size());
  std::map<std::string, std::uint64_t, std::less<>> frequency;
  for (const auto& d : docs) {
    if (!seen_ids.insert(d.id).second) throw IngestError("duplicate document id '" + d.id + "'");
    tokenized.push_back(tokenize(d.text));
    for (const auto& t : tokenized.back()) ++frequency[t];
  }

  // Ids follow lexicographic word order, so they do not depend on document order.
  std::vector<std::string> words;
  std::unordered_map<std::string_view, WordId> ids;
  for (const auto& [w, n] : frequency) {
    if (n >= min_count) {
      ids.emplace(w, static_cast<WordId>(words.size()));
      words.push_back(w);
    }
  }

  std::vector<std::uint64_t> totals(words.size(), 0);
  std::array<std::vector<std::uint32_t>, 2> doc_counts{std::vector<std::uint32_t>(words.size(), 0),
                                                       std::vector<std::uint32_t>(words.size(), 0)};
  std::array<std::uint32_t, 2> class_docs{0, 0};
  std::vector<std::size_t> last_seen(words.size(), SIZE_MAX);

  corpus.documents.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    Document doc;
    doc.id = docs[i].id;
    doc.label = docs[i].label == corpus.labels[0] ? Side::A : Side::B;
    auto side = index_of(doc.label);
    ++class_docs[side];
    for (const auto& t : tokenized[i]) {
      auto it = ids.find(t);
      if (it == ids.end()) continue;
      WordId id = it->second;
      doc.tokens.push_back(id);
      ++totals[id];
      if (last_seen[id] != i) {
        last_seen[id] = i;
        ++doc_counts[side][id];
      }
    }
    if (doc.tokens.empty()) corpus.empty_document_ids.push_back(doc.id);
    corpus.documents.push_back(std::move(doc));
  }

  corpus.vocabulary = VocabularyBuilder::build(std::move(words), std::move(totals),
                                               std::move(doc_counts), class_docs);
  return corpus;
}

std::vector<RawDocument> parse_corpus(std::istream& in) {
  std::vector<RawDocument> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    if (!obj.is_object()) throw ParseError("expected a JSON object", line_no);
    auto text = obj.find("text");
    auto label = obj.find("label");
    if (text == obj.end() || !text->is_string()) throw ParseError("missing string field 'text'", line_no);
    if (label == obj.end() || !label->is_string()) throw ParseError("missing string field 'label'", line_no);
    RawDocument doc;
    if (auto id = obj.find("id"); id != obj.end()) {
      if (id->is_string()) doc.id = id->get<std::string>();
      else if (id->is_number_integer()) doc.id = std::to_string(id->get<long long>());
      else throw ParseError("field 'id' must be a string or integer", line_no);
    } else {
      doc.id = std::to_string(line_no);
    }
    doc.text = text->get<std::string>();
    doc.label = label->get<std::string>();
    docs.push_back(std::move(doc));
  }
  if (docs.empty()) throw DataError("no documents");
  return docs;
}

std::vector<RawDocument> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file " + path.string());
  return parse_corpus(in);
}

void write_corpus(std::ostream& out, std::span<const RawDocument> docs) {
  for (const auto& d : docs) {
    nlohmann::ordered_json obj;
    obj["id"] = d.id;
    obj["text"] = d.text;
    obj["label"] = d.label;
    out << obj.dump() << '\n';
  }
}

void write_vocabulary_csv(std::ostream& out, const Vocabulary& vocab) {
  out << "word,word_id,total_count,doc_count_a,doc_count_b\n";
  for (WordId id = 0; id < vocab.size(); ++id) {
    out << vocab.word(id) << ',' << id << ',' << vocab.total_count(id) << ','
        << vocab.doc_count(id, Side::A) << ',' << vocab.doc_count(id, Side::B) << '\n';
  }
}

}  // namespace domstop
