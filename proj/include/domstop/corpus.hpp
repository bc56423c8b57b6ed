#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace domstop {

using WordId = std::uint32_t;

/// The two classes of a corpus. A is the lexicographically smaller label.
enum class Side : std::uint8_t { A = 0, B = 1 };

inline constexpr std::size_t index_of(Side s) noexcept { return static_cast<std::size_t>(s); }
inline constexpr Side other(Side s) noexcept { return s == Side::A ? Side::B : Side::A; }

struct RawDocument {
  std::string id;
  std::string text;
  std::string label;
};

struct Document {
  std::string id;
  std::vector<WordId> tokens;
  Side label = Side::A;
};

/// Lowercased ASCII letter/digit runs; every other byte separates tokens.
std::vector<std::string> tokenize(std::string_view text);

class Vocabulary {
 public:
  Vocabulary() = default;

  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }

  const std::string& word(WordId id) const { return words_.at(id); }
  const std::vector<std::string>& words() const noexcept { return words_; }
  std::optional<WordId> find(std::string_view word) const;
  /// Throws LookupError naming the word.
  WordId id(std::string_view word) const;

  std::uint64_t total_count(WordId id) const { return total_count_.at(id); }
  std::uint32_t doc_count(WordId id, Side side) const { return doc_count_[index_of(side)].at(id); }
  std::uint32_t class_doc_total(Side side) const noexcept { return class_docs_[index_of(side)]; }
  std::uint32_t total_docs() const noexcept { return class_docs_[0] + class_docs_[1]; }

  /// Words occurring in at least one document of the given class.
  std::vector<WordId> class_words(Side side) const;

  /// FNV-1a over the ordered word list; identifies the vocabulary an embedding was trained on.
  std::uint64_t hash() const noexcept { return hash_; }

 private:
  friend class VocabularyBuilder;

  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId> index_;
  std::vector<std::uint64_t> total_count_;
  std::array<std::vector<std::uint32_t>, 2> doc_count_;
  std::array<std::uint32_t, 2> class_docs_{0, 0};
  std::uint64_t hash_ = 0;
};

struct Corpus {
  std::array<std::string, 2> labels;  // indexed by Side
  std::vector<Document> documents;
  Vocabulary vocabulary;
  /// Documents left without tokens after min_count filtering.
  std::vector<std::string> empty_document_ids;

  const std::string& label(Side s) const { return labels[index_of(s)]; }
  std::size_t token_count() const noexcept;
  std::vector<std::string> token_strings(const Document& doc) const;
};

/// Tokenizes, assigns sides, drops tokens below min_count, and counts.
Corpus build_corpus(std::span<const RawDocument> docs, std::uint32_t min_count);

std::vector<RawDocument> parse_corpus(std::istream& in);
std::vector<RawDocument> load_corpus(const std::filesystem::path& path);
void write_corpus(std::ostream& out, std::span<const RawDocument> docs);

/// CSV: word,word_id,total_count,doc_count_a,doc_count_b
void write_vocabulary_csv(std::ostream& out, const Vocabulary& vocab);

}  // namespace domstop
