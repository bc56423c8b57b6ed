#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "domstop/corpus.hpp"

namespace domstop {

enum class Method { hyperplane, hyperplane_longest, chi2, mi, random };

std::string_view to_string(Method m) noexcept;
/// Throws UsageError for unknown names.
Method parse_method(std::string_view name);
/// All methods in report order.
std::span<const Method> all_methods() noexcept;

struct RankedEntry {
  std::string word;
  double score = 0.0;
};

/// A full-vocabulary elimination order: entries[0] is removed first.
struct RankedWordList {
  Method method = Method::hyperplane;
  std::vector<RankedEntry> entries;

  std::size_t size() const noexcept { return entries.size(); }
  /// "ascending" when the lowest score is eliminated first.
  std::string_view direction() const noexcept;
  /// Same entries, last eliminated first. Used for the longest-distance control.
  RankedWordList reversed(Method as) const;
};

/// Sorts (word, score) pairs ascending by score, ties broken by word.
RankedWordList ranked_ascending(Method method, std::vector<RankedEntry> entries);

/// floor(pct / 100 * vocab_size), the number of words removed at an elimination percentage.
std::size_t eliminated_count(double pct, std::size_t vocab_size);

/// Per-word-id keep flags after removing the head of the ranking.
std::vector<bool> survivor_mask(const RankedWordList& ranking, const Vocabulary& vocab, double pct);

/// "# method=<tag>" comment, then rank,word,<distance|score>.
void write_ranking_csv(std::ostream& out, const RankedWordList& ranking);
RankedWordList read_ranking_csv(std::istream& in);

}  // namespace domstop
