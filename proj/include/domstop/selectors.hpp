#pragma once

#include <cstdint>
#include <vector>

#include "domstop/corpus.hpp"
#include "domstop/ranking.hpp"

namespace domstop {

/// Document-occurrence / class table for one word.
struct ContingencyTable {
  std::uint64_t n11 = 0;  // class A docs containing the word
  std::uint64_t n10 = 0;  // class A docs without it
  std::uint64_t n01 = 0;  // class B docs containing it
  std::uint64_t n00 = 0;  // class B docs without it

  std::uint64_t n() const noexcept { return n11 + n10 + n01 + n00; }
};

/// 0 when any marginal is 0.
double chi2_score(const ContingencyTable& t) noexcept;
/// Mutual information in bits between occurrence and class, MLE probabilities, 0 log 0 = 0.
double mi_score(const ContingencyTable& t) noexcept;

ContingencyTable contingency(const Vocabulary& vocab, WordId id);
/// Tables computed by scanning the documents themselves, indexed by word id.
std::vector<ContingencyTable> contingency_tables(const Corpus& corpus);

/// Ascending score (least informative first) from the vocabulary's stored document counts.
RankedWordList rank_by_selector(const Vocabulary& vocab, Method method);
/// Same ranking, with the occurrence tables rebuilt from the documents.
RankedWordList rank_by_selector(const Corpus& corpus, Method method);

/// Seeded uniform permutation of the vocabulary.
RankedWordList rank_random(const Vocabulary& vocab, std::uint64_t seed);

/// Fraction of the survivors of x that also survive in y at elimination percentage pct.
/// Throws DataError when the lists cover different vocabularies.
double overlap(const RankedWordList& x, const RankedWordList& y, double pct);

}  // namespace domstop
