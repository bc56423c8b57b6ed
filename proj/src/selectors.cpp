#include "domstop/selectors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include "domstop/error.hpp"

namespace domstop {

namespace {

// count * log2(count * n / (row * col)) with the ratio formed from exact integers,
// so a factorizing table gives exactly zero.
double mi_term(std::uint64_t count, std::uint64_t row, std::uint64_t col, std::uint64_t n) {
  if (count == 0) return 0.0;
  const long double num = static_cast<long double>(count) * static_cast<long double>(n);
  const long double den = static_cast<long double>(row) * static_cast<long double>(col);
  if (num == den) return 0.0;
  return static_cast<double>(count) * static_cast<double>(std::log2(num / den));
}

double score_with(Method method, const ContingencyTable& t) {
  switch (method) {
    case Method::chi2: return chi2_score(t);
    case Method::mi: return mi_score(t);
    default: throw UsageError("selector ranking supports chi2 and mi only, got " + std::string(to_string(method)));
  }
}

}  // namespace

double chi2_score(const ContingencyTable& t) noexcept {
  const std::uint64_t n = t.n();
  const std::uint64_t a_total = t.n11 + t.n10;
  const std::uint64_t b_total = t.n01 + t.n00;
  const std::uint64_t with = t.n11 + t.n01;
  const std::uint64_t without = t.n10 + t.n00;
  if (n == 0 || a_total == 0 || b_total == 0 || with == 0 || without == 0) return 0.0;
  const auto diff = static_cast<long double>(t.n11) * t.n00 - static_cast<long double>(t.n10) * t.n01;
  if (diff == 0) return 0.0;
  const long double den = static_cast<long double>(a_total) * b_total * with * without;
  return static_cast<double>(static_cast<long double>(n) * diff * diff / den);
}

double mi_score(const ContingencyTable& t) noexcept {
  const std::uint64_t n = t.n();
  if (n == 0) return 0.0;
  const std::uint64_t a_total = t.n11 + t.n10;
  const std::uint64_t b_total = t.n01 + t.n00;
  const std::uint64_t with = t.n11 + t.n01;
  const std::uint64_t without = t.n10 + t.n00;
  double sum = mi_term(t.n11, with, a_total, n) + mi_term(t.n10, without, a_total, n) +
               mi_term(t.n01, with, b_total, n) + mi_term(t.n00, without, b_total, n);
  return std::max(0.0, sum / static_cast<double>(n));
}

ContingencyTable contingency(const Vocabulary& vocab, WordId id) {
  ContingencyTable t;
  t.n11 = vocab.doc_count(id, Side::A);
  t.n10 = vocab.class_doc_total(Side::A) - t.n11;
  t.n01 = vocab.doc_count(id, Side::B);
  t.n00 = vocab.class_doc_total(Side::B) - t.n01;
  return t;
}

std::vector<ContingencyTable> contingency_tables(const Corpus& corpus) {
  const std::size_t v = corpus.vocabulary.size();
  std::vector<std::uint64_t> with_a(v, 0), with_b(v, 0);
  std::vector<std::size_t> last_doc(v, SIZE_MAX);
  std::uint64_t docs_a = 0, docs_b = 0;
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    const auto& doc = corpus.documents[d];
    auto& with = doc.label == Side::A ? with_a : with_b;
    ++(doc.label == Side::A ? docs_a : docs_b);
    for (WordId id : doc.tokens) {
      if (last_doc[id] == d) continue;
      last_doc[id] = d;
      ++with[id];
    }
  }
  std::vector<ContingencyTable> tables(v);
  for (std::size_t id = 0; id < v; ++id) {
    tables[id] = {with_a[id], docs_a - with_a[id], with_b[id], docs_b - with_b[id]};
  }
  return tables;
}

RankedWordList rank_by_selector(const Vocabulary& vocab, Method method) {
  std::vector<RankedEntry> entries;
  entries.reserve(vocab.size());
  for (WordId id = 0; id < vocab.size(); ++id) {
    entries.push_back({vocab.word(id), score_with(method, contingency(vocab, id))});
  }
  return ranked_ascending(method, std::move(entries));
}

RankedWordList rank_by_selector(const Corpus& corpus, Method method) {
  const auto tables = contingency_tables(corpus);
  std::vector<RankedEntry> entries;
  entries.reserve(tables.size());
  for (WordId id = 0; id < tables.size(); ++id) {
    entries.push_back({corpus.vocabulary.word(id), score_with(method, tables[id])});
  }
  return ranked_ascending(method, std::move(entries));
}

RankedWordList rank_random(const Vocabulary& vocab, std::uint64_t seed) {
  RankedWordList list{Method::random, {}};
  list.entries.reserve(vocab.size());
  for (WordId id = 0; id < vocab.size(); ++id) list.entries.push_back({vocab.word(id), 0.0});
  std::mt19937_64 rng(seed);
  std::shuffle(list.entries.begin(), list.entries.end(), rng);
  for (std::size_t i = 0; i < list.entries.size(); ++i) list.entries[i].score = static_cast<double>(i);
  return list;
}

double overlap(const RankedWordList& x, const RankedWordList& y, double pct) {
  std::unordered_set<std::string_view> xs, ys;
  for (const auto& e : x.entries) xs.insert(e.word);
  for (const auto& e : y.entries) ys.insert(e.word);
  std::size_t only_x = 0, only_y = 0;
  for (auto w : xs) only_x += ys.count(w) == 0;
  for (auto w : ys) only_y += xs.count(w) == 0;
  if (only_x || only_y || xs.size() != x.size() || ys.size() != y.size()) {
    throw DataError("rankings cover different vocabularies: " + std::to_string(only_x) + " words only in the first, " +
                    std::to_string(only_y) + " only in the second");
  }
  const std::size_t v = x.size();
  const std::size_t keep = v - eliminated_count(pct, v);
  if (keep == 0) return 1.0;
  std::unordered_set<std::string_view> survivors;
  for (std::size_t i = v - keep; i < v; ++i) survivors.insert(x.entries[i].word);
  std::size_t shared = 0;
  for (std::size_t i = v - keep; i < v; ++i) shared += survivors.count(y.entries[i].word);
  return static_cast<double>(shared) / static_cast<double>(keep);
}

}  // namespace domstop
