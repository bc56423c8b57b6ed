#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "domstop/error.hpp"
#include "domstop/selectors.hpp"

using namespace domstop;

namespace {

// Pearson statistic from expected counts, the textbook way.
double chi2_oracle(const ContingencyTable& t) {
  const double n = static_cast<double>(t.n());
  const double cells[2][2] = {{double(t.n11), double(t.n10)}, {double(t.n01), double(t.n00)}};
  const double rows[2] = {cells[0][0] + cells[0][1], cells[1][0] + cells[1][1]};
  const double cols[2] = {cells[0][0] + cells[1][0], cells[0][1] + cells[1][1]};
  if (rows[0] == 0 || rows[1] == 0 || cols[0] == 0 || cols[1] == 0) return 0.0;
  double s = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double e = rows[i] * cols[j] / n;
      s += (cells[i][j] - e) * (cells[i][j] - e) / e;
    }
  return s;
}

double mi_oracle(const ContingencyTable& t) {
  const double n = static_cast<double>(t.n());
  const double cells[2][2] = {{double(t.n11), double(t.n10)}, {double(t.n01), double(t.n00)}};
  double s = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      if (cells[i][j] == 0) continue;
      const double pij = cells[i][j] / n;
      const double pi = (cells[i][0] + cells[i][1]) / n;
      const double pj = (cells[0][j] + cells[1][j]) / n;
      s += pij * std::log2(pij / (pi * pj));
    }
  return s;
}

double entropy(double p) {
  double h = 0;
  if (p > 0) h -= p * std::log2(p);
  if (p < 1) h -= (1 - p) * std::log2(1 - p);
  return h;
}

RankedWordList list_of(Method m, const std::vector<std::string>& words) {
  RankedWordList r;
  r.method = m;
  for (std::size_t i = 0; i < words.size(); ++i) r.entries.push_back({words[i], static_cast<double>(i)});
  return r;
}

}  // namespace

TEST_CASE("chi-square examples") {
  CHECK(chi2_score({20, 0, 0, 20}) == doctest::Approx(40.0).epsilon(1e-12));
  CHECK(chi2_score({10, 10, 10, 10}) == 0.0);
  // Word in every document: occurrence marginal for "absent" is zero.
  CHECK(chi2_score({20, 0, 20, 0}) == 0.0);
  CHECK(chi2_score({0, 20, 0, 20}) == 0.0);
  CHECK(chi2_score({}) == 0.0);
}

TEST_CASE("mutual information examples") {
  CHECK(mi_score({20, 0, 0, 20}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mi_score({10, 10, 10, 10}) == 0.0);
  CHECK(mi_score({20, 0, 20, 0}) == 0.0);
  CHECK(mi_score({}) == 0.0);
}

TEST_CASE("selector scores against oracles over every small table") {
  std::size_t tables = 0;
  for (std::uint64_t a = 0; a <= 12; ++a)
    for (std::uint64_t b = 0; a + b <= 12; ++b)
      for (std::uint64_t c = 0; a + b + c <= 12; ++c)
        for (std::uint64_t d = 0; a + b + c + d <= 12; ++d) {
          if (a + b + c + d == 0) continue;
          ++tables;
          const ContingencyTable t{a, b, c, d};
          const double chi = chi2_score(t), mi = mi_score(t);
          CHECK(chi == doctest::Approx(chi2_oracle(t)).epsilon(1e-10));
          CHECK(std::abs(mi - mi_oracle(t)) < 1e-12);
          CHECK(chi >= 0.0);
          CHECK(mi >= 0.0);

          // Occurrence and class independent exactly when the cross products match.
          const bool independent = a * d == b * c;
          CHECK((chi == 0.0) == independent);
          CHECK((mi == 0.0) == independent);

          const double n = static_cast<double>(t.n());
          const double h_u = entropy(static_cast<double>(a + c) / n);
          const double h_c = entropy(static_cast<double>(a + b) / n);
          CHECK(mi <= std::min(h_u, h_c) + 1e-12);

          // Swapping the classes, or present/absent, changes nothing.
          CHECK(chi2_score({c, d, a, b}) == doctest::Approx(chi).epsilon(1e-12));
          CHECK(chi2_score({b, a, d, c}) == doctest::Approx(chi).epsilon(1e-12));
          CHECK(std::abs(mi_score({c, d, a, b}) - mi) < 1e-12);
          CHECK(std::abs(mi_score({b, a, d, c}) - mi) < 1e-12);
        }
  CHECK(tables == 1819);
}

TEST_CASE("contingency tables from the vocabulary agree with the document scan") {
  std::vector<RawDocument> docs{{"1", "x y y", "A"}, {"2", "x z", "A"}, {"3", "y", "B"},
                                {"4", "z z z", "B"}, {"5", "w", "B"}};
  auto corpus = build_corpus(docs, 1);
  auto scanned = contingency_tables(corpus);
  const auto& v = corpus.vocabulary;
  for (WordId id = 0; id < v.size(); ++id) {
    auto t = contingency(v, id);
    CHECK(t.n11 == scanned[id].n11);
    CHECK(t.n10 == scanned[id].n10);
    CHECK(t.n01 == scanned[id].n01);
    CHECK(t.n00 == scanned[id].n00);
    CHECK(t.n() == 5);
  }
  auto x = contingency(v, v.id("x"));
  CHECK(x.n11 == 2);
  CHECK(x.n10 == 0);
  CHECK(x.n01 == 0);
  CHECK(x.n00 == 3);

  for (Method m : {Method::chi2, Method::mi}) {
    auto from_vocab = rank_by_selector(v, m);
    auto from_docs = rank_by_selector(corpus, m);
    REQUIRE(from_vocab.size() == from_docs.size());
    for (std::size_t i = 0; i < from_vocab.size(); ++i) {
      CHECK(from_vocab.entries[i].word == from_docs.entries[i].word);
      CHECK(from_vocab.entries[i].score == from_docs.entries[i].score);
    }
  }
}

TEST_CASE("selector ranking puts the least informative words first and breaks ties by word") {
  // "c" and "a" are spread evenly, "b" only in class A.
  std::vector<RawDocument> docs{{"1", "c a b", "A"}, {"2", "c a b", "A"}, {"3", "c a", "B"}, {"4", "c a", "B"}};
  auto corpus = build_corpus(docs, 1);
  for (Method m : {Method::chi2, Method::mi}) {
    auto r = rank_by_selector(corpus.vocabulary, m);
    REQUIRE(r.size() == 3);
    CHECK(r.method == m);
    CHECK(r.entries[0].word == "a");
    CHECK(r.entries[1].word == "c");
    CHECK(r.entries[2].word == "b");
    CHECK(r.entries[0].score == 0.0);
    CHECK(r.entries[2].score > 0.0);
  }
  CHECK_THROWS_AS(rank_by_selector(corpus.vocabulary, Method::hyperplane), UsageError);
}

TEST_CASE("random ranking is a seeded permutation") {
  std::vector<RawDocument> docs;
  for (int i = 0; i < 60; ++i) docs.push_back({std::to_string(i), "t" + std::to_string(i), i % 2 ? "B" : "A"});
  auto corpus = build_corpus(docs, 1);
  auto r1 = rank_random(corpus.vocabulary, 42);
  auto r2 = rank_random(corpus.vocabulary, 42);
  auto r3 = rank_random(corpus.vocabulary, 43);
  std::vector<std::string> w1, w2, w3;
  for (auto& e : r1.entries) w1.push_back(e.word);
  for (auto& e : r2.entries) w2.push_back(e.word);
  for (auto& e : r3.entries) w3.push_back(e.word);
  CHECK(w1 == w2);
  CHECK(w1 != w3);
  CHECK(std::set<std::string>(w1.begin(), w1.end()).size() == 60);
  CHECK(std::set<std::string>(w1.begin(), w1.end()) ==
        std::set<std::string>(corpus.vocabulary.words().begin(), corpus.vocabulary.words().end()));
  CHECK(r1.method == Method::random);
}

TEST_CASE("overlap of survivor sets") {
  const std::vector<std::string> words{"a", "b", "c", "d", "e", "f", "g", "h", "i", "j"};
  auto x = list_of(Method::hyperplane, words);
  CHECK(overlap(x, x, 0) == 1.0);
  CHECK(overlap(x, x, 90) == 1.0);

  // Reversed order: at 50% the two survivor halves are disjoint.
  auto rev = words;
  std::reverse(rev.begin(), rev.end());
  auto y = list_of(Method::chi2, rev);
  CHECK(overlap(x, y, 50) == 0.0);
  CHECK(overlap(x, y, 0) == 1.0);

  // Survivors f g h i j against a b h i j: three of five shared.
  auto z = list_of(Method::mi, {"c", "d", "e", "f", "g", "a", "b", "h", "i", "j"});
  CHECK(overlap(x, z, 50) == doctest::Approx(0.6));
  auto half = list_of(Method::mi, {"a", "b", "c", "i", "j", "f", "g", "h", "d", "e"});
  // x survivors at 60%: g h i j; half survivors: g h d e.
  CHECK(overlap(x, half, 60) == 0.5);

  // 99% of 10 eliminates 9, leaving one word.
  CHECK(overlap(x, y, 99) == 0.0);
  CHECK(overlap(x, x, 99) == 1.0);

  auto other = list_of(Method::mi, {"a", "b", "c", "d", "e", "f", "g", "h", "i", "zz"});
  CHECK_THROWS_AS(overlap(x, other, 50), DataError);
  CHECK_THROWS_AS(overlap(x, x, 101), UsageError);
}

TEST_CASE("eliminated count uses the floor") {
  CHECK(eliminated_count(0, 10) == 0);
  CHECK(eliminated_count(99, 10) == 9);
  CHECK(eliminated_count(90, 1100) == 990);
  CHECK(eliminated_count(99, 1100) == 1089);
  CHECK(eliminated_count(100, 7) == 7);
  CHECK(eliminated_count(33, 10) == 3);
}
