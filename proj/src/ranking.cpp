#include "domstop/ranking.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "domstop/error.hpp"

namespace domstop {

namespace {

constexpr std::array kMethods{Method::hyperplane, Method::hyperplane_longest, Method::chi2, Method::mi,
                              Method::random};

std::string_view score_column(Method m) {
  return (m == Method::hyperplane || m == Method::hyperplane_longest) ? "distance" : "score";
}

}  // namespace

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::hyperplane: return "hyperplane";
    case Method::hyperplane_longest: return "hyperplane_longest";
    case Method::chi2: return "chi2";
    case Method::mi: return "mi";
    case Method::random: return "random";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : kMethods) {
    if (to_string(m) == name) return m;
  }
  throw UsageError("unknown method '" + std::string(name) +
                   "' (expected hyperplane, hyperplane_longest, chi2, mi or random)");
}

std::span<const Method> all_methods() noexcept { return kMethods; }

std::string_view RankedWordList::direction() const noexcept {
  switch (method) {
    case Method::hyperplane_longest: return "descending";
    case Method::random: return "random";
    default: return "ascending";
  }
}

RankedWordList RankedWordList::reversed(Method as) const {
  RankedWordList out{as, entries};
  std::reverse(out.entries.begin(), out.entries.end());
  return out;
}

RankedWordList ranked_ascending(Method method, std::vector<RankedEntry> entries) {
  std::sort(entries.begin(), entries.end(), [](const RankedEntry& a, const RankedEntry& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.word < b.word;
  });
  return {method, std::move(entries)};
}

std::size_t eliminated_count(double pct, std::size_t vocab_size) {
  if (!(pct >= 0.0 && pct <= 100.0)) throw UsageError("elimination percentage must be in [0, 100]");
  return static_cast<std::size_t>(std::floor(pct * static_cast<double>(vocab_size) / 100.0));
}

std::vector<bool> survivor_mask(const RankedWordList& ranking, const Vocabulary& vocab, double pct) {
  if (ranking.size() != vocab.size()) {
    throw DataError("ranking covers " + std::to_string(ranking.size()) + " words, vocabulary has " +
                    std::to_string(vocab.size()));
  }
  std::vector<bool> keep(vocab.size(), true);
  const std::size_t drop = eliminated_count(pct, vocab.size());
  for (std::size_t i = 0; i < drop; ++i) keep[vocab.id(ranking.entries[i].word)] = false;
  return keep;
}

void write_ranking_csv(std::ostream& out, const RankedWordList& ranking) {
  out << "# method=" << to_string(ranking.method) << " direction=" << ranking.direction() << '\n';
  out << "rank,word," << score_column(ranking.method) << '\n';
  for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
    const auto& e = ranking.entries[i];
    out << (i + 1) << ',' << e.word << ',' << std::setprecision(17) << e.score << '\n';
  }
}

RankedWordList read_ranking_csv(std::istream& in) {
  RankedWordList list;
  bool have_method = false;
  bool have_header = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto pos = line.find("method=");
      if (pos != std::string::npos) {
        auto end = line.find(' ', pos);
        list.method = parse_method(line.substr(pos + 7, end == std::string::npos ? end : end - pos - 7));
        have_method = true;
      }
      continue;
    }
    if (!have_header) {
      if (line.rfind("rank,word,", 0) != 0) throw ParseError("expected ranking header 'rank,word,...'", line_no);
      have_header = true;
      continue;
    }
    auto c1 = line.find(',');
    auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos) throw ParseError("expected rank,word,score", line_no);
    RankedEntry e;
    e.word = line.substr(c1 + 1, c2 - c1 - 1);
    try {
      e.score = std::stod(line.substr(c2 + 1));
    } catch (const std::exception&) {
      throw ParseError("bad score value", line_no);
    }
    list.entries.push_back(std::move(e));
  }
  if (!have_header) throw ParseError("ranking file has no header");
  if (!have_method) throw ParseError("ranking file has no '# method=' comment");
  return list;
}

}  // namespace domstop
