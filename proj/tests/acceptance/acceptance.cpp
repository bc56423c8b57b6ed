// Acceptance suite: one PASS/FAIL line per criterion on the desk-scale benchmark.
//
//   domstop_acceptance [--known-failure N]...
//
// Exit status is the number of failing criteria not listed as known failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "domstop/classify.hpp"
#include "domstop/embedding.hpp"
#include "domstop/error.hpp"
#include "domstop/geometry.hpp"
#include "domstop/pipeline.hpp"
#include "domstop/selectors.hpp"
#include "domstop/synthbench.hpp"

using namespace domstop;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Desk benchmark shared by the pipeline criteria.
struct Desk {
  SynthCorpus synth;
  Corpus corpus;
  EmbeddingModel model;
  double train_seconds = 0.0;
  EvalReport report;
};

Desk& desk() {
  static Desk d = [] {
    Desk out;
    out.synth = generate(SynthConfig::desk());
    out.corpus = build_corpus(out.synth.documents, 1);
    auto t0 = std::chrono::steady_clock::now();
    out.model = train_skipgram(out.corpus, TrainConfig{});
    out.train_seconds = seconds_since(t0);
    out.report = evaluate(out.corpus, ExperimentGrid{}, &out.model, 0);
    return out;
  }();
  return d;
}

double nb_accuracy(const EvalReport& r, Method m, double pct, ClassifierKind k = ClassifierKind::nb) {
  const auto* c = r.find(m, pct, k);
  return c && c->result ? c->result->mean_accuracy : NAN;
}

// 1. Planted common words sit near the hyperplane.
Outcome planted_recovery() {
  const auto t0 = std::chrono::steady_clock::now();
  auto& d = desk();
  auto ranking = rank_hyperplane(d.model, d.corpus);
  const std::size_t window = static_cast<std::size_t>(std::floor(0.15 * static_cast<double>(ranking.size())));
  std::set<std::string> head;
  for (std::size_t i = 0; i < window; ++i) head.insert(ranking.entries[i].word);
  std::size_t found = 0;
  for (const auto& w : d.synth.manifest.common) found += head.count(w);
  const double frac = static_cast<double>(found) / static_cast<double>(d.synth.manifest.common.size());
  const double elapsed = seconds_since(t0);
  return {frac >= 0.90 && elapsed < 300.0,
          fmt("%zu/%zu planted words in the shortest %zu (%.1f%%); embedding %.1fs, total %.1fs", found,
              d.synth.manifest.common.size(), window, 100 * frac, d.train_seconds, elapsed)};
}

// 2. At 90% elimination: shortest >= random >= longest, shortest >= 0.99, longest <= 0.60.
Outcome ordering() {
  const auto& r = desk().report;
  const double s = nb_accuracy(r, Method::hyperplane, 90);
  const double rnd = nb_accuracy(r, Method::random, 90);
  const double l = nb_accuracy(r, Method::hyperplane_longest, 90);
  return {s >= rnd && rnd >= l && s >= 0.99 && l <= 0.60,
          fmt("NB p=90: shortest %.4f, random %.4f, longest %.4f", s, rnd, l)};
}

// 3. Hyperplane elimination up to 90% keeps accuracy within 0.01 of the full vocabulary.
Outcome stability() {
  const auto& r = desk().report;
  double worst = 0.0;
  std::string detail;
  for (auto k : {ClassifierKind::nb, ClassifierKind::lr}) {
    const double base = nb_accuracy(r, Method::hyperplane, 0, k);
    double lo = base;
    for (double p = 10; p <= 90; p += 10) {
      const double acc = nb_accuracy(r, Method::hyperplane, p, k);
      worst = std::max(worst, std::isnan(acc) ? INFINITY : std::abs(acc - base));
      lo = std::min(lo, acc);
    }
    detail += fmt("%s p=0 %.4f min %.4f; ", std::string(to_string(k)).c_str(), base, lo);
  }
  return {worst <= 0.01, detail + fmt("max deviation %.4f", worst)};
}

// 4. Selector scores against counts taken straight from the raw text.
Outcome selector_oracle() {
  std::mt19937_64 rng(2024);
  std::vector<RawDocument> docs;
  const std::vector<std::string> pool{"alpha", "beta", "gamma", "delta", "eps", "zeta", "eta", "theta",
                                      "iota",  "kappa", "lam",  "mu",    "nu",  "xi",   "omi", "pi"};
  for (int i = 0; i < 50; ++i) {
    const bool a = i < 25;
    std::string text;
    const int len = 3 + static_cast<int>(rng() % 8);
    for (int t = 0; t < len; ++t) {
      // Skewed draws so some words lean toward one class.
      std::size_t w = rng() % pool.size();
      if (!a && w < 4 && rng() % 2) w += 8;
      text += pool[w] + " ";
    }
    docs.push_back({std::to_string(i), text + " everywhere", a ? "A" : "B"});
  }
  docs[3].text += " onlya";
  docs[30].text += " onlyb";
  docs[10].text += " evenly";
  docs[40].text += " evenly";
  auto corpus = build_corpus(docs, 1);

  std::size_t checked = 0, bad = 0, zero_cases = 0, degenerate_cases = 0;
  double worst_chi = 0.0, worst_mi = 0.0;
  for (const auto& word : corpus.vocabulary.words()) {
    double cells[2][2] = {{0, 0}, {0, 0}};  // [class][present]
    for (const auto& d : docs) {
      const auto toks = tokenize(d.text);
      const bool present = std::find(toks.begin(), toks.end(), word) != toks.end();
      cells[d.label == "A" ? 0 : 1][present ? 1 : 0] += 1;
    }
    const double n = 50;
    double chi = 0.0, mi = 0.0;
    bool degenerate = false;
    for (int c = 0; c < 2; ++c)
      for (int u = 0; u < 2; ++u) {
        const double row = cells[c][0] + cells[c][1], col = cells[0][u] + cells[1][u];
        if (row == 0 || col == 0) {
          degenerate = true;
          continue;
        }
        const double e = row * col / n;
        chi += (cells[c][u] - e) * (cells[c][u] - e) / e;
        if (cells[c][u] > 0) mi += cells[c][u] / n * std::log2(cells[c][u] * n / (row * col));
      }
    if (degenerate) chi = 0.0;
    const auto t = contingency(corpus.vocabulary, corpus.vocabulary.id(word));
    const double got_chi = chi2_score(t), got_mi = mi_score(t);
    const double rel = chi == 0.0 ? std::abs(got_chi) : std::abs(got_chi - chi) / chi;
    worst_chi = std::max(worst_chi, rel);
    worst_mi = std::max(worst_mi, std::abs(got_mi - mi));
    bad += rel > 1e-9 || std::abs(got_mi - mi) > 1e-9;
    zero_cases += cells[0][1] * cells[1][0] == cells[0][0] * cells[1][1] && !degenerate;
    degenerate_cases += degenerate;
    if (degenerate || cells[0][1] * cells[1][0] == cells[0][0] * cells[1][1]) bad += got_chi != 0.0 || got_mi != 0.0;
    ++checked;
  }
  return {bad == 0 && zero_cases > 0 && degenerate_cases > 0,
          fmt("%zu words, %zu independent, %zu degenerate; max chi2 rel err %.2e, max MI abs err %.2e", checked,
              zero_cases, degenerate_cases, worst_chi, worst_mi)};
}

// 5. Hyperplane invariants on 100 seeded random instances per dimension.
Outcome geometry_suite() {
  std::size_t instances = 0, failures = 0;
  for (std::size_t k : {2u, 10u, 100u}) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      std::mt19937_64 rng(seed * 1000 + k);
      std::normal_distribution<double> nd;
      std::vector<Vector> pts(30, Vector(k));
      for (auto& p : pts)
        for (auto& x : p) x = nd(rng);
      auto mean_of = [&](const std::vector<Vector>& ps, std::size_t from, std::size_t to) {
        Vector c(k, 0.0);
        for (std::size_t i = from; i < to; ++i)
          for (std::size_t j = 0; j < k; ++j) c[j] += ps[i][j];
        for (auto& x : c) x /= static_cast<double>(to - from);
        return ClassCentroid{"", c, to - from};
      };
      auto dists = [&](const std::vector<Vector>& ps, bool swap) {
        auto a = mean_of(ps, 0, 18), b = mean_of(ps, 12, 30);
        auto plane = swap ? build_hyperplane(b, a) : build_hyperplane(a, b);
        std::vector<double> d;
        for (const auto& p : ps) d.push_back(distance(plane, std::span<const double>(p)));
        return std::pair{plane, d};
      };
      auto order = [](const std::vector<double>& d) {
        std::vector<std::size_t> idx(d.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](auto x, auto y) { return d[x] < d[y]; });
        return idx;
      };
      bool ok = true;
      auto [plane, base] = dists(pts, false);
      ok &= distance(plane, std::span<const double>(plane.midpoint)) <= 1e-12 * (1 + std::abs(plane.offset));
      const auto a = mean_of(pts, 0, 18), b = mean_of(pts, 12, 30);
      const double da = distance(plane, std::span<const double>(a.vector));
      const double db = distance(plane, std::span<const double>(b.vector));
      ok &= std::abs(da - db) <= 1e-12 * std::max(1.0, da);

      auto moved = pts;
      Vector shift(k);
      for (auto& x : shift) x = 5 * nd(rng);
      for (auto& p : moved)
        for (std::size_t j = 0; j < k; ++j) p[j] += shift[j];
      auto translated = dists(moved, false).second;
      for (std::size_t i = 0; i < base.size(); ++i) ok &= std::abs(translated[i] - base[i]) <= 1e-9;

      auto scaled_pts = pts;
      for (auto& p : scaled_pts)
        for (auto& x : p) x *= 3.0;
      auto scaled = dists(scaled_pts, false).second;
      for (std::size_t i = 0; i < base.size(); ++i) ok &= std::abs(scaled[i] - 3.0 * base[i]) <= 1e-9 * (1 + base[i]);

      ok &= order(dists(pts, true).second) == order(base);
      ++instances;
      failures += !ok;
    }
  }
  return {failures == 0, fmt("%zu instances over k in {2,10,100}, %zu failures", instances, failures)};
}

// 6. Negative-sampling gradients against central differences; training reproducibility.
Outcome gradient_check() {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> nd(0.0, 0.5);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t dim = 3 + trial % 6, negs = 1 + trial % 4;
    std::vector<double> center(dim), context(dim), neg(dim * negs);
    for (auto* v : {&center, &context, &neg})
      for (auto& x : *v) x = nd(rng);
    auto loss = [&](const std::vector<double>& c, const std::vector<double>& o, const std::vector<double>& n) {
      double l = 0, s = 0;
      for (std::size_t i = 0; i < dim; ++i) s += c[i] * o[i];
      l -= -std::log1p(std::exp(-s));
      for (std::size_t j = 0; j < negs; ++j) {
        double t = 0;
        for (std::size_t i = 0; i < dim; ++i) t += c[i] * n[j * dim + i];
        l -= -std::log1p(std::exp(t));
      }
      return l;
    };
    std::vector<std::span<const double>> neg_spans;
    for (std::size_t j = 0; j < negs; ++j) neg_spans.emplace_back(neg.data() + j * dim, dim);
    std::vector<double> gc(dim), go(dim), gn(dim * negs);
    negative_sampling_gradient<double>(center, context, neg_spans, gc, go, gn);

    std::vector<double> analytic, numeric;
    const double h = 1e-5;
    for (auto [vec, grad] : {std::pair{&center, &gc}, std::pair{&context, &go}, std::pair{&neg, &gn}}) {
      for (std::size_t i = 0; i < vec->size(); ++i) {
        const double keep = (*vec)[i];
        (*vec)[i] = keep + h;
        const double up = loss(center, context, neg);
        (*vec)[i] = keep - h;
        const double down = loss(center, context, neg);
        (*vec)[i] = keep;
        numeric.push_back((up - down) / (2 * h));
        analytic.push_back((*grad)[i]);
      }
    }
    double diff = 0, norm = 0;
    for (std::size_t i = 0; i < numeric.size(); ++i) {
      diff += (analytic[i] - numeric[i]) * (analytic[i] - numeric[i]);
      norm += numeric[i] * numeric[i];
    }
    worst = std::max(worst, std::sqrt(diff) / std::max(std::sqrt(norm), 1e-12));
  }

  SynthConfig cfg;
  cfg.docs_per_class = 50;
  cfg.doc_len = 60;
  auto corpus = build_corpus(generate(cfg).documents, 1);
  TrainConfig tc;
  tc.dim = 24;
  tc.epochs = 2;
  auto m1 = train_skipgram(corpus, tc), m2 = train_skipgram(corpus, tc);
  const bool same = std::memcmp(m1.input.data(), m2.input.data(), m1.input.size() * sizeof(float)) == 0 &&
                    std::memcmp(m1.output.data(), m2.output.data(), m1.output.size() * sizeof(float)) == 0;
  return {worst < 1e-4 && same,
          fmt("max relative gradient error %.2e over 20 instances; repeat training %s", worst,
              same ? "bit-identical" : "differs")};
}

// 7. Classifier oracles and fold structure.
Outcome classifier_suite() {
  std::vector<std::string> problems;
  // Columns x y z; class A counts 3 1 0, class B counts 0 2 2, each 4 tokens over 3 columns.
  auto x = dense_features({{2, 1, 0}, {1, 0, 0}, {0, 2, 1}, {0, 0, 1}}, {Side::A, Side::A, Side::B, Side::B});
  std::vector<std::size_t> rows{0, 1, 2, 3};
  NaiveBayes nb;
  nb.fit(x, rows);
  const SparseRow q{{0, 1}, {1, 2}, {2, 1}};
  const double la = std::log(0.5) + std::log(4.0 / 7) + 2 * std::log(2.0 / 7) + std::log(1.0 / 7);
  const double lb = std::log(0.5) + std::log(1.0 / 7) + 3 * std::log(3.0 / 7);
  const auto j = nb.log_joint(q);
  const double nb_err = std::max(std::abs(j[0] - la), std::abs(j[1] - lb));
  if (nb_err > 1e-9) problems.push_back("NB oracle");

  std::vector<std::vector<std::uint32_t>> counts;
  std::vector<Side> labels;
  for (int i = 0; i < 20; ++i) {
    counts.push_back({i % 2 ? 5u : 0u});
    labels.push_back(i % 2 ? Side::B : Side::A);
  }
  auto sep = dense_features(counts, labels);
  std::vector<std::size_t> all(20);
  std::iota(all.begin(), all.end(), 0);
  LogisticRegression lr({.l2 = 0.0, .lr = 0.05, .epochs = 200, .seed = 1});
  lr.fit(sep, all);
  std::size_t correct = 0;
  for (auto i : all) correct += lr.predict(sep.rows[i]) == sep.labels[i];
  if (correct != all.size()) problems.push_back("LR separable");

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t na = 10 + rng() % 200, nbc = 10 + rng() % 200;
    std::vector<Side> ls(na, Side::A);
    ls.insert(ls.end(), nbc, Side::B);
    std::shuffle(ls.begin(), ls.end(), rng);
    auto folds = stratified_folds(ls, 10, trial);
    std::vector<std::array<std::size_t, 2>> per(10, {0, 0});
    bool ok = folds.size() == ls.size();
    for (std::size_t i = 0; ok && i < folds.size(); ++i) {
      ok = folds[i] < 10;
      if (ok) ++per[folds[i]][index_of(ls[i])];
    }
    for (int s = 0; ok && s < 2; ++s) {
      std::size_t lo = SIZE_MAX, hi = 0, sum = 0;
      for (const auto& f : per) lo = std::min(lo, f[s]), hi = std::max(hi, f[s]), sum += f[s];
      ok = hi - lo <= 1 && sum == (s ? nbc : na);
    }
    if (!ok) {
      problems.push_back("folds");
      break;
    }
  }
  std::string detail = fmt("NB oracle error %.1e; LR separable %zu/%zu; folds checked on 50 label sets", nb_err,
                           correct, all.size());
  for (const auto& p : problems) detail += "; failed: " + p;
  return {problems.empty(), detail};
}

// 8. Elimination speeds up NB training; hyperplane ranking beats MI ranking.
Outcome timing_trend() {
  auto& d = desk();
  auto hyper = timed_ranking(d.corpus, Method::hyperplane, &d.model, 1, 5);
  auto mi = timed_ranking(d.corpus, Method::mi, nullptr, 1, 5);
  auto per_fold = [&](double pct) {
    auto keep = survivor_mask(hyper.ranking, d.corpus.vocabulary, pct);
    auto r = cross_validate(d.corpus, keep, ClassifierKind::nb, {.folds = 10, .seed = 1});
    return r.train_time_s() / static_cast<double>(r.folds());
  };
  // Median of a few serial repetitions to keep scheduler noise out.
  auto median = [&](double pct) {
    std::vector<double> t;
    for (int i = 0; i < 5; ++i) t.push_back(per_fold(pct));
    std::sort(t.begin(), t.end());
    return t[2];
  };
  const double t0 = median(0), t99 = median(99);
  return {t99 < t0 && hyper.seconds < mi.seconds,
          fmt("NB train per fold p=0 %.3gs, p=99 %.3gs; ranking hyperplane %.3gs vs MI %.3gs", t0, t99, hyper.seconds,
              mi.seconds)};
}

// 9. Overlap on constructed survivor sets and on the desk rankings.
Outcome overlap_metric() {
  auto list = [](std::vector<std::string> w) {
    RankedWordList r;
    for (std::size_t i = 0; i < w.size(); ++i) r.entries.push_back({w[i], static_cast<double>(i)});
    return r;
  };
  auto base = list({"a", "b", "c", "d", "e", "f", "g", "h"});
  auto disjoint = list({"e", "f", "g", "h", "a", "b", "c", "d"});
  auto half = list({"a", "b", "e", "f", "c", "d", "g", "h"});
  const double same = overlap(base, base, 50), none = overlap(base, disjoint, 50), part = overlap(base, half, 50);

  auto& d = desk();
  auto hyper = rank_hyperplane(d.model, d.corpus);
  auto chi = rank_by_selector(d.corpus, Method::chi2);
  const double desk99 = overlap(hyper, chi, 99);
  return {same == 1.0 && none == 0.0 && part == 0.5 && desk99 < 1.0,
          fmt("identical %.3g, disjoint %.3g, half %.3g; desk hyperplane vs chi2 at p=99: %.4f", same, none, part,
              desk99)};
}

// 10. The full default grid, embedding included, reproduces byte for byte.
Outcome determinism() {
  auto& d = desk();
  const auto first = report_json(d.report, false).dump();
  auto corpus = build_corpus(generate(SynthConfig::desk()).documents, 1);
  auto model = train_skipgram(corpus, TrainConfig{});
  const auto second = report_json(evaluate(corpus, ExperimentGrid{}, &model, 0), false).dump();
  return {first == second, fmt("%zu cells, report %zu bytes, %s", d.report.cells.size(), first.size(),
                               first == second ? "identical" : "different")};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--known-failure") == 0 && i + 1 < argc) {
      known.insert(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: %s [--known-failure N]...\n", argv[0]);
      return 64;
    }
  }

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"planted-word recovery", planted_recovery},
      {"elimination ordering at 90%", ordering},
      {"accuracy stability under hyperplane elimination", stability},
      {"chi2/MI brute-force oracle", selector_oracle},
      {"hyperplane invariants", geometry_suite},
      {"skip-gram gradient and reproducibility", gradient_check},
      {"classifier oracles and folds", classifier_suite},
      {"timing trend", timing_trend},
      {"overlap metric", overlap_metric},
      {"end-to-end determinism", determinism},
  };

  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const bool expected_fail = known.count(id) > 0;
    std::printf("%s  %2d %s: %s%s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.detail.c_str(),
                !o.pass && expected_fail ? " [known failure]" : "");
    std::fflush(stdout);
    if (!o.pass && !expected_fail) ++unexpected;
  }
  return unexpected;
}
