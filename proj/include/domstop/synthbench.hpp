#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "domstop/corpus.hpp"

namespace domstop {

/// Two disjoint class dictionaries plus a shared dictionary planted in every document.
struct SynthConfig {
  std::uint32_t docs_per_class = 1000;
  std::uint32_t doc_len = 300;  // class tokens per document, before planting
  std::uint32_t class_dict_size = 500;
  std::uint32_t common_dict_size = 100;
  std::uint32_t common_per_doc = 10;
  std::uint64_t seed = 7;

  void validate() const;

  static SynthConfig desk();
  static SynthConfig paper();
  /// "desk" or "paper"; throws UsageError otherwise.
  static SynthConfig profile(std::string_view name);
};

struct SynthManifest {
  SynthConfig config;
  std::string label_a = "A";
  std::string label_b = "B";
  std::vector<std::string> dict_a;
  std::vector<std::string> dict_b;
  std::vector<std::string> common;
  std::uint32_t final_doc_len = 0;  // doc_len + common_per_doc
};

struct SynthCorpus {
  std::vector<RawDocument> documents;  // classes alternate, A first
  SynthManifest manifest;
};

/// Deterministic in config.seed; each document draws from its own derived stream.
SynthCorpus generate(const SynthConfig& config);

void write_manifest(std::ostream& out, const SynthManifest& manifest);

}  // namespace domstop
