#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "crossdom/corpus.hpp"

namespace crossdom::testing {

inline Document doc(std::string id, std::string text, int label,
                    std::optional<std::string> profile = std::nullopt) {
  Document d;
  d.id = std::move(id);
  d.text = std::move(text);
  d.label = label;
  d.profile_id = std::move(profile);
  return d;
}

inline Corpus make_corpus(std::string name, std::vector<Document> docs) {
  Corpus corpus;
  corpus.name = std::move(name);
  corpus.documents = std::move(docs);
  return corpus;
}

// Scratch directory under the system temp root, unique per call.
inline std::filesystem::path temp_dir(const std::string& tag) {
  static std::atomic<unsigned> counter{0};
  static const auto stamp =
      std::chrono::steady_clock::now().time_since_epoch().count();
  auto dir = std::filesystem::temp_directory_path() /
             ("crossdom_" + tag + "_" + std::to_string(stamp) + "_" +
              std::to_string(counter.fetch_add(1)));
  std::filesystem::create_directories(dir);
  return dir;
}

// Disjoint-vocabulary benchmark: two corpora over a shared pool of neutral
// sentences; positives append a corpus-specific marker token. Every text
// variant repeats often enough that a 10% stratified test split can never
// exhaust it from the training side.
inline Corpus make_marker_corpus(const std::string& name,
                                 const std::string& marker, std::size_t n_docs,
                                 double positive_ratio) {
  static const std::vector<std::string> sentences = {
      "the game last night ran long",
      "please send the notes after class",
      "my dog chased the ball all afternoon",
      "we cooked dinner together on sunday",
      "that song kept playing on the radio",
      "the bus was late again this morning",
      "she painted the fence a new color",
      "they watched the storm from the porch",
      "he fixed the bike chain in minutes",
  };
  Corpus corpus;
  corpus.name = name;
  std::size_t n_pos = static_cast<std::size_t>(
      static_cast<double>(n_docs) * positive_ratio + 0.5);
  for (std::size_t i = 0; i < n_docs; ++i) {
    Document d;
    d.id = name + "-" + std::to_string(i);
    bool positive = i < n_pos;
    const std::string& base = sentences[i % sentences.size()];
    d.text = positive ? base + " " + marker : base;
    d.label = positive ? 1 : 0;
    corpus.documents.push_back(std::move(d));
  }
  return corpus;
}

// Separable only through the bigram "zap quux": every document carries the
// same unigram multiset, positives keep the two markers adjacent, and a
// per-document token gives each fold test-only grams.
inline Corpus make_bigram_corpus(const std::string& name, std::size_t n_pos,
                                 std::size_t n_neg) {
  Corpus corpus;
  corpus.name = name;
  std::size_t counter = 0;
  for (std::size_t i = 0; i < n_pos + n_neg; ++i) {
    bool positive = i < n_pos;
    Document d;
    d.id = name + "-" + std::to_string(i);
    std::string unique = "uniq" + std::to_string(counter++);
    d.text = positive ? "filler zap quux filler " + unique
                      : "zap filler quux filler " + unique;
    d.label = positive ? 1 : 0;
    corpus.documents.push_back(std::move(d));
  }
  return corpus;
}

// Random corpus with profile ids, for the context-aggregation laws.
inline Corpus make_profiled_corpus(std::mt19937_64& rng, std::size_t n_docs,
                                   std::size_t n_profiles) {
  Corpus corpus;
  corpus.name = "profiled";
  std::uniform_int_distribution<std::size_t> profile_of(0, n_profiles - 1);
  std::bernoulli_distribution positive(0.3);
  for (std::size_t i = 0; i < n_docs; ++i) {
    Document d;
    d.id = "m" + std::to_string(i);
    d.profile_id = "p" + std::to_string(profile_of(rng));
    d.text = "msg " + std::to_string(i);
    d.label = positive(rng) ? 1 : 0;
    corpus.documents.push_back(std::move(d));
  }
  return corpus;
}

}  // namespace crossdom::testing
