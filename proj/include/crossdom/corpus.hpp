#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "crossdom/text.hpp"
#include "json.hpp"

namespace crossdom {

struct Document {
  std::string id;
  std::optional<std::string> profile_id;
  std::string text;
  int label = 0;  // 0 = negative/other, 1 = positive/bullying
  std::optional<std::vector<std::string>> fine_labels;
  // Unknown JSONL keys, preserved verbatim on round-trip.
  nlohmann::json extra = nlohmann::json::object();

  bool operator==(const Document&) const = default;
};

struct Corpus {
  std::string name;
  std::string language_tag = "en";
  std::vector<Document> documents;

  std::size_t size() const { return documents.size(); }
  std::size_t positives() const;
  std::size_t negatives() const { return size() - positives(); }
};

struct CorpusStats {
  std::size_t pos = 0;
  std::size_t neg = 0;
  std::size_t types = 0;
  std::size_t tokens = 0;
  double avg_tok_per_msg = 0.0;
  double std_tok_per_msg = 0.0;  // population sigma
  std::size_t emotes = 0;
  std::size_t swears = 0;
};

struct SplitPair {
  Corpus train;
  Corpus test;
  std::uint64_t seed = 0;
};

// Raised for unreadable files.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised for malformed or invariant-violating content.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// JSONL reader; one object per line with keys id/text/label and optional
// profile_id/fine_labels. Document order follows file order.
Corpus load_corpus(const std::filesystem::path& path, const std::string& name);

void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

// Lexicon files: one entry per line, '#' comments and blank lines skipped.
std::unordered_set<std::string> load_lexicon(const std::filesystem::path& path);

// Stratified 90/10-style split. Per-class test counts are
// round(class_count * test_fraction) with half rounded away from zero,
// then adjusted by at most one document so the overall total matches.
SplitPair stratified_split(const Corpus& corpus, double test_fraction,
                           std::uint64_t seed);

// Concatenates corpora; ids are namespaced "<source-name>/<id>".
Corpus merge_corpora(const std::vector<Corpus>& corpora,
                     const std::string& name);

// One document per profile; label is the OR over member labels.
Corpus aggregate_by_profile(const Corpus& corpus,
                            const std::string& joiner = "\n");

// Consecutive runs of batch_size documents per profile become one document
// with id "<profile_id>#<batch-index>"; the final partial batch is kept.
Corpus batch_contexts(const Corpus& corpus, std::size_t batch_size,
                      const std::string& joiner = "\n");

CorpusStats corpus_statistics(const Corpus& corpus,
                              const std::unordered_set<std::string>& swears,
                              const std::unordered_set<std::string>& emotes);

// Unique lowercase tokens over all documents.
std::unordered_set<std::string> vocabulary(const Corpus& corpus);

// |a ∩ b| / |a ∪ b|; 0 when both sets are empty.
double jaccard(const std::unordered_set<std::string>& a,
               const std::unordered_set<std::string>& b);

}  // namespace crossdom
